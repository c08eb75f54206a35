"""Maker policies: the randomized danger-redirect strategy and baselines.

The headline strategy colors edges near the recent action: it anchors on its
own previous edge or one of Breaker's last-turn edges, walks to a random
endpoint, and colors a random uncolored edge there with a random available
color.  Per-vertex load thresholds T1 < T2 < T3 (fractions of lambda/b times
the maximum degree) drive a correction term: when a vertex v crosses T2, the
set D(v) of *dangerous* neighbors is frozen once, and from then on a small
probability q redirects Maker's choice into D(v) so the risky edges at v get
colored before v's load reaches T3.

All random draws go through a single `random.Random` owned by the strategy,
in a fixed documented order, so logs replay bit-for-bit from the seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ._util import StrategyError
from .engine import MAKER, MODIFIED, GameState

_INF = math.inf


def _as_fraction(x: object) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact fraction")


@dataclass(frozen=True)
class MakerConfig:
    """Constants of the randomized strategy: lambda, c, and derived q = 6c/lambda.

    Thresholds are exact rationals T_j = j * lambda * Delta / b, compared
    against integer loads via their ceilings (load >= T iff load >= ceil(T)).
    """

    lam: Fraction = Fraction(1, 10)
    c: Fraction = Fraction(1, 1000)

    def __post_init__(self) -> None:
        lam = _as_fraction(self.lam)
        c = _as_fraction(self.c)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "c", c)
        if not 0 < lam < 1:
            raise ValueError("lambda must lie in (0, 1)")
        if not 0 < c <= lam / 6:
            raise ValueError("c must lie in (0, lambda/6] so that q <= 1")

    @property
    def q(self) -> Fraction:
        return 6 * self.c / self.lam

    def threshold(self, j: int, delta: int, b: int) -> Fraction:
        """T_j = j * lambda * b^-1 * Delta, exactly."""
        return Fraction(j) * self.lam * delta / b

    def threshold_ceil(self, j: int, delta: int, b: int) -> int:
        """Smallest integer load that meets T_j."""
        return math.ceil(self.threshold(j, delta, b))

    def default_palette(self, delta: int, b: int) -> int:
        """k = floor((2 - c * b^-4) * Delta), clamped into [Delta, 2*Delta - 1]."""
        if delta < 1 or b < 1:
            raise ValueError("need delta >= 1 and b >= 1")
        raw = math.floor((2 - self.c / b**4) * delta)
        return max(delta, min(2 * delta - 1, raw))


@dataclass
class MakerMemory:
    """Per-game state of the danger-redirect strategy.

    ``t1_round[v]`` / ``t2_round[v]`` give the first round r whose end-of-round
    load satisfied ``load_r(v) >= T1`` (resp. T2).  ``danger[v]`` is frozen
    exactly once, at v's T2-crossing round.  ``f0`` is the edge Maker colored
    on his previous move.
    """

    f0: int | None = None
    t1_round: dict[int, int] = field(default_factory=dict)
    t2_round: dict[int, int] = field(default_factory=dict)
    danger: dict[int, frozenset[int]] = field(default_factory=dict)

    def copy(self) -> "MakerMemory":
        return MakerMemory(
            f0=self.f0,
            t1_round=dict(self.t1_round),
            t2_round=dict(self.t2_round),
            danger=dict(self.danger),
        )


def compute_danger_set(s: GameState, mem: MakerMemory, v: int) -> frozenset[int]:
    """Freeze D(v): the dangerous neighbors of v, at its T2-crossing round.

    A neighbor u qualifies when
      (i)   the edge {u, v} is still uncolored,
      (ii)  deg(u) + deg(v) >= k,
      (iii) the endpoints share at most 2*Delta - k used colors, and
      (iv)  u reached load T1 no later than v did.

    Stores the result in ``mem.danger[v]`` and returns it.
    """
    if v in mem.danger:
        raise StrategyError(f"danger set for vertex {v} is already frozen")
    if v not in mem.t2_round:
        raise StrategyError(f"vertex {v} has not crossed T2 yet")
    g = s.g
    k = s.cfg.k
    overlap_cap = 2 * g.max_degree - k
    t1_v = mem.t1_round[v]
    members = []
    for u in sorted(s.uncolored_nbrs[v]):
        if g.degree(u) + g.degree(v) < k:
            continue
        if (s.umask[u] & s.umask[v]).bit_count() > overlap_cap:
            continue
        if mem.t1_round.get(u, _INF) <= t1_v:
            members.append(u)
    result = frozenset(members)
    mem.danger[v] = result
    return result


class DangerRedirectMaker:
    """The randomized strategy with frozen danger sets and redirect coin q.

    Draw order per move (all from ``self.rng``, lowest-index-sorted pools):
      1. if this is the first move, an anchor edge f0 uniform over all edges;
      2. if Breaker's last turn colored nothing, a uniform uncolored edge f1;
      3. the anchor coin (f := f0 with prob 1/2, else uniform in F);
      4. the endpoint pick between the two endpoints of f;
      5. if needed, the replacement vertex (uniform over vertices with
         uncolored incident edges, after trying the other endpoint);
      6. the neighbor u uniform in Gamma'(v);
      7. when load(v) >= T2 and D(v) cuts Gamma'(v): the redirect coin, and
         on success the redirect target uniform in that intersection;
      8. the color, uniform in A(e) (uniform over the whole palette when
         forced in the modified process).
    """

    name = "paper"

    def __init__(self, cfg: MakerConfig | None = None, seed: int | None = None) -> None:
        self.cfg = cfg or MakerConfig()
        self.rng = random.Random(seed)
        self.memory = MakerMemory()
        self._bound: tuple[int, int, int] | None = None  # (delta, b, k)
        self._t1 = self._t2 = 0

    def _bind(self, s: GameState) -> None:
        key = (s.g.max_degree, s.cfg.b, s.cfg.k)
        if self._bound is None:
            self._bound = key
            self._t1 = self.cfg.threshold_ceil(1, key[0], key[1])
            self._t2 = self.cfg.threshold_ceil(2, key[0], key[1])
        elif self._bound != key:
            raise StrategyError("one strategy instance may not switch games")

    def _scan(self, s: GameState) -> None:
        """Record fresh T1/T2 crossings; freeze danger sets for new T2 vertices.

        Maker moves first within a round, so the state seen here is exactly
        the end of round ``s.round - 1``; crossings are recorded against that
        round.
        """
        mem = self.memory
        prev = s.round - 1
        newly_t2 = []
        for v in range(s.g.n):
            load = s.load[v]
            if load >= self._t1 and v not in mem.t1_round:
                mem.t1_round[v] = prev
            if load >= self._t2 and v not in mem.t2_round:
                mem.t2_round[v] = prev
                newly_t2.append(v)
        for v in newly_t2:
            compute_danger_set(s, mem, v)

    def move(self, s: GameState) -> tuple[int, int, dict]:
        if s.uncolored == 0:
            raise StrategyError("no uncolored edge left")
        if s.turn != MAKER:
            raise StrategyError("not Maker's turn")
        self._bind(s)
        self._scan(s)
        g, rng, mem = s.g, self.rng, self.memory

        # step 1: anchor edge
        if mem.f0 is None:
            mem.f0 = rng.randrange(g.m)
        pool = list(s.last_breaker_turn_edges)
        if not pool:
            uncolored = [e for e in range(g.m) if s.color[e] == 0]
            pool = [uncolored[rng.randrange(len(uncolored))]]
        if rng.random() < 0.5:
            f = mem.f0
        else:
            f = pool[rng.randrange(len(pool))]

        # step 2: endpoint of the anchor, with replacement if exhausted
        x, y = g.edges[f]
        v = (x, y)[rng.randrange(2)]
        if not s.uncolored_nbrs[v]:
            other = y if v == x else x
            if s.uncolored_nbrs[other]:
                v = other
            else:
                alive = [w for w in range(g.n) if s.uncolored_nbrs[w]]
                v = alive[rng.randrange(len(alive))]

        # step 3: neighbor, with the danger redirect
        nbrs = sorted(s.uncolored_nbrs[v])
        u = nbrs[rng.randrange(len(nbrs))]
        redirected = False
        if s.load[v] >= self._t2 and v in mem.danger:
            targets = [w for w in sorted(mem.danger[v]) if w in s.uncolored_nbrs[v]]
            if targets and rng.random() < float(self.cfg.q):
                u = targets[rng.randrange(len(targets))]
                redirected = True

        # step 4: color
        e = g.index_of(v, u)
        avail = sorted(s.available_colors(e))
        ann: dict = {"f": f, "v": v, "u": u, "redirected": redirected}
        if avail:
            color = avail[rng.randrange(len(avail))]
        else:
            if s.cfg.mode != MODIFIED:
                raise StrategyError("chosen edge has no available color in strict mode")
            color = rng.randrange(s.cfg.k) + 1
            ann["forced_nonproper"] = True
        mem.f0 = e
        return e, color, ann

    def clone(self) -> "DangerRedirectMaker":
        dup = DangerRedirectMaker(self.cfg)
        dup.rng.setstate(self.rng.getstate())
        dup.memory = self.memory.copy()
        dup._bound = self._bound
        dup._t1 = self._t1
        dup._t2 = self._t2
        return dup


class UniformRandomMaker:
    """Colors a uniformly random legal (edge, color) pair."""

    name = "random"

    def __init__(self, seed: int | None = None) -> None:
        self.rng = random.Random(seed)

    def move(self, s: GameState) -> tuple[int, int, dict | None]:
        if s.uncolored == 0:
            raise StrategyError("no uncolored edge left")
        counts = []
        total = 0
        for e in range(s.g.m):
            cnt = s.avail_mask(e).bit_count() if s.color[e] == 0 else 0
            counts.append(cnt)
            total += cnt
        if total == 0:
            if s.cfg.mode != MODIFIED:
                raise StrategyError("no legal pair left in strict mode")
            uncolored = [e for e in range(s.g.m) if s.color[e] == 0]
            e = uncolored[self.rng.randrange(len(uncolored))]
            return e, self.rng.randrange(s.cfg.k) + 1, {"forced_nonproper": True}
        pick = self.rng.randrange(total)
        for e, cnt in enumerate(counts):
            if pick < cnt:
                colors = sorted(s.available_colors(e))
                return e, colors[self.rng.randrange(len(colors))], None
            pick -= cnt
        raise AssertionError("unreachable")

    def clone(self) -> "UniformRandomMaker":
        dup = UniformRandomMaker()
        dup.rng.setstate(self.rng.getstate())
        return dup


class GreedyMaker:
    """Colors an uncolored edge of minimum availability with its lowest color."""

    name = "greedy"

    def move(self, s: GameState) -> tuple[int, int, dict | None]:
        if s.uncolored == 0:
            raise StrategyError("no uncolored edge left")
        best_e = -1
        best_cnt = -1
        for e in range(s.g.m):
            if s.color[e] != 0:
                continue
            cnt = s.avail_mask(e).bit_count()
            if cnt > 0 and (best_cnt == -1 or cnt < best_cnt):
                best_e, best_cnt = e, cnt
        if best_e == -1:
            if s.cfg.mode != MODIFIED:
                raise StrategyError("no legal pair left in strict mode")
            e = next(e for e in range(s.g.m) if s.color[e] == 0)
            return e, 1, {"forced_nonproper": True}
        mask = s.avail_mask(best_e)
        color = (mask & -mask).bit_length()
        return best_e, color, None

    def clone(self) -> "GreedyMaker":
        return GreedyMaker()
