"""Per-vertex traces and summary statistics from annotated game logs.

Rounds are end-of-round snapshots: row r of a trace describes the position
after every logged record of round <= r has been applied (row 0 is the
empty board; a game that ends mid-round contributes one final partial
row).  For each vertex v the following are tracked:

* ``loads[r]``: number of colored v-edges after round r,
* ``t1/t2/t3``: first r with ``loads[r] >= ceil(T_j)`` where
  ``T_j = j*lam*delta/b``,
* good v-edge events: every Maker record carries an annotation naming the
  vertex v it played for, making the move's edge a "good v-edge",
* window counts: good v-edges colored at rounds r with
  ``loads[r-1] >= ceil(T_{j-1})`` and ``loads[r] < ceil(T_j)`` for
  j in {1,2,3}.  A round that jumps across a window boundary belongs to
  no window; that is how the periods the counts describe are delimited,
* ``i_prime``: the first ``floor(lam*delta/(5*b*b))`` distinct colors on
  good v-edges played at window-1 rounds (load still below T1),
* ``i_mid``: all colors on good v-edges played at window-2 rounds,
* ``danger``: the dangerous-neighbor set, frozen at the end of round
  t2(v) by the same rule the maker strategy uses (shared
  ``compute_danger_set``),
* ``danger_prime``: neighbors whose load reached T1 not after v did,
* ``nbr_sum[r]``/``nbr_cnt[r]``: total load over, and size of, the
  uncolored neighborhood Gamma'_r(v).

Two independent computations are provided.  ``TraceCollector`` maintains
everything incrementally while a live game runs and must be fed after
every single engine transition.  ``analyze`` recomputes everything from
the recorded log alone: it replays the records through a fresh engine
state and brute-forces the per-round sums from that state.  Agreement of
the two is a tested invariant, not an assumption.

The summary reports, per inequality the analysis tracks at scale
(lam, c, b, delta), how many vertices violate it.  These are descriptive
statistics: the bounds only hold asymptotically with high probability and
can genuinely fail at desk scale, so nothing here asserts them.  The
color-multiplicity statistic is a deliberate over-approximation: the
underlying event quantifies over all neighbor subsets W of a fixed size,
which is not enumerable, so multiplicities are counted over the whole
neighborhood, flagging a superset of the event.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import (
    MAKER,
    GameConfig,
    GameState,
    MoveLog,
    new_game,
)
from .graph import Graph
from .maker import MakerConfig, MakerMemory, compute_danger_set

__all__ = [
    "GoodEdgeEvent",
    "VertexTrace",
    "TelemetryReport",
    "TraceCollector",
    "analyze",
    "to_csv",
    "summary_json",
]

_INF = float("inf")


@dataclass
class GoodEdgeEvent:
    """One Maker move, attributed to the vertex its annotation names."""

    round: int
    edge: int
    color: int
    pre_load: int
    redirected: bool
    forced: bool


@dataclass
class VertexTrace:
    v: int
    degree: int
    loads: list[int]
    nbr_sum: list[int]
    nbr_cnt: list[int]
    t1: int | None
    t2: int | None
    t3: int | None
    window_counts: tuple[int, int, int]
    good_events: list[GoodEdgeEvent]
    i_prime: tuple[int, ...]
    i_mid: frozenset[int]
    danger: frozenset[int] | None
    danger_prime: frozenset[int] | None


@dataclass
class TelemetryReport:
    n: int
    m: int
    delta: int
    k: int
    b: int
    lam: Fraction
    c: Fraction
    rounds: int
    maker_moves: int
    breaker_moves: int
    forced_nonproper: int
    redirected_moves: int
    traces: list[VertexTrace]
    summary: dict


class _Params:
    """Threshold constants shared by the live and the batch path."""

    def __init__(self, g: Graph, game_cfg: GameConfig, maker_cfg: MakerConfig):
        self.g = g
        self.game_cfg = game_cfg
        self.maker_cfg = maker_cfg
        self.delta = g.max_degree
        self.b = game_cfg.b
        # tc[j] = smallest integer load meeting T_j; tc[0] = 0.
        self.tc = [0] + [
            maker_cfg.threshold_ceil(j, self.delta, self.b) for j in (1, 2, 3)
        ]
        self.i_prime_cap = math.floor(
            Fraction(1, 5 * self.b * self.b) * maker_cfg.lam * self.delta
        )


def _classify_event(
    params: _Params,
    ev: GoodEdgeEvent,
    prev_load: int,
    round_load: int,
    windows: list[int],
    i_prime: list[int],
    i_mid: set[int],
) -> None:
    """File one good v-edge event under its load window, if any."""
    tc = params.tc
    for j in (1, 2, 3):
        if prev_load >= tc[j - 1] and round_load < tc[j]:
            windows[j - 1] += 1
            if j == 1 and ev.color not in i_prime and len(i_prime) < params.i_prime_cap:
                i_prime.append(ev.color)
            if j == 2:
                i_mid.add(ev.color)
            break


def _danger_prime(
    g: Graph, t1: list[int | None], v: int
) -> frozenset[int] | None:
    if t1[v] is None:
        return None
    tv = t1[v]
    return frozenset(
        u for u in g.adj[v] if t1[u] is not None and t1[u] <= tv
    )


def _summarize(params: _Params, traces: list[VertexTrace], k: int) -> dict:
    lam, c = params.maker_cfg.lam, params.maker_cfg.c
    delta, b = params.delta, params.b
    shortfall = Fraction(1, 5 * b * b) * lam * delta
    spike = 9 * lam * delta
    spike_degree = (1 - c * Fraction(1, b**4)) * delta
    danger_cap = c * Fraction(1, b * b) * delta
    heavy_mult = Fraction(1, 4 * b**4) * c * lam * delta
    out: dict = {"good_windows": {}}
    for j in (1, 2, 3):
        eligible = [t for t in traces if t.degree >= params.tc[j]]
        completed = [t for t in eligible if (t.t1, t.t2, t.t3)[j - 1] is not None]
        violating = [t for t in completed if t.window_counts[j - 1] < shortfall]
        out["good_windows"][str(j)] = _cell(
            len(eligible), len(violating), completed=len(completed)
        )
    eligible = [t for t in traces if t.degree >= spike_degree]
    violating = []
    for t in eligible:
        for r in range(len(t.loads)):
            if (
                t.loads[r] < params.tc[2]
                and t.nbr_cnt[r] > 0
                and t.nbr_sum[r] >= spike * t.nbr_cnt[r]
            ):
                violating.append(t)
                break
    out["nbr_spike"] = _cell(len(eligible), len(violating))
    frozen = [t for t in traces if t.danger is not None]
    violating = [t for t in frozen if len(t.danger) > danger_cap]
    out["danger_oversize"] = _cell(len(frozen), len(violating))
    mult: dict[int, dict[int, int]] = {}
    for t in traces:
        for color in t.i_prime:
            for u in params.g.adj[t.v]:
                mult.setdefault(u, {})
                mult[u][color] = mult[u].get(color, 0) + 1
    violating = []
    for t in traces:
        heavy = sum(
            1 for cnt in mult.get(t.v, {}).values() if cnt >= heavy_mult
        )
        if heavy >= danger_cap:
            violating.append(t)
    out["heavy_colors"] = _cell(len(traces), len(violating))
    return out


def _cell(eligible: int, violating: int, completed: int | None = None) -> dict:
    denom = eligible if completed is None else completed
    cell = {
        "eligible": eligible,
        "violating": violating,
        "fraction": (violating / denom) if denom else None,
    }
    if completed is not None:
        cell["completed"] = completed
    return cell


class TraceCollector:
    """Incremental trace bookkeeping for a live game.

    ``observe(state)`` must be called after *every* engine transition
    (``apply_move`` or ``end_breaker_turn``), so that exactly one new log
    record is visible per call; the live game state is needed at round
    boundaries to freeze danger sets.  ``finish(state)`` closes a trailing
    partial round and builds the report.
    """

    def __init__(
        self,
        g: Graph,
        game_cfg: GameConfig,
        maker_cfg: MakerConfig | None = None,
    ) -> None:
        self.params = _Params(g, game_cfg, maker_cfg or MakerConfig())
        self.g = g
        n = g.n
        self._load = [0] * n
        self._uncolored_nbrs = [set(g.adj[v]) for v in range(n)]
        self._cur_sum = [0] * n
        self._cur_cnt = [len(g.adj[v]) for v in range(n)]
        self._loads_rows = [[0] for _ in range(n)]
        self._sum_rows = [[0] for _ in range(n)]
        self._cnt_rows = [[len(g.adj[v])] for v in range(n)]
        self._t: list[list[int | None]] = [[None] * n for _ in range(3)]
        self._mem = MakerMemory()
        self._windows = [[0, 0, 0] for _ in range(n)]
        self._good_events: list[list[GoodEdgeEvent]] = [[] for _ in range(n)]
        self._i_prime: list[list[int]] = [[] for _ in range(n)]
        self._i_mid: list[set[int]] = [set() for _ in range(n)]
        self._pending: list[tuple[int, GoodEdgeEvent]] = []
        self._cursor = 0
        self._dirty = False
        self._maker_moves = 0
        self._breaker_moves = 0
        self._forced = 0
        self._redirected = 0
        self._finished = False

    def observe(self, state: GameState) -> None:
        if self._finished:
            raise ValueError("collector already finished")
        fresh = len(state.log) - self._cursor
        if fresh != 1:
            raise ValueError(
                "collector must observe every transition (one new record at "
                f"a time, got {fresh})"
            )
        rec = state.log[self._cursor]
        self._cursor += 1
        if rec.skip:
            self._close_round(rec.round, state)
            return
        self._dirty = True
        if rec.player == MAKER:
            ann = rec.ann
            if not ann or "v" not in ann:
                raise ValueError("log missing annotations")
            v_sel = ann["v"]
            ev = GoodEdgeEvent(
                rec.round,
                rec.edge,
                rec.color,
                self._load[v_sel],
                bool(ann.get("redirected", False)),
                bool(ann.get("forced_nonproper", False)),
            )
            self._pending.append((v_sel, ev))
            self._maker_moves += 1
            self._forced += ev.forced
            self._redirected += ev.redirected
        else:
            self._breaker_moves += 1
        x, y = self.g.edges[rec.edge]
        for u in self._uncolored_nbrs[x]:
            self._cur_sum[u] += 1
        for u in self._uncolored_nbrs[y]:
            self._cur_sum[u] += 1
        self._load[x] += 1
        self._load[y] += 1
        self._uncolored_nbrs[x].discard(y)
        self._uncolored_nbrs[y].discard(x)
        self._cur_sum[x] -= self._load[y]
        self._cur_sum[y] -= self._load[x]
        self._cur_cnt[x] -= 1
        self._cur_cnt[y] -= 1

    def _close_round(self, r: int, state: GameState) -> None:
        n = self.g.n
        for v in range(n):
            rows = self._loads_rows[v]
            if len(rows) != r:
                raise ValueError(f"round {r} closed out of order")
            rows.append(self._load[v])
            self._sum_rows[v].append(self._cur_sum[v])
            self._cnt_rows[v].append(self._cur_cnt[v])
        newly_t2 = []
        for v in range(n):
            for j in (0, 1, 2):
                if self._t[j][v] is None and self._load[v] >= self.params.tc[j + 1]:
                    self._t[j][v] = r
                    if j == 0:
                        self._mem.t1_round[v] = r
                    elif j == 1:
                        self._mem.t2_round[v] = r
                        newly_t2.append(v)
        for v in newly_t2:
            compute_danger_set(state, self._mem, v)
        for v_sel, ev in self._pending:
            _classify_event(
                self.params,
                ev,
                self._loads_rows[v_sel][r - 1],
                self._loads_rows[v_sel][r],
                self._windows[v_sel],
                self._i_prime[v_sel],
                self._i_mid[v_sel],
            )
            self._good_events[v_sel].append(ev)
        self._pending.clear()
        self._dirty = False

    def finish(self, state: GameState) -> TelemetryReport:
        if self._finished:
            raise ValueError("collector already finished")
        if self._dirty:
            last_round = state.log[len(state.log) - 1].round
            self._close_round(last_round, state)
        self._finished = True
        return _build_report(
            self.params,
            self._loads_rows,
            self._sum_rows,
            self._cnt_rows,
            self._t,
            self._windows,
            self._good_events,
            self._i_prime,
            self._i_mid,
            self._mem,
            self._maker_moves,
            self._breaker_moves,
            self._forced,
            self._redirected,
        )


def _build_report(
    params: _Params,
    loads_rows,
    sum_rows,
    cnt_rows,
    t,
    windows,
    good_events,
    i_prime,
    i_mid,
    mem: MakerMemory,
    maker_moves: int,
    breaker_moves: int,
    forced: int,
    redirected: int,
) -> TelemetryReport:
    g = params.g
    t1 = t[0]
    traces = []
    for v in range(g.n):
        traces.append(
            VertexTrace(
                v=v,
                degree=g.degree(v),
                loads=loads_rows[v],
                nbr_sum=sum_rows[v],
                nbr_cnt=cnt_rows[v],
                t1=t[0][v],
                t2=t[1][v],
                t3=t[2][v],
                window_counts=tuple(windows[v]),
                good_events=good_events[v],
                i_prime=tuple(i_prime[v]),
                i_mid=frozenset(i_mid[v]),
                danger=mem.danger.get(v),
                danger_prime=_danger_prime(g, t1, v),
            )
        )
    k = params.game_cfg.k
    return TelemetryReport(
        n=g.n,
        m=g.m,
        delta=params.delta,
        k=k,
        b=params.b,
        lam=params.maker_cfg.lam,
        c=params.maker_cfg.c,
        rounds=len(loads_rows[0]) - 1 if g.n else 0,
        maker_moves=maker_moves,
        breaker_moves=breaker_moves,
        forced_nonproper=forced,
        redirected_moves=redirected,
        traces=traces,
        summary=_summarize(params, traces, k),
    )


def analyze(
    log: MoveLog,
    g: Graph,
    game_cfg: GameConfig,
    maker_cfg: MakerConfig | None = None,
) -> TelemetryReport:
    """Recompute the full report from a recorded log, from scratch.

    The records are replayed through a fresh engine state; per-round
    neighborhood sums are brute-forced from that state at every round
    boundary rather than maintained incrementally.  Raises ValueError when
    a Maker record lacks the strategy annotation naming its vertex.
    """
    params = _Params(g, game_cfg, maker_cfg or MakerConfig())
    n = g.n
    state = new_game(g, game_cfg)
    loads_rows = [[0] for _ in range(n)]
    sum_rows = [[0] for _ in range(n)]
    cnt_rows = [[len(g.adj[v])] for v in range(n)]
    t: list[list[int | None]] = [[None] * n for _ in range(3)]
    mem = MakerMemory()
    events: list[tuple[int, GoodEdgeEvent]] = []
    maker_moves = breaker_moves = forced = redirected = 0

    def close_round(r: int) -> None:
        for v in range(n):
            loads_rows[v].append(state.load[v])
            total = sum(state.load[u] for u in state.uncolored_nbrs[v])
            sum_rows[v].append(total)
            cnt_rows[v].append(len(state.uncolored_nbrs[v]))
        newly_t2 = []
        for v in range(n):
            for j in (0, 1, 2):
                if t[j][v] is None and state.load[v] >= params.tc[j + 1]:
                    t[j][v] = r
                    if j == 0:
                        mem.t1_round[v] = r
                    elif j == 1:
                        mem.t2_round[v] = r
                        newly_t2.append(v)
        for v in newly_t2:
            compute_danger_set(state, mem, v)

    dirty = False
    last_round = 0
    for rec in log:
        last_round = rec.round
        if rec.skip:
            state.end_breaker_turn()
            close_round(rec.round)
            dirty = False
            continue
        if rec.player == MAKER:
            ann = rec.ann
            if not ann or "v" not in ann:
                raise ValueError("log missing annotations")
            v_sel = ann["v"]
            ev = GoodEdgeEvent(
                rec.round,
                rec.edge,
                rec.color,
                state.load[v_sel],
                bool(ann.get("redirected", False)),
                bool(ann.get("forced_nonproper", False)),
            )
            events.append((v_sel, ev))
            maker_moves += 1
            forced += ev.forced
            redirected += ev.redirected
        else:
            breaker_moves += 1
        state.apply_move(rec.player, rec.edge, rec.color, rec.ann)
        dirty = True
    if dirty:
        close_round(last_round)

    windows = [[0, 0, 0] for _ in range(n)]
    good_events: list[list[GoodEdgeEvent]] = [[] for _ in range(n)]
    i_prime: list[list[int]] = [[] for _ in range(n)]
    i_mid: list[set[int]] = [set() for _ in range(n)]
    for v_sel, ev in events:
        rows = loads_rows[v_sel]
        if ev.round < len(rows):
            _classify_event(
                params,
                ev,
                rows[ev.round - 1],
                rows[ev.round],
                windows[v_sel],
                i_prime[v_sel],
                i_mid[v_sel],
            )
        good_events[v_sel].append(ev)
    return _build_report(
        params,
        loads_rows,
        sum_rows,
        cnt_rows,
        t,
        windows,
        good_events,
        i_prime,
        i_mid,
        mem,
        maker_moves,
        breaker_moves,
        forced,
        redirected,
    )


def to_csv(report: TelemetryReport) -> str:
    """One row per vertex with the scalar trace quantities."""
    header = (
        "v,degree,final_load,t1,t2,t3,w1,w2,w3,"
        "good_edges,i_prime_size,i_mid_size,danger_size,danger_prime_size"
    )
    lines = [header]
    for tr in report.traces:
        w1, w2, w3 = tr.window_counts
        cells = [
            tr.v,
            tr.degree,
            tr.loads[-1],
            tr.t1 if tr.t1 is not None else "",
            tr.t2 if tr.t2 is not None else "",
            tr.t3 if tr.t3 is not None else "",
            w1,
            w2,
            w3,
            len(tr.good_events),
            len(tr.i_prime),
            len(tr.i_mid),
            len(tr.danger) if tr.danger is not None else "",
            len(tr.danger_prime) if tr.danger_prime is not None else "",
        ]
        lines.append(",".join(str(x) for x in cells))
    return "\n".join(lines) + "\n"


def summary_json(report: TelemetryReport) -> str:
    """Canonical JSON rendering of the summary block (sorted keys)."""
    doc = {
        "params": {
            "n": report.n,
            "m": report.m,
            "delta": report.delta,
            "k": report.k,
            "b": report.b,
            "lam": str(report.lam),
            "c": str(report.c),
        },
        "game": {
            "rounds": report.rounds,
            "maker_moves": report.maker_moves,
            "breaker_moves": report.breaker_moves,
            "forced_nonproper": report.forced_nonproper,
            "redirected_moves": report.redirected_moves,
        },
        "violations": report.summary,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
