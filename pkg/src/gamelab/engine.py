"""Referee for the biased Maker-Breaker edge-coloring game.

Players alternately color edges of a graph properly from a palette 1..k.
Maker colors one edge per round; Breaker colors up to b edges per turn and
(in the default variant) moves first in round 1 and may sit out.  Breaker
wins as soon as some uncolored edge has every color blocked at its
endpoints; Maker wins when the whole graph is colored.

Two referee modes exist.  In ``strict`` mode the game stops at the first
blocked edge.  In ``modified`` mode play continues to a full coloring:
Maker is allowed (and flagged) to place a non-proper color when his chosen
edge is blocked, while Breaker must always stay proper and sits out when
stuck.  Maker wins a modified game only if he was never forced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from gamelab.graph import Graph

MAKER = "maker"
BREAKER = "breaker"

STRICT = "strict"
MODIFIED = "modified"

ONGOING = "ongoing"
MAKER_WON = "maker_won"
BREAKER_WON = "breaker_won"


class IllegalMove(ValueError):
    """A move or turn action violating the game rules."""


@dataclass(frozen=True)
class GameConfig:
    k: int
    b: int = 1
    breaker_may_skip: bool = True
    first_player: str = BREAKER
    mode: str = STRICT

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("palette size k must be at least 1")
        if self.b < 1:
            raise ValueError("bias b must be at least 1")
        if self.first_player not in (MAKER, BREAKER):
            raise ValueError(f"bad first_player {self.first_player!r}")
        if self.mode not in (STRICT, MODIFIED):
            raise ValueError(f"bad mode {self.mode!r}")

    @classmethod
    def skip_variant(cls, k: int, b: int = 1, mode: str = STRICT) -> GameConfig:
        """Breaker opens the game and may sit out on any turn."""
        return cls(k=k, b=b, breaker_may_skip=True, first_player=BREAKER, mode=mode)

    @classmethod
    def classic(cls, k: int, b: int = 1, mode: str = STRICT) -> GameConfig:
        """Maker opens; Breaker must color when he legally can."""
        return cls(k=k, b=b, breaker_may_skip=False, first_player=MAKER, mode=mode)


@dataclass(frozen=True)
class MoveRecord:
    """One half-move.  ``skip=True`` marks the end of a Breaker turn
    (a pure sit-out is an end-of-turn with no preceding colorings)."""

    round: int
    player: str
    edge: int | None
    color: int | None
    skip: bool = False
    ann: dict | None = None


class MoveLog:
    """Ordered list of MoveRecords with JSON-lines (de)serialization."""

    def __init__(self, records: list[MoveRecord] | None = None) -> None:
        self.records: list[MoveRecord] = records if records is not None else []

    def append(self, rec: MoveRecord) -> None:
        self.records.append(rec)

    def __iter__(self) -> Iterator[MoveRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MoveLog):
            return NotImplemented
        return self.records == other.records

    def copy(self) -> MoveLog:
        return MoveLog(list(self.records))

    def to_jsonl(self, g: Graph) -> str:
        lines = []
        for rec in self.records:
            obj: dict = {
                "r": rec.round,
                "p": "M" if rec.player == MAKER else "B",
                "e": list(g.endpoints(rec.edge)) if rec.edge is not None else None,
                "c": rec.color,
                "skip": rec.skip,
            }
            if rec.ann is not None:
                obj["ann"] = rec.ann
            lines.append(json.dumps(obj, separators=(",", ":")))
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_jsonl(cls, text: str, g: Graph) -> MoveLog:
        records = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"log line {lineno}: bad JSON: {exc}") from None
            player = MAKER if obj["p"] == "M" else BREAKER
            edge = g.index_of(*obj["e"]) if obj.get("e") is not None else None
            records.append(
                MoveRecord(
                    round=obj["r"],
                    player=player,
                    edge=edge,
                    color=obj.get("c"),
                    skip=bool(obj.get("skip", False)),
                    ann=obj.get("ann"),
                )
            )
        return cls(records)


class GameState:
    """Live game position with incrementally maintained derived quantities.

    ``load[v]`` is the number of colored edges at v, ``umask[v]`` the bitmask
    of colors used at v (bit i = color i+1), and ``uncolored_nbrs[v]`` the
    set of neighbors joined to v by a still-uncolored edge.
    """

    __slots__ = (
        "g",
        "cfg",
        "color",
        "uncolored",
        "round",
        "turn",
        "breaker_moves_this_turn",
        "load",
        "umask",
        "uncolored_nbrs",
        "full_mask",
        "blocked_seen",
        "forced_count",
        "log",
        "last_breaker_turn_edges",
        "_cur_breaker_edges",
    )

    def __init__(self, g: Graph, cfg: GameConfig) -> None:
        self.g = g
        self.cfg = cfg
        self.color: list[int] = [0] * g.m
        self.uncolored = g.m
        self.round = 1
        self.turn = cfg.first_player
        self.breaker_moves_this_turn = 0
        self.load: list[int] = [0] * g.n
        self.umask: list[int] = [0] * g.n
        self.uncolored_nbrs: list[set[int]] = [set(g.adj[v]) for v in range(g.n)]
        self.full_mask = (1 << cfg.k) - 1
        self.blocked_seen = False
        self.forced_count = 0
        self.log = MoveLog()
        self.last_breaker_turn_edges: list[int] = []
        self._cur_breaker_edges: list[int] = []

    # -- queries ---------------------------------------------------------

    def avail_mask(self, e: int) -> int:
        u, v = self.g.edges[e]
        return self.full_mask & ~(self.umask[u] | self.umask[v])

    def available_colors(self, e: int) -> set[int]:
        """Colors of 1..k legal on the uncolored edge e."""
        if self.color[e] != 0:
            raise IllegalMove(f"edge {e} is already colored")
        mask = self.avail_mask(e)
        return {i + 1 for i in range(self.cfg.k) if mask >> i & 1}

    def used_colors(self, v: int) -> set[int]:
        return {i + 1 for i in range(self.cfg.k) if self.umask[v] >> i & 1}

    def winner(self) -> str:
        if self.blocked_seen:
            return BREAKER_WON
        if self.uncolored == 0:
            return MAKER_WON
        return ONGOING

    def game_over(self) -> bool:
        if self.cfg.mode == MODIFIED:
            return self.uncolored == 0
        return self.winner() != ONGOING

    def breaker_has_legal_move(self) -> bool:
        return any(
            self.color[e] == 0 and self.avail_mask(e) != 0 for e in range(self.g.m)
        )

    # -- transitions -------------------------------------------------------

    def apply_move(self, player: str, e: int, c: int, ann: dict | None = None) -> None:
        if self.game_over():
            raise IllegalMove("game is over")
        if player != self.turn:
            raise IllegalMove(f"not {player}'s turn")
        if not 0 <= e < self.g.m:
            raise IllegalMove(f"no edge with index {e}")
        if self.color[e] != 0:
            raise IllegalMove(f"edge {e} is already colored")
        if not 1 <= c <= self.cfg.k:
            raise IllegalMove(f"color {c} outside palette 1..{self.cfg.k}")
        proper = bool(self.avail_mask(e) >> (c - 1) & 1)
        if player == BREAKER:
            if self.breaker_moves_this_turn >= self.cfg.b:
                raise IllegalMove(f"bias exceeded: already colored {self.cfg.b} edges this turn")
            if not proper:
                raise IllegalMove(f"color {c} blocked on edge {e}")
        else:
            if not proper and self.cfg.mode == STRICT:
                raise IllegalMove(f"color {c} blocked on edge {e}")
        forced = not proper
        if forced:
            self.forced_count += 1
            self.blocked_seen = True

        u, v = self.g.edges[e]
        self.color[e] = c
        self.uncolored -= 1
        bit = 1 << (c - 1)
        for w in (u, v):
            self.load[w] += 1
            self.umask[w] |= bit
        self.uncolored_nbrs[u].discard(v)
        self.uncolored_nbrs[v].discard(u)

        if player == BREAKER:
            self.breaker_moves_this_turn += 1
            self._cur_breaker_edges.append(e)
        else:
            self.turn = BREAKER
            self.breaker_moves_this_turn = 0

        self.log.append(MoveRecord(self.round, player, e, c, False, ann))

        # only edges at the two endpoints can have lost their last color
        if not self.blocked_seen:
            for w in (u, v):
                for f in self.g.incident[w]:
                    if self.color[f] == 0:
                        a, bb = self.g.edges[f]
                        if self.full_mask & ~(self.umask[a] | self.umask[bb]) == 0:
                            self.blocked_seen = True
                            break
                if self.blocked_seen:
                    break

    def end_breaker_turn(self) -> None:
        """Close Breaker's turn; a turn with zero colorings is a sit-out.

        Logged as a ``skip`` record so that replay needs no inference about
        turn boundaries.
        """
        if self.game_over():
            raise IllegalMove("game is over")
        if self.turn != BREAKER:
            raise IllegalMove("not breaker's turn")
        if (
            self.breaker_moves_this_turn == 0
            and not self.cfg.breaker_may_skip
            and self.breaker_has_legal_move()
        ):
            raise IllegalMove("breaker may not sit out in this variant")
        self.log.append(MoveRecord(self.round, BREAKER, None, None, True, None))
        self.last_breaker_turn_edges = self._cur_breaker_edges
        self._cur_breaker_edges = []
        self.turn = MAKER
        self.round += 1
        self.breaker_moves_this_turn = 0

    # -- copying / comparison ----------------------------------------------

    def clone(self) -> GameState:
        s = object.__new__(GameState)
        s.g = self.g
        s.cfg = self.cfg
        s.color = list(self.color)
        s.uncolored = self.uncolored
        s.round = self.round
        s.turn = self.turn
        s.breaker_moves_this_turn = self.breaker_moves_this_turn
        s.load = list(self.load)
        s.umask = list(self.umask)
        s.uncolored_nbrs = [set(x) for x in self.uncolored_nbrs]
        s.full_mask = self.full_mask
        s.blocked_seen = self.blocked_seen
        s.forced_count = self.forced_count
        s.log = self.log.copy()
        s.last_breaker_turn_edges = list(self.last_breaker_turn_edges)
        s._cur_breaker_edges = list(self._cur_breaker_edges)
        return s

    def snapshot(self) -> tuple:
        """Comparable digest of every rule-relevant state component."""
        return (
            tuple(self.color),
            self.uncolored,
            self.round,
            self.turn,
            self.breaker_moves_this_turn,
            tuple(self.load),
            tuple(self.umask),
            tuple(frozenset(x) for x in self.uncolored_nbrs),
            self.blocked_seen,
            self.forced_count,
            tuple(self.last_breaker_turn_edges),
            tuple(self._cur_breaker_edges),
        )


def new_game(g: Graph, cfg: GameConfig) -> GameState:
    return GameState(g, cfg)


def replay(g: Graph, cfg: GameConfig, log: MoveLog) -> GameState:
    """Re-run a logged game, validating every step; returns the final state."""
    s = new_game(g, cfg)
    for i, rec in enumerate(log):
        try:
            if rec.round != s.round:
                raise IllegalMove(f"expected round {s.round}, record says {rec.round}")
            if rec.skip:
                if rec.player != BREAKER:
                    raise IllegalMove("skip recorded for maker")
                s.end_breaker_turn()
            else:
                if rec.edge is None or rec.color is None:
                    raise IllegalMove("coloring record lacks edge or color")
                s.apply_move(rec.player, rec.edge, rec.color, rec.ann)
        except IllegalMove as exc:
            raise IllegalMove(f"replay failed at record {i}: {exc}") from None
    return s
