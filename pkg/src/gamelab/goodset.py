"""Good edge sets: well-separated max-degree edges and the harmonic criterion.

A *good set* F is a set of edges whose endpoints all have maximum degree and
whose pairwise edge distance is at least 4.  Such a set supports a reduction
of Breaker's play to a box game with one box per member of F; the harmonic
criterion `harmonic_condition` tells when that box game is a Breaker win.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .boxgame import harmonic_number
from .graph import Graph, edge_distance


@dataclass(frozen=True)
class GreedyStep:
    """One round of the greedy selection: chosen edge and its fallout."""

    edge: int
    removed: int  # pool edges deleted this round (including the chosen one)
    alive_after: int
    full_degree_lost: int  # vertices that dropped below full degree this round


@dataclass(frozen=True)
class GoodSetCertificate:
    """A good set together with the facts that certify it."""

    edges: tuple[int, ...]
    endpoint_degrees: tuple[tuple[int, int], ...]
    pair_distances: tuple[tuple[int, int, float], ...]  # (edge, edge, distance)
    steps: tuple[GreedyStep, ...]

    def __len__(self) -> int:
        return len(self.edges)


def find_good_set(g: Graph) -> GoodSetCertificate:
    """Greedy good set construction.

    Repeatedly picks the lowest-index pool edge whose endpoints still have
    full degree within the pool, then removes every pool edge at distance at
    most 2 from it (distances measured in the original graph).  Surviving
    eligible edges end up at distance >= 4 from all chosen ones: an edge at
    distance exactly 3 has an endpoint whose neighbor toward the chosen edge
    sits at distance 2, so one of that endpoint's edges was removed and the
    endpoint lost full degree.
    """
    delta = g.max_degree
    alive = [True] * g.m
    deg_alive = [g.degree(v) for v in range(g.n)]
    chosen: list[int] = []
    steps: list[GreedyStep] = []
    alive_count = g.m
    while True:
        pick = -1
        for e in range(g.m):
            if not alive[e]:
                continue
            u, v = g.edges[e]
            if deg_alive[u] == delta and deg_alive[v] == delta:
                pick = e
                break
        if pick == -1:
            break
        chosen.append(pick)
        dist = g.vertex_distances(g.edges[pick])
        removed = 0
        full_lost = 0
        for f in range(g.m):
            if not alive[f]:
                continue
            x, y = g.edges[f]
            if min(dist[x], dist[y]) <= 2:
                alive[f] = False
                for w in (x, y):
                    if deg_alive[w] == delta:
                        full_lost += 1
                    deg_alive[w] -= 1
                removed += 1
        alive_count -= removed
        steps.append(
            GreedyStep(
                edge=pick,
                removed=removed,
                alive_after=alive_count,
                full_degree_lost=full_lost,
            )
        )
    pairs = []
    for i, e in enumerate(chosen):
        for f in chosen[i + 1 :]:
            pairs.append((e, f, edge_distance(g, e, f)))
    return GoodSetCertificate(
        edges=tuple(chosen),
        endpoint_degrees=tuple(
            (g.degree(g.edges[e][0]), g.degree(g.edges[e][1])) for e in chosen
        ),
        pair_distances=tuple(pairs),
        steps=tuple(steps),
    )


def good_set_problems(g: Graph, edges: Sequence[int]) -> list[str]:
    """All reasons why ``edges`` fails to be a good set (empty if none)."""
    problems: list[str] = []
    delta = g.max_degree
    seen: set[int] = set()
    for e in edges:
        if not 0 <= e < g.m:
            problems.append(f"edge index {e} out of range")
            continue
        if e in seen:
            problems.append(f"edge {e} listed twice")
        seen.add(e)
        u, v = g.edges[e]
        if g.degree(u) != delta or g.degree(v) != delta:
            problems.append(f"edge {e} has an endpoint below degree {delta}")
    clean = sorted(e for e in seen if 0 <= e < g.m)
    for i, e in enumerate(clean):
        for f in clean[i + 1 :]:
            d = edge_distance(g, e, f)
            if d < 4:
                problems.append(f"edges {e} and {f} are at distance {d} < 4")
    return problems


def check_good_set(g: Graph, edges: Sequence[int]) -> bool:
    """True iff the degree and pairwise-distance conditions hold in g."""
    return not good_set_problems(g, edges)


def condition_values(g: Graph, edges: Sequence[int], b: int) -> tuple[Fraction, Fraction]:
    """LHS and RHS of the harmonic criterion: ((2*Delta-2)/(b-1), H_{|F|-1})."""
    if b < 2:
        raise ValueError("criterion needs bias b >= 2")
    lhs = Fraction(2 * g.max_degree - 2, b - 1)
    rhs = harmonic_number(max(0, len(edges) - 1))
    return lhs, rhs


def harmonic_condition(g: Graph, edges: Sequence[int], b: int) -> bool:
    """Harmonic criterion: (2*Delta - 2) / (b - 1) <= H_{|F| - 1}.

    When it holds for a good set F, the box-game reduction gives Breaker a
    win with bias b at any palette size below 2*Delta - 1.  Requires b >= 2;
    with |F| <= 1 the harmonic sum is empty and the criterion is vacuously
    false.
    """
    if len(edges) <= 1:
        if b < 2:
            raise ValueError("criterion needs bias b >= 2")
        return False
    lhs, rhs = condition_values(g, edges, b)
    return lhs <= rhs


def reduction_vertex_bound(delta: int, b: int, scale: float = 1.0) -> int:
    """Vertex count guaranteeing a usable good set in a Delta-regular graph:
    ceil(scale * Delta^3 * exp((Delta - 1) / (b - 1)))."""
    if delta < 1:
        raise ValueError("need delta >= 1")
    if b < 2:
        raise ValueError("need b >= 2")
    return math.ceil(scale * delta**3 * math.exp((delta - 1) / (b - 1)))
