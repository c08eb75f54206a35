"""Simple undirected graphs: construction, generators, distances, edge-list I/O.

Vertices are 0-based and contiguous.  Edges are stored with the smaller
endpoint first, in insertion order; the edge index is the stable identifier
used by the game engine, the solver, and the move logs.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Malformed graph, edge list, or generator parameters."""


@dataclass(frozen=True)
class EdgeRef:
    """An edge identified by its index in the graph's edge list."""

    index: int
    endpoints: tuple[int, int]


def _edge_idx(e: int | EdgeRef) -> int:
    return e.index if isinstance(e, EdgeRef) else e


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "adj", "incident", "_index_of", "_max_degree")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]) -> None:
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.incident: list[list[int]] = [[] for _ in range(n)]
        self._index_of: dict[tuple[int, int], int] = {}
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u > v:
                u, v = v, u
            if (u, v) in self._index_of:
                raise GraphError(f"duplicate edge ({u}, {v})")
            idx = len(self.edges)
            self._index_of[(u, v)] = idx
            self.edges.append((u, v))
            self.adj[u].append(v)
            self.adj[v].append(u)
            self.incident[u].append(idx)
            self.incident[v].append(idx)
        self._max_degree = max((len(a) for a in self.adj), default=0)

    # -- basic queries -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def max_degree(self) -> int:
        return self._max_degree

    def endpoints(self, e: int | EdgeRef) -> tuple[int, int]:
        return self.edges[_edge_idx(e)]

    def edge_ref(self, e: int) -> EdgeRef:
        return EdgeRef(e, self.edges[e])

    def index_of(self, u: int, v: int) -> int:
        """Edge index for endpoints (u, v); raises GraphError if absent."""
        key = (u, v) if u < v else (v, u)
        try:
            return self._index_of[key]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._index_of

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.edges)))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    # -- distances -----------------------------------------------------

    def vertex_distances(self, sources: int | Iterable[int]) -> list[float]:
        """BFS distance from the nearest source to every vertex (inf if unreachable)."""
        if isinstance(sources, int):
            sources = (sources,)
        dist: list[float] = [math.inf] * self.n
        queue: deque[int] = deque()
        for s in sources:
            if dist[s] != 0:
                dist[s] = 0
                queue.append(s)
        while queue:
            x = queue.popleft()
            for y in self.adj[x]:
                if dist[y] == math.inf:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist


def edge_distance(g: Graph, e: int | EdgeRef, f: int | EdgeRef) -> float:
    """Smallest vertex distance between any endpoint of e and any endpoint of f.

    Adjacent (or identical) edges have distance 0; edges in different
    components have distance ``math.inf``.
    """
    eu, ev = g.endpoints(e)
    fu, fv = g.endpoints(f)
    dist = g.vertex_distances((eu, ev))
    return min(dist[fu], dist[fv])


# -- generators ----------------------------------------------------------


def star(leaves: int) -> Graph:
    """K_{1,leaves}: vertex 0 is the center."""
    if leaves < 1:
        raise GraphError("star needs at least one leaf")
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    """Path on n vertices (n - 1 edges)."""
    if n < 2:
        raise GraphError("path needs at least 2 vertices")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs at least 2 vertices")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("both sides must be non-empty")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic for a given seed."""
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must be in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Random d-regular graph via the pairing model.

    Stubs are shuffled and matched; pairs that would form loops or repeated
    edges are rejected and re-pooled, restarting from scratch when the
    leftover stubs admit no suitable pair.  Deterministic for a given seed.
    """
    if d < 0 or n <= d:
        raise GraphError("need 0 <= d < n")
    if (n * d) % 2 != 0:
        raise GraphError("n * d must be even")
    if d == 0:
        return Graph(n, [])
    rng = random.Random(seed)
    while True:
        edges = _try_pairing(rng, n, d)
        if edges is not None:
            return Graph(n, sorted(edges))


def _try_pairing(rng: random.Random, n: int, d: int) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * d
    while stubs:
        potential: dict[int, int] = {}
        for v in stubs:
            potential[v] = potential.get(v, 0) + 1
        if not _suitable(edges, potential):
            return None  # dead end: restart the whole pairing
        rng.shuffle(stubs)
        leftover = []
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u > v:
                u, v = v, u
            if u == v or (u, v) in edges:
                leftover.extend((stubs[i], stubs[i + 1]))
            else:
                edges.add((u, v))
        if len(leftover) == len(stubs):
            # no progress this round; reshuffle unless provably stuck
            if not _suitable(edges, {v: leftover.count(v) for v in set(leftover)}):
                return None
        stubs = leftover
    return edges


def _suitable(edges: set[tuple[int, int]], potential: dict[int, int]) -> bool:
    """True if some non-loop, non-repeated pair can still be formed."""
    if not potential:
        return True
    verts = list(potential)
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            key = (u, v) if u < v else (v, u)
            if key not in edges:
                return True
    return False


def nonisomorphic_trees(max_edges: int) -> Iterator[Graph]:
    """All trees with 1..max_edges edges, one per isomorphism class."""
    import networkx as nx

    if max_edges < 1:
        raise GraphError("max_edges must be at least 1")
    for order in range(2, max_edges + 2):
        for t in nx.nonisomorphic_trees(order):
            yield Graph(order, sorted(tuple(sorted(e)) for e in t.edges()))


def generate(spec: str) -> Graph:
    """Build a graph from a colon-separated family spec.

    Examples: ``star:5``, ``cycle:7``, ``path:4``, ``complete:4``,
    ``complete_bipartite:2:3``, ``random_regular:64:16:1``,
    ``gnp:10:0.3:7``, ``tree:8:3`` (3rd tree of order 8).
    """
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "star":
            return star(int(args[0]))
        if kind == "cycle":
            return cycle(int(args[0]))
        if kind == "path":
            return path(int(args[0]))
        if kind == "complete":
            return complete(int(args[0]))
        if kind == "complete_bipartite":
            return complete_bipartite(int(args[0]), int(args[1]))
        if kind == "random_regular":
            return random_regular(int(args[0]), int(args[1]), int(args[2]))
        if kind == "gnp":
            return gnp(int(args[0]), float(args[1]), int(args[2]))
        if kind == "tree":
            order, index = int(args[0]), int(args[1])
            import networkx as nx

            for i, t in enumerate(nx.nonisomorphic_trees(order)):
                if i == index:
                    return Graph(order, sorted(tuple(sorted(e)) for e in t.edges()))
            raise GraphError(f"tree index {index} out of range for order {order}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad generator spec {spec!r}: {exc}") from exc
    raise GraphError(f"unknown family {kind!r}")


# -- edge-list text format -------------------------------------------------
#
# First significant line: vertex count.  Each following line: "u v" with
# 0 <= u < v < n.  '#' starts a comment; blank lines are ignored.


def read_edge_list(text: str) -> Graph:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise GraphError(f"line {lineno}: expected vertex count, got {raw!r}")
            try:
                n = int(fields[0])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex count {fields[0]!r}") from None
            continue
        if len(fields) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphError(f"line {lineno}: bad endpoints {raw!r}") from None
        edges.append((u, v))
    if n is None:
        raise GraphError("empty edge list: missing vertex count")
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise GraphError(str(exc)) from None


def write_edge_list(g: Graph) -> str:
    """Canonical text form: vertex count, then edges sorted lexicographically."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"
