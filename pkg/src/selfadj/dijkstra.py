"""Dijkstra's algorithm over the library heaps, plus a plain reference version.

Graphs use the DIMACS shortest-path conventions: vertices are numbered from 1
and arc weights are nonnegative.  Distances come back as a list indexed by
``vertex - 1`` with ``None`` for unreachable vertices.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .core import INT64_MAX, Arena
from .heap import make_heap
from .metrics import Metrics
from .variants import Variant

INF_TOKEN = "INF"


class Arc(NamedTuple):
    source: int
    target: int
    weight: int


class DimacsError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {msg}" if line is not None else msg)
        self.line = line


@dataclass
class Graph:
    n_vertices: int
    arcs: List[Arc] = field(default_factory=list)

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("a graph needs at least one vertex")
        for a in self.arcs:
            self._check_arc(a)

    def _check_arc(self, a: Arc) -> None:
        for v in (a.source, a.target):
            if not 1 <= v <= self.n_vertices:
                raise ValueError(f"vertex {v} out of range 1..{self.n_vertices}")
        if a.weight < 0:
            raise ValueError(f"negative weight {a.weight} on arc {a.source}->{a.target}")
        if a.weight > INT64_MAX:
            raise ValueError(f"weight {a.weight} exceeds the 64-bit range")

    def adjacency(self) -> List[List[Tuple[int, int]]]:
        """0-based out-lists of (target, weight), in arc order."""
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for s, t, w in self.arcs:
            adj[s - 1].append((t - 1, w))
        return adj

    def to_dimacs(self) -> str:
        lines = [f"p sp {self.n_vertices} {len(self.arcs)}"]
        lines.extend(f"a {s} {t} {w}" for s, t, w in self.arcs)
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    n = m = None
    arcs: List[Arc] = []
    problem_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if problem_line is not None:
                raise DimacsError(f"second problem line (first on line {problem_line})", lineno)
            if len(parts) != 4 or parts[1] != "sp":
                raise DimacsError("problem line must read 'p sp <n> <m>'", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("non-integer vertex or arc count", lineno) from None
            if n < 1 or m < 0:
                raise DimacsError(f"bad sizes n={n} m={m}", lineno)
            problem_line = lineno
        elif tag == "a":
            if problem_line is None:
                raise DimacsError("arc before the problem line", lineno)
            if len(parts) != 4:
                raise DimacsError("arc line must read 'a <u> <v> <w>'", lineno)
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("non-integer field in arc line", lineno) from None
            for x in (u, v):
                if not 1 <= x <= n:
                    raise DimacsError(f"vertex {x} out of range 1..{n}", lineno)
            if w < 0:
                raise DimacsError(f"negative weight {w}", lineno)
            if w > INT64_MAX:
                raise DimacsError(f"weight {w} exceeds the 64-bit range", lineno)
            if len(arcs) == m:
                raise DimacsError(f"more than the {m} declared arcs", lineno)
            arcs.append(Arc(u, v, w))
        else:
            raise DimacsError(f"unknown line type {tag!r}", lineno)
    if problem_line is None:
        raise DimacsError("missing problem line")
    if len(arcs) != m:
        raise DimacsError(f"declared {m} arcs but found {len(arcs)}")
    return Graph(n, arcs)


class DijkstraResult(NamedTuple):
    dist: List[Optional[int]]
    metrics: Metrics
    inserts: int
    decrease_keys: int
    delete_mins: int


def _check_source(g: Graph, source: int) -> None:
    if not isinstance(source, int) or not 1 <= source <= g.n_vertices:
        raise ValueError(f"source {source!r} out of range 1..{g.n_vertices}")


def run_dijkstra(g: Graph, source: int, variant=Variant.PAIRING, mode: str = "eager") -> DijkstraResult:
    """Textbook Dijkstra: insert on first reach, decrease-key on improvement."""
    _check_source(g, source)
    for a in g.arcs:
        if a.weight < 0:
            raise ValueError(f"negative weight {a.weight} on arc {a.source}->{a.target}")
    adj = g.adjacency()
    arena = Arena(record=False)
    h = make_heap(variant, mode, arena)
    dist: List[Optional[int]] = [None] * g.n_vertices
    done = [False] * g.n_vertices
    handle = [None] * g.n_vertices
    vertex_of = {}
    s = source - 1
    dist[s] = 0
    handle[s] = h.insert(0)
    vertex_of[handle[s]] = s
    inserts, dks, dms = 1, 0, 0
    while len(h):
        it, _ = h.delete_min()
        dms += 1
        u = vertex_of.pop(it)
        done[u] = True
        du = dist[u]
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = du + w
            if dist[v] is None:
                dist[v] = nd
                handle[v] = h.insert(nd)
                vertex_of[handle[v]] = v
                inserts += 1
            elif nd < dist[v]:
                dist[v] = nd
                h.decrease_key(handle[v], nd)
                dks += 1
    return DijkstraResult(dist, arena.metrics, inserts, dks, dms)


def reference_dijkstra(g: Graph, source: int) -> List[Optional[int]]:
    """Binary heap with lazy deletion; shares no code with the heaps under test."""
    _check_source(g, source)
    adj = g.adjacency()
    dist: List[Optional[int]] = [None] * g.n_vertices
    pq = [(0, source - 1)]
    while pq:
        d, u = heapq.heappop(pq)
        if dist[u] is not None:
            continue
        dist[u] = d
        for v, w in adj[u]:
            if dist[v] is None:
                heapq.heappush(pq, (d + w, v))
    return dist


def format_distances(dist: Sequence[Optional[int]]) -> str:
    """One ``vertex distance`` line per vertex, unreachable ones as INF."""
    return "".join(f"{v} {INF_TOKEN if d is None else d}\n" for v, d in enumerate(dist, 1))


def gilbert_graph(n: int, p: float, seed: int, max_weight: int = 10 ** 6,
                  max_arcs: Optional[int] = None) -> Graph:
    """Directed G(n, p) without self-loops, weights uniform in 0..max_weight.

    Arcs are drawn by geometric skipping over the n(n-1) candidate slots, so
    the cost is proportional to the number of arcs kept.  ``max_arcs``
    truncates the scan once that many arcs exist.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    arcs: List[Arc] = []
    slots = n * (n - 1)
    if p > 0 and slots:
        log_q = math.log1p(-p) if p < 1 else None
        pos = -1
        while max_arcs is None or len(arcs) < max_arcs:
            if log_q is None:
                pos += 1
            else:
                pos += 1 + int(math.log(1.0 - rng.random()) / log_q)
            if pos >= slots:
                break
            u, r = divmod(pos, n - 1)
            v = r if r < u else r + 1
            arcs.append(Arc(u + 1, v + 1, rng.randint(0, max_weight)))
    return Graph(n, arcs)
