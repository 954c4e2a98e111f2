"""Kautz digraph semantics: overlap, distance, unique geodesics.

Distances never require the graph itself: the directed distance between two
vertices is D minus their maximal suffix/prefix overlap, and the geodesic is
the unique walk-word gluing the two vertices along that overlap.  An explicit
small-instance digraph with BFS is also provided as an independent oracle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List

from .errors import EdgeNotInGraph, LengthMismatch, TooLarge
from .words import KautzWord, Letters, _as_letters

DEFAULT_VERTEX_CAP = 10**7


def overlap(u: Letters, v: Letters) -> int:
    """Largest j with suffix_j(u) = prefix_j(v)."""
    a, b = _as_letters(u), _as_letters(v)
    if len(a) != len(b):
        raise LengthMismatch(f"vertex lengths differ: {len(a)} vs {len(b)}")
    n = len(a)
    for j in range(n, 0, -1):
        if a[n - j :] == b[:j]:
            return j
    return 0


def distance(u: Letters, v: Letters) -> int:
    """Directed distance D - overlap(u, v)."""
    a = _as_letters(u)
    return len(a) - overlap(u, v)


def geodesic(u: KautzWord, v: KautzWord) -> KautzWord:
    """The unique shortest walk-word from u to v.

    Its first D letters are u, its last D letters are v, and its length is
    D + dist(u, v); for u == v this is u itself (the empty walk).
    """
    k = distance(u, v)
    a, b = _as_letters(u), _as_letters(v)
    alphabet = u.alphabet_size if isinstance(u, KautzWord) else max(max(a), max(b)) + 1
    return KautzWord(a + b[len(b) - k :] if k else a, alphabet)


@dataclass(frozen=True)
class KautzEdge:
    """An edge of K(d, D), encoded by its (D+1)-letter edge-word."""

    d: int
    D: int
    word: KautzWord

    def __post_init__(self):
        if self.d < 2 or self.D < 2:
            raise LengthMismatch("need d >= 2 and D >= 2")
        if len(self.word) != self.D + 1:
            raise LengthMismatch(
                f"edge-word must have length D+1={self.D + 1}, got {len(self.word)}"
            )
        if self.word.alphabet_size != self.d + 1:
            raise LengthMismatch(
                f"edge-word alphabet must be d+1={self.d + 1}, got {self.word.alphabet_size}"
            )

    @classmethod
    def from_string(cls, word: str, d: int) -> "KautzEdge":
        w = KautzWord.parse(word, d + 1)
        return cls(d=d, D=len(w) - 1, word=w)

    @property
    def tail(self) -> KautzWord:
        return KautzWord(self.word.letters[:-1], self.word.alphabet_size)

    @property
    def head(self) -> KautzWord:
        return KautzWord(self.word.letters[1:], self.word.alphabet_size)

    def __str__(self) -> str:
        return str(self.word)


def _kautz_words(alphabet: int, length: int) -> Iterator[tuple[int, ...]]:
    """All adjacent-distinct words of the given length, lexicographically."""
    word: list[int] = []

    def rec():
        if len(word) == length:
            yield tuple(word)
            return
        for c in range(alphabet):
            if word and word[-1] == c:
                continue
            word.append(c)
            yield from rec()
            word.pop()

    yield from rec()


class ExplicitDigraph:
    """A fully materialized K(d, D) for small instances."""

    def __init__(self, d: int, D: int, max_vertices: int = DEFAULT_VERTEX_CAP):
        n_vertices = (d + 1) * d ** (D - 1)
        if n_vertices > max_vertices:
            raise TooLarge(
                f"K({d},{D}) has {n_vertices} vertices, above the cap {max_vertices}"
            )
        self.d = d
        self.D = D
        self.vertices: List[tuple[int, ...]] = list(_kautz_words(d + 1, D))
        self.index: Dict[tuple[int, ...], int] = {
            w: i for i, w in enumerate(self.vertices)
        }
        self.succ: List[List[int]] = []
        for w in self.vertices:
            row = [
                self.index[w[1:] + (c,)] for c in range(d + 1) if c != w[-1]
            ]
            self.succ.append(row)
        indeg = [0] * len(self.vertices)
        for row in self.succ:
            for j in row:
                indeg[j] += 1
        if any(len(row) != d for row in self.succ) or any(x != d for x in indeg):
            raise TooLarge("degree invariant failed")  # pragma: no cover

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return self.n_vertices * self.d

    def edge_words(self) -> Iterator[str]:
        for w in self.vertices:
            for j in self.succ[self.index[w]]:
                yield "".join(str(c) for c in w + self.vertices[j][-1:])

    def bfs(self, source: int) -> tuple[list[int], list[int], list[int]]:
        """Distances, unique-parent array and shortest-path counts from source."""
        n = self.n_vertices
        dist = [-1] * n
        parent = [-1] * n
        paths = [0] * n
        dist[source] = 0
        paths[source] = 1
        q = deque([source])
        while q:
            x = q.popleft()
            for y in self.succ[x]:
                if dist[y] == -1:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    paths[y] = paths[x]
                    q.append(y)
                elif dist[y] == dist[x] + 1:
                    paths[y] += paths[x]
        return dist, parent, paths


def oracle_congestion_all(g: ExplicitDigraph):
    """Exact per-edge layer tables for every edge, by all-pairs BFS.

    Verifies geodesic uniqueness and the diameter along the way.  Returns a
    dict mapping edge-word strings to LayerTable.
    """
    from .congestion import LayerTable

    d, D = g.d, g.D
    counts: Dict[str, Dict[int, list[int]]] = {
        w: {k: [0] * k for k in range(1, D + 1)} for w in g.edge_words()
    }
    eccentricity = 0
    for s in range(g.n_vertices):
        dist, parent, paths = g.bfs(s)
        for y in range(g.n_vertices):
            k = dist[y]
            if k <= 0:
                if k < 0:
                    raise EdgeNotInGraph("graph is not strongly connected")
                continue
            if paths[y] != 1:
                raise EdgeNotInGraph(
                    f"geodesic between vertices {s} and {y} is not unique"
                )
            eccentricity = max(eccentricity, k)
            chain = [y]
            while chain[-1] != s:
                chain.append(parent[chain[-1]])
            chain.reverse()
            for t in range(1, k + 1):
                u, v = chain[t - 1], chain[t]
                ew = "".join(
                    str(c) for c in g.vertices[u] + g.vertices[v][-1:]
                )
                counts[ew][k][t - 1] += 1
    if eccentricity != D:
        raise EdgeNotInGraph(f"diameter is {eccentricity}, expected {D}")
    return {
        w: LayerTable.build(d, D, rows) for w, rows in counts.items()
    }


def build_explicit(d: int, D: int, max_vertices: int = DEFAULT_VERTEX_CAP) -> ExplicitDigraph:
    return ExplicitDigraph(d, D, max_vertices=max_vertices)


def oracle_congestion(g: ExplicitDigraph, e: KautzEdge):
    """LayerTable for one edge, counted on the explicit graph."""
    if e.d != g.d or e.D != g.D:
        raise EdgeNotInGraph(f"edge parameters ({e.d},{e.D}) do not match K({g.d},{g.D})")
    key = str(e.word)
    tables = oracle_congestion_all(g)
    if key not in tables:
        raise EdgeNotInGraph(f"{key} is not an edge of K({g.d},{g.D})")
    return tables[key]
