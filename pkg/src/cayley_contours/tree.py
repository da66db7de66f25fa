"""Finite balls of the Cayley tree of order k.

Vertices are numbered breadth-first from the root (index 0), so the ball
``V_m`` is always the index range ``[0, ball_size(k, m))`` and every
non-root vertex ``c`` owns exactly one edge, the one to its parent.  Edges
are passed around as ``(parent, child)`` tuples.

A volume of depth ``n`` also materializes the halo sphere ``W_{n+1}`` and
the edges into it, since boundary edges of configurations on ``V_n`` live
in ``L_{n+1}``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetError, DomainError

DEFAULT_MAX_VERTICES = 10_000_000

Edge = tuple[int, int]


def sphere_size(k: int, m: int) -> int:
    """Number of vertices at distance exactly ``m`` from the root."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    return (k + 1) * k ** (m - 1)


def ball_size(k: int, m: int) -> int:
    """Number of vertices at distance at most ``m`` from the root."""
    if m < 0:
        return 0
    return 1 + (k + 1) * (k**m - 1) // (k - 1)


@dataclass(frozen=True, eq=False)
class TreeVolume:
    """The ball ``V_n`` of the Cayley tree plus its halo ``W_{n+1}``.

    ``parent[c]`` is the parent of vertex ``c`` (``-1`` for the root),
    ``label[c]`` the generator index in ``1..k+1`` carried by the edge
    ``(parent[c], c)``, and the children of ``v`` occupy the contiguous index
    block ``first_child[v] : first_child[v] + n_children[v]``.
    """

    k: int
    n: int
    parent: np.ndarray
    depth: np.ndarray
    label: np.ndarray
    first_child: np.ndarray
    n_children: np.ndarray
    _neighbors: list = field(repr=False)

    @property
    def size(self) -> int:
        """Number of materialized vertices, ``|V_{n+1}|``."""
        return len(self.parent)

    @property
    def interior_size(self) -> int:
        """``|V_n|``; the interior vertices are ``range(interior_size)``."""
        return ball_size(self.k, self.n)

    @cached_property
    def parents(self) -> list[int]:
        """``parent`` as a plain list, for tight Python loops."""
        return self.parent.tolist()

    @property
    def root(self) -> int:
        return 0

    @property
    def halo(self) -> range:
        return range(self.interior_size, self.size)

    def sphere(self, m: int) -> range:
        if not 0 <= m <= self.n + 1:
            raise DomainError(f"sphere W_{m} is not materialized (n={self.n})")
        return range(ball_size(self.k, m - 1), ball_size(self.k, m))

    def ball(self, m: int) -> range:
        if not 0 <= m <= self.n + 1:
            raise DomainError(f"ball V_{m} is not materialized (n={self.n})")
        return range(ball_size(self.k, m))

    def children(self, v: int) -> range:
        start = int(self.first_child[v])
        return range(start, start + int(self.n_children[v]))

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of ``v`` inside the materialized volume."""
        return self._neighbors[v]

    def edges(self, within: int | None = None) -> list[Edge]:
        """Edges ``(parent, child)`` of ``L_m`` with ``m = within`` (default ``n+1``)."""
        m = self.n + 1 if within is None else within
        stop = ball_size(self.k, m)
        return [(int(self.parent[c]), c) for c in range(1, stop)]

    def edge_label(self, edge: Edge) -> int:
        u, v = normalize_edge(self, edge)
        return int(self.label[v])

    def contains(self, x: int) -> bool:
        return 0 <= x < self.size

    def check_vertex(self, x: int) -> None:
        if not (isinstance(x, (int, np.integer)) and self.contains(int(x))):
            raise DomainError(f"vertex {x!r} is outside V_{self.n + 1}")

    def is_interior(self, x: int) -> bool:
        return 0 <= x < self.interior_size


def build_volume(k: int, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> TreeVolume:
    """Materialize ``V_n`` together with the halo ``W_{n+1}``.

    The root's edges carry labels ``1..k+1``; a vertex reached through label
    ``a`` labels its ``k`` child edges with ``{1..k+1} - {a}`` in increasing
    order.
    """
    if k < 2:
        raise DomainError(f"order k must be >= 2, got {k}")
    if n < 0:
        raise DomainError(f"depth n must be >= 0, got {n}")
    total = ball_size(k, n + 1)
    if total > max_vertices:
        raise BudgetError(f"|V_{n + 1}| = {total} exceeds the vertex budget {max_vertices}")

    # child_labels[a] lists the labels given to the children of a vertex entered via a
    child_labels = np.array(
        [[b for b in range(1, k + 2) if b != a][:k] for a in range(k + 2)], dtype=np.int64
    )
    parent = np.full(total, -1, dtype=np.int64)
    depth = np.zeros(total, dtype=np.int64)
    label = np.zeros(total, dtype=np.int64)
    first_child = np.zeros(total, dtype=np.int64)
    n_children = np.zeros(total, dtype=np.int64)

    # root level
    parent[1 : k + 2] = 0
    depth[1 : k + 2] = 1
    label[1 : k + 2] = np.arange(1, k + 2)
    first_child[0] = 1
    n_children[0] = k + 1
    for d in range(1, n + 1):
        lo, hi = ball_size(k, d - 1), ball_size(k, d)
        start = hi
        level = np.arange(lo, hi)
        kids = start + np.arange(len(level) * k)
        parent[kids] = np.repeat(level, k)
        depth[kids] = d + 1
        label[kids] = child_labels[label[level]].ravel()
        first_child[level] = start + k * np.arange(len(level))
        n_children[level] = k

    neighbors: list[tuple[int, ...]] = []
    for v in range(total):
        nb = [] if v == 0 else [int(parent[v])]
        s = int(first_child[v])
        nb.extend(range(s, s + int(n_children[v])))
        neighbors.append(tuple(nb))

    return TreeVolume(k, n, parent, depth, label, first_child, n_children, neighbors)


def normalize_edge(vol: TreeVolume, edge: Iterable[int]) -> Edge:
    """Return ``edge`` as ``(parent, child)``; raise if it is not a tree edge."""
    a, b = (int(v) for v in edge)
    vol.check_vertex(a)
    vol.check_vertex(b)
    if a > b:
        a, b = b, a
    if b == 0 or vol.parent[b] != a:
        raise DomainError(f"({a}, {b}) is not an edge of the volume")
    return a, b


def distance(vol: TreeVolume, x: int, y: int) -> int:
    """Length of the unique path between ``x`` and ``y``."""
    vol.check_vertex(x)
    vol.check_vertex(y)
    d = 0
    x, y = int(x), int(y)
    while x != y:
        # climb from the deeper vertex
        if vol.depth[x] >= vol.depth[y]:
            x = int(vol.parent[x])
            d += 1
        else:
            y = int(vol.parent[y])
            d += 1
    return d


def path(vol: TreeVolume, x: int, y: int) -> list[int]:
    """Vertices of the unique path from ``x`` to ``y``, endpoints included."""
    vol.check_vertex(x)
    vol.check_vertex(y)
    left, right = [int(x)], [int(y)]
    while left[-1] != right[-1]:
        if vol.depth[left[-1]] >= vol.depth[right[-1]]:
            left.append(int(vol.parent[left[-1]]))
        else:
            right.append(int(vol.parent[right[-1]]))
    return left + right[-2::-1]


def vertex_boundary(vol: TreeVolume, A: Iterable[int]) -> frozenset[int]:
    """Vertices outside ``A`` adjacent to some vertex of ``A``."""
    A = frozenset(int(a) for a in A)
    for a in A:
        if not vol.is_interior(a):
            raise DomainError(f"vertex {a} is not in V_{vol.n}; its boundary leaves the volume")
    return frozenset(y for a in A for y in vol.neighbors(a) if y not in A)


@dataclass(frozen=True)
class SubgraphHandle:
    """Vertex and edge sets of a subgraph of a volume."""

    vertices: frozenset[int]
    edges: frozenset[Edge]

    @classmethod
    def from_vertices(cls, vol: TreeVolume, vertices: Iterable[int]) -> "SubgraphHandle":
        """Induced subgraph; on a tree this is the only connected one on a vertex set."""
        vs = frozenset(int(v) for v in vertices)
        for v in vs:
            vol.check_vertex(v)
        es = frozenset((int(vol.parent[v]), v) for v in vs if v != 0 and vol.parent[v] in vs)
        return cls(vs, es)

    @classmethod
    def from_edges(cls, vol: TreeVolume, edges: Iterable[Iterable[int]]) -> "SubgraphHandle":
        es = frozenset(normalize_edge(vol, e) for e in edges)
        vs = frozenset(v for e in es for v in e)
        return cls(vs, es)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u not in adj or v not in adj:
                return False
            adj[u].append(v)
            adj[v].append(u)
        start = next(iter(self.vertices))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def incident_edges(vol: TreeVolume, x: int) -> list[Edge]:
    return [(min(x, y), max(x, y)) for y in vol.neighbors(x)]


def incident_edge_boundary(vol: TreeVolume, K: SubgraphHandle) -> frozenset[Edge]:
    """Edges outside ``E(K)`` sharing exactly one endpoint with an edge of ``K``.

    For a single-vertex ``K`` (no edges) the result is the set of edges
    incident to that vertex.
    """
    if not K.is_connected():
        raise DomainError("subgraph is not connected")
    for v in K.vertices:
        if not vol.is_interior(v):
            raise DomainError(f"vertex {v} is not in V_{vol.n}; b(K) would leave the volume")
    if not K.edges:
        (x,) = K.vertices
        return frozenset(incident_edges(vol, x))
    out = set()
    for e in K.edges:
        for x in e:
            for l in incident_edges(vol, x):
                if l not in K.edges and len(set(l) & set(e)) == 1:
                    out.add(l)
    return frozenset(out)


def iter_connected_vertex_sets(
    vol: TreeVolume,
    x: int,
    max_vertices: int,
    forbidden: frozenset[int] = frozenset(),
    within: int | None = None,
) -> Iterator[frozenset[int]]:
    """Yield every connected vertex set containing ``x`` with at most ``max_vertices`` vertices.

    Only vertices of ``V_within`` (default ``V_n``) not in ``forbidden`` are
    used.  Each set is produced once: candidates are taken in frontier order
    and every candidate skipped at some level stays excluded below it.
    """
    limit = vol.interior_size if within is None else ball_size(vol.k, within)
    if x in forbidden or not 0 <= x < limit or max_vertices < 1:
        return

    def grow(current: list[int], frontier: list[int]) -> Iterator[frozenset[int]]:
        yield frozenset(current)
        if len(current) == max_vertices:
            return
        for idx, v in enumerate(frontier):
            members = set(current)
            fresh = [w for w in vol.neighbors(v) if w < limit and w not in members and w not in forbidden]
            current.append(v)
            yield from grow(current, frontier[idx + 1 :] + fresh)
            current.pop()

    start = [w for w in vol.neighbors(x) if w < limit and w not in forbidden]
    yield from grow([x], start)


def enumerate_connected_subgraphs(vol: TreeVolume, x: int, max_edges: int) -> dict[int, int]:
    """Count connected subgraphs containing ``x`` by edge count ``1..max_edges``.

    A connected subgraph of a tree is determined by its vertex set, so this
    counts connected vertex sets of size ``m + 1``.
    """
    vol.check_vertex(x)
    if max_edges < 1:
        return {}
    if not vol.is_interior(x) or vol.depth[x] + max_edges > vol.n:
        raise DomainError(
            f"subgraphs with {max_edges} edges around vertex {x} (depth {int(vol.depth[x])}) "
            f"may be clipped by V_{vol.n}"
        )
    counts = Counter(len(s) - 1 for s in iter_connected_vertex_sets(vol, x, max_edges + 1))
    return {m: counts.get(m, 0) for m in range(1, max_edges + 1)}


def edge_list_text(vol: TreeVolume) -> str:
    """One ``"u v label"`` line per edge of ``L_{n+1}``."""
    return "".join(f"{u} {v} {int(vol.label[v])}\n" for u, v in vol.edges())


def write_edge_list(vol: TreeVolume, path: str | Path) -> None:
    Path(path).write_text(edge_list_text(vol))
