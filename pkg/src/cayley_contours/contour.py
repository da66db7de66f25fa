"""Boundaries, subcontours and contours of boundary-extended configurations.

A configuration on ``V_n`` is extended by a constant spin ``i`` on the halo
``W_{n+1}``.  Its boundary is the set of edges of ``L_{n+1}`` whose endpoints
disagree.  Each maximal monochromatic connected piece of ``V_n`` contributes a
subcontour (the edges leaving it), except the pieces of colour ``i`` that touch
``W_n``: those merge with the halo into the unbounded "sea" and have no finite
boundary.  Subcontours sharing an edge are adjacent; contours are the
connected clusters of that adjacency.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, StructureError
from .tree import (
    Edge,
    SubgraphHandle,
    TreeVolume,
    iter_connected_vertex_sets,
    path,
)

Eps = tuple[int, int]


def extend_configuration(vol: TreeVolume, sigma, i: int) -> np.ndarray:
    """``sigma`` on ``V_n`` followed by the constant spin ``i`` on the halo."""
    s = np.asarray(sigma, dtype=np.int64)
    if s.shape != (vol.interior_size,):
        raise DomainError(f"configuration must cover the {vol.interior_size} vertices of V_{vol.n}")
    return np.concatenate([s, np.full(vol.size - vol.interior_size, i, dtype=np.int64)])


def sea_color(vol: TreeVolume, extended) -> int:
    """The constant halo spin of an extended configuration."""
    halo = np.asarray(extended)[vol.interior_size :]
    if halo.size == 0 or np.any(halo != halo[0]):
        raise DomainError("extended configuration is not constant on the halo")
    return int(halo[0])


def _check_extended(vol: TreeVolume, extended) -> np.ndarray:
    s = np.asarray(extended, dtype=np.int64)
    if s.shape != (vol.size,):
        raise DomainError(f"extended configuration must cover all {vol.size} vertices of V_{vol.n + 1}")
    return s


@dataclass(frozen=True)
class BoundaryEdgeSet:
    """Boundary edges, each labelled by its unordered spin pair ``(a, b)``, ``a < b``."""

    labels: dict

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def classes(self) -> dict[Eps, frozenset[Edge]]:
        out: dict[Eps, set] = {}
        for e, eps in self.labels.items():
            out.setdefault(eps, set()).add(e)
        return {eps: frozenset(es) for eps, es in sorted(out.items())}

    def class_sizes(self) -> dict[Eps, int]:
        return {eps: len(es) for eps, es in self.classes.items()}


def boundary(vol: TreeVolume, extended) -> BoundaryEdgeSet:
    """Edges of ``L_{n+1}`` with disagreeing endpoint spins."""
    s = _check_extended(vol, extended)
    child = np.flatnonzero(s[vol.parent[1:]] != s[1:]) + 1
    par = vol.parent[child]
    a, b = s[par], s[child]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    return BoundaryEdgeSet(
        {(int(u), int(v)): (int(x), int(y)) for u, v, x, y in zip(par, child, lo, hi)}
    )


@dataclass(frozen=True)
class Subcontour:
    """Edges leaving one maximal monochromatic piece, with its spin as mark."""

    interior: frozenset[int]
    support: frozenset[Edge]
    mark: int
    labels: tuple[tuple[Edge, Eps], ...]

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def anchor(self) -> int:
        return min(self.interior)


@dataclass(frozen=True)
class Contour:
    """Maximal adjacency-connected family of subcontours, ordered by anchor vertex."""

    subcontours: tuple[Subcontour, ...]

    @cached_property
    def support(self) -> frozenset[Edge]:
        return frozenset().union(*(g.support for g in self.subcontours))

    @cached_property
    def interior(self) -> frozenset[int]:
        return frozenset().union(*(g.interior for g in self.subcontours))

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def m(self) -> int:
        return len(self.subcontours)

    @cached_property
    def labels(self) -> dict[Edge, Eps]:
        return {e: eps for g in self.subcontours for e, eps in g.labels}

    def class_sizes(self) -> dict[Eps, int]:
        out: dict[Eps, int] = {}
        for eps in self.labels.values():
            out[eps] = out.get(eps, 0) + 1
        return dict(sorted(out.items()))

    @property
    def geometric_key(self) -> tuple:
        """Identity ignoring marks: the interiors of the subcontours."""
        return tuple(sorted(tuple(sorted(g.interior)) for g in self.subcontours))

    @property
    def key(self) -> tuple:
        """Identity including marks (and hence edge labels, for a fixed sea spin)."""
        return tuple(sorted((tuple(sorted(g.interior)), g.mark) for g in self.subcontours))

    def touches(self, x: int) -> bool:
        return any(x in e for e in self.support)


def _components(vol: TreeVolume, s: list[int]) -> list[int]:
    """Top vertex of the monochromatic piece of ``V_n`` containing each interior vertex.

    Breadth-first numbering makes each piece a subtree whose top vertex is
    met before the rest of it.
    """
    parents = vol.parents
    comp = list(range(vol.interior_size))
    for v in range(1, vol.interior_size):
        p = parents[v]
        if s[v] == s[p]:
            comp[v] = comp[p]
    return comp


def subcontours(vol: TreeVolume, extended) -> list[Subcontour]:
    """Subcontours of an extended configuration, ordered by anchor vertex."""
    s_arr = _check_extended(vol, extended)
    i = sea_color(vol, s_arr)
    s = s_arr.tolist()
    comp = _components(vol, s)
    N = vol.interior_size
    outer_start = vol.sphere(vol.n).start
    sea = {comp[v] for v in range(outer_start, N) if s[v] == i}

    members: dict[int, list[int]] = {}
    for v in range(N):
        c = comp[v]
        if c not in sea:
            members.setdefault(c, []).append(v)

    out = []
    nbrs = vol._neighbors
    for c, verts in members.items():
        mark = s[c]
        support = []
        labels = []
        for x in verts:
            for y in nbrs[x]:
                if y >= N or comp[y] != c:
                    e = (x, y) if x < y else (y, x)
                    support.append(e)
                    other = s[y]
                    labels.append((e, (mark, other) if mark < other else (other, mark)))
        labels.sort()
        out.append(Subcontour(frozenset(verts), frozenset(support), mark, tuple(labels)))
    return out


def assemble_contours(subs: Sequence[Subcontour]) -> list[Contour]:
    """Group subcontours into the connected components of the shared-edge relation."""
    owners: dict[Edge, list[int]] = {}
    for idx, g in enumerate(subs):
        for e in g.support:
            owners.setdefault(e, []).append(idx)
    shared: dict[tuple[int, int], int] = {}
    for e, who in owners.items():
        if len(who) > 2:
            raise StructureError(f"edge {e} lies in {len(who)} subcontour supports")
        if len(who) == 2:
            pair = (min(who), max(who))
            shared[pair] = shared.get(pair, 0) + 1
    root = list(range(len(subs)))

    def find(a: int) -> int:
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for (a, b), count in shared.items():
        if count > 1:
            raise StructureError(f"subcontours {a} and {b} share {count} edges")
        root[find(a)] = find(b)
    groups: dict[int, list[Subcontour]] = {}
    for idx, g in enumerate(subs):
        groups.setdefault(find(idx), []).append(g)
    contours = [Contour(tuple(sorted(gs, key=lambda g: g.anchor))) for gs in groups.values()]
    contours.sort(key=lambda c: c.subcontours[0].anchor)
    return contours


def contours(vol: TreeVolume, extended) -> list[Contour]:
    return assemble_contours(subcontours(vol, extended))


def _interior_edges(vol: TreeVolume, vertices: Iterable[int]) -> set[Edge]:
    vs = set(vertices)
    parents = vol.parents
    return {(parents[v], v) for v in vs if v != 0 and parents[v] in vs}


def minimal_subtree_edges(vol: TreeVolume, vertices: Iterable[int]) -> set[Edge]:
    """Edges of the smallest subtree containing every vertex in ``vertices``."""
    vs = sorted(set(vertices))
    if not vs:
        return set()
    edges: set[Edge] = set()
    anchor = vs[0]
    for v in vs[1:]:
        p = path(vol, anchor, v)
        edges.update((min(a, b), max(a, b)) for a, b in zip(p, p[1:]))
    return edges


def spanning_subgraph(vol: TreeVolume, contour: Contour) -> SubgraphHandle:
    """The minimal connected subgraph containing a contour.

    Its edges are the contour support plus the edges inside each subcontour
    interior.  Raises :class:`StructureError` unless the subgraph is
    connected, coincides with the minimal subtree spanned by the support, and
    satisfies ``(k-1)|E| = k|supp| - (k m + 1)``.
    """
    if contour.m < 1:
        raise DomainError("contour has no subcontours")
    k = vol.k
    edges = set(contour.support)
    for g in contour.subcontours:
        edges |= _interior_edges(vol, g.interior)
    K = SubgraphHandle(frozenset(v for e in edges for v in e), frozenset(edges))
    if not K.is_connected():
        raise StructureError("spanning subgraph of the contour is disconnected")
    if edges != minimal_subtree_edges(vol, K.vertices):
        raise StructureError("spanning subgraph is not the minimal subtree through the support")
    if (k - 1) * len(edges) != k * contour.size - (k * contour.m + 1):
        raise StructureError(
            f"edge count {len(edges)} violates (k-1)|E| = k|supp| - (km+1) "
            f"with k={k}, |supp|={contour.size}, m={contour.m}"
        )
    return K


def _parts_realizable(parts: list[set[int]], cut: Sequence[Edge], touching: list[bool], q: int) -> bool:
    """Whether the pieces can be coloured so that they become exactly these components.

    Adjacent pieces need distinct spins and pieces touching the sea must avoid
    the sea spin.  With three or more spins that is always possible; with two,
    every piece at odd distance from a sea-touching piece must avoid the sea.
    """
    if q >= 3:
        return True
    where = {v: idx for idx, part in enumerate(parts) for v in part}
    adj: dict[int, list[int]] = {idx: [] for idx in range(len(parts))}
    for u, v in cut:
        adj[where[u]].append(where[v])
        adj[where[v]].append(where[u])
    parity = {0: 0}
    stack = [0]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in parity:
                parity[b] = 1 - parity[a]
                stack.append(b)
    sides = {parity[idx] for idx, t in enumerate(touching) if t}
    return len(sides) <= 1


def _split(vol: TreeVolume, S: frozenset[int], cut: set[Edge]) -> list[set[int]]:
    parents = vol.parents
    top = {}
    for v in sorted(S):
        p = parents[v]
        top[v] = top[p] if p in S and (p, v) not in cut else v
    parts: dict[int, set[int]] = {}
    for v, t in top.items():
        parts.setdefault(t, set()).add(v)
    return list(parts.values())


def contour_count_constants(k: int) -> tuple[float, float]:
    """``(alpha, theta)`` of the bound ``N_r(x) <= theta * alpha**r``."""
    alpha = (2 * k * math.e) ** (k / (k - 1))
    theta = 1.0 / (2 * alpha ** (1.0 / k) * (alpha - 1))
    return alpha, theta


def count_contours_at(vol: TreeVolume, x: int, r: int, q: int = 3) -> int:
    """Number of geometric contours of size ``r`` having ``x`` as an edge endpoint.

    Marks are ignored.  A contour is determined by the union ``S`` of its
    interiors (a connected vertex set) together with the set of edges inside
    ``S`` that separate different subcontours, so the count runs over those
    pairs.  ``q`` limits which structures a ``q``-state configuration can
    produce; every structure is realizable once ``q >= 3``.
    """
    vol.check_vertex(x)
    if r < 1:
        return 0
    dist = int(vol.depth[x])
    if vol.n < dist + r + 1:
        raise DomainError(
            f"V_{vol.n} is too shallow to hold every size-{r} contour through vertex {x}; "
            f"need n >= {dist + r + 1}"
        )
    k = vol.k
    s_max = (r - 2) // (k - 1)
    if s_max < 1:
        return 0
    seeds = [(x, frozenset())] + [(y, frozenset({x})) for y in vol.neighbors(x)]
    count = 0
    for seed, forbidden in seeds:
        for S in iter_connected_vertex_sets(vol, seed, s_max, forbidden=forbidden):
            outer = [
                (min(v, y), max(v, y)) for v in S for y in vol.neighbors(v) if y not in S
            ]
            inner = sorted(_interior_edges(vol, S))
            c = r - len(outer)
            if not 0 <= c <= len(inner):
                continue
            for cut in itertools.combinations(inner, c):
                if not (any(x in e for e in outer) or any(x in e for e in cut)):
                    continue
                if q < 3:
                    parts = _split(vol, S, set(cut))
                    touching = [any(y not in S for v in p for y in vol.neighbors(v)) for p in parts]
                    if not _parts_realizable(parts, cut, touching, q):
                        continue
                count += 1
    return count


def format_contours(contours_: Sequence[Contour]) -> str:
    """Line-oriented dump: a ``#`` header per contour, then one line per subcontour.

    Subcontour lines are ``mark<TAB>interior<TAB>support`` with comma-separated
    vertices and ``u-v`` edges.
    """
    lines = []
    for idx, c in enumerate(contours_):
        lines.append(f"# contour {idx} size={c.size} m={c.m}")
        for g in c.subcontours:
            interior = ",".join(str(v) for v in sorted(g.interior))
            support = ",".join(f"{u}-{v}" for u, v in sorted(g.support))
            lines.append(f"{g.mark}\t{interior}\t{support}")
    return "\n".join(lines) + ("\n" if lines else "")
