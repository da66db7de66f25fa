"""
Counting connected subgraphs through the root
=============================================

Every connected vertex set S of the tree has exactly (k-1)|S| + 2 neighbours
outside it.  The number of connected subgraphs with m edges containing a
fixed vertex grows at most like (ek)^m.
"""

import math

from cayley_contours.tree import build_volume, enumerate_connected_subgraphs, iter_connected_vertex_sets, vertex_boundary

for k in (2, 3):
    vol = build_volume(k, 8)
    sizes = {}
    for S in iter_connected_vertex_sets(vol, 0, 8):
        b = len(vertex_boundary(vol, S))
        assert b == (k - 1) * len(S) + 2
        sizes[len(S)] = sizes.get(len(S), 0) + 1
    print(f"k={k}: connected sets by size {sizes}, all with |boundary| = (k-1)|S| + 2")

vol = build_volume(2, 8)
print("\n m   count   (2e)^m")
for m, c in enumerate_connected_subgraphs(vol, 0, 8).items():
    print(f"{m:2d} {c:7d} {(2 * math.e) ** m:9.1f}")
