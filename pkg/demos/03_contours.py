"""
Boundaries, subcontours and contours
====================================

Extend a configuration on V_n by a constant spin on the halo.  Each maximal
monochromatic piece that does not reach the halo contributes a subcontour;
subcontours sharing one edge chain into a contour.
"""

import math

import numpy as np

from cayley_contours.contour import (
    boundary,
    contour_count_constants,
    contours,
    count_contours_at,
    extend_configuration,
    format_contours,
    spanning_subgraph,
)
from cayley_contours.tree import build_volume

vol = build_volume(2, 2)
sigma = np.ones(vol.interior_size, dtype=int)
sigma[[0, 1, 8]] = [2, 3, 2]  # root and one child flipped to different spins, plus a far leaf
ext = extend_configuration(vol, sigma, 1)

print("boundary classes:", boundary(vol, ext).class_sizes())
found = contours(vol, ext)
print(format_contours(found))

# the minimal subtree through a contour has (k|c| - km - 1)/(k-1) edges
for c in found:
    K = spanning_subgraph(vol, c)
    print(f"|c|={c.size}, m={c.m}: spanning subtree with {len(K.edges)} edges")

# contours of size r touching the root, against the counting bound
alpha, theta = contour_count_constants(2)
big = build_volume(2, 7)
print("\n r  N_r   theta*alpha^r")
for r in range(1, 7):
    print(f"{r:2d} {count_contours_at(big, 0, r):4d}   {theta * alpha ** r:.3e}")
print(f"alpha = (4e)^2 = {alpha:.2f} ({(4 * math.e) ** 2:.2f})")
