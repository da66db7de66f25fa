"""
Building a piece of the Cayley tree
===================================

A volume of depth n holds the ball V_n plus the halo W_{n+1}.  Vertices are
numbered breadth first, so every sphere is a contiguous index range, and each
vertex is also a reduced word in the k+1 involutive generators.
"""

from cayley_contours.group import FiniteQuotient, coset_index, periodic_configuration, vertex_word
from cayley_contours.tree import ball_size, build_volume, sphere_size

k, n = 2, 3
vol = build_volume(k, n)
print(f"k={k}, n={n}: |V_n| = {vol.interior_size}, with halo {vol.size}")

# sphere sizes against the closed forms
for m in range(n + 2):
    print(f"  W_{m}: {len(vol.sphere(m)):3d} vertices (closed form {sphere_size(k, m)})")
assert vol.interior_size == ball_size(k, n)

# each vertex is a reduced word; the path from the root reads it off
for x in (0, 1, 4, 13):
    print(f"  vertex {x:2d} <-> word {vertex_word(vol, x)}")

# the even/odd word-length quotient gives the two-sublattice configuration
quot = FiniteQuotient.parity(k)
print("parity coset of (1, 2, 3):", coset_index((1, 2, 3), quot))
alt = periodic_configuration(vol, quot, [1, 2])
print("alternating configuration on V_2:", alt[: ball_size(k, 2)].tolist())
