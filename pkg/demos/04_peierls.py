"""
Contour probabilities at low temperature
========================================

For the Potts model every contour c is suppressed at least like
exp(-beta * lambda0 * |c|).  Here every contour realised on V_2 is enumerated
together with the configurations carrying it, and the largest ratio
p(c) * exp(beta * lambda0 * |c|) is reported per beta.
"""

import numpy as np

from cayley_contours.contour import contours, extend_configuration
from cayley_contours.gibbs import chi_check, contour_probability, peierls_sweep
from cayley_contours.model import ModelSpec, check_condition9, lambda0
from cayley_contours.tree import build_volume

spec = ModelSpec.potts(2, 2)
print("condition holds:", bool(check_condition9(spec)), " lambda0 =", lambda0(spec))

betas = [0.5, 1.0, 2.0]
rep = peierls_sweep(spec, 2, 1, betas)
print(f"{len(rep.contours) // len(betas)} contours on V_2")
for b, r in zip(rep.beta, rep.max_ratio):
    print(f"  beta={b}: max ratio {r:.4f}")

# the star around the root, in detail
vol = build_volume(2, 2)
sigma = np.ones(vol.interior_size, dtype=int)
sigma[0] = 2
(star,) = contours(vol, extend_configuration(vol, sigma, 1))
for b in betas:
    res = contour_probability(spec, 2, 1, b, star)
    print(f"  root star, beta={b}: p = {res.p:.3e} <= exp(-3 beta) = {np.exp(-3 * b):.3e}")

# erasing a contour removes exactly its edges and never maps two configurations together
print(chi_check(vol, 2, 1))
