"""Nearest-neighbour q-state models on the Cayley tree.

Spins are 1-based integers ``1..q``.  A configuration is a numpy integer
array indexed by vertex; one of length ``|V_n|`` lives on the interior of a
volume, one of length ``|V_{n+1}|`` also covers the halo.

Site fields are folded into the edge energies

    U_ij = lambda_ij + (h_i + h_j) / (k + 1)

and the finite-volume energy is the sum of ``U`` over edges of ``L_{n+1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import BudgetError, DegenerateSpecError, DomainError, ValidationError
from .tree import TreeVolume

DEFAULT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModelSpec:
    k: int
    q: int
    lam: np.ndarray
    h: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        h = np.array(self.h, dtype=float)
        if self.k < 2:
            raise ValidationError(f"order k must be >= 2, got {self.k}")
        if self.q < 2:
            raise ValidationError(f"q must be >= 2, got {self.q}")
        if lam.shape != (self.q, self.q):
            raise ValidationError(f"lambda must be {self.q}x{self.q}, got shape {lam.shape}")
        if h.shape != (self.q,):
            raise ValidationError(f"h must have length {self.q}, got shape {h.shape}")
        bad = np.argwhere(np.abs(lam - lam.T) > self.tol)
        if len(bad):
            i, j = (int(v) + 1 for v in bad[0])
            raise ValidationError(
                f"lambda is not symmetric: lambda[{i}][{j}] = {lam[i - 1, j - 1]} "
                f"but lambda[{j}][{i}] = {lam[j - 1, i - 1]}"
            )
        lam.setflags(write=False)
        h.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "h", h)

    @classmethod
    def potts(cls, k: int, q: int, coupling: float = 1.0) -> "ModelSpec":
        """``lambda_ij = -coupling * delta_ij`` with zero field."""
        return cls(k, q, -coupling * np.eye(q), np.zeros(q))

    @cached_property
    def U(self) -> np.ndarray:
        """Edge-energy table, 0-based: ``U[i-1, j-1] = U_ij``."""
        u = self.lam + (self.h[:, None] + self.h[None, :]) / (self.k + 1)
        u.setflags(write=False)
        return u

    @property
    def u_min(self) -> float:
        """Minimum of ``U`` over all pairs, diagonal included."""
        return float(self.U.min())

    def summary(self) -> dict:
        return {"k": self.k, "q": self.q, "lambda": self.lam.tolist(), "h": self.h.tolist()}


def edge_energy(spec: ModelSpec, i: int, j: int) -> float:
    for s in (i, j):
        if not 1 <= s <= spec.q:
            raise DomainError(f"spin index {s} outside 1..{spec.q}")
    return float(spec.U[i - 1, j - 1])


def lambda0(spec: ModelSpec) -> float:
    """Gap between the smallest non-minimal edge energy and the minimum."""
    values = spec.U[np.triu_indices(spec.q)]
    u_min = values.min()
    above = values[values > u_min + spec.tol]
    if above.size == 0:
        raise DegenerateSpecError("all edge energies are equal; lambda0 is undefined")
    return float(above.min() - u_min)


@dataclass(frozen=True)
class Condition9:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def check_condition9(spec: ModelSpec) -> Condition9:
    """Equal diagonal energies, each strictly below every mixed energy."""
    U, tol = spec.U, spec.tol
    diag = np.diag(U)
    ref = float(diag.min())
    problems = []
    for i in range(spec.q):
        if abs(diag[i] - ref) > tol:
            problems.append(f"U_{i + 1}{i + 1} = {diag[i]:.17g} differs from U^min-diagonal {ref:.17g}")
    for i, j in itertools.combinations(range(spec.q), 2):
        if not U[i, j] > ref + tol:
            problems.append(f"U_{i + 1}{j + 1} = {U[i, j]:.17g} is not above {ref:.17g}")
    return Condition9(not problems, problems)


def _as_spins(spec: ModelSpec, config) -> np.ndarray:
    arr = np.asarray(config, dtype=np.int64)
    if arr.size and (arr.min() < 1 or arr.max() > spec.q):
        raise DomainError(f"spin values must lie in 1..{spec.q}")
    return arr


def edge_sum(spec: ModelSpec, vol: TreeVolume, config) -> float:
    """Sum of ``U`` over every edge of ``L_{n+1}``; ``config`` covers ``V_{n+1}``."""
    s = _as_spins(spec, config)
    if s.shape != (vol.size,):
        raise DomainError(f"configuration must cover all {vol.size} vertices of V_{vol.n + 1}")
    return float(spec.U[s[vol.parent[1:]] - 1, s[1:] - 1].sum())


def _domain_map(config) -> dict[int, int]:
    if isinstance(config, Mapping):
        return {int(x): int(s) for x, s in config.items()}
    return {x: int(s) for x, s in enumerate(np.asarray(config).tolist())}


def boundary_hamiltonian(spec: ModelSpec, vol: TreeVolume, sigma, omega) -> float:
    """Energy of ``sigma`` on its domain given ``omega`` outside it.

    ``sigma`` is a mapping vertex -> spin (or an array, read as a
    configuration on the index prefix it covers); its domain must lie in
    ``V_n``.  ``omega`` supplies spins outside that domain and must cover every
    outer endpoint of a crossing edge.  Entries of ``omega`` inside the domain
    are ignored.
    """
    sig = _domain_map(sigma)
    om = _domain_map(omega)
    for x, s in sig.items():
        if not vol.is_interior(x):
            raise DomainError(f"vertex {x} of the region is not in V_{vol.n}")
    U = spec.U
    total = 0.0
    for x, s in sig.items():
        if not 1 <= s <= spec.q:
            raise DomainError(f"spin {s} at vertex {x} outside 1..{spec.q}")
        for y in vol.neighbors(x):
            if y in sig:
                if x < y:
                    total += U[s - 1, sig[y] - 1]
            else:
                if y not in om:
                    raise DomainError(f"edge ({x}, {y}) leaves the region but omega has no spin at {y}")
                total += U[s - 1, om[y] - 1]
    return float(total)


def site_field_hamiltonian(spec: ModelSpec, vol: TreeVolume, sigma, omega) -> float:
    """Energy with separate pair and site terms; fields are summed over the region only.

    Differs from :func:`boundary_hamiltonian` by the field share
    ``h(omega(y)) / (k+1)`` that the edge form attributes to each outer
    endpoint of a crossing edge.
    """
    sig = _domain_map(sigma)
    om = _domain_map(omega)
    lam, h = spec.lam, spec.h
    total = 0.0
    for x, s in sig.items():
        if not vol.is_interior(x):
            raise DomainError(f"vertex {x} of the region is not in V_{vol.n}")
        total += h[s - 1]
        for y in vol.neighbors(x):
            if y in sig:
                if x < y:
                    total += lam[s - 1, sig[y] - 1]
            else:
                if y not in om:
                    raise DomainError(f"edge ({x}, {y}) leaves the region but omega has no spin at {y}")
                total += lam[s - 1, om[y] - 1]
    return float(total)


def _edges_touching(vol: TreeVolume, D) -> set[tuple[int, int]]:
    return {(min(x, y), max(x, y)) for x in D for y in vol.neighbors(x)}


def relative_hamiltonian(spec: ModelSpec, vol: TreeVolume, sigma, phi) -> float:
    """``H(sigma) - H(phi)`` for configurations on ``V_{n+1}`` differing inside ``V_n``."""
    s = _as_spins(spec, sigma)
    p = _as_spins(spec, phi)
    if s.shape != (vol.size,) or p.shape != (vol.size,):
        raise DomainError(f"configurations must cover all {vol.size} vertices of V_{vol.n + 1}")
    D = np.flatnonzero(s != p)
    if D.size and D.max() >= vol.interior_size:
        raise DomainError(f"configurations differ at halo vertex {int(D.max())}")
    U = spec.U
    total = 0.0
    for u, v in _edges_touching(vol, D.tolist()):
        total += U[s[u] - 1, s[v] - 1] - U[p[u] - 1, p[v] - 1]
    return float(total)


@dataclass(frozen=True)
class GroundStateVerdict:
    ok: bool
    witness: np.ndarray | None = None
    energy_drop: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def ground_state_bruteforce(
    spec: ModelSpec,
    vol: TreeVolume,
    phi,
    D: Sequence[int],
    max_configs: int = 1_000_000,
) -> GroundStateVerdict:
    """Check ``H(phi, sigma) <= 0`` for every ``sigma`` that differs from ``phi`` only on ``D``.

    Returns the first violating configuration as the witness.
    """
    p = _as_spins(spec, phi)
    D = sorted({int(x) for x in D})
    for x in D:
        if not vol.is_interior(x):
            raise DomainError(f"perturbed vertex {x} is not in V_{vol.n}")
    if spec.q ** len(D) > max_configs:
        raise BudgetError(f"q^|D| = {spec.q ** len(D)} exceeds the budget {max_configs}")
    U = spec.U
    edges = sorted(_edges_touching(vol, D))
    base = sum(U[p[u] - 1, p[v] - 1] for u, v in edges)
    trial = p.copy()
    for spins in itertools.product(range(1, spec.q + 1), repeat=len(D)):
        trial[D] = spins
        energy = sum(U[trial[u] - 1, trial[v] - 1] for u, v in edges)
        if base - energy > spec.tol:
            return GroundStateVerdict(False, trial.copy(), float(base - energy))
    return GroundStateVerdict(True)


def lemma8_check(spec: ModelSpec, vol: TreeVolume, sigma) -> bool:
    """True iff every edge of ``L_{n+1}`` carries the minimal edge energy."""
    s = _as_spins(spec, sigma)
    if s.shape != (vol.size,):
        raise DomainError(f"configuration must cover all {vol.size} vertices of V_{vol.n + 1}")
    energies = spec.U[s[vol.parent[1:]] - 1, s[1:] - 1]
    return bool(np.all(np.abs(energies - spec.u_min) <= spec.tol))
