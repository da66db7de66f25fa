"""Finite-volume Gibbs measures with constant boundary spin.

The energy of ``sigma`` on ``V_n`` with boundary spin ``i`` is the sum of
``U`` over all edges of ``L_{n+1}`` after extending ``sigma`` by ``i`` on the
halo.  Two exact routes are provided: full enumeration of ``q^|V_n|``
configurations (partition function, contour probabilities) and a bottom-up
recursion over tree levels (root marginal and partition function at any
depth).
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .contour import Contour, boundary, contours, extend_configuration, sea_color
from .errors import BudgetError, DomainError
from .model import ModelSpec, check_condition9, lambda0
from .tree import TreeVolume, ball_size, build_volume, sphere_size

DEFAULT_MAX_CONFIGS = 5_000_000
DEFAULT_MAX_SCAN = 200_000
BOUND_SLACK = 1e-10


@dataclass
class GibbsReport:
    """Results for one model, depth and boundary spin, over a list of inverse temperatures.

    ``root_marginal[b]`` and ``log_partition[b]`` belong to ``beta[b]``.
    Contour records carry one entry per (contour, beta) pair.
    """

    spec: dict
    n: int
    boundary: int
    beta: list[float]
    log_partition: list[float] = field(default_factory=list)
    root_marginal: list[list[float]] = field(default_factory=list)
    contours: list[dict] = field(default_factory=list)
    max_ratio: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        fmt = lambda x: format(x, ".17g")  # noqa: E731
        if self.contours:
            w.writerow(["contour", "size", "m", "beta", "p", "ratio"])
            for rec in self.contours:
                w.writerow([rec["contour"], rec["size"], rec["m"], fmt(rec["beta"]), fmt(rec["p"]), fmt(rec["ratio"])])
        else:
            q = len(self.root_marginal[0]) if self.root_marginal else 0
            w.writerow(["beta", "log_partition"] + [f"p{s}" for s in range(1, q + 1)])
            for b, lz, marg in zip(self.beta, self.log_partition, self.root_marginal):
                w.writerow([fmt(b), fmt(lz)] + [fmt(p) for p in marg])
        return buf.getvalue()


def direct_hamiltonian(spec: ModelSpec, vol: TreeVolume, sigma, i: int) -> float:
    """Sum of ``U`` over ``L_{n+1}`` for ``sigma`` extended by ``i``."""
    ext = extend_configuration(vol, sigma, i)
    return float(spec.U[ext[vol.parent[1:]] - 1, ext[1:] - 1].sum())


def contour_hamiltonian(spec: ModelSpec, vol: TreeVolume, sigma, i: int) -> float:
    """Energy from boundary class sizes: ``sum_eps (U_eps - U_ii)|Gamma_eps| + (|V_{n+1}| - 1) U_ii``.

    Exact whenever every monochromatic edge has energy ``U_ii``, which holds
    when all diagonal energies coincide.
    """
    U = spec.U
    u_ii = U[i - 1, i - 1]
    bd = boundary(vol, extend_configuration(vol, sigma, i))
    total = (vol.size - 1) * u_ii
    for (a, b), count in bd.class_sizes().items():
        total += (U[a - 1, b - 1] - u_ii) * count
    return float(total)


def configuration_energies(spec: ModelSpec, vol: TreeVolume, i: int, max_configs: int = DEFAULT_MAX_CONFIGS) -> np.ndarray:
    """Energy of every configuration on ``V_n`` with boundary spin ``i``.

    Entry ``idx`` belongs to the configuration whose spins are the base-``q``
    digits of ``idx`` (vertex 0 most significant), the order of
    ``itertools.product(range(1, q + 1), repeat=|V_n|)``.
    """
    q, N = spec.q, vol.interior_size
    if q**N > max_configs:
        raise BudgetError(f"q^|V_{vol.n}| = {q}^{N} configurations exceed the budget {max_configs}")
    U = spec.U
    E = np.zeros((q,) * N)
    parents = vol.parents
    for c in range(1, vol.size):
        p = parents[c]
        shape = [1] * N
        shape[p] = q
        if c < N:
            shape[c] = q
            E += U.reshape(shape)
        else:
            E += U[:, i - 1].reshape(shape)
    return E.ravel()


def decode_configurations(indices, q: int, size: int) -> np.ndarray:
    """Spin arrays (1-based) for configuration indices in product order."""
    idx = np.asarray(indices, dtype=np.int64)
    powers = q ** np.arange(size - 1, -1, -1, dtype=np.int64)
    return (idx[..., None] // powers) % q + 1


def _ensemble(spec: ModelSpec, n: int, i: int, max_configs: int):
    if not 1 <= i <= spec.q:
        raise DomainError(f"boundary spin {i} outside 1..{spec.q}")
    N = ball_size(spec.k, n)
    if spec.q**N > max_configs:
        raise BudgetError(f"q^|V_{n}| = {spec.q}^{N} configurations exceed the budget {max_configs}")
    vol = build_volume(spec.k, n)
    return vol, configuration_energies(spec, vol, i, max_configs)


def log_partition_bruteforce(spec: ModelSpec, n: int, i: int, beta: float, max_configs: int = DEFAULT_MAX_CONFIGS) -> float:
    """``log Z`` by summing over every configuration on ``V_n``."""
    _, E = _ensemble(spec, n, i, max_configs)
    return float(logsumexp(-beta * E))


def root_marginal_bruteforce(spec: ModelSpec, n: int, i: int, beta: float, max_configs: int = DEFAULT_MAX_CONFIGS) -> np.ndarray:
    """Distribution of the root spin by full enumeration."""
    _, E = _ensemble(spec, n, i, max_configs)
    logw = (-beta * E).reshape(spec.q, -1)
    per_root = logsumexp(logw, axis=1)
    return np.exp(per_root - logsumexp(per_root))


def _level_recursion(U: np.ndarray, k: int, n: int, i: int, beta: float) -> tuple[np.ndarray, float]:
    # msg[s]: log weight a vertex sends its parent when the parent has spin s,
    # normalized to max 0; the stripped constants are accumulated in log_scale
    msg = -beta * U[:, i - 1]
    shift = msg.max()
    msg = msg - shift
    log_scale = sphere_size(k, n + 1) * shift
    for d in range(n, 0, -1):
        msg = logsumexp(-beta * U + k * msg[None, :], axis=1)
        shift = msg.max()
        msg = msg - shift
        log_scale += sphere_size(k, d) * shift
    return (k + 1) * msg, log_scale


def root_marginal_recursion(spec: ModelSpec, n: int, i: int, beta: float) -> GibbsReport:
    """Root marginal and ``log Z`` by aggregating messages level by level.

    With a constant boundary spin all vertices at one depth see isomorphic
    subtrees, so one message per level suffices.  Halo vertices are pinned to
    ``i``; each interior vertex of depth ``d`` sends
    ``m(s) = sum_t exp(-beta U(s, t)) * m_{d+1}(t)^k`` to its parent.
    """
    if n < 0:
        raise DomainError(f"depth must be >= 0, got {n}")
    if not 1 <= i <= spec.q:
        raise DomainError(f"boundary spin {i} outside 1..{spec.q}")
    root_log, log_scale = _level_recursion(spec.U, spec.k, n, i, beta)
    lz = logsumexp(root_log)
    marginal = np.exp(root_log - lz)
    return GibbsReport(
        spec=spec.summary(),
        n=n,
        boundary=i,
        beta=[float(beta)],
        log_partition=[float(lz + log_scale)],
        root_marginal=[marginal.tolist()],
    )


def marginal_scan(spec: ModelSpec, n: int, i: int, betas: Sequence[float]) -> GibbsReport:
    reports = [root_marginal_recursion(spec, n, i, b) for b in betas]
    return GibbsReport(
        spec=spec.summary(),
        n=n,
        boundary=i,
        beta=[float(b) for b in betas],
        log_partition=[r.log_partition[0] for r in reports],
        root_marginal=[r.root_marginal[0] for r in reports],
    )


def contour_in(vol: TreeVolume, extended, gamma: Contour) -> bool:
    """Whether ``gamma`` is one of the contours of the extended configuration.

    Subcontour interiors, supports and marks must all match.
    """
    if not gamma.interior or max(gamma.interior) >= vol.interior_size:
        return False
    s = np.asarray(extended)
    for g in gamma.subcontours:
        if np.any(s[list(g.interior)] != g.mark):
            return False
    return gamma in contours(vol, extended)


def chi_gamma(vol: TreeVolume, extended, gamma: Contour, i: int) -> np.ndarray:
    """Erase a contour: overwrite the interior of ``gamma`` with the boundary spin ``i``."""
    s = np.asarray(extended, dtype=np.int64)
    if sea_color(vol, s) != i:
        raise DomainError(f"configuration is not extended by spin {i}")
    if not contour_in(vol, s, gamma):
        raise DomainError("contour is not part of the configuration's boundary")
    out = s.copy()
    out[sorted(gamma.interior)] = i
    return out


@dataclass(frozen=True)
class ContourProbability:
    p: float
    ratio: float
    omega_size: int
    bound_applies: bool

    @property
    def bound_holds(self) -> bool:
        return self.ratio <= 1 + BOUND_SLACK


def contour_probability(
    spec: ModelSpec,
    n: int,
    i: int,
    beta: float,
    gamma: Contour,
    max_configs: int = DEFAULT_MAX_CONFIGS,
) -> ContourProbability:
    """Probability that ``gamma`` is a contour of the configuration, and ``p * exp(beta lambda0 |gamma|)``.

    The bound ``ratio <= 1`` is guaranteed only when the equal diagonal
    energies sit strictly below every mixed energy; ``bound_applies`` says so.
    """
    vol, E = _ensemble(spec, n, i, max_configs)
    N = vol.interior_size
    if max(gamma.interior) >= N:
        raise DomainError(f"contour interior leaves V_{n}")
    # only configurations carrying the marks on the interior can contain gamma
    fixed = np.zeros(N, dtype=np.int64)
    for g in gamma.subcontours:
        fixed[list(g.interior)] = g.mark
    free = np.flatnonzero(fixed == 0)
    q = spec.q
    sub = decode_configurations(np.arange(q ** len(free)), q, len(free))
    cand = np.tile(fixed, (len(sub), 1))
    cand[:, free] = sub
    powers = q ** np.arange(N - 1, -1, -1, dtype=np.int64)
    members = [
        int((row - 1) @ powers)
        for row in cand
        if contour_in(vol, extend_configuration(vol, row, i), gamma)
    ]
    if not members:
        raise DomainError("contour is not realized by any configuration of the volume")
    logw = -beta * E
    log_p = float(logsumexp(logw[members]) - logsumexp(logw))
    lam0 = lambda0(spec)
    return ContourProbability(
        p=float(np.exp(log_p)),
        ratio=float(np.exp(log_p + beta * lam0 * gamma.size)),
        omega_size=len(members),
        bound_applies=bool(check_condition9(spec)),
    )


def _scan_chunk(vol: TreeVolume, q: int, i: int, start: int, stop: int) -> dict:
    configs = decode_configurations(np.arange(start, stop), q, vol.interior_size)
    found: dict = {}
    for offset, row in enumerate(configs):
        for c in contours(vol, extend_configuration(vol, row, i)):
            entry = found.get(c.key)
            if entry is None:
                found[c.key] = entry = (c, [])
            entry[1].append(start + offset)
    return found


def scan_contours(vol: TreeVolume, q: int, i: int, workers: int = 1, max_configs: int = DEFAULT_MAX_SCAN) -> dict:
    """Every marked contour realized on ``V_n``, with the configurations realizing it.

    Returns ``{key: (contour, [config indices])}`` in order of first
    appearance; the result does not depend on ``workers``.
    """
    total = q**vol.interior_size
    if total > max_configs:
        raise BudgetError(f"contour scan over {total} configurations exceeds the budget {max_configs}")
    n_chunks = max(1, min(64, total // 2048))
    bounds = np.linspace(0, total, n_chunks + 1).astype(int)
    args = [(vol, q, i, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, *zip(*args)))
    else:
        parts = [_scan_chunk(*a) for a in args]
    merged: dict = {}
    for part in parts:
        for key, (c, idx) in part.items():
            if key in merged:
                merged[key][1].extend(idx)
            else:
                merged[key] = (c, list(idx))
    return merged


def peierls_sweep(
    spec: ModelSpec,
    n: int,
    i: int,
    betas: Sequence[float],
    workers: int = 1,
    max_configs: int = DEFAULT_MAX_SCAN,
) -> GibbsReport:
    """Contour probability and Peierls ratio for every contour realized on ``V_n``."""
    vol, E = _ensemble(spec, n, i, max_configs)
    found = scan_contours(vol, spec.q, i, workers=workers, max_configs=max_configs)
    lam0 = lambda0(spec)
    items = list(found.values())
    sizes = np.array([c.size for c, _ in items], dtype=float)
    lengths = np.array([len(idx) for _, idx in items])
    flat = np.concatenate([np.asarray(idx) for _, idx in items])
    starts = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    owner = np.repeat(np.arange(len(items)), lengths)

    report = GibbsReport(spec=spec.summary(), n=n, boundary=i, beta=[float(b) for b in betas])
    for beta in betas:
        logw = -beta * E
        lz = float(logsumexp(logw))
        vals = logw[flat]
        peak = np.maximum.reduceat(vals, starts)
        log_num = peak + np.log(np.add.reduceat(np.exp(vals - peak[owner]), starts))
        log_p = log_num - lz
        log_ratio = log_p + beta * lam0 * sizes
        report.log_partition.append(lz)
        report.max_ratio.append(float(np.exp(log_ratio.max())))
        for idx, (c, _) in enumerate(items):
            report.contours.append(
                {
                    "contour": idx,
                    "size": c.size,
                    "m": c.m,
                    "beta": float(beta),
                    "p": float(np.exp(log_p[idx])),
                    "ratio": float(np.exp(log_ratio[idx])),
                }
            )
    return report


@dataclass
class ChiCheck:
    configurations: int = 0
    pairs: int = 0
    contours: int = 0
    class_size_failures: int = 0
    residual_failures: int = 0
    collisions: int = 0

    @property
    def ok(self) -> bool:
        return not (self.class_size_failures or self.residual_failures or self.collisions)


def chi_check(vol: TreeVolume, q: int, i: int, max_configs: int = DEFAULT_MAX_SCAN) -> ChiCheck:
    """Exhaustively test the erasure map on every (configuration, contour) pair.

    Checks that class sizes drop by exactly the contour's class sizes, that
    the erased contour leaves no edge in the new boundary, and that distinct
    configurations sharing a contour have distinct images.
    """
    total = q**vol.interior_size
    if total > max_configs:
        raise BudgetError(f"{total} configurations exceed the budget {max_configs}")
    result = ChiCheck(configurations=total)
    images: dict = {}
    for row in decode_configurations(np.arange(total), q, vol.interior_size):
        ext = extend_configuration(vol, row, i)
        before = boundary(vol, ext).class_sizes()
        for c in contours(vol, ext):
            result.pairs += 1
            out = chi_gamma(vol, ext, c, i)
            after_set = boundary(vol, out)
            after = after_set.class_sizes()
            part = c.class_sizes()
            for eps in set(before) | set(after) | set(part):
                if before.get(eps, 0) != after.get(eps, 0) + part.get(eps, 0):
                    result.class_size_failures += 1
                    break
            if c.support & after_set.edges:
                result.residual_failures += 1
            bucket = images.setdefault(c.key, set())
            token = out.tobytes()
            if token in bucket:
                result.collisions += 1
            bucket.add(token)
    result.contours = len(images)
    return result
