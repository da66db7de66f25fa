"""Batch front end.

Usage::

    cayley-contours --config run.json [--out report.json] [--format json|csv|text]
                    [--workers N] [--tolerance T] [COMMAND]

The config is a JSON document::

    {"model": {"k": 2, "q": 2, "lambda": [[-1, 0], [0, -1]], "h": [0, 0]},
     "command": "peierls",
     "params": {"n": 2, "boundary": 1, "beta": [0.5, 1, 2]}}

Exit status: 0 all checks passed, 1 a check failed, 2 bad config, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import re
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import contour as ct
from . import gibbs, group, model, tree
from .errors import BudgetError, DomainError, StructureError, ValidationError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3

COMMANDS = (
    "tree-info",
    "contours",
    "lemma3",
    "lemma4",
    "lemma5",
    "eq6",
    "ground-states",
    "periodic",
    "hamiltonian-equiv",
    "partition",
    "marginal",
    "peierls",
    "chi-check",
)


class ConfigError(Exception):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


def _key_line(text: str, key: str) -> int | None:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _require(cond: bool, message: str, text: str, key: str) -> None:
    if not cond:
        raise ConfigError(message, _key_line(text, key))


def load_config(text: str) -> dict:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    _require(isinstance(cfg, dict), "config must be a JSON object", text, "")
    params = cfg.setdefault("params", {})
    _require(isinstance(params, dict), "params must be an object", text, "params")
    for key in ("n",):
        if key in params:
            _require(isinstance(params[key], int) and params[key] >= 0, f"params.{key} must be a nonnegative integer", text, key)
    if "beta" in params:
        betas = params["beta"] if isinstance(params["beta"], list) else [params["beta"]]
        _require(
            all(isinstance(b, (int, float)) and b >= 0 for b in betas),
            "params.beta must be a nonnegative number or list of them",
            text,
            "beta",
        )
    return cfg


def build_spec(cfg: dict, text: str, tol: float | None) -> model.ModelSpec:
    m = cfg.get("model")
    _require(isinstance(m, dict), "missing model block", text, "model")
    for key in ("k", "q"):
        _require(isinstance(m.get(key), int), f"model.{key} must be an integer", text, key)
    lam = m.get("lambda")
    q = m["q"]
    _require(
        isinstance(lam, list) and len(lam) == q and all(isinstance(r, list) and len(r) == q for r in lam),
        f"model.lambda must have {q} rows of {q} entries",
        text,
        "lambda",
    )
    h = m.get("h", [0.0] * q)
    _require(isinstance(h, list) and len(h) == q, f"model.h must have {q} entries", text, "h")
    kwargs = {} if tol is None else {"tol": tol}
    try:
        return model.ModelSpec(m["k"], q, np.array(lam, dtype=float), np.array(h, dtype=float), **kwargs)
    except (ValidationError, ValueError, TypeError) as exc:
        field = "lambda" if "lambda" in str(exc) else "model"
        raise ConfigError(f"model.{field}: {exc}", _key_line(text, field)) from None


def _check(name: str, passed: bool, detail=None) -> dict:
    out = {"name": name, "passed": bool(passed)}
    if detail is not None:
        out["detail"] = detail
    return out


def _betas(p: dict, default) -> list[float]:
    b = p.get("beta", default)
    return [float(x) for x in (b if isinstance(b, list) else [b])]


# command implementations: each returns a report dict with a "checks" list


def cmd_tree_info(spec, p, opts):
    n = p.get("n", 2)
    vol = tree.build_volume(spec.k, n)
    spheres = [len(vol.sphere(m)) for m in range(n + 2)]
    closed = [tree.sphere_size(spec.k, m) for m in range(n + 2)]
    return {
        "k": spec.k,
        "n": n,
        "sphere_sizes": spheres,
        "interior_vertices": vol.interior_size,
        "interior_edges": vol.interior_size - 1,
        "total_vertices": vol.size,
        "edges": vol.size - 1,
        "checks": [
            _check("sphere-sizes", spheres == closed),
            _check("ball-size", vol.interior_size == tree.ball_size(spec.k, n)),
        ],
    }


def cmd_contours(spec, p, opts):
    n = p.get("n", 2)
    i = p.get("boundary", 1)
    vol = tree.build_volume(spec.k, n)
    sigma = p.get("configuration", [i] * vol.interior_size)
    if len(sigma) != vol.interior_size:
        raise ConfigError(f"params.configuration must list {vol.interior_size} spins", None)
    ext = ct.extend_configuration(vol, sigma, i)
    found = ct.contours(vol, ext)
    checks = []
    for c in found:
        try:
            ct.spanning_subgraph(vol, c)
            ok = True
        except StructureError:
            ok = False
        checks.append(_check("spanning-subgraph-identity", ok, {"size": c.size, "m": c.m}))
    return {
        "n": n,
        "boundary": i,
        "boundary_edges": len(ct.boundary(vol, ext)),
        "contours": [
            {
                "size": c.size,
                "m": c.m,
                "subcontours": [
                    {"mark": g.mark, "interior": sorted(g.interior), "support": sorted(map(list, g.support))}
                    for g in c.subcontours
                ],
            }
            for c in found
        ],
        "dump": ct.format_contours(found),
        "checks": checks,
    }


def cmd_lemma3(spec, p, opts):
    max_v = p.get("max_vertices", 8)
    vol = tree.build_volume(spec.k, max_v)
    k = spec.k
    total = bad = 0
    for S in tree.iter_connected_vertex_sets(vol, 0, max_v):
        total += 1
        vb = len(tree.vertex_boundary(vol, S))
        eb = len(tree.incident_edge_boundary(vol, tree.SubgraphHandle.from_vertices(vol, S)))
        if not vb == eb == (k - 1) * len(S) + 2:
            bad += 1
    return {
        "k": k,
        "max_vertices": max_v,
        "subgraphs": total,
        "message": f"{total - bad} of {total} subgraphs satisfy |boundary| = (k-1)n+2",
        "checks": [_check("vertex-boundary-count", bad == 0, {"failures": bad})],
    }


def cmd_lemma4(spec, p, opts):
    max_e = p.get("max_edges", 8)
    vol = tree.build_volume(spec.k, max_e)
    counts = tree.enumerate_connected_subgraphs(vol, 0, max_e)
    rows = [{"edges": m, "count": c, "bound": (math.e * spec.k) ** m} for m, c in counts.items()]
    return {
        "k": spec.k,
        "counts": rows,
        "checks": [_check("subgraph-count-bound", all(r["count"] <= r["bound"] for r in rows))],
    }


def cmd_lemma5(spec, p, opts):
    r_max = p.get("r_max", 6)
    q = p.get("q", spec.q)
    alpha, theta = ct.contour_count_constants(spec.k)
    vol = tree.build_volume(spec.k, r_max + 1)
    rows = []
    for r in range(1, r_max + 1):
        c = ct.count_contours_at(vol, 0, r, q=q)
        rows.append({"r": r, "count": c, "bound": theta * alpha**r})
    return {
        "k": spec.k,
        "q": q,
        "alpha": alpha,
        "theta": theta,
        "counts": rows,
        "checks": [_check("contour-count-bound", all(x["count"] <= x["bound"] for x in rows))],
    }


def cmd_eq6(spec, p, opts):
    n = p.get("n", 2)
    i = p.get("boundary", 1)
    vol = tree.build_volume(spec.k, n)
    N, q = vol.interior_size, spec.q
    samples = p.get("samples", 100_000)
    if q**N <= p.get("exhaustive_limit", 200_000):
        rows = gibbs.decode_configurations(np.arange(q**N), q, N)
        mode = "exhaustive"
    else:
        rng = np.random.default_rng(p.get("seed", 0))
        rows = rng.integers(1, q + 1, size=(samples, N))
        mode = "sampled"
    seen = bad = 0
    for row in rows:
        for c in ct.contours(vol, ct.extend_configuration(vol, row, i)):
            seen += 1
            try:
                ct.spanning_subgraph(vol, c)
            except StructureError:
                bad += 1
    return {
        "n": n,
        "mode": mode,
        "configurations": len(rows),
        "contours_checked": seen,
        "checks": [_check("spanning-subgraph-identity", bad == 0, {"failures": bad})],
    }


def cmd_ground_states(spec, p, opts):
    n = p.get("n", 3)
    max_d = p.get("max_perturbation", 3)
    vol = tree.build_volume(spec.k, n)
    cond = model.check_condition9(spec)
    failures = []
    checked = 0
    for m in range(1, spec.q + 1):
        phi = np.full(vol.size, m)
        for size in range(max_d + 1):
            for D in itertools.combinations(range(vol.interior_size), size):
                checked += 1
                verdict = model.ground_state_bruteforce(spec, vol, phi, D)
                if not verdict:
                    failures.append({"constant": m, "D": list(D), "witness": verdict.witness.tolist()})
                    break
            if failures and failures[-1]["constant"] == m:
                break
    constants_minimal = [model.lemma8_check(spec, vol, np.full(vol.size, m)) for m in range(1, spec.q + 1)]
    checks = [_check("constant-ground-states", not failures, {"failures": failures[:5]})]
    if not cond:
        checks[0]["detail"]["condition"] = cond.violations
    return {
        "n": n,
        "condition_gap": bool(cond),
        "perturbation_sets": checked,
        "constants_minimal_energy": constants_minimal,
        "checks": checks,
    }


def _quotient(spec, p) -> group.FiniteQuotient:
    qd = p.get("quotient")
    if qd is None:
        return group.FiniteQuotient.parity(spec.k)
    try:
        return group.FiniteQuotient.from_table(qd["table"], qd["generators"])
    except (KeyError, TypeError, ValidationError) as exc:
        raise ConfigError(f"params.quotient: {exc}", None) from None


def cmd_periodic(spec, p, opts):
    n = p.get("n", 2)
    vol = tree.build_volume(spec.k, n)
    quot = _quotient(spec, p)
    r, q = quot.r, spec.q
    configs = set()
    ground = []
    for a in group.injective_assignments(r, q):
        cfg = group.periodic_configuration(vol, quot, a)
        configs.add(cfg.tobytes())
        if model.lemma8_check(spec, vol, cfg):
            ground.append(list(a))
    expected = math.perm(q, r) if r <= q else 0
    return {
        "r": r,
        "q": q,
        "distinct_configurations": len(configs),
        "expected": expected,
        "minimal_energy_assignments": ground,
        "checks": [_check("periodic-configuration-count", len(configs) == expected)],
    }


def cmd_hamiltonian_equiv(spec, p, opts):
    n = p.get("n", 2)
    i = p.get("boundary", 1)
    tol = opts.get("tolerance") or 1e-9
    vol = tree.build_volume(spec.k, n)
    E = gibbs.configuration_energies(spec, vol, i)
    rows = gibbs.decode_configurations(np.arange(len(E)), spec.q, vol.interior_size)
    worst = 0.0
    for e, row in zip(E, rows):
        worst = max(worst, abs(gibbs.contour_hamiltonian(spec, vol, row, i) - e))
    equal_diag = bool(np.ptp(np.diag(spec.U)) <= spec.tol)
    return {
        "n": n,
        "configurations": len(E),
        "max_residual": worst,
        "equal_diagonal": equal_diag,
        "checks": [_check("contour-energy-identity", worst <= tol or not equal_diag, {"max_residual": worst})],
    }


def cmd_partition(spec, p, opts):
    n = p.get("n", 1)
    i = p.get("boundary", 1)
    tol = opts.get("tolerance") or 1e-9
    report = gibbs.marginal_scan(spec, n, i, _betas(p, 1.0))
    brute = [gibbs.log_partition_bruteforce(spec, n, i, b) for b in report.beta]
    diff = max(abs(a - b) for a, b in zip(brute, report.log_partition))
    out = report.to_dict()
    out["log_partition_bruteforce"] = brute
    out["checks"] = [_check("recursion-matches-enumeration", diff <= tol, {"max_difference": diff})]
    return out


def cmd_marginal(spec, p, opts):
    n = p.get("n", 12)
    boundaries = p.get("boundaries", [p.get("boundary", 1)])
    reports = [gibbs.marginal_scan(spec, n, i, _betas(p, 1.0)) for i in boundaries]
    sums_ok = all(abs(sum(m) - 1) <= 1e-12 for r in reports for m in r.root_marginal)
    out = {"reports": [r.to_dict() for r in reports], "checks": [_check("marginal-normalized", sums_ok)]}
    out["_csv"] = "".join(r.to_csv() if idx == 0 else r.to_csv().split("\n", 1)[1] for idx, r in enumerate(reports))
    return out


def cmd_peierls(spec, p, opts):
    n = p.get("n", 2)
    i = p.get("boundary", 1)
    tol = opts.get("tolerance") or gibbs.BOUND_SLACK
    report = gibbs.peierls_sweep(spec, n, i, _betas(p, [0.5, 1.0, 2.0]), workers=opts.get("workers", 1))
    cond = model.check_condition9(spec)
    worst = max(report.max_ratio)
    out = report.to_dict()
    out["condition_gap"] = bool(cond)
    out["checks"] = [_check("peierls-bound", worst <= 1 + tol or not cond, {"max_ratio": worst})]
    out["_csv"] = report.to_csv()
    return out


def cmd_chi_check(spec, p, opts):
    n = p.get("n", 2)
    i = p.get("boundary", 1)
    vol = tree.build_volume(spec.k, n)
    res = gibbs.chi_check(vol, spec.q, i)
    return {
        **asdict(res),
        "checks": [
            _check("erasure-class-sizes", res.class_size_failures == 0),
            _check("erasure-removes-contour", res.residual_failures == 0),
            _check("erasure-injective", res.collisions == 0),
        ],
    }


HANDLERS = {
    "tree-info": cmd_tree_info,
    "contours": cmd_contours,
    "lemma3": cmd_lemma3,
    "lemma4": cmd_lemma4,
    "lemma5": cmd_lemma5,
    "eq6": cmd_eq6,
    "ground-states": cmd_ground_states,
    "periodic": cmd_periodic,
    "hamiltonian-equiv": cmd_hamiltonian_equiv,
    "partition": cmd_partition,
    "marginal": cmd_marginal,
    "peierls": cmd_peierls,
    "chi-check": cmd_chi_check,
}


def _to_csv(report: dict) -> str:
    if "_csv" in report:
        return report["_csv"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "passed"])
    for c in report["checks"]:
        w.writerow([c["name"], c["passed"]])
    return buf.getvalue()


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return _to_csv(report)
    if fmt == "text":
        return report.get("dump") or "\n".join(
            f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}" for c in report["checks"]
        ) + "\n"
    public = {k: v for k, v in report.items() if not k.startswith("_")}
    return json.dumps(public, sort_keys=True, indent=2) + "\n"


def run(cfg: dict, text: str = "", command: str | None = None, tolerance: float | None = None, workers: int = 1) -> dict:
    """Execute one command; return its report (``report["status"]`` is the exit code)."""
    command = command or cfg.get("command")
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}", _key_line(text, "command"))
    tolerance = cfg.get("tolerance", tolerance) if tolerance is None else tolerance
    spec = build_spec(cfg, text, None)
    if workers == 1:
        workers = cfg.get("workers", 1)
    opts = {"tolerance": tolerance, "workers": workers}
    report = HANDLERS[command](spec, cfg.get("params", {}), opts)
    report["command"] = command
    report["model"] = spec.summary()
    report["status"] = EXIT_OK if all(c["passed"] for c in report["checks"]) else EXIT_FAIL
    return report


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cayley-contours", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", nargs="?", choices=COMMANDS)
    ap.add_argument("--config", required=True)
    ap.add_argument("--out")
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--tolerance", type=float)
    args = ap.parse_args(argv)

    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"{path}: {exc.strerror}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(text)
        report = run(cfg, text, args.command, args.tolerance, args.workers)
    except ConfigError as exc:
        where = f"{path}:{exc.line}" if exc.line else str(path)
        print(f"{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ValidationError) as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET

    output = render(report, args.format)
    if args.out:
        Path(args.out).write_text(output)
    else:
        sys.stdout.write(output)
    for c in report["checks"]:
        if not c["passed"]:
            print(f"FAIL {c['name']}", file=sys.stderr)
    return report["status"]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
