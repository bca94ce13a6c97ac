"""Command-line front end: one command runs one experiment and writes one report.

    funkgeo roots check --family B --rank 2
    funkgeo sphere kernel --lmax 8 --circles 400 --quad 256 --seed 7
    funkgeo cpn rank --n 2 --degree 2 --geodesics 200 --seed 7

Exit status is 0 on pass (or an inconclusive experiment), 1 when a checked
invariant fails and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cpn, lab, rootsys, sphere
from .operator import DEFAULT_TOL_RATIO, kernel_analysis

__all__ = ["RunConfig", "run", "dumps", "build_parser", "main"]

EXIT_PASS, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
SEED_MAX = 2 ** 64 - 1
_REQUIRED = object()


@dataclass
class RunConfig:
    command: tuple
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "-"
    format: str = "json"
    csv_path: str | None = None


@dataclass
class _Outcome:
    results: dict
    checks: list
    table: tuple | None = None      # (header, rows) for --format csv
    matrix: np.ndarray | None = None  # for --csv


# -- serialization -------------------------------------------------------------

def _num(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits.

    Non-finite floats become ``null``.
    """
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_quote(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [inner + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return _quote(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s: str) -> str:
    return json.dumps(s)


def _check(name, passed, diagnostic=False, **detail):
    """A checked invariant. A failed diagnostic makes the run inconclusive, not failed."""
    out = {"name": name, "passed": bool(passed), "kind": "diagnostic" if diagnostic else "invariant"}
    out.update(detail)
    return out


def _matrix_csv(M) -> str:
    M = np.asarray(M)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if np.iscomplexobj(M):
        w.writerow([f"{p}_{j}" for j in range(M.shape[1]) for p in ("re", "im")])
        for row in M:
            w.writerow([_num(v) for z in row for v in (z.real, z.imag)])
    else:
        w.writerow([f"c_{j}" for j in range(M.shape[1])])
        for row in M:
            w.writerow([_num(v) for v in row])
    return buf.getvalue()


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _spectrum_table(s):
    return ("index", "singular_value"), [(i, float(v)) for i, v in enumerate(s)]


# -- validation ----------------------------------------------------------------

def _require(cond, message):
    if not cond:
        raise ValueError(message)


def _int_range(params, name, lo, hi=None):
    v = params[name]
    _require(isinstance(v, (int, np.integer)) and not isinstance(v, bool), f"--{name} must be an integer")
    _require(v >= lo and (hi is None or v <= hi),
             f"--{name}={v} out of range [{lo}, {'inf' if hi is None else hi}]")
    return int(v)


def _positive(params, name):
    v = float(params[name])
    _require(math.isfinite(v) and v > 0, f"--{name} must be positive")
    return v


# -- roots ---------------------------------------------------------------------

def _roots_check(p, seed):
    rs = rootsys.build_root_system(p["family"], _int_range(p, "rank", 1))
    tol = _positive(p, "tol")
    rep = rootsys.check_longest_root_pairing(rs, tol)
    Y = 0.5 * rootsys.dual_vector(rs, rs.highest).coordinates
    odd = sorted(rootsys.odd_root_set(rs, Y))
    duals = [{"root": i, "length": rootsys.dual_vector(rs, i).length,
              "orbit": rs.orbit(i)} for i in rs.positive]
    checks = [_check("pairings_in_0_pm_pi_2pi", not rep.offending, offending=rep.offending),
              _check("delta_dual_length_2pi",
                     abs(rootsys.dual_vector(rs, rs.highest).length - 2 * np.pi) <= 1e-12)]
    if rs.rank >= 2:
        checks.append(_check("odd_root_set_at_least_two", len(odd) >= 2, size=len(odd)))
    if rs.rank <= 4:
        checks.append(_check("reflection_closed", rs.is_reflection_closed()))
    results = {"root_system": rs.to_json_dict(),
               "pairings": rep.multiset(),
               "pairings_over_pi": [v / np.pi for v in rep.multiset()],
               "n_plus_minus_pi": rep.n_plus_minus_pi,
               "dual_lengths": duals,
               "odd_root_set_at_half_delta": odd}
    rows = [(i, rs.orbit(i), float(rep.pairings[i]), rootsys.dual_vector(rs, i).length)
            for i in rs.positive]
    return _Outcome(results, checks, table=(("root", "orbit", "pairing", "dual_length"), rows))


def _descriptor_row(d):
    Y = d.antipode_vector()
    return {"name": d.name, "family": d.root_system.family, "rank": d.root_system.rank,
            "multiplicity": dict(d.multiplicity), "dimension": d.dimension,
            "helgason_sphere_dimension": rootsys.helgason_sphere_dimension(d),
            "midpoint_locus_dimension": rootsys.midpoint_locus_dimension(d, Y),
            "is_sphere": d.is_sphere}


def _roots_table(p, seed):
    n = _int_range(p, "n", 2, 64)
    rows = [_descriptor_row(d) for d in rootsys.descriptor_table(n)]
    checks = [_check(f"midpoint_at_least_two[{r['name']}]", r["midpoint_locus_dimension"] >= 2)
              for r in rows if not r["is_sphere"]]
    table = (("name", "family", "rank", "dimension", "helgason", "midpoint"),
             [(r["name"], r["family"], r["rank"], r["dimension"],
               r["helgason_sphere_dimension"], r["midpoint_locus_dimension"]) for r in rows])
    return _Outcome({"descriptors": rows}, checks, table=table)


_SPACES = {
    "S": rootsys.sphere,
    "CP": rootsys.complex_projective,
    "HP": rootsys.quaternionic_projective,
    "OP": lambda n: rootsys.cayley_plane(),
    "Q": rootsys.complex_quadric,
}


def _roots_midpoint(p, seed):
    space = p["space"]
    _require(space in _SPACES, f"--space must be one of {sorted(_SPACES)}")
    n = _int_range(p, "n", 1, 64)
    d = _SPACES[space](n)
    row = _descriptor_row(d)
    checks = [] if d.is_sphere else [
        _check("midpoint_at_least_two", row["midpoint_locus_dimension"] >= 2)]
    return _Outcome(row, checks, table=(tuple(k for k in row if k != "multiplicity"),
                                        [tuple(v for k, v in row.items() if k != "multiplicity")]))


# -- sphere --------------------------------------------------------------------

def _sphere_kernel(p, seed):
    lmax = _int_range(p, "lmax", 0, sphere.LMAX_SUPPORTED)
    circles = _int_range(p, "circles", 1, 100_000)
    K = _int_range(p, "quad", 4)
    tol = _positive(p, "tol")
    rng = np.random.default_rng(seed)
    basis = sphere.HarmonicBasis(lmax)
    op = sphere.assemble_operator(basis, sphere.random_circles(circles, rng), K)
    ka = kernel_analysis(op, tol)
    odd = len(sphere.odd_degree_indices(lmax))
    results = {"lmax": lmax, "n_circles": circles, "K": K, "tol_ratio": tol,
               "singular_values": ka.singular_values.tolist(), "rank": ka.rank,
               "kernel_dim": ka.kernel_dim, "odd_count": odd,
               "basis_dim": basis.size, "gap": ka.gap, "separated": ka.separated}
    checks = [_check("kernel_dim_equals_odd_count", ka.kernel_dim == odd),
              _check("spectral_gap", ka.separated, diagnostic=True, gap=ka.gap)]
    return _Outcome(results, checks, table=_spectrum_table(ka.singular_values), matrix=op.matrix)


def _sphere_invert(p, seed):
    lmax = _int_range(p, "lmax", 0, sphere.LMAX_SUPPORTED)
    rng = np.random.default_rng(seed)
    basis = sphere.HarmonicBasis(lmax)
    c = rng.standard_normal(basis.size)
    c[basis.degrees % 2 == 1] = 0.0
    f = sphere.SphereFunction(c)
    back = sphere.invert_even(sphere.transform_as_function(f))
    err = float(np.linalg.norm(back.coefficients - c) / np.linalg.norm(c))
    results = {"lmax": lmax, "relative_error": err}
    return _Outcome(results, [_check("round_trip_1e-8", err <= 1e-8)],
                    table=(("lmax", "relative_error"), [(lmax, err)]))


def _sphere_eigen(p, seed):
    lmax = _int_range(p, "lmax", 0, sphere.LMAX_SUPPORTED)
    circles = _int_range(p, "circles", 1, 100_000)
    K = _int_range(p, "quad", 4)
    rng = np.random.default_rng(seed)
    basis = sphere.HarmonicBasis(lmax)
    circ = sphere.random_circles(circles, rng)
    op = sphere.assemble_operator(basis, circ, K)
    poles = np.array([c.pole for c in circ])
    Ypole = basis.evaluate(poles)
    rows, even_err, odd_abs = [], 0.0, 0.0
    for l in range(lmax + 1):
        cols = np.flatnonzero(basis.degrees == l)
        lam = sphere.funk_hecke_eigenvalue(l)
        A = op.matrix[:, cols]
        if l % 2:
            err = float(np.abs(A).max())
            odd_abs = max(odd_abs, err)
        else:
            ref = lam * Ypole[:, cols]
            err = float(np.linalg.norm(A - ref) / np.linalg.norm(ref))
            even_err = max(even_err, err)
        rows.append((l, lam, err))
    results = {"lmax": lmax, "n_circles": circles, "K": K,
               "eigenvalues": [r[1] for r in rows], "block_errors": [r[2] for r in rows],
               "max_even_relative_error": even_err, "max_odd_abs": odd_abs}
    checks = [_check("even_blocks_rel_1e-8", even_err <= 1e-8),
              _check("odd_blocks_abs_1e-10", odd_abs <= 1e-10)]
    return _Outcome(results, checks, table=(("degree", "eigenvalue", "error"), rows),
                    matrix=op.matrix)


# -- cpn -----------------------------------------------------------------------

def _cpn_rank(p, seed):
    n = _int_range(p, "n", 1, 16)
    D = _int_range(p, "degree", 0, 16)
    geos = _int_range(p, "geodesics", 1, 100_000)
    K = None if p.get("quad") is None else _int_range(p, "quad", 4)
    tol = _positive(p, "tol")
    res = lab.rank_experiment(n, D, geos, seed, tol, K)
    results = {"seed": seed, "n": n, "D": D, "n_geo": geos, "K": res.K, "tol_ratio": tol,
               "basis_dim": res.basis_dim, "rank": res.rank, "kernel_dim": res.kernel_dim,
               "singular_values": res.singular_values.tolist(),
               "condition_ratio": res.condition_ratio, "gap": res.gap,
               "separated": res.separated}
    checks = [_check("spectral_gap", res.separated, diagnostic=True, gap=res.gap)]
    if n >= 2:
        checks.insert(0, _check("full_column_rank", res.full_rank))
    return _Outcome(results, checks, table=_spectrum_table(res.singular_values),
                    matrix=res.operator.matrix)


def _cpn_support(p, seed):
    n = _int_range(p, "n", 2, 16)
    D = _int_range(p, "degree", 0, 16)
    geos = _int_range(p, "geodesics", 1, 100_000)
    r = float(p["radius"])
    _require(0 < r < np.pi, "--radius must lie in (0, pi)")
    margin = float(p["margin"])
    _require(margin >= 0, "--margin must be nonnegative")
    center = cpn.ProjPoint(np.eye(n + 1)[0])
    rep = lab.support_experiment(n, D, cpn.Ball(center, r), geos, seed, margin, _positive(p, "tol"))
    ok = rep.concentrated()
    checks = [_check("kernel_concentrated_in_ball", ok, vacuous=rep.vacuous),
              _check("non_vacuous", not rep.vacuous, diagnostic=True)]
    return _Outcome(rep.to_json_dict(), checks,
                    table=(("kernel_vector", "outside_sup", "inside_sup", "global_sup"),
                           [(i, o, a, g) for i, (o, a, g) in
                            enumerate(zip(rep.outside_sup, rep.inside_sup, rep.global_sup))]))


def _cpn_remark31(p, seed):
    n = _int_range(p, "n", 2, 64)
    trials = _int_range(p, "trials", 1, 1_000_000)
    tol = _positive(p, "tol")
    rng = np.random.default_rng(seed)
    residuals, failures = [], []
    for t in range(trials):
        a, b = cpn.sample_points(n, 2, rng)
        pt = cpn.ProjPoint(a)
        res = cpn.remark31_residual(pt, cpn.line_through(pt, cpn.ProjPoint(b)), rng)
        residuals.append(res)
        if res > tol:
            failures.append({"trial": t, "residual": res, "p": pt.interleaved()})
    results = {"n": n, "trials": trials, "tol": tol, "max_residual": max(residuals),
               "failures": failures}
    return _Outcome(results, [_check("residual_within_tol", not failures)],
                    table=(("trial", "residual"), list(enumerate(residuals))))


def _cpn_avoidline(p, seed):
    n = _int_range(p, "n", 2, 64)
    trials = _int_range(p, "trials", 1, 1_000_000)
    samples = _int_range(p, "samples", 16, 10 ** 6)
    rng = np.random.default_rng(seed)
    failures, rows = [], []
    max_res, worst_margin, max_closed = 0.0, np.inf, 0.0
    for t in range(trials):
        a, b = cpn.sample_points(n, 2, rng)
        P, Q = cpn.ProjPoint(a), cpn.ProjPoint(b)
        S = cpn.avoiding_line(P, Q)
        s = cpn.fs_distance(P, Q)
        res = S.residual(Q)
        sampled = cpn.sampled_line_distance(P, S, samples)
        closed = cpn.line_distance(P, S)
        margin = sampled - s
        max_res, worst_margin = max(max_res, res), min(worst_margin, margin)
        max_closed = max(max_closed, abs(closed - s))
        rows.append((t, s, sampled, closed, res))
        if res > 1e-12 or margin < -1e-9 or closed < s - 1e-9:
            failures.append({"trial": t, "s": s, "sampled_min": sampled,
                             "closed_form_min": closed, "residual": res})
    results = {"n": n, "trials": trials, "samples_per_line": samples,
               "max_residual": max_res, "min_sampled_margin": worst_margin,
               "max_closed_form_deviation": max_closed, "failures": failures}
    return _Outcome(results, [_check("line_contains_q_and_avoids_ball", not failures)],
                    table=(("trial", "s", "sampled_min", "closed_form_min", "residual"), rows))


def _cpn_sample(p, seed):
    n = _int_range(p, "n", 1, 64)
    geos = _int_range(p, "geodesics", 1, 100_000)
    gs = cpn.sample_geodesics(n, geos, np.random.default_rng(seed))
    out = [{"base": g.base.rep.view(float).tolist(), "direction": g.direction.view(float).tolist()}
           for g in gs]
    ok = all(abs(np.vdot(g.base.rep, g.direction)) <= 1e-12 for g in gs)
    rows = [(i, *g.base.rep.view(float), *g.direction.view(float)) for i, g in enumerate(gs)]
    header = ("index",) + tuple(f"base_{k}" for k in range(2 * n + 2)) + \
        tuple(f"dir_{k}" for k in range(2 * n + 2))
    return _Outcome({"n": n, "geodesics": out}, [_check("horizontal", ok)], table=(header, rows))


_DISPATCH = {
    ("roots", "check"): _roots_check,
    ("roots", "table"): _roots_table,
    ("roots", "midpoint"): _roots_midpoint,
    ("sphere", "kernel"): _sphere_kernel,
    ("sphere", "invert"): _sphere_invert,
    ("sphere", "eigen"): _sphere_eigen,
    ("cpn", "rank"): _cpn_rank,
    ("cpn", "support"): _cpn_support,
    ("cpn", "remark31"): _cpn_remark31,
    ("cpn", "avoidline"): _cpn_avoidline,
    ("cpn", "sample"): _cpn_sample,
}


def _execute(config: RunConfig):
    cmd = tuple(config.command)
    if cmd not in _DISPATCH:
        raise ValueError(f"unknown command {' '.join(cmd)!r}")
    if not (isinstance(config.seed, int) and 0 <= config.seed <= SEED_MAX):
        raise ValueError(f"seed must be an integer in [0, 2^64 - 1], got {config.seed!r}")
    _require(config.format in ("json", "csv"), "--format must be json or csv")
    out = _DISPATCH[cmd](dict(config.parameters), config.seed)
    if not all(c["passed"] for c in out.checks if c["kind"] == "invariant"):
        status = "fail"
    elif not all(c["passed"] for c in out.checks):
        status = "inconclusive"
    else:
        status = "pass"
    report = {"command": " ".join(cmd), "seed": config.seed,
              "params": {k: v for k, v in config.parameters.items()},
              "results": out.results, "checks": out.checks, "status": status}
    return status, report, out


def run(config: RunConfig):
    """Run one experiment; return ``(exit_status, report)``.

    ``report`` is None when the input is invalid.
    """
    try:
        status, report, _ = _execute(config)
    except (ValueError, cpn.GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID, None
    return (EXIT_FAIL if status == "fail" else EXIT_PASS), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="funkgeo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", default="-", help="report path, '-' for stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--csv", dest="csv_path", default=None,
                        help="secondary CSV dump (operator matrix when available)")
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, **args):
        sp = group.add_parser(name, parents=[common])
        for flag, (kind, default) in args.items():
            if default is _REQUIRED:
                sp.add_argument(f"--{flag}", type=kind, required=True)
            else:
                sp.add_argument(f"--{flag}", type=kind, default=default)
        return sp

    roots = groups.add_parser("roots").add_subparsers(dest="action", required=True)
    sub(roots, "check", family=(str, _REQUIRED), rank=(int, _REQUIRED), tol=(float, 1e-12))
    sub(roots, "table", n=(int, 3))
    sub(roots, "midpoint", space=(str, _REQUIRED), n=(int, 2))

    sph = groups.add_parser("sphere").add_subparsers(dest="action", required=True)
    sub(sph, "kernel", lmax=(int, 8), circles=(int, 400), quad=(int, 256), tol=(float, DEFAULT_TOL_RATIO))
    sub(sph, "invert", lmax=(int, 12))
    sub(sph, "eigen", lmax=(int, 12), circles=(int, 400), quad=(int, 512))

    cp = groups.add_parser("cpn").add_subparsers(dest="action", required=True)
    sub(cp, "rank", n=(int, 2), degree=(int, 1), geodesics=(int, 50), quad=(int, None),
        tol=(float, DEFAULT_TOL_RATIO))
    sub(cp, "support", n=(int, 2), degree=(int, 1), geodesics=(int, 45), radius=(float, 0.5),
        margin=(float, 0.3), tol=(float, DEFAULT_TOL_RATIO))
    sub(cp, "remark31", n=(int, 2), trials=(int, 1000), tol=(float, 1e-12))
    sub(cp, "avoidline", n=(int, 2), trials=(int, 1000), samples=(int, 10_000))
    sub(cp, "sample", n=(int, 2), geodesics=(int, 10))
    return parser


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    command = (args.pop("group"), args.pop("action"))
    config = RunConfig(command, seed=args.pop("seed"), output=args.pop("output"),
                       format=args.pop("format"), csv_path=args.pop("csv_path"), parameters=args)
    try:
        status, report, out = _execute(config)
    except (ValueError, cpn.GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if config.format == "json":
        _write(config.output, dumps(report) + "\n")
    else:
        _write(config.output, _table_csv(*out.table))
    if config.csv_path:
        if out.matrix is not None:
            _write(config.csv_path, _matrix_csv(out.matrix))
        else:
            _write(config.csv_path, _table_csv(*out.table))
    return EXIT_FAIL if status == "fail" else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
