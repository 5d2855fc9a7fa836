"""Command-line frontend.

One subcommand per verified claim; every run echoes its resolved flag set
as the first stderr line and a one-line result summary as the last, writes
CSV rows to --out (default stdout), and signals through the exit code:

    0  success, all checks passed
    1  usage or parse error
    2  at least one inequality violation
    3  numeric failure (eigensolver non-convergence, overflow, quadrature)
    4  I/O failure
"""

import argparse
import math
import sys

import numpy as np

from . import bounds, hermitian, kernels, verify
from .ensembles import (
    CoefficientKind,
    EnsembleKind,
    VectorEnsemble,
    random_family,
    wigner_family,
)
from .errors import (
    NoConvergenceError,
    OverflowGuardError,
    QuadratureMismatchError,
)
from .report import TrialRow, emit_csv
from .rng import FAMILY_STREAM, RngStream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_reals(text):
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise _UsageError(f"bad real list {text!r}") from exc


def _parse_family(text, seed):
    """Mini-language: 'wigner:M' or 'random:D,N' (seeded, unit-norm members)."""
    kind, _, arg = text.partition(":")
    if kind == "wigner":
        try:
            m = int(arg)
        except ValueError as exc:
            raise _UsageError(f"bad wigner size {arg!r}") from exc
        return wigner_family(m)
    if kind == "random":
        try:
            d_s, n_s = arg.split(",")
            d, n = int(d_s), int(n_s)
        except ValueError as exc:
            raise _UsageError(f"bad random family size {arg!r}") from exc
        return random_family(d, n, RngStream(seed, FAMILY_STREAM))
    raise _UsageError(f"unknown family source {text!r}")


def _parse_kind(text):
    try:
        return CoefficientKind(text)
    except ValueError as exc:
        raise _UsageError(f"unknown coefficient kind {text!r}") from exc


def _random_scaled_hermitian(d, stream, scale):
    """Seeded Hermitian draw with operator norm scale * u, u uniform (0, 1]."""
    from .ensembles import random_hermitian

    h = random_hermitian(d, stream)
    nrm = hermitian.operator_norm(h)
    if nrm == 0.0:
        return np.zeros((d, d), dtype=np.complex128)
    u = 1.0 - stream.uniforms(1)[0]
    return h * (scale * u / nrm)


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--out", default="-")
    p.add_argument("--tol", type=float, default=1e-9)


def _build_parser():
    top = _Parser(prog="matconc")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds-table", help="C_p and bound values over grids")
    _add_common(p)
    p.add_argument("--p", default="1,2,4", help="comma-separated moment orders")
    p.add_argument("--family", default=None, help="wigner:M or random:D,N")

    p = sub.add_parser("gt-check", help="trace inequality sweeps")
    _add_common(p)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--scale", type=float, default=3.0)

    p = sub.add_parser("mgf-check", help="coefficient MGF dominance checks")
    _add_common(p)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--s-grid", default="0.1,0.5,1,2,4")

    p = sub.add_parser("lemma2", help="exact MGF gaps and interpolation chain")
    _add_common(p)
    p.add_argument("--family", default="random:3,6")
    p.add_argument("--families", type=int, default=5,
                   help="number of random families (ignored for wigner)")
    p.add_argument("--s-grid", default="-2,-1,-0.5,-0.25,0.25,0.5,1,2")

    p = sub.add_parser("khintchine", help="moment bound vs exact/MC moments")
    _add_common(p)
    p.add_argument("--family", default="random:3,6")
    p.add_argument("--families", type=int, default=1,
                   help="number of random families (ignored for wigner)")
    p.add_argument("--p-grid", default="1,2,4")
    p.add_argument("--kind", default="rademacher")

    p = sub.add_parser("tail", help="tail bound vs exact/MC tail frequencies")
    _add_common(p)
    p.add_argument("--family", default="random:3,6")
    p.add_argument("--kind", default="rademacher")
    p.add_argument("--t-points", type=int, default=50)

    p = sub.add_parser("covariance", help="rank-one covariance experiment")
    _add_common(p)
    p.add_argument("--ensemble", default="scaledbasis")
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--n", type=int, default=1000)

    p = sub.add_parser("wigner", help="Wigner-sum concentration summary")
    _add_common(p)
    p.add_argument("--m", type=int, default=5)

    return top


def _echo_flags(args, order):
    parts = [f"matconc {args.command}"]
    for name in order:
        val = getattr(args, name.replace("-", "_"))
        parts.append(f"--{name} {val}")
    return " ".join(parts)


def _run_bounds_table(args, tol):
    ps = _parse_reals(args.p)
    family = _parse_family(args.family, args.seed) if args.family else None
    rows = []
    for i, p in enumerate(ps):
        payload = [("p", p), ("c_p", bounds.c_p(p))]
        if family is not None:
            payload.append(("sigma", bounds.sigma(family)))
            payload.append(("moment_bound", bounds.khintchine_moment_bound(family, p)))
        rows.append(TrialRow("bounds-table", i, tuple(payload)))
    return rows, 0, f"{len(rows)} rows"


_TROTTER_KS = (8, 16, 32, 64)


def _run_gt_check(args, tol):
    rows = []
    violations = 0
    for t in range(args.trials):
        stream = RngStream(args.seed, t)
        a = _random_scaled_hermitian(args.dim, stream, args.scale)
        b = _random_scaled_hermitian(args.dim, stream, args.scale)
        lhs, rhs = hermitian.golden_thompson_terms(a, b)
        gt_gap = rhs - lhs
        gt_ok = gt_gap >= -tol * (1.0 + abs(rhs))
        exact = hermitian.matrix_exp(a + b)
        errs = {}
        trot_ok = True
        for k in _TROTTER_KS + (2 * _TROTTER_KS[-1],):
            errs[k] = hermitian.operator_norm_general(
                hermitian.trotter_product(a, b, k) - exact)
        for k in _TROTTER_KS:
            if 1e-8 <= errs[k] <= 0.1 and errs[2 * k] > 0.75 * errs[k]:
                trot_ok = False
        x = kernels.matmul(a, a)
        y = kernels.matmul(b, b)
        tp_gaps = []
        tp_ok = True
        for k in range(4):
            lhs_k, rhs_k = hermitian.trace_power_terms(x, y, k)
            gap = rhs_k - lhs_k
            tp_gaps.append(gap)
            if gap < -tol * (1.0 + abs(rhs_k)):
                tp_ok = False
        ok = gt_ok and trot_ok and tp_ok
        if not ok:
            violations += 1
        payload = [("trial", t), ("gt_gap", gt_gap), ("gt_ok", gt_ok)]
        payload += [(f"trot_err_{k}", errs[k]) for k in sorted(errs)]
        payload.append(("trot_ok", trot_ok))
        payload += [(f"tp_gap_{k}", tp_gaps[k]) for k in range(4)]
        payload += [("tp_ok", tp_ok), ("ok", ok)]
        rows.append(TrialRow("gt-check", t, tuple(payload)))
    return rows, violations, f"{args.trials} trials, {violations} violations"


def _run_mgf_check(args, tol):
    s_grid = _parse_reals(args.s_grid)
    rows = []
    violations = 0
    idx = 0
    for t in range(args.trials):
        stream = RngStream(args.seed, t)
        a = _random_scaled_hermitian(args.dim, stream, args.scale)
        for s in s_grid:
            dom = verify.mgf_dominance_check(a, s)
            dom_ok = dom <= 1.0 + 1e-12
            res = verify.gaussian_mgf_residual(a, s)
            res_ok = res <= 1e-8
            ok = dom_ok and res_ok
            if not ok:
                violations += 1
            rows.append(TrialRow("mgf-check", idx, (
                ("trial", t), ("s", s), ("dominance", dom), ("dom_ok", dom_ok),
                ("gauss_residual", res), ("res_ok", res_ok), ("ok", ok))))
            idx += 1
    return rows, violations, f"{len(rows)} checks, {violations} violations"


def _iter_families(args):
    if args.family.startswith("wigner"):
        yield 0, _parse_family(args.family, args.seed)
        return
    kind, _, arg = args.family.partition(":")
    d_s, n_s = arg.split(",")
    d, n = int(d_s), int(n_s)
    for f in range(getattr(args, "families", 1)):
        yield f, random_family(d, n, RngStream(args.seed, FAMILY_STREAM + f))


def _run_lemma2(args, tol):
    s_grid = _parse_reals(args.s_grid)
    rows = []
    violations = 0
    idx = 0
    for fi, family in _iter_families(args):
        for s in s_grid:
            rhs, lhs = verify.lemma2_terms(family, s)
            gap = rhs - lhs
            values = verify.interpolation_chain_values(family, s)
            gaps = np.diff(values) * -1.0
            floors = -tol * (1.0 + np.abs(values[:-1]))
            chain_ok = bool((gaps >= floors).all())
            telescope = abs(float(np.sum(gaps)) - float(values[0] - values[-1]))
            gap_ok = gap >= -tol * (1.0 + abs(rhs))
            ok = gap_ok and chain_ok and telescope <= 1e-8
            if not ok:
                violations += 1
            rows.append(TrialRow("lemma2", idx, (
                ("family", fi), ("s", s), ("rhs", rhs), ("gap", gap),
                ("min_chain_gap", float(np.min(gaps))),
                ("telescope_err", telescope), ("ok", ok))))
            idx += 1
    return rows, violations, f"{len(rows)} checks, {violations} violations"


def _run_khintchine(args, tol):
    kind = _parse_kind(args.kind)
    p_grid = _parse_reals(args.p_grid)
    rows = []
    violations = 0
    idx = 0
    for fi, family in _iter_families(args):
        for p in p_grid:
            bound = bounds.khintchine_moment_bound(family, p)
            if kind is CoefficientKind.RADEMACHER and len(family) <= verify.MAX_ENUM_TERMS:
                moment = verify.exact_rademacher_expectation(
                    family, 0.0, verify.NormPower(p)) ** (1.0 / p)
                stderr = 0.0
                ok = moment <= bound + tol * (1.0 + bound)
            else:
                est = verify.mc_norm_moment(family, kind, p, args.trials, args.seed)
                moment, stderr = est.mean, est.stderr
                ok = moment <= bound + 4.0 * stderr + tol * (1.0 + bound)
            if not ok:
                violations += 1
            rows.append(TrialRow("khintchine", idx, (
                ("family", fi), ("p", p), ("kind", args.kind), ("moment", moment),
                ("stderr", stderr), ("bound", bound), ("ok", ok))))
            idx += 1
    return rows, violations, f"{len(rows)} checks, {violations} violations"


def _run_tail(args, tol):
    kind = _parse_kind(args.kind)
    family = _parse_family(args.family, args.seed)
    sig = bounds.sigma(family)
    d = family.dim
    ts = np.linspace(0.0, 4.0 * sig, args.t_points)
    exact_mode = (kind is CoefficientKind.RADEMACHER
                  and len(family) <= verify.MAX_ENUM_TERMS)
    if exact_mode:
        norms = verify.enumerate_sign_norms(family)
    else:
        norms = verify.mc_norm_samples(family, kind, args.trials, args.seed)
    rows = []
    violations = 0
    for i, t in enumerate(ts):
        freq = float(np.mean(norms >= t))
        stderr = 0.0 if exact_mode else math.sqrt(
            freq * (1.0 - freq) / len(norms))
        rep = bounds.tail_bound(float(t), sig, d)
        ok = freq <= rep.clamped_value + 4.0 * stderr + tol
        if not ok:
            violations += 1
        rows.append(TrialRow("tail", i, (
            ("t", float(t)), ("frequency", freq), ("stderr", stderr),
            ("bound", rep.value), ("bound_clamped", rep.clamped_value),
            ("ok", ok))))
    return rows, violations, f"{len(rows)} grid points, {violations} violations"


def _run_covariance(args, tol):
    try:
        ens_kind = EnsembleKind(args.ensemble)
    except ValueError as exc:
        raise _UsageError(f"unknown ensemble {args.ensemble!r}") from exc
    ensemble = VectorEnsemble(ens_kind, args.dim)
    rows = verify.covariance_experiment(ensemble, args.n, args.trials, args.seed)
    within = sum(1 for r in rows if dict(r.payload)["within_epsilon"])
    outside = args.trials - within
    # per-trial failure probability is at most 1/n; allow 4 binomial sigmas
    p_fail = 1.0 / args.n
    allowance = args.trials * p_fail + 4.0 * math.sqrt(
        args.trials * p_fail * (1.0 - p_fail)) + 1.0
    violations = 0 if outside <= allowance else 1
    return rows, violations, (
        f"{within}/{args.trials} trials within epsilon, "
        f"{violations} violations")


def _run_wigner(args, tol):
    summary = verify.wigner_experiment(args.m, args.trials, args.seed)
    row = TrialRow("wigner", 0, (
        ("m", summary.m), ("trials", summary.trials),
        ("mean_norm", summary.mean_norm), ("stderr_norm", summary.stderr_norm),
        ("ratio_to_edge", summary.ratio_to_edge),
        ("sigma_sq", summary.sigma_sq), ("naive_sum", summary.naive_sum),
        ("tail_at_mean_sigma", summary.tail_at_mean_sigma),
        ("tail_at_mean_naive", summary.tail_at_mean_naive)))
    return [row], 0, (
        f"m={summary.m} sigma_sq={summary.sigma_sq:g} "
        f"naive_sum={summary.naive_sum:g} ratio={summary.ratio_to_edge:.4f}")


_RUNNERS = {
    "bounds-table": (_run_bounds_table, ("p", "family", "seed", "trials", "tol", "out")),
    "gt-check": (_run_gt_check, ("dim", "scale", "seed", "trials", "tol", "out")),
    "mgf-check": (_run_mgf_check, ("dim", "scale", "s-grid", "seed", "trials", "tol", "out")),
    "lemma2": (_run_lemma2, ("family", "families", "s-grid", "seed", "trials", "tol", "out")),
    "khintchine": (_run_khintchine, ("family", "families", "p-grid", "kind", "seed", "trials", "tol", "out")),
    "tail": (_run_tail, ("family", "kind", "t-points", "seed", "trials", "tol", "out")),
    "covariance": (_run_covariance, ("ensemble", "dim", "n", "seed", "trials", "tol", "out")),
    "wigner": (_run_wigner, ("m", "seed", "trials", "tol", "out")),
}


def run(argv):
    """Execute one CLI invocation; returns the exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"matconc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    runner, flag_order = _RUNNERS[args.command]
    print(_echo_flags(args, flag_order), file=sys.stderr)
    try:
        rows, violations, summary = runner(args, args.tol)
    except _UsageError as exc:
        print(f"matconc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"matconc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergenceError, OverflowGuardError, QuadratureMismatchError,
            ArithmeticError) as exc:
        print(f"matconc: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    try:
        if args.out == "-":
            emit_csv(rows, sys.stdout)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                emit_csv(rows, fh)
    except OSError as exc:
        print(f"matconc: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    status = "FAIL" if violations else "PASS"
    print(f"{args.command}: {summary} -> {status}", file=sys.stderr)
    return EXIT_VIOLATION if violations else EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
