"""Command-line entry point.

Each subcommand writes ``<name>.csv`` and ``<name>.json`` (plus PNG figures
unless ``--no-figures``) into ``--output-dir``, which defaults to
``$KGDESITTER_OUTPUT_DIR`` or the current directory.  Exit status is 0 when the
run's checks pass, 2 when a check fails and 1 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import checks, reports
from .errors import ConfigurationError, DomainError, SingularPotentialWarning, SolverError
from .exponents import AdmissibleTriple, DualPair, fmt, parse_pair, parse_triple, validate, weight_exponents
from .geometry import build_chart, check_short_range
from .norms import data_norm, sobolev_norm
from .operators import build_full_operator, conjugate
from .sampling import random_data, random_forcing, run_rng
from .solver import energy_history, reconstruct_u, solve_reduced

logger = logging.getLogger("kgdesitter")

OUTPUT_ENV = "KGDESITTER_OUTPUT_DIR"
EXIT_PASS, EXIT_CONFIG, EXIT_FAIL = 0, 1, 2

STRICHARTZ_TOLERANCE = 0.20
ENERGY_TOLERANCE = 0.10
CONSERVATION_TOLERANCE = 1e-3
T0_GROWTH_TOLERANCE = 1.30


class Parser(argparse.ArgumentParser):
    """Usage errors exit with the configuration-error status."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# -- argument groups ------------------------------------------------------------


def _common(p, size=48, steps=None, t_max=5.0):
    g = p.add_argument_group("geometry and discretisation")
    g.add_argument("--chart", default="desitter", choices=["desitter", "product", "torus-perturbed"], help="built-in chart (default: %(default)s)")
    g.add_argument("--n", type=int, default=3, help="spatial dimension of the cross-section (default: %(default)s)")
    g.add_argument("--size", type=int, default=size, help="grid points per cross-section dimension (default: %(default)s)")
    g.add_argument("--steps", type=int, default=steps, help="RK4 steps from x0 to x_min (default: chosen from the grid size)")
    g.add_argument("--t-max", type=float, default=t_max, help="final time, x_min = exp(-t_max) (default: %(default)s)")
    g.add_argument("--t0", type=float, default=0.0, help="initial time, x0 = exp(-t0) (default: %(default)s)")
    g.add_argument("--cross-section", choices=["torus", "sphere"], default=None, help="cross-section for the product chart (default: torus)")
    g.add_argument("--amplitude", type=float, default=None, help="perturbation amplitude for torus-perturbed (default: 0.5)")
    g.add_argument("--linear", type=float, default=0.0, help="inject a linear term in x (violates the short-range form)")
    g.add_argument("--band", type=int, default=None, help="number of harmonics in random data (default: size // 3)")
    g.add_argument("--seed", type=int, default=0, help="master seed (default: %(default)s)")
    _output(p)


def _output(p):
    o = p.add_argument_group("output")
    o.add_argument("--output-dir", default=None, help=f"directory for CSV/JSON/figures (default: ${OUTPUT_ENV} or .)")
    o.add_argument("--name", default=None, help="file stem for outputs (default: the subcommand name)")
    o.add_argument("--no-figures", action="store_true", help="skip PNG figures")
    o.add_argument("--config", default=None, help="JSON file of option values; keys are option names, unknown keys are rejected")
    o.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")


def build_parser():
    parser = Parser(prog="kgdesitter", description="Strichartz-estimate laboratory for the conformal Klein-Gordon equation on asymptotically de Sitter charts.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("check-exponents", help="validate an exponent triple and print its weights")
    p.add_argument("p", help="time exponent (may be 'inf')")
    p.add_argument("q", help="space exponent")
    p.add_argument("s", help="regularity")
    p.add_argument("n", type=int, help="dimension")
    _output(p)

    p = sub.add_parser("conjugation-test", help="conjugation-identity residual under x-grid refinement")
    _common(p, size=32)
    p.add_argument("--cells", default="8,16,32,64", help="x-grid cell counts, comma separated (default: %(default)s)")
    p.add_argument("--x", type=float, default=0.5, help="evaluation point in (x_min, x0) (default: %(default)s)")

    p = sub.add_parser("solve", help="solve the linear equation from random data and record energies")
    _common(p)
    p.add_argument("--forcing", action="store_true", help="add random band-limited forcing")
    p.add_argument("--node-stride", type=int, default=4, help="store every k-th step (default: %(default)s)")

    p = sub.add_parser("verify-strichartz", help="ensemble check of the homogeneous or inhomogeneous estimate")
    _common(p)
    p.add_argument("--triple", default="5,10,1", help="admissible p,q,s (default: %(default)s)")
    p.add_argument("--dual", default=None, help="dual pair p',q'; switches to zero data and random forcing")
    p.add_argument("--ensemble", type=int, default=50, help="number of runs (default: %(default)s)")
    p.add_argument("--scale", type=float, default=1.0, help="multiply data or forcing by this factor")
    p.add_argument("--refinement-sweep", action="store_true", help="repeat at doubled grid and steps, t_max + 1")
    p.add_argument("--t0-sweep", action="store_true", help="repeat the homogeneous run with t0 = 0, 1, 2")
    p.add_argument("--mirror", action="store_true", help="include the past end by time reflection (t0 = 0 only)")
    p.add_argument("--workers", type=int, default=1, help="threads for the ensemble (default: %(default)s)")

    p = sub.add_parser("verify-energy", help="ensemble check of the energy estimate")
    _common(p)
    p.add_argument("--ensemble", type=int, default=20, help="number of runs (default: %(default)s)")
    p.add_argument("--forcing", action="store_true", help="add random forcing")
    p.add_argument("--zero-data", action="store_true", help="start from zero data (use with --forcing)")
    p.add_argument("--refinement-sweep", action="store_true", help="repeat at doubled grid and steps")
    p.add_argument("--workers", type=int, default=1, help="threads for the ensemble (default: %(default)s)")

    p = sub.add_parser("semilinear", help="Picard iteration for the critical power nonlinearity")
    _common(p, size=32, steps=256)
    p.add_argument("--k", type=float, default=None, help="power k (default: (n+2)/(n-2))")
    e = p.add_mutually_exclusive_group()
    e.add_argument("--epsilon", type=float, default=None, help="data size ||u0||_H1 + ||u1||_L2")
    e.add_argument("--auto-epsilon", action="store_true", help="bisect for the convergence threshold and use a quarter of it")
    p.add_argument("--max-iter", type=int, default=25, help="iteration cap (default: %(default)s)")
    p.add_argument("--tol", type=float, default=1e-8, help="stopping tolerance relative to ||u(0)||_Z (default: %(default)s)")
    p.add_argument("--sweep", action="store_true", help="also run eps/2 and eps/4 and fit the contraction slope")
    p.add_argument("--uniqueness", action="store_true", help="restart from a perturbed iterate and compare fixed points")
    return parser


# -- config handling --------------------------------------------------------------


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def parse(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = _subparser(parser, args.command)
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(config, dict):
            raise ConfigurationError("config must be a JSON object")
        dests = {a.dest for a in sub._actions} - {"help", "config"}
        config = {k.replace("-", "_"): v for k, v in config.items()}
        unknown = sorted(set(config) - dests)
        if unknown:
            raise ConfigurationError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


# -- helpers -------------------------------------------------------------------------


def _outdir(args):
    return Path(args.output_dir or os.environ.get(OUTPUT_ENV) or ".")


def _stem(args):
    return _outdir(args) / (args.name or args.command)


def _metric(args, size=None, t_max=None, t0=None):
    params = dict(
        n=args.n,
        size=size or args.size,
        x0=math.exp(-(args.t0 if t0 is None else t0)),
        x_min=math.exp(-(args.t_max if t_max is None else t_max)),
    )
    if args.linear:
        params["linear"] = args.linear
    if args.cross_section is not None:
        if args.chart != "product":
            raise ConfigurationError("--cross-section applies to the product chart only")
        params["cross_section"] = args.cross_section
    if args.amplitude is not None:
        if args.chart != "torus-perturbed":
            raise ConfigurationError("--amplitude applies to the torus-perturbed chart only")
        params["amplitude"] = args.amplitude
    if args.t_max <= args.t0:
        raise ConfigurationError("t-max must exceed t0")
    return build_chart(args.chart, **params)


def _inputs(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("verbose",)}


def _finish(args, table, summary, passed):
    stem = _stem(args)
    table.write(stem.with_suffix(".csv"))
    summary = dict(summary, passed=bool(passed), inputs=_inputs(args), versions=reports.versions())
    reports.write_json(stem.with_suffix(".json"), summary)
    print(f"{'PASS' if passed else 'FAIL'}: wrote {stem.with_suffix('.csv')}")
    return EXIT_PASS if passed else EXIT_FAIL


def _figures(args):
    if args.no_figures:
        return None
    from . import plotting

    return plotting


# -- subcommands -----------------------------------------------------------------------


def cmd_check_exponents(args):
    verdict = validate(args.p, args.q, args.s, args.n)
    table = reports.Table(["p", "q", "s", "n", "verdict", "relation", "residual", "t_weight", "x_weight", "measure_power"])
    row = dict(p=args.p, q=args.q, s=args.s, n=args.n, verdict=verdict.describe())
    if verdict:
        w = weight_exponents(AdmissibleTriple(args.p, args.q, args.s, args.n))
        row.update(t_weight=_exact(w.t_weight), x_weight=_exact(w.x_weight), measure_power=w.measure_power)
        print("admissible")
        print(f"weights: {_exact(w.t_weight)},{_exact(w.x_weight)},{w.measure_power}")
    else:
        row.update(relation=verdict.relation, residual=_exact(verdict.residual))
        print(f"not admissible: {verdict.relation} relation violated (residual {_exact(verdict.residual)})", file=sys.stderr)
    table.add(**row)
    table.summary = dict(verdict="admissible" if verdict else "not admissible")
    code = _finish(args, table, {"verdict": verdict.describe(), "relation": verdict.relation}, bool(verdict))
    return code if verdict else EXIT_CONFIG


def _exact(v):
    if v is None:
        return ""
    return fmt(v) if isinstance(v, Fraction) or v == math.inf else repr(v)


def cmd_conjugation_test(args):
    cells = [int(c) for c in args.cells.split(",") if c]
    if len(cells) < 2:
        raise ConfigurationError("need at least two x-grids")
    metric = _metric(args)
    if not (metric.x_min < args.x < metric.x0):
        raise ConfigurationError(f"--x must lie in (x_min, x0) = ({metric.x_min:.4g}, {metric.x0:.4g})")
    params = {k: v for k, v in metric.params.items() if k not in ("n", "size")}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularPotentialWarning)
        rows = checks.conjugation_sweep(args.chart, args.n, cells, args.seed, args.x, args.size, band=args.band or 6, **params)
    residuals = [r.residual for r in rows]
    orders = checks.observed_orders(residuals)
    exact = max(residuals) <= 1e-10
    ratios = [residuals[i] / residuals[i + 1] for i in range(len(rows) - 1)] if not exact else []
    passed = exact or all(3.5 <= r <= 4.5 for r in ratios)
    table = reports.Table(["cells", "step", "residual", "order", "max_residual", "min_order", "passed"])
    for i, r in enumerate(rows):
        table.add(cells=r.cells, step=r.step, residual=r.residual, order=orders[i - 1] if i else None)
    table.summary = dict(max_residual=max(residuals), min_order=None if exact else min(orders), passed=passed)
    fig = _figures(args)
    if fig and not exact:
        fig.convergence_figure([r.step for r in rows], residuals, _stem(args).with_name(_stem(args).name + "_residual.png"))
    return _finish(args, table, {"residuals": residuals, "orders": orders, "exact": exact}, passed)


def cmd_solve(args):
    metric = _metric(args)
    chart = build_full_operator(metric)
    reduced = conjugate(chart)
    steps = args.steps or _default_steps(metric)
    rng = run_rng(args.seed, 0)
    init = random_data(metric, rng, band=args.band, operator=chart)
    forcing = random_forcing(metric, rng, band=args.band) if args.forcing else None
    traj = solve_reduced(reduced, init, forcing=forcing, steps=steps, node_stride=args.node_stride)
    readings = energy_history(reduced, traj)
    phys = reconstruct_u(traj, metric.n)
    table = reports.Table(["node_index", "x", "t", "kinetic", "gradient", "potential_l2", "energy", "u_l2", "u_h1", "energy_drift"])
    for i, (x, r, u) in enumerate(zip(traj.x, readings, phys.v)):
        x = float(x)
        table.add(
            node_index=i,
            x=x,
            t=-math.log(x),
            kinetic=r.kinetic,
            gradient=r.gradient,
            potential_l2=r.potential_l2,
            energy=r.total,
            u_l2=sobolev_norm(u, x, 0.0, 2.0, metric, chart),
            u_h1=sobolev_norm(u, x, 1.0, 2.0, metric, chart),
        )
    totals = np.array([r.total for r in readings])
    drift = float(np.max(np.abs(totals / totals[0] - 1.0)))
    table.summary = dict(x=float(traj.x[-1]), t=float(traj.t[-1]), energy=float(totals[-1]), energy_drift=drift)
    fig = _figures(args)
    if fig:
        fig.energy_figure(traj.t, {"kinetic": [r.kinetic for r in readings], "gradient": [r.gradient for r in readings]}, _stem(args).with_name(_stem(args).name + "_energy.png"))
    h1, l2 = data_norm(init, metric, chart)
    return _finish(args, table, {"steps": steps, "energy_drift": drift, "data_norm": h1 + l2}, True)


def _default_steps(metric):
    from .strichartz import default_steps

    return default_steps(metric)


def cmd_verify_strichartz(args):
    from . import strichartz as st

    try:
        triple = AdmissibleTriple(*parse_triple(args.triple), n=args.n)
        dual = DualPair(*parse_pair(args.dual), s=triple.s, n=args.n) if args.dual else None
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    metric = _metric(args)
    if not check_short_range(metric):
        logger.warning("metric violates the short-range form; the estimate is not expected to hold")
    band = args.band or st.default_band(args.size)
    steps = args.steps or st.default_steps(metric)
    kind = "inhomogeneous" if dual else "homogeneous"
    kw = dict(workers=args.workers, scale=args.scale)
    if dual is None:
        kw["mirror"] = args.mirror
    report = st._run_kind(kind, metric, steps, args.ensemble, args.seed, band, triple, dual, **kw)
    summary = {"kind": kind, "triple": triple.label(), "dual": dual.label() if dual else None, "steps": steps, "band": band, "warnings": report.warnings}
    refined = None
    passed = report.all_finite and len(report.ratios) == args.ensemble
    if args.refinement_sweep:
        fine = _metric(args, size=2 * args.size, t_max=args.t_max + 1.0)
        fsteps = 2 * steps
        refined = st._run_kind(kind, fine, fsteps, args.ensemble, args.seed, band, triple, dual, **kw)
        delta = abs(refined.sup_ratio / report.sup_ratio - 1.0)
        summary.update(refined_sup_ratio=refined.sup_ratio, refinement_delta=delta, refined_size=2 * args.size, refined_steps=fsteps)
        passed = passed and delta <= STRICHARTZ_TOLERANCE and refined.all_finite
    growth = None
    if args.t0_sweep:
        if dual is not None:
            raise ConfigurationError("--t0-sweep applies to the homogeneous estimate")
        sweep = st.t0_sweep(args.chart, args.n, st.Resolution(args.size, steps, args.t_max, args.t0), triple, args.ensemble, args.seed, t0s=(0.0, 1.0, 2.0), band=band, chart_params=_chart_params(args), workers=args.workers)
        growth = sweep["growth"]
        summary.update(t0_sup_ratio={fmt_t(k): v for k, v in sweep["sup_ratio"].items()}, t0_growth=growth, t0_spread=sweep["spread"])
        passed = passed and growth <= T0_GROWTH_TOLERANCE
    summary["sup_ratio"] = report.sup_ratio
    table = reports.Table(["run", "lhs", "rhs", "ratio", "excluded", "ratio_refined", "sup_ratio", "sup_ratio_refined", "refinement_delta", "t0_growth", "passed"])
    for i, r in enumerate(report.runs):
        table.add(run=r.run, lhs=r.lhs, rhs=r.rhs, ratio=r.ratio, excluded=r.excluded, ratio_refined=refined.runs[i].ratio if refined else None)
    table.summary = dict(
        sup_ratio=report.sup_ratio,
        sup_ratio_refined=refined.sup_ratio if refined else None,
        refinement_delta=summary.get("refinement_delta"),
        t0_growth=growth,
        passed=passed,
    )
    fig = _figures(args)
    if fig:
        stem = _stem(args)
        fig.ratio_figure(report, stem.with_name(stem.name + "_ratios.png"))
        if refined:
            sizes, sups = [args.size, 2 * args.size], [report.sup_ratio, refined.sup_ratio]
            fig.refinement_figure(sizes, sups, stem.with_name(stem.name + "_refinement.png"))
            reports.write_dat(stem.with_name(stem.name + "_refinement.dat"), ["size", "sup_ratio"], list(zip(sizes, sups)))
    return _finish(args, table, summary, passed)


def fmt_t(t):
    return f"{t:g}"


def _chart_params(args):
    out = {}
    if args.linear:
        out["linear"] = args.linear
    if args.cross_section is not None:
        out["cross_section"] = args.cross_section
    if args.amplitude is not None:
        out["amplitude"] = args.amplitude
    return out


def cmd_verify_energy(args):
    from . import strichartz as st

    if args.zero_data and not args.forcing:
        raise ConfigurationError("--zero-data needs --forcing (otherwise the solution is zero)")
    metric = _metric(args)
    band = args.band or st.default_band(args.size)
    steps = args.steps or st.default_steps(metric)
    kw = dict(forcing=args.forcing, data=not args.zero_data, workers=args.workers)
    report = st.verify_energy(metric, args.ensemble, args.seed, steps=steps, band=band, **kw)
    drift = max(r.extra["drift"] for r in report.runs)
    summary = {"steps": steps, "band": band, "sup_ratio": report.sup_ratio, "max_drift": drift, "warnings": report.warnings}
    passed = report.all_finite
    conserving = metric.h1 is None and metric.linear_term is None and not args.forcing
    if conserving:
        passed = passed and drift <= CONSERVATION_TOLERANCE
    refined = None
    if args.refinement_sweep:
        fine = _metric(args, size=2 * args.size)
        refined = st.verify_energy(fine, args.ensemble, args.seed, steps=2 * steps, band=band, **kw)
        delta = abs(refined.sup_ratio / report.sup_ratio - 1.0)
        summary.update(refined_sup_ratio=refined.sup_ratio, refinement_delta=delta)
        passed = passed and delta <= ENERGY_TOLERANCE
    table = reports.Table(["run", "max_energy", "rhs_final", "ratio", "drift", "ratio_refined", "sup_ratio", "refinement_delta", "passed"])
    for i, r in enumerate(report.runs):
        table.add(run=r.run, max_energy=r.lhs, rhs_final=r.rhs, ratio=r.ratio, drift=r.extra["drift"], ratio_refined=refined.runs[i].ratio if refined else None)
    table.summary = dict(drift=drift, sup_ratio=report.sup_ratio, refinement_delta=summary.get("refinement_delta"), passed=passed)
    fig = _figures(args)
    if fig:
        fig.ratio_figure(report, _stem(args).with_name(_stem(args).name + "_ratios.png"))
    return _finish(args, table, summary, passed)


def cmd_semilinear(args):
    from . import semilinear as sl

    n = args.n
    if args.k is None:
        if n <= 2:
            raise ConfigurationError("no critical power for n <= 2; pass --k")
        k = Fraction(n + 2, n - 2)
    else:
        k = Fraction(args.k).limit_denominator(1000)
    k = int(k) if k.denominator == 1 else k
    nl = sl.Nonlinearity(k)
    metric = _metric(args)
    sl.space_exponents(k, n)  # raises for (k, n) off the lattice
    cfg = sl.PicardConfig(steps=args.steps or 256, tol_rel=args.tol, max_iter=args.max_iter)
    band = args.band or 8
    direction = sl.unit_data(metric, args.seed, band)
    summary = {"k": str(k), "band": band, "steps": cfg.steps}
    if args.auto_epsilon:
        threshold, trials = sl.auto_epsilon(metric, nl, cfg, direction=direction)
        eps = threshold / 4.0
        summary.update(threshold=threshold, trials=trials)
    elif args.epsilon is not None:
        eps = args.epsilon
    else:
        raise ConfigurationError("pass --epsilon or --auto-epsilon")
    factors = (1.0, 0.5, 0.25) if args.sweep else (1.0,)
    points = sl.epsilon_sweep(metric, nl, eps, cfg, direction=direction, factors=factors)
    head = points[0]
    hist = head.history
    lhs, rhs = head.holder
    passed = hist.converged and hist.residual <= 2.0 * hist.tol_abs and lhs <= rhs
    summary.update(
        epsilon=eps,
        status=hist.status,
        converged=hist.converged,
        iterations=hist.iterations,
        contraction_factor=hist.contraction_factor,
        residual=hist.residual,
        tol_abs=hist.tol_abs,
        c_prime=head.c_prime,
        holder_lhs=lhs,
        holder_rhs=rhs,
    )
    if args.sweep:
        summary["sweep"] = [dict(epsilon=p.eps, contraction_factor=p.history.contraction_factor, converged=p.history.converged) for p in points]
        summary["slope"] = sl.contraction_slope(points)
    if args.uniqueness and hist.converged:
        prob = sl.PicardProblem(metric, direction.scaled(eps), nl, cfg)
        diff = sl.uniqueness_check(metric, prob.data, nl, problem=prob)
        summary["uniqueness_difference"] = diff
        passed = passed and diff <= hist.tol_abs
    table = reports.Table(["m", "z_norm", "d_m", "converged", "contraction_factor", "residual", "tol_abs", "epsilon", "c_prime", "holder_lhs", "holder_rhs", "slope"])
    for m, z in enumerate(hist.z_norms):
        table.add(m=m, z_norm=z, d_m=hist.diffs[m] if m < len(hist.diffs) else None)
    table.summary = dict(
        converged=hist.converged,
        contraction_factor=hist.contraction_factor,
        residual=hist.residual,
        tol_abs=hist.tol_abs,
        epsilon=eps,
        c_prime=head.c_prime,
        holder_lhs=lhs,
        holder_rhs=rhs,
        slope=summary.get("slope"),
    )
    fig = _figures(args)
    if fig:
        fig.iteration_figure(hist, _stem(args).with_name(_stem(args).name + "_iterations.png"), title=f"k={k}, n={n}, eps={eps:.4g}")
    return _finish(args, table, summary, passed)


COMMANDS = {
    "check-exponents": cmd_check_exponents,
    "conjugation-test": cmd_conjugation_test,
    "solve": cmd_solve,
    "verify-strichartz": cmd_verify_strichartz,
    "verify-energy": cmd_verify_energy,
    "semilinear": cmd_semilinear,
}


def main(argv=None):
    try:
        args = parse(argv)
    except ConfigurationError as exc:
        print(f"kgdesitter: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, DomainError) as exc:
        print(f"kgdesitter: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"kgdesitter: solver failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
