"""Ensemble harness for the weighted Strichartz and energy estimates.

Each run draws band-limited random data (or forcing), solves the reduced
equation, reconstructs ``u`` and compares the two sides of the estimate.  Only
the existence of a constant is claimed, so the harness reports ratios and how
stable their supremum is under refinement; it never asserts a value for the
constant itself.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConfigurationError, SolverError
from .exponents import AdmissibleTriple, DualPair
from .geometry import build_chart, check_short_range
from .norms import MixedNormSpec, data_norm, mixed_norm, weighted_lp
from .operators import build_full_operator, conjugate
from .sampling import default_band, random_data, random_forcing, run_rng
from .solver import StateVector, energy_history, reconstruct_u, solve_reduced

logger = logging.getLogger(__name__)

STEP_FACTOR = 0.6  # tau step ~ STEP_FACTOR / grid size keeps RK4 well inside its stability region


@dataclass
class RunResult:
    run: int
    lhs: float
    rhs: float
    ratio: float
    t0: float
    extra: dict = field(default_factory=dict)

    @property
    def excluded(self):
        return not math.isfinite(self.ratio)


@dataclass
class EstimateReport:
    kind: str
    ensemble: int
    seed: int
    runs: list
    triple: Optional[AdmissibleTriple] = None
    dual: Optional[DualPair] = None
    refinement: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def ratios(self):
        return np.array([r.ratio for r in self.runs if not r.excluded])

    @property
    def sup_ratio(self):
        r = self.ratios
        return float(r.max()) if r.size else math.nan

    @property
    def all_finite(self):
        r = self.ratios
        return bool(r.size) and bool(np.all(np.isfinite(r)))

    def prefix_sup(self):
        """Running supremum over the ensemble in run order."""
        return np.fmax.accumulate(np.array([r.ratio for r in self.runs]))


def default_steps(metric):
    steps = (metric.t_max - metric.t0) * metric.cross_section.size / STEP_FACTOR
    return max(16, int(math.ceil(steps / 16.0)) * 16)


def _setup(metric):
    chart = build_full_operator(metric)
    import warnings as _w

    with _w.catch_warnings(record=True) as caught:
        _w.simplefilter("always")
        reduced = conjugate(chart)
    messages = [str(w.message) for w in caught]
    return chart, reduced, messages


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def verify_homogeneous(
    metric,
    triple,
    ensemble=50,
    seed=0,
    steps=None,
    band=None,
    node_stride=1,
    scale=1.0,
    mirror=False,
    workers=1,
):
    """Ratios ``lhs / rhs`` of the homogeneous estimate over random data.

    ``lhs`` is the weighted ``L^p_t W^{1-s,q}`` norm of ``u``; ``rhs`` is
    ``e^{|t0|/2} (||u0||_{H^1} + ||u1||_{L^2})``.  With ``mirror`` the past end is
    obtained by time reflection and combined with the future end (needs ``t0 = 0``).
    """
    if not isinstance(triple, AdmissibleTriple):
        triple = AdmissibleTriple(*triple, n=metric.n)
    if triple.n != metric.n:
        raise ConfigurationError("triple dimension does not match the metric")
    if mirror and not math.isclose(metric.x0, 1.0):
        raise ConfigurationError("mirror runs need data at t0 = 0 (x0 = 1)")
    chart, reduced, warns = _setup(metric)
    steps = steps or default_steps(metric)
    band = band or default_band(metric.cross_section.size)
    spec = MixedNormSpec.from_triple(triple)
    t0 = metric.t0
    weight = math.exp(abs(t0) / 2.0)

    def one(i):
        init = random_data(metric, run_rng(seed, i), band=band, operator=chart).scaled(scale)
        h1, l2 = data_norm(init, metric, chart)
        rhs = weight * (h1 + l2)
        if rhs == 0.0:
            return RunResult(i, 0.0, 0.0, math.nan, t0, {"excluded": "zero data"})
        try:
            traj = solve_reduced(reduced, init, steps=steps, node_stride=node_stride)
        except SolverError as exc:
            raise SolverError(f"run {i}: {exc}", exc.step, exc.x) from exc
        lhs = mixed_norm(traj, spec, metric, chart)
        extra = {"lhs_future": lhs}
        if mirror:
            u0, u1 = init.physical(metric.n)
            past = StateVector.from_physical(init.x, u0, -u1, metric.n)
            lhs_past = mixed_norm(solve_reduced(reduced, past, steps=steps, node_stride=node_stride), spec, metric, chart)
            extra["lhs_past"] = lhs_past
            lhs = _combine(lhs, lhs_past, spec.p)
        return RunResult(i, lhs, rhs, lhs / rhs, t0, extra)

    runs = _map(one, range(ensemble), workers)
    return EstimateReport(
        kind="homogeneous",
        ensemble=ensemble,
        seed=seed,
        runs=runs,
        triple=triple,
        warnings=warns,
        config=_config(metric, steps, band, node_stride, scale=scale, mirror=mirror),
    )


def _combine(a, b, p):
    if math.isinf(p):
        return max(a, b)
    return (a**p + b**p) ** (1.0 / p)


def _config(metric, steps, band, node_stride, **extra):
    cfg = dict(
        chart=metric.name,
        n=metric.n,
        size=metric.cross_section.size,
        x0=metric.x0,
        x_min=metric.x_min,
        t0=metric.t0,
        t_max=metric.t_max,
        steps=steps,
        band=band,
        node_stride=node_stride,
    )
    cfg.update(extra)
    return cfg


def verify_inhomogeneous(
    metric,
    triple,
    dual,
    ensemble=50,
    seed=0,
    steps=None,
    band=None,
    node_stride=1,
    scale=1.0,
    temporal=3,
    workers=1,
):
    """Ratios for zero data and random forcing: ``lhs`` over the dual norm of ``f``."""
    if not isinstance(triple, AdmissibleTriple):
        triple = AdmissibleTriple(*triple, n=metric.n)
    if not isinstance(dual, DualPair):
        dual = DualPair(*dual, s=triple.s, n=metric.n)
    if dual.s != triple.s or dual.n != triple.n:
        raise ConfigurationError("dual pair and triple disagree on (s, n)")
    chart, reduced, warns = _setup(metric)
    steps = steps or default_steps(metric)
    band = band or default_band(metric.cross_section.size)
    lhs_spec = MixedNormSpec.from_triple(triple)
    rhs_spec = MixedNormSpec.from_dual(dual)
    zero = StateVector.zeros(metric.x0, metric.cross_section.npts)

    def one(i):
        forcing = random_forcing(metric, run_rng(seed, i), band=band, temporal=temporal).scaled(scale)
        traj = solve_reduced(reduced, zero, forcing=forcing, steps=steps, node_stride=node_stride)
        f_traj = _forcing_trajectory(traj, forcing)
        rhs = mixed_norm(f_traj, rhs_spec, metric, chart)
        if rhs == 0.0:
            return RunResult(i, 0.0, 0.0, math.nan, metric.t0, {"excluded": "zero forcing"})
        lhs = mixed_norm(traj, lhs_spec, metric, chart)
        return RunResult(i, lhs, rhs, lhs / rhs, metric.t0)

    runs = _map(one, range(ensemble), workers)
    return EstimateReport(
        kind="inhomogeneous",
        ensemble=ensemble,
        seed=seed,
        runs=runs,
        triple=triple,
        dual=dual,
        warnings=warns,
        config=_config(metric, steps, band, node_stride, scale=scale, temporal=temporal),
    )


def _forcing_trajectory(traj, forcing):
    from .solver import TrajectoryRecord

    f = np.array([forcing.physical(float(x)) for x in traj.x])
    return TrajectoryRecord(traj.x.copy(), f, None, traj.n, "physical")


def energy_ratio(reduced, traj, forcing=None):
    """Energy estimate along one reduced trajectory.

    Returns ``(max_x E(x) / rhs(x), readings, rhs)`` where ``rhs(x)`` is the initial
    ``int |v0|^2 + |grad v0|^2 + |v1|^2 dh`` plus ``int_[x, x0] int |g|^2 dh dx``.
    """
    readings = energy_history(reduced, traj)
    e0 = readings[0]
    initial = e0.potential_l2 + e0.gradient + e0.kinetic
    if forcing is not None:
        dens = np.array([np.sum(reduced.laplacian(float(x)).mass * forcing(float(x)) ** 2) for x in traj.x])
        dx = -np.diff(traj.x)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * dx * (dens[1:] + dens[:-1]))])
    else:
        cum = np.zeros(len(traj.x))
    rhs = initial + cum
    lhs = np.array([r.total for r in readings])
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs, np.nan)
    return float(np.nanmax(ratio)) if np.any(rhs > 0) else math.nan, readings, rhs


def verify_energy(metric, ensemble=20, seed=0, steps=None, band=None, forcing=False, data=True, node_stride=4, workers=1):
    """Energy-estimate ratios with ``V`` the reduced potential of ``metric``."""
    chart, reduced, warns = _setup(metric)
    steps = steps or default_steps(metric)
    band = band or default_band(metric.cross_section.size)
    zero = StateVector.zeros(metric.x0, metric.cross_section.npts)

    def one(i):
        rng = run_rng(seed, i)
        init = random_data(metric, rng, band=band, operator=chart) if data else zero
        g = random_forcing(metric, rng, band=band) if forcing else None
        traj = solve_reduced(reduced, init, forcing=g, steps=steps, node_stride=node_stride)
        ratio, readings, rhs = energy_ratio(reduced, traj, g)
        totals = np.array([r.total for r in readings])
        drift = float(np.max(np.abs(totals / totals[0] - 1.0))) if totals[0] > 0 else math.nan
        return RunResult(i, float(totals.max()), float(rhs[-1]), ratio, metric.t0, {"drift": drift})

    runs = _map(one, range(ensemble), workers)
    return EstimateReport(
        kind="energy",
        ensemble=ensemble,
        seed=seed,
        runs=runs,
        warnings=warns,
        config=_config(metric, steps, band, node_stride, forcing=forcing, data=data),
    )


# -- stability sweeps ------------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    size: int
    steps: int
    t_max: float
    t0: float = 0.0

    def refined(self, t_max=None):
        return Resolution(2 * self.size, 2 * self.steps, self.t_max if t_max is None else t_max, self.t0)


def chart_at(chart, n, resolution, **params):
    """Build ``chart`` at a given resolution; ``x0 = e^{-t0}``, ``x_min = e^{-t_max}``."""
    return build_chart(
        chart, n=n, size=resolution.size, x0=math.exp(-resolution.t0), x_min=math.exp(-resolution.t_max), **params
    )


def _run_kind(kind, metric, steps, ensemble, seed, band, triple=None, dual=None, workers=1, **kw):
    if kind == "homogeneous":
        return verify_homogeneous(metric, triple, ensemble, seed, steps=steps, band=band, workers=workers, **kw)
    if kind == "inhomogeneous":
        return verify_inhomogeneous(metric, triple, dual, ensemble, seed, steps=steps, band=band, workers=workers, **kw)
    if kind == "energy":
        return verify_energy(metric, ensemble, seed, steps=steps, band=band, workers=workers, **kw)
    raise ConfigurationError(f"unknown estimate kind {kind!r}")


def refinement_sweep(
    kind,
    chart,
    n,
    base,
    ensemble,
    seed,
    triple=None,
    dual=None,
    refined_t_max=None,
    band=None,
    chart_params=None,
    workers=1,
    **kw,
):
    """Run at ``base`` and at doubled grid and steps (optionally a longer ``t_max``).

    The data band is held at the base value so both runs see the same continuum data.
    Returns ``(base_report, refined_report)``; the base report's ``refinement``
    dict records the relative change of ``sup_ratio``.
    """
    chart_params = chart_params or {}
    band = band or default_band(base.size)
    fine = base.refined(refined_t_max)
    r0 = _run_kind(kind, chart_at(chart, n, base, **chart_params), base.steps, ensemble, seed, band, triple, dual, workers, **kw)
    r1 = _run_kind(kind, chart_at(chart, n, fine, **chart_params), fine.steps, ensemble, seed, band, triple, dual, workers, **kw)
    r0.refinement.update(
        refined_sup_ratio=r1.sup_ratio,
        refinement_delta=abs(r1.sup_ratio / r0.sup_ratio - 1.0),
        refined_size=fine.size,
        refined_steps=fine.steps,
        refined_t_max=fine.t_max,
    )
    return r0, r1


def t0_sweep(chart, n, base, triple, ensemble, seed, t0s=(0.0, 1.0, 2.0), band=None, chart_params=None, workers=1):
    """``sup_ratio`` of the homogeneous estimate for data posed at several ``t0``.

    ``growth`` is ``max_t0 sup(t0) / sup(t0s[0])``: values near or below one mean
    the ``e^{|t0|/2}`` factor already accounts for the ``t0`` dependence.
    """
    chart_params = chart_params or {}
    band = band or default_band(base.size)
    sups = {}
    for t0 in t0s:
        res = Resolution(base.size, base.steps, base.t_max, t0)
        metric = chart_at(chart, n, res, **chart_params)
        steps = max(16, int(round(base.steps * (base.t_max - t0) / (base.t_max - base.t0))))
        sups[t0] = verify_homogeneous(metric, triple, ensemble, seed, steps=steps, band=band, workers=workers).sup_ratio
    first = sups[t0s[0]]
    growth = max(v / first for v in sups.values())
    spread = max(sups.values()) / min(sups.values()) - 1.0
    return {"sup_ratio": sups, "growth": growth, "spread": spread}


def negative_control(chart, n, size, linear, x_mins, **params):
    """Reduced potential size as ``x_min`` shrinks for a metric with a linear term.

    Returns ``(warned, [(x_min, sup |V|)])``.
    """
    import warnings as _w

    rows = []
    warned = False
    for x_min in x_mins:
        metric = build_chart(chart, n=n, size=size, x_min=x_min, linear=linear, **params)
        with _w.catch_warnings(record=True) as caught:
            _w.simplefilter("always")
            reduced = conjugate(build_full_operator(metric))
        warned = warned or any("linear term" in str(w.message) for w in caught)
        rows.append((x_min, float(np.max(np.abs(reduced.potential(x_min))))))
    gate = check_short_range(metric)
    return warned and not gate.passed, rows
