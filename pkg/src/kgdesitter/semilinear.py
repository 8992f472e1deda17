"""Picard iteration for ``(Box + (n^2-1)/4) u = F_k(u)`` with small data.

The map iterated is ``Phi(u) = S(u0, u1) + G F_k(u)``: ``S`` is the free evolution
of the data and ``G`` the zero-data solution operator, both computed with the
reduced RK4 solver.  The previous iterate enters ``G`` through a cubic Hermite
interpolant in ``tau``, so trajectories are stored at every step.

Iterates are compared in ``Z = L^p_t L^q_y`` with ``(p, q, s) = (k, 2k, 1)``,
which is admissible exactly when ``k = (n+2)/(n-2)``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ConfigurationError, SolverError
from .exponents import AdmissibleTriple, DualPair, validate
from .geometry import check_short_range
from .norms import MixedNormSpec, data_norm, mixed_norm
from .operators import build_full_operator, conformal_exponent, conjugate
from .sampling import random_data, run_rng
from .solver import StateVector, TrajectoryRecord, reconstruct_u, solve_reduced

logger = logging.getLogger(__name__)

HEADLINE = {(5, 3), (3, 4)}
DIVERGENCE_RUN = 3  # consecutive increases of d_m that count as divergence
ROUNDOFF_FLOOR = 1e-12  # relative size below which d_m is not used for rates


@dataclass(frozen=True)
class Nonlinearity:
    """``F_k``; ``pure_power`` is ``u |u|^(k-1)``, ``custom`` interpolates samples."""

    k: float
    form: str = "pure_power"
    samples: Optional[tuple] = None  # (u, F) arrays for the custom form

    def __post_init__(self):
        if not self.k > 1:
            raise ConfigurationError(f"k must exceed 1, got {self.k}")
        if self.form not in ("pure_power", "custom"):
            raise ConfigurationError(f"unknown nonlinearity form {self.form!r}")
        if self.form == "custom":
            if self.samples is None:
                raise ConfigurationError("custom nonlinearity needs samples")
            u, f = (np.asarray(a, dtype=float) for a in self.samples)
            if u.shape != f.shape or u.ndim != 1 or np.any(np.diff(u) <= 0):
                raise ConfigurationError("samples must be increasing u with matching F values")
            object.__setattr__(self, "samples", (u, f))

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.form == "pure_power":
            return u * np.abs(u) ** (self.k - 1.0)
        su, sf = self.samples
        return np.interp(u, su, sf)

    def growth_check(self):
        """``(C, lo, hi)``: ``|F| <= C |u|^k`` and ``lo <= |u F'| / |F| <= hi`` on the samples."""
        if self.form == "pure_power":
            return 1.0, float(self.k), float(self.k)
        u, f = self.samples
        mask = u != 0
        c = float(np.max(np.abs(f[mask]) / np.abs(u[mask]) ** self.k))
        df = np.gradient(f, u)
        nz = mask & (f != 0)
        q = np.abs(u[nz] * df[nz]) / np.abs(f[nz])
        return c, float(q.min()), float(q.max())


def space_exponents(k, n):
    """``(Z triple, dual pair)`` for ``F_k`` in dimension ``n``.

    Raises :class:`ConfigurationError` when ``(k, 2k, 1)`` is not admissible.
    """
    kk = Fraction(k).limit_denominator(1000) if not isinstance(k, Fraction) else k
    verdict = validate(kk, 2 * kk, 1, n)
    if not verdict:
        raise ConfigurationError(f"(k, n) = ({k}, {n}) is off the admissible lattice: {verdict.describe()}")
    if (kk, n) not in HEADLINE:
        warnings.warn(f"(k, n) = ({k}, {n}) is not one of the headline cases", UserWarning, stacklevel=3)
    return AdmissibleTriple(kk, 2 * kk, 1, n), DualPair(1, 2, 1, n)


@dataclass(frozen=True)
class PicardConfig:
    steps: int = 256
    tol_rel: float = 1e-8
    max_iter: int = 25


@dataclass
class IterationHistory:
    z_norms: list = field(default_factory=list)
    diffs: list = field(default_factory=list)
    converged: bool = False
    status: str = ""
    tol_abs: float = 0.0
    residual: float = math.nan

    @property
    def iterations(self):
        return len(self.diffs)

    def rates(self):
        """``d_(m+1) / d_m`` for consecutive differences above the roundoff floor."""
        if not self.z_norms:
            return []
        floor = ROUNDOFF_FLOOR * self.z_norms[0]
        d = self.diffs
        out = []
        for i in range(len(d) - 1):
            if d[i] <= floor or d[i + 1] <= floor:
                break
            out.append(d[i + 1] / d[i])
        return out

    @property
    def contraction_factor(self):
        """Median of :meth:`rates`."""
        r = self.rates()
        return float(np.median(r)) if r else math.nan


class PicardProblem:
    """Shared operators, free evolution and Z-norm for one metric, data and ``F_k``."""

    def __init__(self, metric, data, nl, cfg=None):
        cfg = cfg or PicardConfig()
        gate = check_short_range(metric)
        if not gate:
            raise ConfigurationError(
                "semilinear runs require the short-range form h = h0 + x^2 h1 "
                f"(linear coefficient {gate.max_linear_coefficient:.3g})"
            )
        self.metric = metric
        self.nl = nl
        self.cfg = cfg
        self.triple, self.dual = space_exponents(nl.k, metric.n)
        self.z_spec = MixedNormSpec.from_triple(self.triple)
        self.chart = build_full_operator(metric)
        self.reduced = conjugate(self.chart)
        self.alpha = conformal_exponent(metric.n)
        self._set_data(data)

    def _set_data(self, data):
        self.data = data
        self.free = self._solve(data, None)

    def with_data(self, data):
        """Same metric and operators, new data."""
        other = object.__new__(PicardProblem)
        other.__dict__.update(self.__dict__)
        other._set_data(data)
        return other

    def _solve(self, init, forcing):
        return solve_reduced(self.reduced, init, forcing=forcing, steps=self.cfg.steps, node_stride=1)

    def z_norm(self, traj):
        return mixed_norm(traj, self.z_spec, self.metric, self.chart)

    def forcing_from(self, traj):
        """Reduced forcing ``x^(-2-alpha) F_k(x^alpha v(x))`` along the interpolated iterate."""
        interp = traj.interpolator()
        a = self.alpha
        nl = self.nl

        def g(x):
            r = x**a
            return nl(r * interp(x)) / (x * x * r)

        return g

    def duhamel(self, traj):
        zero = StateVector.zeros(self.metric.x0, self.metric.cross_section.npts)
        return self._solve(zero, self.forcing_from(traj))

    def step(self, traj):
        return self.free + self.duhamel(traj)


def picard_solve(metric, data, nl, cfg=None, initial=None, problem=None):
    """Iterate ``u <- S + G F_k(u)`` from ``u^(0) = S`` (or ``initial``).

    Returns ``(trajectory, history)``; ``trajectory`` is reduced.  Stops when
    ``d_m < tol_rel * ||u^(0)||_Z``, after ``max_iter`` iterations, or when
    ``d_m`` grows ``DIVERGENCE_RUN`` times in a row or the solver aborts.
    """
    prob = problem or PicardProblem(metric, data, nl, cfg)
    cfg = prob.cfg
    hist = IterationHistory()
    u = prob.free if initial is None else initial
    z0 = prob.z_norm(u)
    hist.z_norms.append(z0)
    hist.tol_abs = cfg.tol_rel * prob.z_norm(prob.free)
    if z0 == 0.0:
        hist.converged, hist.status, hist.residual = True, "zero data", 0.0
        return u, hist
    rises = 0
    for m in range(cfg.max_iter):
        try:
            nxt = prob.step(u)
            d = prob.z_norm(nxt - u)
            z = prob.z_norm(nxt)
        except (SolverError, ValueError, FloatingPointError) as exc:
            hist.status = f"diverged at iteration {m + 1}: {exc}"
            return u, hist
        if not (math.isfinite(d) and math.isfinite(z)):
            hist.status = f"diverged at iteration {m + 1}: non-finite norm"
            return u, hist
        hist.diffs.append(d)
        hist.z_norms.append(z)
        u = nxt
        if d < hist.tol_abs:
            hist.converged = True
            hist.status = f"converged after {m + 1} iterations"
            break
        rises = rises + 1 if len(hist.diffs) > 1 and d > hist.diffs[-2] else 0
        if rises >= DIVERGENCE_RUN:
            hist.status = f"diverged: d_m increased {DIVERGENCE_RUN} times in a row"
            return u, hist
    else:
        hist.status = f"no convergence in {cfg.max_iter} iterations"
        return u, hist
    hist.residual = fixed_point_residual(prob, u)
    return u, hist


def fixed_point_residual(prob, traj):
    """``||u - S - G F_k(u)||_Z``."""
    return prob.z_norm(traj - prob.step(traj))


def holder_bound_check(traj, nl, metric, k=None):
    """``(lhs, rhs)`` of the Holder step ``||F_k(u)||_dual <= sup x^((p-1)/2) ||u||_Z^k``.

    ``lhs`` is the weighted ``L^1_t L^2_y`` norm of ``F_k(u)`` and ``rhs`` uses
    the supremum over the stored ``x`` range.  The inequality holds with constant
    one for the pure power, node by node and panel by panel.
    """
    triple, dual = space_exponents(nl.k if k is None else k, metric.n)
    phys = reconstruct_u(traj, metric.n) if traj.kind == "reduced" else traj
    f = TrajectoryRecord(phys.x, nl(phys.v), None, metric.n, "physical")
    op = build_full_operator(metric)
    lhs = mixed_norm(f, MixedNormSpec.from_dual(dual), metric, op)
    z = mixed_norm(phys, MixedNormSpec.from_triple(triple), metric, op)
    power = 0.5 * (float(triple.p) - 1.0)
    rhs = float(np.max(phys.x) ** power) * z ** float(nl.k)
    return lhs, rhs


def homogeneous_perturbation(prob, seed, size):
    """Free evolution of independent random data, scaled to ``||delta||_Z = size``."""
    init = random_data(prob.metric, run_rng(seed, 0), operator=prob.chart)
    delta = prob._solve(init, None)
    z = prob.z_norm(delta)
    return delta.scaled(size / z)


def uniqueness_check(metric, data, nl, cfg=None, perturbation_seed=1, size=None, problem=None):
    """``||u - u_perturbed||_Z`` after restarting Picard from ``u^(0) + delta``.

    ``size`` defaults to ``0.1 * ||data||``.  Raises :class:`SolverError` if either
    run fails to converge.
    """
    prob = problem or PicardProblem(metric, data, nl, cfg)
    u, h = picard_solve(metric, data, nl, problem=prob)
    if not h.converged:
        raise SolverError(f"unperturbed run: {h.status}")
    if size is None:
        size = 0.1 * sum(data_norm(data, metric, prob.chart))
    if size == 0.0:
        return 0.0
    start = prob.free + homogeneous_perturbation(prob, perturbation_seed, size)
    w, hw = picard_solve(metric, data, nl, initial=start, problem=prob)
    if not hw.converged:
        raise SolverError(f"perturbed run: {hw.status}")
    return prob.z_norm(u - w)


def lipschitz_data_dependence(metric, data_a, data_b, nl, cfg=None):
    """``||u_a - u_b||_Z / ||data_a - data_b||``; ``nan`` for identical data."""
    diff = data_a - data_b
    denom = sum(data_norm(diff, metric))
    if denom == 0.0:
        return math.nan
    prob = PicardProblem(metric, data_a, nl, cfg)
    ua, ha = picard_solve(metric, data_a, nl, problem=prob)
    ub, hb = picard_solve(metric, data_b, nl, problem=prob.with_data(data_b))
    if not (ha.converged and hb.converged):
        raise SolverError("Lipschitz quotient needs two converged runs")
    return prob.z_norm(ua - ub) / denom


# -- epsilon protocol --------------------------------------------------------------


def unit_data(metric, seed, band=None):
    """Random data with ``||u0||_H1 + ||u1||_L2 = 1`` (run 0 of ``seed``).

    Hold ``band`` fixed when comparing grids so the continuum data agree.
    """
    return random_data(metric, run_rng(seed, 0), band=band)


def converges(problem, direction, eps):
    _, hist = picard_solve(problem.metric, None, problem.nl, problem=problem.with_data(direction.scaled(eps)))
    return hist.converged


def auto_epsilon(metric, nl, cfg=None, seed=0, start=1.0, bisections=8, direction=None, band=None):
    """Largest ``eps`` (to bisection accuracy) for which Picard converges.

    The data direction is ``unit_data(metric, seed)`` unless given.  Returns
    ``(threshold, trials)`` with ``trials`` a list of ``(eps, converged)``.
    """
    cfg = cfg or PicardConfig()
    direction = direction or unit_data(metric, seed, band)
    base = PicardProblem(metric, direction, nl, cfg)
    trials = []

    def probe(e):
        ok = converges(base, direction, e)
        trials.append((e, ok))
        return ok

    lo, hi = None, None
    e = start
    for _ in range(40):
        if probe(e):
            lo = e
            if hi is not None:
                break
            e *= 4.0
        else:
            hi = e
            if lo is not None:
                break
            e /= 4.0
    if lo is None or hi is None:
        raise SolverError("could not bracket the convergence threshold")
    for _ in range(bisections):
        mid = math.sqrt(lo * hi)
        if probe(mid):
            lo = mid
        else:
            hi = mid
    return lo, trials


@dataclass
class SweepPoint:
    eps: float
    history: IterationHistory
    z_norm: float
    holder: tuple
    trajectory: TrajectoryRecord = field(repr=False, default=None)

    @property
    def c_prime(self):
        return self.z_norm / self.eps


def epsilon_sweep(metric, nl, eps0, cfg=None, seed=0, factors=(1.0, 0.5, 0.25), direction=None, band=None):
    """Picard runs at ``eps0 * factors`` along one data direction."""
    cfg = cfg or PicardConfig()
    direction = direction or unit_data(metric, seed, band)
    base = PicardProblem(metric, direction, nl, cfg)
    points = []
    for f in factors:
        eps = eps0 * f
        traj, hist = picard_solve(metric, None, nl, problem=base.with_data(direction.scaled(eps)))
        z = hist.z_norms[-1] if hist.z_norms else math.nan
        points.append(SweepPoint(eps, hist, z, holder_bound_check(traj, nl, metric), traj))
    return points


def contraction_slope(points):
    """Slope of ``log(rate)`` against ``log(eps)``.

    The rate ``d_(m+1)/d_m`` depends on ``m`` (the difference direction is still
    settling), so runs are compared at the iteration indices they all resolve:
    the geometric mean of the rates over those common indices is fitted by least
    squares.
    """
    rates = [p.history.rates() for p in points]
    common = min(len(r) for r in rates)
    if common == 0:
        return math.nan
    e = np.log([p.eps for p in points])
    r = np.array([np.mean(np.log(rr[:common])) for rr in rates])
    return float(np.polyfit(e, r, 1)[0])
