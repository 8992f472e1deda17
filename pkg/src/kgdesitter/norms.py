"""Weighted mixed norms ``L^p_t(W^{sigma,q}_y(dh / x^n), e^{w t} dt)``.

The spatial norm is the Bessel-potential norm

    ||u||_{W^{sigma,q}} = ( int |(1 + x^2 Delta_h)^{sigma/2} u|^q dh / x^n )^{1/q},

applied through the eigendecomposition of the discrete ``Delta_h(x)``.  The time
integral uses trapezoidal panels in ``t = -log x`` with the exponential weight
integrated exactly on each panel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .exponents import INF, dual_weight_exponents, weight_exponents
from .operators import BoundaryChartOperator
from .solver import reconstruct_u


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponents of one weighted mixed norm."""

    p: float
    q: float
    sigma: float
    t_weight: float
    measure_power: int

    @classmethod
    def from_triple(cls, triple):
        """Left-hand side of the homogeneous estimate: ``(p, q)`` with spatial order ``1 - s``."""
        w = weight_exponents(triple)
        t_weight = 0.0 if w.t_weight is None else float(w.t_weight)
        return cls(float(triple.p), float(triple.q), float(1 - triple.s), t_weight, triple.n)

    @classmethod
    def from_dual(cls, dual):
        """Forcing norm with exponents ``(p', q')`` and spatial order ``1 - s``."""
        w = dual_weight_exponents(dual)
        return cls(float(dual.p_prime), float(dual.q_prime), float(1 - dual.s), float(w.t_weight), dual.n)

    @property
    def x_weight(self):
        """Exponent of ``x`` in ``x^{x_weight} dx``, equal to ``-t_weight - 1``."""
        return -self.t_weight - 1.0

    def label(self):
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"L{p}_W{self.sigma:g},{self.q:g}"


@lru_cache(maxsize=64)
def chart_operator(spec):
    """Shared chart operator (and its eigen caches) for ``spec``."""
    return BoundaryChartOperator(spec)


def _operator(spec, operator):
    if operator is not None:
        return operator
    return chart_operator(spec)


def sobolev_norm(field, x, sigma, q, spec, operator=None):
    """``W^{sigma,q}(dh / x^n)`` norm of a grid field at ``x``."""
    if not (1.0 < q < math.inf):
        raise DomainError(f"q must lie in (1, inf), got {q}")
    op = _operator(spec, operator)
    field = np.asarray(field, dtype=float)
    lap = op.laplacian(x)
    if sigma != 0.0:
        es = op.eigensystem(x)
        field = es.multiply(field, (1.0 + x * x * es.values) ** (0.5 * sigma))
    measure = lap.mass / x**spec.n
    return float(np.sum(np.abs(field) ** q * measure) ** (1.0 / q))


def spatial_norms(traj, spec, norm_spec, operator=None):
    """Spatial norm at every node of a physical trajectory."""
    op = _operator(spec, operator)
    vals = np.array(
        [sobolev_norm(u, float(x), norm_spec.sigma, norm_spec.q, spec, op) for x, u in zip(traj.x, traj.v)]
    )
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise ValueError(f"non-finite spatial norm at node {int(bad[0])} (x={traj.x[bad[0]]:.6g})")
    return vals


def _phi1(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    out = np.expm1(zs) / zs
    series = 1.0 + z / 2.0 + z * z / 6.0 + z**3 / 24.0
    return np.where(small, series, out)


def _phi2(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    out = (zs * np.exp(zs) - np.expm1(zs)) / zs**2
    series = 0.5 + z / 3.0 + z * z / 8.0 + z**3 / 30.0
    return np.where(small, series, out)


def weighted_lp(t, values, p, t_weight):
    """``(int |N(t)|^p e^{t_weight t} dt)^{1/p}``, ``N`` piecewise linear in ``|N|^p``.

    ``p = inf`` returns ``max |N|``.
    """
    t = np.asarray(t, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return float(values.max())
    f = values**p
    h = np.diff(t)
    z = t_weight * h
    b = h * _phi2(z)
    a = h * _phi1(z) - b
    total = np.sum((a * f[:-1] + b * f[1:]) * np.exp(t_weight * t[:-1]))
    return float(total ** (1.0 / p))


def mixed_norm(traj, spec, metric, operator=None):
    """Weighted mixed norm of the physical field ``u`` over the stored nodes.

    A reduced trajectory is reconstructed first.
    """
    if traj.kind == "reduced":
        traj = reconstruct_u(traj, metric.n)
    norms = spatial_norms(traj, metric, spec, operator)
    p = INF if math.isinf(spec.p) else spec.p
    return weighted_lp(traj.t, norms, p, spec.t_weight)


def data_norm(init, metric, operator=None):
    """``(||u0||_{H^1(dh/x0^n)}, ||u1||_{L^2(dh/x0^n)})`` for a reduced state at ``x0``."""
    u0, u1 = init.physical(metric.n)
    op = _operator(metric, operator)
    h1 = sobolev_norm(u0, init.x, 1.0, 2.0, metric, op)
    l2 = sobolev_norm(u1, init.x, 0.0, 2.0, metric, op)
    return h1, l2
