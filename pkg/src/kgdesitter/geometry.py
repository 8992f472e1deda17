"""Boundary-chart metrics ``(-dx^2 + h(x, y, dy)) / x^2`` on a compact cross-section.

A metric family ``h`` is stored as diagonal coefficients relative to a reference
orthonormal coframe of the cross-section:

* ``sphere``: zonal reduction of the round ``S^n``.  Component 0 multiplies
  ``d theta^2``, components ``1..n-1`` multiply the ``sin^2(theta) d omega^2``
  block.  Only the polar angle is discretized, so every field is zonal.
* ``torus``: flat ``T^n = (R / 2 pi Z)^n``; component ``d`` multiplies ``d theta_d^2``.
  ``n = 1`` is the periodic interval.

Coefficient callables take an array of coordinates with shape ``(dim, m)`` and
return either ``(n, m)`` (one row per component) or ``(m,)`` (conformal factor,
broadcast to every component).  ``h1`` and ``linear_term`` also receive ``x``::

    h(x, y) = h0(y) + x**2 * h1(x, y) + x * linear_term(x, y)

``linear_term`` exists only to build metrics that violate the short-range
condition on purpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, DomainError

SPHERE = "sphere"
TORUS = "torus"
CROSS_SECTIONS = (SPHERE, TORUS)

DEFAULT_X_MIN = math.exp(-6.0)


def sphere_area(k):
    """Surface area of the unit ``S^k``."""
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


@dataclass(frozen=True)
class CrossSection:
    """Uniform grid on the compact cross-section ``Y``."""

    kind: str
    n: int
    size: int

    def __post_init__(self):
        if self.kind not in CROSS_SECTIONS:
            raise ConfigurationError(f"unknown cross-section {self.kind!r}")
        if self.n < 1:
            raise ConfigurationError("cross-section dimension must be >= 1")
        if self.size < 4:
            raise ConfigurationError("need at least 4 grid points per dimension")

    @property
    def dim(self):
        """Number of discretized coordinates."""
        return 1 if self.kind == SPHERE else self.n

    @property
    def spacing(self):
        return (math.pi if self.kind == SPHERE else 2.0 * math.pi) / self.size

    @property
    def shape(self):
        return (self.size,) * self.dim

    @property
    def npts(self):
        return self.size ** self.dim

    @property
    def cell(self):
        """Coordinate volume of one grid cell."""
        return self.spacing ** self.dim

    def axis(self, shift=0.0):
        h = self.spacing
        if self.kind == SPHERE:
            # cell centres; the poles sit on cell faces
            return (np.arange(self.size) + 0.5 + shift) * h
        return (np.arange(self.size) + shift) * h

    def nodes(self):
        """Node coordinates, shape ``(dim, npts)``."""
        return self._mesh([self.axis()] * self.dim)

    def edges(self, axis):
        """Coordinates of the faces between node ``i`` and ``i + 1`` along ``axis``."""
        axes = [self.axis()] * self.dim
        axes[axis] = self.axis(0.5)
        return self._mesh(axes)

    def _mesh(self, axes):
        grids = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.ravel() for g in grids])

    def reference_density(self, coords):
        """Density of the reference volume form in the grid coordinates."""
        coords = np.atleast_2d(coords)
        if self.kind == SPHERE:
            theta = coords[0]
            dens = np.sin(theta) ** (self.n - 1) if self.n > 1 else np.ones_like(theta)
            return sphere_area(self.n - 1) * dens
        return np.ones(coords.shape[1])

    def reference_weights(self):
        """Exact reference volume of each cell (the zonal weight integrated over the cell)."""
        if self.kind == TORUS:
            return np.full(self.npts, self.cell)
        h = self.spacing
        gx, gw = np.polynomial.legendre.leggauss(8)
        left = np.arange(self.size) * h
        pts = left[:, None] + 0.5 * h * (gx[None, :] + 1.0)
        dens = self.reference_density(pts.ravel()[None, :]).reshape(pts.shape)
        return 0.5 * h * dens @ gw

    def volume(self):
        if self.kind == SPHERE:
            return sphere_area(self.n)
        return (2.0 * math.pi) ** self.n


def _components(values, n, m):
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full((n, m), float(arr))
    if arr.shape == (m,):
        return np.broadcast_to(arr, (n, m)).copy()
    if arr.shape == (n, m):
        return arr
    if arr.shape == (n,):
        return np.repeat(arr[:, None], m, axis=1)
    raise ConfigurationError(f"metric coefficient has shape {arr.shape}, expected ({n}, {m}) or ({m},)")


@dataclass(frozen=True, eq=False)
class MetricSpec:
    """A C^2 asymptotically de Sitter metric in its boundary chart.

    ``x`` runs from ``x0`` down to the truncation ``x_min``; ``t = -log x``.
    Immutable; hashing is by identity so operators can cache per metric.
    """

    n: int
    cross_section: CrossSection
    h0: Callable
    h1: Optional[Callable] = None
    linear_term: Optional[Callable] = None
    x0: float = 1.0
    x_min: float = DEFAULT_X_MIN
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cross_section.n != self.n:
            raise ConfigurationError("cross-section dimension does not match n")
        if not (0.0 < self.x_min < self.x0):
            raise ConfigurationError(f"need 0 < x_min < x0, got x_min={self.x_min}, x0={self.x0}")
        nodes = self.cross_section.nodes()
        h0 = self.h0_values(nodes)
        if not np.all(np.isfinite(h0)) or np.any(h0 <= 0.0):
            raise ConfigurationError("h0 is not positive definite on the grid")
        for x in np.linspace(self.x_min, self.x0, 33):
            c = self.coefficients(x, nodes)
            if not np.all(np.isfinite(c)) or np.any(c <= 0.0):
                raise ConfigurationError(f"h(x) is not positive definite at x={x:.6g}")
        object.__setattr__(self, "c2_bound", self._second_difference_bound(nodes))
        if not math.isfinite(self.c2_bound):
            raise ConfigurationError("metric coefficients are not C^2 in x")

    @property
    def t0(self):
        return -math.log(self.x0)

    @property
    def t_max(self):
        return -math.log(self.x_min)

    @property
    def has_linear_term(self):
        return self.linear_term is not None

    def h0_values(self, coords=None):
        coords = self.cross_section.nodes() if coords is None else coords
        return _components(self.h0(coords), self.n, coords.shape[1])

    def coefficients(self, x, coords=None):
        """Diagonal coefficients of ``h(x)`` at ``coords``, shape ``(n, m)``."""
        coords = self.cross_section.nodes() if coords is None else coords
        m = coords.shape[1]
        c = self.h0_values(coords)
        if self.h1 is not None:
            c = c + x * x * _components(self.h1(x, coords), self.n, m)
        if self.linear_term is not None:
            c = c + x * _components(self.linear_term(x, coords), self.n, m)
        return c

    def sqrt_det(self, x, coords=None):
        """``sqrt(det h(x))`` relative to the reference volume form."""
        return np.sqrt(np.prod(self.coefficients(x, coords), axis=0))

    def _second_difference_bound(self, nodes, samples=65):
        xs = np.linspace(0.0, self.x0, samples)
        dx = xs[1] - xs[0]
        vals = np.array([self.coefficients(x, nodes) for x in xs])
        second = np.abs(vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / dx**2
        return float(second.max()) if second.size else 0.0

    def check_x(self, x, slack=1e-12):
        if not (self.x_min * (1.0 - slack) <= x <= self.x0 * (1.0 + slack)):
            raise DomainError(f"x={x!r} outside [{self.x_min!r}, {self.x0!r}]")


def volume_density(spec, x):
    """Volume density of ``h(x)`` at the grid nodes, including the zonal factor."""
    spec.check_x(x)
    nodes = spec.cross_section.nodes()
    return spec.sqrt_det(x, nodes) * spec.cross_section.reference_density(nodes)


@dataclass(frozen=True)
class ShortRangeResult:
    passed: bool
    max_linear_coefficient: float

    def __bool__(self):
        return self.passed


def check_short_range(spec, tol=1e-8, step=1e-4):
    """Test that ``dh/dx`` vanishes at ``x = 0`` (no linear term in the Taylor series).

    Uses the one-sided second-order difference ``(-3 h(0) + 4 h(d) - h(2 d)) / 2 d``.
    """
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    if not (0.0 < step and 2.0 * step < spec.x0):
        raise ConfigurationError(f"step {step!r} too coarse for a one-sided difference on [0, {spec.x0}]")
    nodes = spec.cross_section.nodes()
    h = [spec.coefficients(k * step, nodes) for k in range(3)]
    deriv = (-3.0 * h[0] + 4.0 * h[1] - h[2]) / (2.0 * step)
    worst = float(np.max(np.abs(deriv)))
    return ShortRangeResult(worst <= tol, worst)


# -- built-in charts -----------------------------------------------------------


def desitter(n, size=64, x0=1.0, x_min=DEFAULT_X_MIN, linear=0.0):
    """Zonal reduction of global de Sitter space, ``h = (x^2 + 1)^2 / 4`` times the round metric.

    ``linear`` injects ``linear * h0`` as a first-order term for negative controls.
    """
    cs = CrossSection(SPHERE, n, size)
    linear_term = None
    if linear:
        linear_term = lambda x, y: np.full(y.shape[1], 0.25 * linear)  # noqa: E731
    return MetricSpec(
        n=n,
        cross_section=cs,
        h0=lambda y: np.full(y.shape[1], 0.25),
        h1=lambda x, y: np.full(y.shape[1], 0.25 * (2.0 + x * x)),
        linear_term=linear_term,
        x0=x0,
        x_min=x_min,
        name="desitter",
        params=dict(n=n, size=size, x0=x0, x_min=x_min, linear=linear),
    )


def product(n, size=64, x0=1.0, x_min=DEFAULT_X_MIN, cross_section=TORUS, linear=0.0):
    """Exact product cylinder: ``h`` independent of ``x`` (flat torus or round sphere)."""
    cs = CrossSection(cross_section, n, size)
    linear_term = None
    if linear:
        linear_term = lambda x, y: np.full(y.shape[1], float(linear))  # noqa: E731
    return MetricSpec(
        n=n,
        cross_section=cs,
        h0=lambda y: np.ones(y.shape[1]),
        linear_term=linear_term,
        x0=x0,
        x_min=x_min,
        name="product",
        params=dict(n=n, size=size, x0=x0, x_min=x_min, cross_section=cross_section, linear=linear),
    )


def torus_perturbed(n, size=64, x0=1.0, x_min=DEFAULT_X_MIN, amplitude=0.5, linear=0.0):
    """Flat torus with an anisotropic ``x^2`` perturbation ``1 + a x^2 cos(theta_1 + d)``."""
    if abs(amplitude) * x0**2 >= 1.0:
        raise ConfigurationError("perturbation amplitude too large: h loses positivity")
    cs = CrossSection(TORUS, n, size)

    def h1(x, y):
        return np.stack([amplitude * np.cos(y[0] + d) for d in range(n)])

    linear_term = None
    if linear:
        linear_term = lambda x, y: np.full(y.shape[1], float(linear))  # noqa: E731
    return MetricSpec(
        n=n,
        cross_section=cs,
        h0=lambda y: np.ones(y.shape[1]),
        h1=h1,
        linear_term=linear_term,
        x0=x0,
        x_min=x_min,
        name="torus-perturbed",
        params=dict(n=n, size=size, x0=x0, x_min=x_min, amplitude=amplitude, linear=linear),
    )


def _table_function(cs, values):
    """Interpolate grid values given at the nodes of a one-dimensional cross-section."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] != cs.size:
        raise ConfigurationError(f"table has {values.shape[-1]} grid values, grid has {cs.size}")
    xp = cs.axis()
    period = 2.0 * math.pi if cs.kind == TORUS else None

    def interp(coords):
        y = coords[0]
        if values.ndim == 1:
            return np.interp(y, xp, values, period=period)
        return np.stack([np.interp(y, xp, row, period=period) for row in values])

    return interp


def _poly_table(cs, table):
    """``sum_k c_k(y) x^k`` from a list of per-power grid-value tables."""
    terms = [_table_function(cs, c) for c in table]

    def fn(x, coords):
        return sum(x**k * t(coords) for k, t in enumerate(terms))

    return fn


def custom(n, cross_section, h0, h1=None, linear=None, x0=1.0, x_min=DEFAULT_X_MIN):
    """Metric from tables: ``h0`` grid values; ``h1`` and ``linear`` polynomial tables in ``x``."""
    h0 = np.asarray(h0, dtype=float)
    cs = CrossSection(cross_section, n, h0.shape[-1])
    if cs.dim != 1:
        raise ConfigurationError("tabulated metrics need a one-dimensional grid")
    return MetricSpec(
        n=n,
        cross_section=cs,
        h0=_table_function(cs, h0),
        h1=None if h1 is None else _poly_table(cs, h1),
        linear_term=None if linear is None else _poly_table(cs, linear),
        x0=x0,
        x_min=x_min,
        name="custom",
        params=dict(n=n, cross_section=cross_section, x0=x0, x_min=x_min),
    )


CHARTS = {
    "desitter": desitter,
    "product": product,
    "torus-perturbed": torus_perturbed,
    "custom": custom,
}


def build_chart(name, **params):
    """Construct a built-in chart by name, e.g. ``build_chart("desitter", n=3, size=64)``."""
    try:
        factory = CHARTS[name]
    except KeyError:
        raise ConfigurationError(f"unknown chart {name!r}; choose from {sorted(CHARTS)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for chart {name!r}: {exc}") from None
