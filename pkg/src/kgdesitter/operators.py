"""Discrete d'Alembertian in the boundary chart and its conformal reduction.

Sign convention (used everywhere in the package).  ``Delta_h`` is the positive
Laplacian of ``h(x)``.  For ``g = (-dx^2 + h) / x^2`` the wave operator is::

    Box u = x^2 u_xx + (1 - n) x u_x + rho x u_x + x^2 Delta_h u,
    rho   = x d_x sqrt(h) / sqrt(h).

With ``P = Box + (n^2 - 1)/4`` and ``r = x^((n-1)/2)`` one has
``r^-1 P r = x^2 Pbar`` where::

    Pbar v = v_xx + (d_x sqrt(h) / sqrt(h)) v_x + Delta_h v + V v,
    V      = ((n - 1)/2) rho / x^2.

On an exact product cylinder the reduced equation is ``v_xx + Delta_h v = g``.
``V`` is bounded at ``x = 0`` iff ``h`` has no linear term in ``x``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import ConfigurationError, SingularPotentialWarning
from .geometry import SPHERE, check_short_range

logger = logging.getLogger(__name__)

CACHE_SIZE = 1 << 14
RELATIVE_DRIFT_STEP = 1e-4


def kg_shift(n):
    """Conformal Klein-Gordon mass ``(n^2 - 1) / 4``."""
    return (n * n - 1) / 4.0


def conformal_exponent(n):
    """Exponent of ``r(x) = x^((n-1)/2)``."""
    return (n - 1) / 2.0


@dataclass(frozen=True)
class LaplacianData:
    """Finite-volume ``Delta_h`` at one value of ``x``.

    ``mass`` holds the cell volumes of ``dh`` at the nodes; ``faces[d]`` the
    face coefficients ``sqrt(h) h^{dd}`` along axis ``d``.  The operator is
    ``M^-1 K`` with ``K`` symmetric positive semi-definite.
    """

    kind: str
    shape: tuple
    spacing: float
    cell: float
    mass: np.ndarray
    faces: tuple

    def apply(self, u):
        u = np.asarray(u)
        grid = u.reshape(self.shape + u.shape[1:])
        div = np.zeros_like(grid)
        for axis, c in enumerate(self.faces):
            c = c.reshape(self.shape + (1,) * (grid.ndim - len(self.shape)))
            if self.kind == SPHERE:
                flux = c[:-1] * np.diff(grid, axis=0)
                div[:-1] += flux
                div[1:] -= flux
            else:
                flux = c * (np.roll(grid, -1, axis=axis) - grid)
                div += flux - np.roll(flux, 1, axis=axis)
        w = self.mass.reshape(self.mass.shape + (1,) * (u.ndim - 1))
        return (-div.reshape(u.shape)) * (self.cell / self.spacing**2) / w

    def _difference(self, axis):
        size = self.shape[axis]
        if self.kind == SPHERE:
            d = sp.diags([-np.ones(size - 1), np.ones(size - 1)], [0, 1], shape=(size - 1, size))
        else:
            d = sp.diags([-np.ones(size), np.ones(size - 1), np.ones(1)], [0, 1, 1 - size], shape=(size, size))
        eye = [sp.identity(s) for s in self.shape]
        eye[axis] = d
        out = eye[0]
        for m in eye[1:]:
            out = sp.kron(out, m)
        return out.tocsr()

    def stiffness(self):
        k = None
        for axis, c in enumerate(self.faces):
            g = self._difference(axis)
            cf = c[:-1] if self.kind == SPHERE else c
            term = g.T @ sp.diags(cf * self.cell / self.spacing**2) @ g
            k = term if k is None else k + term
        return k.toarray()

    def matrix(self):
        return self.stiffness() / self.mass[:, None]

    def dirichlet(self, u):
        """``<Delta_h u, u>`` in ``L^2(dh)``: the discrete ``int |grad u|_h^2 dh``."""
        total = 0.0
        grid = np.asarray(u).reshape(self.shape)
        for axis, c in enumerate(self.faces):
            c = c.reshape(self.shape)
            if self.kind == SPHERE:
                diff = np.diff(grid, axis=0)
                total += np.sum(c[:-1] * diff**2)
            else:
                diff = np.roll(grid, -1, axis=axis) - grid
                total += np.sum(c * diff**2)
        return float(total * self.cell / self.spacing**2)


@dataclass(frozen=True)
class Eigensystem:
    values: np.ndarray
    vectors: np.ndarray  # columns orthonormal in the mass inner product
    mass: np.ndarray

    def coefficients(self, u):
        return self.vectors.T @ (self.mass * u)

    def multiply(self, u, symbol):
        """Apply ``f(Delta)`` given the sampled symbol ``f(lambda_j)``."""
        return self.vectors @ (symbol * self.coefficients(u))


class BoundaryChartOperator:
    """Discrete wave operator ``Box`` of ``(-dx^2 + h) / x^2``.

    ``drift_step`` is the difference step used for ``rho`` (relative
    ``1e-4 x`` when omitted).
    """

    def __init__(self, spec, drift_step=None):
        self.spec = spec
        self.n = spec.n
        self.drift_step = drift_step
        self._nodes = spec.cross_section.nodes()
        self._ref = spec.cross_section.reference_weights()
        cs = spec.cross_section
        self._faces = [cs.edges(a) for a in range(cs.dim)]
        self._face_ref = [cs.reference_density(e) for e in self._faces]
        if cs.kind == SPHERE:
            # no flux through the poles
            self._face_ref[0] = self._face_ref[0].copy()
            self._face_ref[0][-1] = 0.0
        self.laplacian = lru_cache(maxsize=CACHE_SIZE)(self._laplacian)
        self.eigensystem = lru_cache(maxsize=CACHE_SIZE)(self._eigensystem)
        self.density_drift = lru_cache(maxsize=CACHE_SIZE)(self._density_drift)

    def _step(self, x):
        return self.drift_step if self.drift_step else RELATIVE_DRIFT_STEP * x

    def sqrt_det(self, x):
        return self.spec.sqrt_det(x, self._nodes)

    def _laplacian(self, x):
        cs = self.spec.cross_section
        coef = self.spec.coefficients(x, self._nodes)
        if np.any(coef <= 0) or not np.all(np.isfinite(coef)):
            raise ConfigurationError(f"h is not positive definite at x={x:.6g}")
        mass = np.sqrt(np.prod(coef, axis=0)) * self._ref
        faces = []
        for axis, (pts, ref) in enumerate(zip(self._faces, self._face_ref)):
            cf = self.spec.coefficients(x, pts)
            faces.append(np.sqrt(np.prod(cf, axis=0)) / cf[axis] * ref)
        return LaplacianData(cs.kind, cs.shape, cs.spacing, cs.cell, mass, tuple(faces))

    def _eigensystem(self, x):
        lap = self.laplacian(x)
        vals, vecs = scipy.linalg.eigh(lap.stiffness(), np.diag(lap.mass))
        return Eigensystem(np.clip(vals, 0.0, None), vecs, lap.mass)

    def _density_drift(self, x):
        """``rho = x d_x log sqrt(h)`` by a central difference of the log density."""
        d = self._step(x)
        lp = np.log(self.sqrt_det(x + d))
        lm = np.log(self.sqrt_det(x - d))
        return x * (lp - lm) / (2.0 * d)

    def apply(self, jet, x):
        """``Box u`` at ``x`` from the jet ``(u, u_x, u_xx)``."""
        u, ux, uxx = jet
        rho = self.density_drift(x)
        return x * x * uxx + (1 - self.n) * x * ux + rho * x * ux + x * x * self.laplacian(x).apply(u)

    def apply_kg(self, jet, x):
        """``(Box + (n^2 - 1)/4) u``."""
        return self.apply(jet, x) + kg_shift(self.n) * jet[0]


class ReducedOperator:
    """``Pbar = Box_gbar + V`` on the compact cylinder ``-dx^2 + h(x)``.

    The drift ``d_x sqrt(h) / sqrt(h)`` is differenced from the density itself
    (divergence form), independently of the chart operator's ``rho``.
    """

    def __init__(self, chart, singular=False):
        self.chart = chart
        self.spec = chart.spec
        self.n = chart.n
        self.alpha = conformal_exponent(self.n)
        self.singular = singular
        self.drift = lru_cache(maxsize=CACHE_SIZE)(self._drift)
        self.potential = lru_cache(maxsize=CACHE_SIZE)(self._potential)

    def laplacian(self, x):
        return self.chart.laplacian(x)

    def _drift(self, x):
        d = self.chart._step(x)
        s = self.chart.sqrt_det(x)
        return (self.chart.sqrt_det(x + d) - self.chart.sqrt_det(x - d)) / (2.0 * d * s)

    def _potential(self, x):
        if self.singular:
            x = max(x, self.spec.x_min)
        return self.alpha * self.drift(x) / x

    def potential_vanishes(self):
        return self.spec.h1 is None and self.spec.linear_term is None

    def apply(self, jet, x):
        """``Pbar v`` at ``x`` from the jet ``(v, v_x, v_xx)``."""
        v, vx, vxx = jet
        return vxx + self.drift(x) * vx + self.laplacian(x).apply(v) + self.potential(x) * v

    def tau_rhs(self, x, v, vx, g=None):
        """Time derivative in ``tau = -log x`` of the first-order state ``(v, v_x)``."""
        rho = x * self.drift(x)
        force = self.laplacian(x).apply(v) + self.potential(x) * v
        if g is not None:
            force = force - g
        return -x * vx, rho * vx + x * force


def build_full_operator(spec, drift_step=None):
    """Discrete ``Box`` for ``spec``; raises if ``h`` degenerates at a sampled ``x``."""
    op = BoundaryChartOperator(spec, drift_step)
    for x in np.linspace(spec.x_min, spec.x0, 9):
        op.laplacian(float(x))
    return op


def conjugate(op, tol=1e-8):
    """Conformally reduce ``op``; warns when the reduced potential is singular at ``x = 0``."""
    gate = check_short_range(op.spec, tol)
    singular = not gate.passed
    if singular:
        warnings.warn(
            f"metric has a linear term (|dh/dx(0)| = {gate.max_linear_coefficient:.3g}); "
            f"reduced potential ~ 1/x, evaluation capped at x_min={op.spec.x_min:.3g}",
            SingularPotentialWarning,
            stacklevel=2,
        )
    return ReducedOperator(op, singular=singular)


def conjugation_identity_residual(op, reduced, v, x):
    """``||r^-1 P (r v) - x^2 Pbar v|| / ||v||`` in ``L^2(dh)`` at ``x``.

    ``v`` is a callable returning the jet ``(v, v_x, v_xx)`` at ``x``.
    """
    n = op.n
    a = conformal_exponent(n)
    jet = v(x)
    v0, v1, v2 = jet
    mass = op.laplacian(x).mass
    norm = np.sqrt(np.sum(mass * v0**2))
    if norm == 0.0:
        raise ValueError("residual undefined for v = 0")
    r = x**a
    r1 = a * x ** (a - 1) if a else 0.0
    r2 = a * (a - 1) * x ** (a - 2) if a else 0.0
    u_jet = (r * v0, r1 * v0 + r * v1, r2 * v0 + 2 * r1 * v1 + r * v2)
    lhs = op.apply_kg(u_jet, x) / r
    rhs = x * x * reduced.apply(jet, x)
    return float(np.sqrt(np.sum(mass * (lhs - rhs) ** 2)) / norm)
