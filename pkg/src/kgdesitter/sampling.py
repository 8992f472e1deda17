"""Band-limited random data, forcing and test fields.

Random fields are finite sums of continuum eigenfunctions of the reference
cross-section (zonal Gegenbauer harmonics on ``S^n``, Fourier modes on ``T^n``),
evaluated at the grid nodes.  The same seed therefore gives the same continuum
function on every grid, which is what refinement comparisons need.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_gegenbauer

from .geometry import SPHERE
from .operators import conformal_exponent
from .solver import StateVector


@dataclass(frozen=True)
class HarmonicBasis:
    """First ``count`` eigenfunctions of the reference Laplacian, unit in ``L^2``."""

    kind: str
    n: int
    count: int

    def eigenvalues(self):
        if self.kind == SPHERE:
            j = np.arange(self.count)
            return j * (j + self.n - 1.0)
        return np.array([float(np.dot(k, k)) for k, _ in self._fourier_modes()])

    def evaluate(self, coords):
        """Matrix of shape ``(count, m)``."""
        coords = np.atleast_2d(coords)
        if self.kind == SPHERE:
            theta = coords[0]
            return np.stack([self._zonal(j, theta) / self._zonal_norm(j) for j in range(self.count)])
        rows = []
        vol = (2.0 * math.pi) ** self.n
        for k, trig in self._fourier_modes():
            phase = np.tensordot(np.asarray(k, dtype=float), coords, axes=1)
            if not any(k):
                rows.append(np.full(coords.shape[1], 1.0 / math.sqrt(vol)))
            else:
                rows.append(trig(phase) * math.sqrt(2.0 / vol))
        return np.stack(rows)

    def _zonal(self, j, theta):
        if self.n == 1:
            return np.cos(j * theta)
        return eval_gegenbauer(j, (self.n - 1) / 2.0, np.cos(theta))

    def _zonal_norm(self, j):
        from .geometry import sphere_area

        gx, gw = np.polynomial.legendre.leggauss(4 * self.count + 64)
        theta = 0.5 * math.pi * (gx + 1.0)
        weight = np.sin(theta) ** (self.n - 1) if self.n > 1 else np.ones_like(theta)
        area = sphere_area(self.n - 1)
        return math.sqrt(area * 0.5 * math.pi * np.sum(gw * weight * self._zonal(j, theta) ** 2))

    def _fourier_modes(self):
        radius = 1
        while True:
            modes = []
            for k in itertools.product(range(-radius, radius + 1), repeat=self.n):
                if sum(c * c for c in k) > radius**2:
                    continue
                if not any(k):
                    modes.append((k, None))
                elif k > tuple(-c for c in k):
                    modes.append((k, np.cos))
                    modes.append((k, np.sin))
            if len(modes) >= self.count:
                modes.sort(key=lambda m: (sum(c * c for c in m[0]), m[0], m[1] is np.sin))
                return modes[: self.count]
            radius += 1


def default_band(size):
    """Lowest third of the modes resolvable on ``size`` points."""
    return max(1, size // 3)


def basis_for(spec, band):
    return HarmonicBasis(spec.cross_section.kind, spec.n, band)


def band_limited(spec, coeffs, basis=None):
    basis = basis or basis_for(spec, len(coeffs))
    return np.asarray(coeffs) @ basis.evaluate(spec.cross_section.nodes())


def random_data(spec, rng, band=None, normalize=True, operator=None):
    """Gaussian band-limited ``(u0, d_t u0)`` at ``x0`` as a reduced state.

    With ``normalize`` the data have unit ``H^1 x L^2`` norm against ``dh / x0^n``.
    """
    from .norms import data_norm

    band = band or default_band(spec.cross_section.size)
    basis = basis_for(spec, band)
    phi = basis.evaluate(spec.cross_section.nodes())
    u0 = rng.standard_normal(band) @ phi
    u1 = rng.standard_normal(band) @ phi
    state = StateVector.from_physical(spec.x0, u0, u1, spec.n)
    if normalize:
        h1, l2 = data_norm(state, spec, operator=operator)
        state = state.scaled(1.0 / (h1 + l2))
    return state


@dataclass(frozen=True)
class Forcing:
    """Smooth forcing ``g(x, y) = sum_jm a_jm cos(m pi x / x0) phi_j(y)`` on the cylinder.

    ``reduced(x)`` is ``g``; ``physical(x)`` is ``f = x^(2 + (n-1)/2) g``, the
    right-hand side of ``(Box + (n^2-1)/4) u = f``.
    """

    x0: float
    n: int
    amplitudes: np.ndarray  # (temporal, band)
    phi: np.ndarray  # (band, npts)

    def reduced(self, x):
        m = np.arange(self.amplitudes.shape[0])
        temporal = np.cos(m * math.pi * x / self.x0)
        return (temporal @ self.amplitudes) @ self.phi

    def physical(self, x):
        return x ** (2.0 + conformal_exponent(self.n)) * self.reduced(x)

    def __call__(self, x):
        return self.reduced(x)

    def scaled(self, c):
        return Forcing(self.x0, self.n, c * self.amplitudes, self.phi)


def random_forcing(spec, rng, band=None, temporal=3):
    band = band or default_band(spec.cross_section.size)
    phi = basis_for(spec, band).evaluate(spec.cross_section.nodes())
    amps = rng.standard_normal((temporal, band))
    return Forcing(spec.x0, spec.n, amps, phi)


def random_field_jet(spec, rng, band=6):
    """Smooth ``v(x, y)`` with exact ``x``-derivatives; returns ``x -> (v, v_x, v_xx)``."""
    phi = basis_for(spec, band).evaluate(spec.cross_section.nodes())
    a = rng.standard_normal(band)
    b = rng.standard_normal(band)
    w = 1.0 + 0.5 * np.arange(band)

    def jet(x):
        c, s = np.cos(w * x), np.sin(w * x)
        v = (a * c + b * s) @ phi
        vx = (w * (-a * s + b * c)) @ phi
        vxx = (-(w**2) * (a * c + b * s)) @ phi
        return v, vx, vxx

    return jet


def run_rng(seed, run):
    """Independent generator for run ``run`` of the ensemble seeded by ``seed``."""
    return np.random.default_rng([int(seed), int(run)])
