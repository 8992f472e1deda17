"""Method-of-lines RK4 for the reduced cylinder equation ``Pbar v = g``.

The state ``(v, v_x)`` is advanced in ``tau = -log x`` with uniform steps from
``x0`` down to ``x_min``::

    dv/dtau   = -x v_x
    dv_x/dtau = rho v_x + x (Delta_h v + V v - g),    rho = x d_x log sqrt(h)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import ConfigurationError, SolverError
from .operators import conformal_exponent

logger = logging.getLogger(__name__)

MIN_STEPS = 16
DEFAULT_NODE_STRIDE = 4
ENERGY_JUMP = 10.0


@dataclass(frozen=True)
class StateVector:
    """Reduced field ``v`` and its ``x``-derivative at one value of ``x``."""

    x: float
    v: np.ndarray
    v_x: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        vx = np.asarray(self.v_x, dtype=float)
        if v.shape != vx.shape:
            raise ValueError("v and v_x must have the same shape")
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(vx))):
            raise ValueError("state has non-finite entries")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "v_x", vx)

    def scaled(self, c):
        return StateVector(self.x, c * self.v, c * self.v_x)

    def __add__(self, other):
        if other.x != self.x:
            raise ValueError("states live at different x")
        return StateVector(self.x, self.v + other.v, self.v_x + other.v_x)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    @classmethod
    def zeros(cls, x, npts):
        return cls(x, np.zeros(npts), np.zeros(npts))

    @classmethod
    def from_physical(cls, x, u0, u1, n):
        """Reduced state from ``u(x) = u0`` and ``d_t u = -x d_x u = u1``."""
        a = conformal_exponent(n)
        r = x**a
        v = np.asarray(u0, dtype=float) / r
        v_x = (-np.asarray(u1, dtype=float) / r - a * v) / x
        return cls(x, v, v_x)

    def physical(self, n):
        """``(u, d_t u)`` for ``u = x^((n-1)/2) v``."""
        a = conformal_exponent(n)
        r = self.x**a
        return r * self.v, -r * (a * self.v + self.x * self.v_x)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Fields at quadrature nodes, ``x`` strictly decreasing from ``x0``.

    ``kind`` is ``"reduced"`` (fields are ``v``) or ``"physical"`` (``u``).
    """

    x: np.ndarray
    v: np.ndarray
    v_x: Optional[np.ndarray]
    n: int
    kind: str = "reduced"

    def __post_init__(self):
        if len(self.x) < 2 or np.any(np.diff(self.x) >= 0):
            raise ValueError("nodes must be strictly decreasing with at least two entries")

    @property
    def t(self):
        return -np.log(self.x)

    @property
    def final(self):
        return StateVector(float(self.x[-1]), self.v[-1], self.v_x[-1])

    def scaled(self, c):
        return replace(self, v=c * self.v, v_x=None if self.v_x is None else c * self.v_x)

    def __sub__(self, other):
        vx = None if self.v_x is None or other.v_x is None else self.v_x - other.v_x
        return replace(self, v=self.v - other.v, v_x=vx)

    def __add__(self, other):
        vx = None if self.v_x is None or other.v_x is None else self.v_x + other.v_x
        return replace(self, v=self.v + other.v, v_x=vx)

    def truncated(self, x_min):
        keep = self.x >= x_min * (1.0 - 1e-12)
        return replace(self, x=self.x[keep], v=self.v[keep], v_x=None if self.v_x is None else self.v_x[keep])

    def interpolator(self):
        """Cubic Hermite interpolant in ``tau`` returning fields at any ``x`` in range."""
        if self.v_x is None:
            raise ValueError("interpolation needs stored derivatives")
        tau = self.t
        dv_dtau = -self.x[:, None] * self.v_x
        spline = CubicHermiteSpline(tau, self.v, dv_dtau, axis=0)
        return lambda x: spline(-math.log(x))


def reconstruct_u(trajectory, n):
    """Map a reduced trajectory to ``u = x^((n-1)/2) v`` (and ``u_x`` by the product rule)."""
    if trajectory.kind != "reduced":
        raise ValueError("trajectory is already physical")
    a = conformal_exponent(n)
    x = trajectory.x[:, None]
    r = x**a
    u = r * trajectory.v
    ux = None
    if trajectory.v_x is not None:
        ux = (a * x ** (a - 1) if a else 0.0) * trajectory.v + r * trajectory.v_x
    return TrajectoryRecord(trajectory.x.copy(), u, ux, n, "physical")


def reduce_u(trajectory, n):
    """Inverse of :func:`reconstruct_u`."""
    if trajectory.kind != "physical":
        raise ValueError("trajectory is already reduced")
    a = conformal_exponent(n)
    x = trajectory.x[:, None]
    r = x**a
    v = trajectory.v / r
    vx = None
    if trajectory.v_x is not None:
        vx = (trajectory.v_x - (a * x ** (a - 1) if a else 0.0) * v) / r
    return TrajectoryRecord(trajectory.x.copy(), v, vx, n, "reduced")


@dataclass(frozen=True)
class EnergyReading:
    x: float
    kinetic: float
    gradient: float
    potential_l2: float

    @property
    def total(self):
        """Kinetic plus gradient energy (the quantity bounded in the energy estimate)."""
        return self.kinetic + self.gradient


def energy(reduced, state):
    """Energy density of the reduced field integrated against ``dh`` at ``state.x``."""
    lap = reduced.laplacian(state.x)
    m = lap.mass
    return EnergyReading(
        x=state.x,
        kinetic=float(np.sum(m * state.v_x**2)),
        gradient=lap.dirichlet(state.v),
        potential_l2=float(np.sum(m * state.v**2)),
    )


def tau_grid(spec, steps):
    tau0 = -math.log(spec.x0)
    tau1 = -math.log(spec.x_min)
    return tau0, (tau1 - tau0) / steps


def solve_reduced(
    reduced,
    init,
    forcing: Optional[Callable] = None,
    steps: int = 1024,
    node_stride: int = DEFAULT_NODE_STRIDE,
    monitor: bool = True,
):
    """Integrate ``Pbar v = g`` from ``init`` (at ``x0``) down to ``x_min``.

    ``forcing(x)`` returns the reduced right-hand side ``g`` on the grid.
    Fields are stored every ``node_stride`` steps and at the final step.
    """
    spec = reduced.spec
    if steps < MIN_STEPS:
        raise ConfigurationError(f"need at least {MIN_STEPS} steps, got {steps}")
    if node_stride < 1:
        raise ConfigurationError("node_stride must be >= 1")
    if not math.isclose(init.x, spec.x0, rel_tol=1e-12):
        raise ConfigurationError(f"initial state at x={init.x}, expected x0={spec.x0}")
    if init.v.shape != (spec.cross_section.npts,):
        raise ConfigurationError("initial state does not match the grid")
    if reduced.singular:
        logger.warning("solving with a singular reduced potential (metric violates the short-range condition)")

    tau0, dt = tau_grid(spec, steps)
    half = 0.5 * dt
    g = forcing if forcing is not None else (lambda x: None)

    def rhs(tau, v, vx):
        x = math.exp(-tau)
        return reduced.tau_rhs(x, v, vx, g(x))

    v, vx = init.v.copy(), init.v_x.copy()
    xs, vs, vxs = [spec.x0], [v.copy()], [vx.copy()]
    e_max = _monitor_energy(reduced, spec.x0, v, vx) if monitor else 0.0
    for i in range(steps):
        tau = tau0 + i * dt
        k1v, k1w = rhs(tau, v, vx)
        k2v, k2w = rhs(tau + half, v + half * k1v, vx + half * k1w)
        k3v, k3w = rhs(tau + half, v + half * k2v, vx + half * k2w)
        k4v, k4w = rhs(tau + dt, v + dt * k3v, vx + dt * k3w)
        v = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        vx = vx + (dt / 6.0) * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        x = spec.x_min if i == steps - 1 else math.exp(-(tau0 + (i + 1) * dt))
        if not (np.all(np.isfinite(v)) and np.all(np.isfinite(vx))):
            raise SolverError(f"non-finite state at step {i + 1} (x={x:.6g})", step=i + 1, x=x)
        if monitor:
            e = _monitor_energy(reduced, math.exp(-(tau0 + (i + 1) * dt)), v, vx)
            if i >= 4 and e > ENERGY_JUMP * e_max and e_max > 0.0:
                raise SolverError(
                    f"energy grew {e / e_max:.3g}x in one step at step {i + 1} (x={x:.6g}); "
                    "time step violates the stability limit",
                    step=i + 1,
                    x=x,
                )
            e_max = max(e_max, e)
        if (i + 1) % node_stride == 0 or i == steps - 1:
            xs.append(x)
            vs.append(v.copy())
            vxs.append(vx.copy())
    return TrajectoryRecord(np.array(xs), np.array(vs), np.array(vxs), reduced.n, "reduced")


def _monitor_energy(reduced, x, v, vx):
    lap = reduced.laplacian(x)
    m = lap.mass
    return float(np.sum(m * (vx**2 + v**2))) + lap.dirichlet(v)


def energy_history(reduced, trajectory):
    """:class:`EnergyReading` at every stored node of a reduced trajectory."""
    if trajectory.kind != "reduced" or trajectory.v_x is None:
        raise ValueError("need a reduced trajectory with stored v_x")
    return [
        energy(reduced, StateVector(float(x), v, vx))
        for x, v, vx in zip(trajectory.x, trajectory.v, trajectory.v_x)
    ]
