import math

import numpy as np
import pytest

from kgdesitter.errors import DomainError
from kgdesitter.exponents import AdmissibleTriple, DualPair
from kgdesitter.geometry import build_chart
from kgdesitter.norms import MixedNormSpec, data_norm, mixed_norm, sobolev_norm, weighted_lp
from kgdesitter.operators import BoundaryChartOperator
from kgdesitter.solver import StateVector, TrajectoryRecord


def test_spec_from_quintic_triple():
    s = MixedNormSpec.from_triple(AdmissibleTriple(5, 10, 1, 3))
    assert (s.p, s.q, s.sigma, s.t_weight, s.measure_power) == (5, 10, 0, 2.5, 3)
    assert s.x_weight == -3.5


def test_spec_from_dual_pair():
    s = MixedNormSpec.from_dual(DualPair(1, 2, 1, 3))
    assert (s.p, s.q, s.sigma, s.x_weight) == (1, 2, 0, -1.5)


@pytest.mark.parametrize("w", [0.0, 2.5, -1.0, 1e-5])
def test_weighted_lp_exact_for_constant(w):
    t = np.linspace(0.0, 3.0, 7)
    expect = (math.expm1(w * 3.0) / w) if w else 3.0
    assert weighted_lp(t, np.full(7, 2.0), 2.0, w) == pytest.approx(math.sqrt(4.0 * expect), rel=1e-12)


def test_weighted_lp_exact_for_linear_power():
    # N^p linear in t is integrated exactly against the exponential weight
    t = np.array([0.0, 0.4, 1.1, 2.0])
    f = 1.0 + t
    w = 0.7
    exact = (math.e ** (2 * w) * (3.0 - 1.0 / w) - (1.0 - 1.0 / w)) / w
    assert weighted_lp(t, f, 1.0, w) == pytest.approx(exact, rel=1e-12)


def test_weighted_lp_infinity_is_max():
    assert weighted_lp(np.arange(4.0), np.array([1.0, -5.0, 2.0, 0.0]), math.inf, 3.0) == 5.0


def test_sobolev_zero_order_is_lq(desitter3):
    op = BoundaryChartOperator(desitter3)
    u = np.random.default_rng(0).standard_normal(desitter3.cross_section.npts)
    x = 0.6
    lap = op.laplacian(x)
    expect = np.sum(np.abs(u) ** 3 * lap.mass / x**3) ** (1 / 3)
    assert sobolev_norm(u, x, 0.0, 3.0, desitter3, op) == pytest.approx(expect, rel=1e-12)


def test_h1_norm_via_quadratic_form(desitter3):
    """``||(1 + x^2 Delta)^(1/2) u||^2 = ||u||^2 + x^2 <Delta u, u>``."""
    op = BoundaryChartOperator(desitter3)
    u = np.random.default_rng(1).standard_normal(desitter3.cross_section.npts)
    x = 0.4
    lap = op.laplacian(x)
    sq = (np.sum(lap.mass * u * u) + x * x * lap.dirichlet(u)) / x**3
    assert sobolev_norm(u, x, 1.0, 2.0, desitter3, op) == pytest.approx(math.sqrt(sq), rel=1e-10)


def test_sobolev_domain(desitter3):
    u = np.ones(desitter3.cross_section.npts)
    for q in (1.0, math.inf, 0.5):
        with pytest.raises(DomainError):
            sobolev_norm(u, 0.5, 0.0, q, desitter3)


def test_homogeneity(desitter3):
    op = BoundaryChartOperator(desitter3)
    u = np.random.default_rng(2).standard_normal(desitter3.cross_section.npts)
    a = sobolev_norm(u, 0.5, 0.5, 4.0, desitter3, op)
    assert sobolev_norm(-3 * u, 0.5, 0.5, 4.0, desitter3, op) == pytest.approx(3 * a, rel=1e-12)


def test_mixed_norm_rejects_nonfinite(desitter3):
    npts = desitter3.cross_section.npts
    v = np.ones((2, npts))
    v[1, 0] = np.nan
    traj = TrajectoryRecord(np.array([1.0, 0.5]), v, None, 3, "physical")
    with pytest.raises(ValueError, match="node 1"):
        mixed_norm(traj, MixedNormSpec(5, 10, 0, 2.5, 3), desitter3)


def test_mixed_norm_constant_profile(desitter3):
    """``u = c`` on every node: spatial norm is ``c (vol / x^n)^(1/q)``."""
    op = BoundaryChartOperator(desitter3)
    x = np.exp(-np.linspace(0, 2, 41))
    u = np.ones((41, desitter3.cross_section.npts))
    traj = TrajectoryRecord(x, u, None, 3, "physical")
    spec = MixedNormSpec(2, 2, 0, 0.0, 3)
    got = mixed_norm(traj, spec, desitter3, op)
    vals = np.array([sobolev_norm(u[0], xi, 0, 2, desitter3, op) for xi in x])
    t = -np.log(x)
    assert got == pytest.approx(math.sqrt(np.trapezoid(vals**2, t)), rel=1e-12)


def test_data_norm_splits(desitter3):
    npts = desitter3.cross_section.npts
    s = StateVector.from_physical(1.0, np.zeros(npts), np.ones(npts), 3)
    h1, l2 = data_norm(s, desitter3)
    assert h1 == pytest.approx(0.0, abs=1e-14)
    assert l2 == pytest.approx(math.sqrt(2 * math.pi**2), rel=1e-12)
