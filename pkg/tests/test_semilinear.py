import math

import numpy as np
import pytest

from kgdesitter.errors import ConfigurationError
from kgdesitter.geometry import build_chart
from kgdesitter.solver import StateVector
from kgdesitter import semilinear as sl

CFG = sl.PicardConfig(steps=128, tol_rel=1e-8, max_iter=25)


@pytest.fixture(scope="module")
def ds3():
    return build_chart("desitter", n=3, size=16, x_min=math.exp(-3))


@pytest.fixture(scope="module")
def quintic():
    return sl.Nonlinearity(5)


def test_pure_power_is_odd_with_modulus_power():
    f = sl.Nonlinearity(3)
    u = np.linspace(-2, 2, 41)
    assert np.allclose(f(-u), -f(u))
    assert np.allclose(np.abs(f(u)), np.abs(u) ** 3)
    assert f.growth_check() == (1.0, 3.0, 3.0)


def test_custom_nonlinearity_growth():
    u = np.linspace(1, 2, 401)
    f = sl.Nonlinearity(5, "custom", (u, 0.5 * u**5))
    c, lo, hi = f.growth_check()
    assert c == pytest.approx(0.5)
    assert lo == pytest.approx(5, rel=0.05) and hi == pytest.approx(5, rel=0.05)
    with pytest.raises(ConfigurationError):
        sl.Nonlinearity(5, "custom")
    with pytest.raises(ConfigurationError):
        sl.Nonlinearity(1.0)


def test_space_exponents():
    z, d = sl.space_exponents(5, 3)
    assert (z.p, z.q, z.s) == (5, 10, 1) and (d.p_prime, d.q_prime) == (1, 2)
    with pytest.raises(ConfigurationError):
        sl.space_exponents(2, 3)
    with pytest.warns(UserWarning, match="headline"):
        sl.space_exponents(2, 6)


def test_zero_data_converges_immediately(ds3, quintic):
    zero = StateVector.zeros(ds3.x0, ds3.cross_section.npts)
    _, hist = sl.picard_solve(ds3, zero, quintic, CFG)
    assert hist.converged and hist.iterations == 0 and hist.residual == 0.0


def test_small_data_contracts(ds3, quintic):
    data = sl.unit_data(ds3, 0, band=4).scaled(0.5)
    _, hist = sl.picard_solve(ds3, data, quintic, CFG)
    assert hist.converged
    assert hist.contraction_factor < 0.5
    assert hist.residual < 1e-6 * hist.z_norms[0]


def test_large_data_is_flagged(ds3, quintic):
    data = sl.unit_data(ds3, 0, band=4).scaled(50.0)
    _, hist = sl.picard_solve(ds3, data, quintic, CFG)
    assert not hist.converged and "diverged" in hist.status


def test_holder_bound_scales_with_power(ds3, quintic):
    prob = sl.PicardProblem(ds3, sl.unit_data(ds3, 1, band=4), quintic, CFG)
    lhs, rhs = sl.holder_bound_check(prob.free, quintic, ds3)
    lhs2, rhs2 = sl.holder_bound_check(prob.free.scaled(2.0), quintic, ds3)
    assert lhs <= rhs
    assert lhs2 == pytest.approx(32 * lhs, rel=1e-10) and rhs2 == pytest.approx(32 * rhs, rel=1e-10)


def test_uniqueness_and_lipschitz(ds3, quintic):
    data = sl.unit_data(ds3, 2, band=4).scaled(0.5)
    assert sl.uniqueness_check(ds3, data, quintic, CFG, size=0.0) == 0.0
    prob = sl.PicardProblem(ds3, data, quintic, CFG)
    u, h = sl.picard_solve(ds3, data, quintic, problem=prob)
    assert sl.uniqueness_check(ds3, data, quintic, problem=prob) < 1e-6 * prob.z_norm(u)
    assert math.isnan(sl.lipschitz_data_dependence(ds3, data, data, quintic, CFG))
    other = data + sl.unit_data(ds3, 3, band=4).scaled(0.01)
    q = sl.lipschitz_data_dependence(ds3, data, other, quintic, CFG)
    assert 0 < q < 10


def test_linear_term_chart_rejected(quintic):
    m = build_chart("desitter", n=3, size=12, linear=1.0, x_min=math.exp(-3))
    with pytest.raises(ConfigurationError, match="short-range"):
        sl.PicardProblem(m, sl.unit_data(m, 0, band=3), quintic, CFG)


def test_rates_stop_at_roundoff_floor():
    h = sl.IterationHistory(z_norms=[1.0], diffs=[1e-2, 1e-4, 1e-13, 1e-15])
    assert h.rates() == pytest.approx([1e-2])
    assert h.contraction_factor == pytest.approx(1e-2)


def test_contraction_slope_on_quintic(ds3, quintic):
    points = sl.epsilon_sweep(ds3, quintic, 1.5, CFG, seed=0, band=4)
    assert all(p.history.converged for p in points)
    assert sl.contraction_slope(points) == pytest.approx(4.0, abs=0.3)
