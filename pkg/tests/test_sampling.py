import numpy as np
import pytest

from kgdesitter.geometry import build_chart
from kgdesitter.norms import data_norm
from kgdesitter.sampling import HarmonicBasis, basis_for, random_data, random_field_jet, random_forcing, run_rng


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_zonal_basis_is_orthonormal(n):
    m = build_chart("desitter", n=n, size=400)
    phi = basis_for(m, 6).evaluate(m.cross_section.nodes())
    w = m.cross_section.reference_weights()
    gram = phi @ (w[:, None] * phi.T)
    assert np.allclose(gram, np.eye(6), atol=1e-4)


def test_torus_basis_is_orthonormal():
    m = build_chart("product", n=2, size=16)
    phi = basis_for(m, 9).evaluate(m.cross_section.nodes())
    w = m.cross_section.reference_weights()
    assert np.allclose(phi @ (w[:, None] * phi.T), np.eye(9), atol=1e-12)


def test_eigenvalues_ordered():
    assert list(HarmonicBasis("sphere", 3, 4).eigenvalues()) == [0, 3, 8, 15]
    ev = HarmonicBasis("torus", 2, 9).eigenvalues()
    assert list(ev) == sorted(ev) and ev[0] == 0 and ev[1] == 1


def test_random_data_unit_norm(desitter3):
    s = random_data(desitter3, run_rng(0, 0), band=5)
    assert sum(data_norm(s, desitter3)) == pytest.approx(1.0, rel=1e-12)


def test_seeding_is_reproducible_and_independent(desitter3):
    a = random_data(desitter3, run_rng(4, 1), band=5)
    b = random_data(desitter3, run_rng(4, 1), band=5)
    c = random_data(desitter3, run_rng(4, 2), band=5)
    assert np.array_equal(a.v, b.v) and not np.allclose(a.v, c.v)


def test_same_continuum_data_on_every_grid():
    coarse = build_chart("desitter", n=3, size=24)
    fine = build_chart("desitter", n=3, size=48)
    a = random_data(coarse, run_rng(0, 0), band=4, normalize=False)
    b = random_data(fine, run_rng(0, 0), band=4, normalize=False)
    # nodes of the coarse grid are midpoints of fine-grid pairs: averages agree to O(h^2)
    assert np.abs(0.5 * (b.v[0::2] + b.v[1::2]) - a.v).max() < 0.05 * np.abs(a.v).max()


def test_forcing_physical_scaling(desitter3):
    f = random_forcing(desitter3, run_rng(0, 0), band=3)
    x = 0.4
    assert np.allclose(f.physical(x), x**3 * f.reduced(x))
    assert np.allclose(f.scaled(2.0)(x), 2 * f(x))


def test_field_jet_derivatives(desitter3):
    jet = random_field_jet(desitter3, run_rng(1, 0))
    x, d = 0.5, 1e-5
    v, vx, vxx = jet(x)
    assert np.allclose((jet(x + d)[0] - jet(x - d)[0]) / (2 * d), vx, atol=1e-6)
    assert np.allclose((jet(x + d)[1] - jet(x - d)[1]) / (2 * d), vxx, atol=1e-6)
