"""Convergence checks for the operators and the solver.

These are the experiments behind ``conjugation-test`` and the convergence part
of ``solve``: the conjugation residual as the ``x``-difference step shrinks, a
separated exact solution on the product cylinder, and self-convergence in
``tau`` and in the cross-section grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import build_chart
from .operators import BoundaryChartOperator, conjugate, conjugation_identity_residual
from .sampling import basis_for, random_data, random_field_jet, run_rng
from .solver import StateVector, solve_reduced


def observed_orders(errors, factor=2.0):
    """``log_factor(e_i / e_(i+1))`` for successive errors."""
    e = np.asarray(errors, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return list(np.log(e[:-1] / e[1:]) / math.log(factor))


@dataclass(frozen=True)
class ConjugationRow:
    cells: int
    step: float
    residual: float


def conjugation_sweep(chart, n, cells=(8, 16, 32, 64), seed=0, x=0.5, size=32, band=6, **params):
    """Conjugation residual at ``x`` with the ``x``-difference step ``(x0 - x_min) / cells``.

    Both the chart operator and the reduced operator difference the metric in
    ``x`` with the same step, so each entry of ``cells`` is one ``x``-grid.
    The cross-section grid is fixed: its Laplacian appears identically on both
    sides and cancels.
    """
    metric = build_chart(chart, n=n, size=size, **params)
    jet = random_field_jet(metric, run_rng(seed, 0), band=band)
    rows = []
    for m in cells:
        step = (metric.x0 - metric.x_min) / m
        op = BoundaryChartOperator(metric, drift_step=step)
        reduced = conjugate(op)
        rows.append(ConjugationRow(m, step, conjugation_identity_residual(op, reduced, jet, x)))
    return rows


def separated_solution(size=128, steps=4096, x_min=math.exp(-6)):
    """Error of the solver against ``cos(y) cos(w (x - 1))`` on the product circle.

    Returns ``(semi_discrete_error, continuum_error)``: ``w`` is the exact
    eigenfrequency of the discrete Laplacian for the first, ``1`` for the second.
    """
    metric = build_chart("product", n=1, size=size, x_min=x_min)
    reduced = conjugate(BoundaryChartOperator(metric))
    y = metric.cross_section.nodes()[0]
    h = metric.cross_section.spacing
    w_d = 2.0 * math.sin(0.5 * h) / h
    init = StateVector(1.0, np.cos(y), np.zeros(size))
    traj = solve_reduced(reduced, init, steps=steps, node_stride=max(1, steps // 64))
    dx = traj.x - 1.0
    exact_d = np.cos(w_d * dx)[:, None] * np.cos(y)[None, :]
    exact_c = np.cos(dx)[:, None] * np.cos(y)[None, :]
    return float(np.abs(traj.v - exact_d).max()), float(np.abs(traj.v - exact_c).max())


def time_self_convergence(chart="desitter", n=3, size=48, steps=(128, 256, 512, 1024), seed=1, band=6):
    """Differences of the final state between successive step counts and observed orders."""
    metric = build_chart(chart, n=n, size=size)
    reduced = conjugate(BoundaryChartOperator(metric))
    init = random_data(metric, run_rng(seed, 0), band=band)
    finals = [solve_reduced(reduced, init, steps=s, node_stride=s).v[-1] for s in steps]
    diffs = [float(np.abs(finals[i] - finals[i + 1]).max()) for i in range(len(finals) - 1)]
    return diffs, observed_orders(diffs)


def space_self_convergence(chart="desitter", n=3, sizes=(24, 48, 96, 192), steps=1024, seed=1, band=5, probe=8):
    """Grid self-convergence of the final state through harmonic projections.

    The final field is projected onto the first ``probe`` continuum harmonics,
    a functional that is comparable across grids.  Returns the successive
    maximum differences and the observed orders.
    """
    projections = []
    for size in sizes:
        metric = build_chart(chart, n=n, size=size)
        reduced = conjugate(BoundaryChartOperator(metric))
        init = random_data(metric, run_rng(seed, 0), band=band, normalize=False)
        final = solve_reduced(reduced, init, steps=steps, node_stride=steps).v[-1]
        phi = basis_for(metric, probe).evaluate(metric.cross_section.nodes())
        projections.append(phi @ (reduced.laplacian(metric.x_min).mass * final))
    diffs = [float(np.abs(projections[i] - projections[i + 1]).max()) for i in range(len(sizes) - 1)]
    return diffs, observed_orders(diffs)
