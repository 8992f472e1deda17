"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each criterion prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Run directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from kgdesitter import checks, cli
from kgdesitter.errors import SingularPotentialWarning
from kgdesitter.exponents import AdmissibleTriple, DualPair, dual_for, validate, weight_exponents
from kgdesitter.geometry import build_chart, check_short_range
from kgdesitter.operators import BoundaryChartOperator, conjugate
from kgdesitter import semilinear as sl
from kgdesitter import strichartz as st

RESULTS = {}

STRICHARTZ_BASE = st.Resolution(size=48, steps=400, t_max=5.0)
STRICHARTZ_BAND = 16
SEMILINEAR = dict(size=32, steps=256, t_max=5.0, band=8)


def record(number, title, passed, detail):
    line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    RESULTS[number] = line
    print(line)
    return passed


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# -- 1 ---------------------------------------------------------------------------


def criterion_1():
    def run():
        ok = all(validate(*t) for t in [(5, 10, 1, 3), (3, 6, 1, 4), ("inf", 2, 0, 3), ("inf", 2, 0, 4)])
        pairs = all((Fraction(1), Fraction(2)) in [(d.p_prime, d.q_prime) for d in dual_for(1, n)] for n in (3, 4))
        worst = Fraction(0)
        count = 0
        halves = [Fraction(a, 2) for a in range(4, 33)]
        for n in range(2, 7):
            for p in halves:
                for q in halves:
                    s = Fraction(n, 2) - 1 / p - n / q
                    if validate(p, q, s, n):
                        w = weight_exponents(AdmissibleTriple(p, q, s, n))
                        worst = max(worst, abs(w.x_weight + 1 + w.t_weight))
                        count += 1
        return ok, pairs, worst, count

    (ok, pairs, worst, count), dt = timed(run)
    passed = ok and pairs and worst == 0 and count > 0 and dt < 1.0
    return record(1, "exponent algebra", passed, f"examples admissible={ok}, (1,2) dual={pairs}, weight identity exact on {count} triples, {dt:.2f}s")


# -- 2 ---------------------------------------------------------------------------


def criterion_2():
    def run():
        with warnings.catch_warnings():
            warnings.simplefilter("error", SingularPotentialWarning)
            prod = [r.residual for r in checks.conjugation_sweep("product", 3, size=10, cross_section="torus")]
            prod += [r.residual for r in checks.conjugation_sweep("product", 3, size=32, cross_section="sphere")]
            ds = [r.residual for r in checks.conjugation_sweep("desitter", 3, cells=(8, 16, 32, 64), size=32)]
        return prod, ds

    (prod, ds), dt = timed(run)
    ratios = [ds[i] / ds[i + 1] for i in range(len(ds) - 1)]
    passed = max(prod) <= 1e-10 and all(3.5 <= r <= 4.5 for r in ratios) and dt < 10.0
    return record(2, "conjugation identity", passed, f"product max residual {max(prod):.2e}, de Sitter ratios {', '.join(f'{r:.3f}' for r in ratios)}, {dt:.2f}s")


# -- 3 ---------------------------------------------------------------------------


def criterion_3():
    gates = {n: check_short_range(build_chart("desitter", n=n, size=16)).passed for n in (2, 3, 4)}
    bad = build_chart("desitter", n=3, size=16, linear=1.0)
    bad_gate = check_short_range(bad).passed
    warned = {}
    for label, metric in [("desitter-2", build_chart("desitter", n=2, size=16)), ("desitter-3", build_chart("desitter", n=3, size=16)), ("desitter-4", build_chart("desitter", n=4, size=16)), ("linear", bad)]:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            conjugate(BoundaryChartOperator(metric))
        warned[label] = sum(issubclass(w.category, SingularPotentialWarning) for w in caught)
    exact = warned == {"desitter-2": 0, "desitter-3": 0, "desitter-4": 0, "linear": 1}
    passed = all(gates.values()) and not bad_gate and exact
    return record(3, "short-range gate", passed, f"de Sitter gates {gates}, linear-term gate {bad_gate}, warnings {warned}")


# -- 4 ---------------------------------------------------------------------------


def criterion_4():
    def run():
        semi, cont = checks.separated_solution(size=128, steps=4096)
        _, t_orders = checks.time_self_convergence()
        _, s_orders = checks.space_self_convergence()
        return semi, cont, t_orders, s_orders

    (semi, cont, t_orders, s_orders), dt = timed(run)
    passed = semi <= 1e-6 and all(abs(o - 4.0) <= 0.3 for o in t_orders) and all(abs(o - 2.0) <= 0.3 for o in s_orders) and dt < 60.0
    return record(
        4,
        "solver convergence",
        passed,
        f"separated solution error {semi:.2e} (continuum {cont:.2e}), tau orders {_fmt(t_orders)}, grid orders {_fmt(s_orders)}, {dt:.1f}s",
    )


def _fmt(xs):
    return "[" + ", ".join(f"{x:.3f}" for x in xs) + "]"


# -- 5 ---------------------------------------------------------------------------


def criterion_5():
    drifts = []
    for n, size in [(1, 64), (2, 24)]:
        m = build_chart("product", n=n, size=size)
        rep = st.verify_energy(m, ensemble=5, seed=0)
        drifts.append(max(r.extra["drift"] for r in rep.runs))
    base = st.Resolution(48, 400, 5.0)
    r0, r1 = st.refinement_sweep("energy", "desitter", 3, base, 20, 0, band=STRICHARTZ_BAND)
    delta = r0.refinement["refinement_delta"]
    passed = max(drifts) <= 1e-3 and r0.all_finite and r1.all_finite and delta <= 0.10
    return record(5, "energy", passed, f"product drift {max(drifts):.2e}, de Sitter sup ratio {r0.sup_ratio:.4f} -> {r1.sup_ratio:.4f} (change {delta:.2%})")


# -- 6 ---------------------------------------------------------------------------


def criterion_6():
    def run():
        r0, r1 = st.refinement_sweep("homogeneous", "desitter", 3, STRICHARTZ_BASE, 50, 0, triple=(5, 10, 1), refined_t_max=6.0, band=STRICHARTZ_BAND)
        metric = st.chart_at("desitter", 3, STRICHARTZ_BASE)
        scaled = st.verify_homogeneous(metric, (5, 10, 1), 50, 0, steps=STRICHARTZ_BASE.steps, band=STRICHARTZ_BAND, scale=10.0)
        sweep = st.t0_sweep("desitter", 3, STRICHARTZ_BASE, (5, 10, 1), 50, 0, band=STRICHARTZ_BAND)
        return r0, r1, scaled, sweep

    (r0, r1, scaled, sweep), dt = timed(run)
    scale_err = float(np.max(np.abs(scaled.ratios - r0.ratios) / r0.ratios))
    delta = r0.refinement["refinement_delta"]
    finite = r0.all_finite and r1.all_finite and len(r0.ratios) == 50
    passed = finite and delta <= 0.20 and scale_err <= 1e-10 and sweep["growth"] <= 1.30 and dt < 600
    sups = ", ".join(f"t0={k:g}: {v:.4f}" for k, v in sweep["sup_ratio"].items())
    return record(
        6,
        "homogeneous Strichartz",
        passed,
        f"50 finite={finite}, sup {r0.sup_ratio:.4f} -> {r1.sup_ratio:.4f} ({delta:.2%}), scaling err {scale_err:.1e}, {sups}, growth {sweep['growth']:.3f}, {dt:.0f}s",
    )


# -- 7 ---------------------------------------------------------------------------


def criterion_7():
    def run():
        r0, r1 = st.refinement_sweep("inhomogeneous", "desitter", 3, STRICHARTZ_BASE, 50, 0, triple=(5, 10, 1), dual=(1, 2), refined_t_max=6.0, band=STRICHARTZ_BAND)
        metric = st.chart_at("desitter", 3, STRICHARTZ_BASE)
        scaled = st.verify_inhomogeneous(metric, (5, 10, 1), (1, 2), 50, 0, steps=STRICHARTZ_BASE.steps, band=STRICHARTZ_BAND, scale=2.0)
        return r0, r1, scaled

    (r0, r1, scaled), dt = timed(run)
    scale_err = float(np.max(np.abs(scaled.ratios - r0.ratios) / r0.ratios))
    delta = r0.refinement["refinement_delta"]
    finite = r0.all_finite and r1.all_finite and len(r0.ratios) == 50
    passed = finite and delta <= 0.20 and scale_err <= 1e-10 and dt < 600
    return record(7, "inhomogeneous Strichartz", passed, f"50 finite={finite}, sup {r0.sup_ratio:.4f} -> {r1.sup_ratio:.4f} ({delta:.2%}), linearity err {scale_err:.1e}, {dt:.0f}s")


# -- 8 and 9 ----------------------------------------------------------------------


def semilinear_protocol(n, k, seed=0):
    """Auto-eps, eps-sweep, uniqueness and refinement for one ``(n, k)``."""
    cfg = sl.PicardConfig(steps=SEMILINEAR["steps"])
    x_min = math.exp(-SEMILINEAR["t_max"])
    base = build_chart("desitter", n=n, size=SEMILINEAR["size"], x_min=x_min)
    fine = build_chart("desitter", n=n, size=2 * SEMILINEAR["size"], x_min=x_min)
    fine_cfg = sl.PicardConfig(steps=2 * SEMILINEAR["steps"])
    nl = sl.Nonlinearity(k)
    direction = sl.unit_data(base, seed, SEMILINEAR["band"])
    threshold, _ = sl.auto_epsilon(base, nl, cfg, direction=direction)
    eps0 = threshold / 4.0
    points = sl.epsilon_sweep(base, nl, eps0, cfg, direction=direction)
    prob = sl.PicardProblem(base, direction.scaled(eps0), nl, cfg)
    uniq = sl.uniqueness_check(base, prob.data, nl, problem=prob)
    fine_dir = sl.unit_data(fine, seed, SEMILINEAR["band"])
    fine_points = sl.epsilon_sweep(fine, nl, eps0, fine_cfg, direction=fine_dir, factors=(1.0,))
    return dict(threshold=threshold, eps0=eps0, points=points, uniqueness=uniq, fine=fine_points[0])


_SEMILINEAR_CACHE = {}


def semilinear_results():
    if not _SEMILINEAR_CACHE:
        t = time.perf_counter()
        _SEMILINEAR_CACHE["quintic"] = semilinear_protocol(3, 5)
        _SEMILINEAR_CACHE["cubic"] = semilinear_protocol(4, 3)
        _SEMILINEAR_CACHE["seconds"] = time.perf_counter() - t
    return _SEMILINEAR_CACHE


def criterion_8():
    res = semilinear_results()
    parts = []
    passed = res["seconds"] < 900
    for label, target in [("quintic", 4.0), ("cubic", 2.0)]:
        r = res[label]
        head = r["points"][0]
        h = head.history
        slope = sl.contraction_slope(r["points"])
        c_base, c_fine = head.c_prime, r["fine"].c_prime
        c_drift = abs(c_fine / c_base - 1.0)
        ok = (
            h.converged
            and h.iterations <= 25
            and all(p.history.converged for p in r["points"])
            and abs(slope - target) <= 0.5
            and all(p.history.residual <= 2.0 * p.history.tol_abs for p in r["points"])
            and r["uniqueness"] <= h.tol_abs
            and all(p.z_norm <= c_base * p.eps * 1.10 for p in r["points"])
            and r["fine"].history.converged
            and c_drift <= 0.10
        )
        passed = passed and ok
        parts.append(
            f"{label}: eps0={r['eps0']:.3g} ({h.iterations} it), slope {slope:.3f}, "
            f"residual/tol {h.residual / h.tol_abs:.1e}, uniqueness {r['uniqueness']:.1e} (tol {h.tol_abs:.1e}), "
            f"C' {c_base:.4f} -> {c_fine:.4f} ({c_drift:.2%})"
        )
    return record(8, "semilinear contraction", passed, "; ".join(parts) + f"; {res['seconds']:.0f}s")


def criterion_9():
    res = semilinear_results()
    parts = []
    passed = True
    for label in ("quintic", "cubic"):
        r = res[label]
        cs = [p.holder[0] / p.holder[1] for p in r["points"] if p.history.converged]
        bounded = all(p.holder[0] <= p.holder[1] for p in r["points"] if p.history.converged)
        c_base = r["points"][0].holder[0] / r["points"][0].holder[1]
        c_fine = r["fine"].holder[0] / r["fine"].holder[1]
        drift = abs(c_fine / c_base - 1.0)
        passed = passed and bounded and len(cs) == len(r["points"]) and drift <= 0.10
        parts.append(f"{label}: C in [{min(cs):.4f}, {max(cs):.4f}], refined {c_fine:.4f} ({drift:.2%})")
    return record(9, "Holder bound", passed, "; ".join(parts))


# -- 10 ---------------------------------------------------------------------------


def criterion_10(tmp_path):
    """Same config and seed twice, same output directory: compare the bytes."""
    runs = [
        (["verify-strichartz", "--chart", "desitter", "--n", "3", "--triple", "5,10,1", "--ensemble", "50", "--seed", "7"], "verify-strichartz"),
        (["semilinear", "--epsilon", "2.0", "--seed", "3", "--no-figures"], "semilinear"),
    ]
    same = True
    codes = []
    for argv, stem in runs:
        out = tmp_path / stem
        blobs = []
        for _ in range(2):
            codes.append(cli.main(argv + ["--output-dir", str(out)]))
            blobs.append(((out / f"{stem}.csv").read_bytes(), (out / f"{stem}.json").read_bytes()))
        same = same and blobs[0] == blobs[1]
    passed = same and codes == [0, 0, 0, 0]
    return record(10, "determinism", passed, f"CSV and JSON byte-identical={same}, exit codes {codes}")


# -- pytest entry points -------------------------------------------------------------


def test_criterion_01_exponent_algebra():
    assert criterion_1()


def test_criterion_02_conjugation_identity():
    assert criterion_2()


def test_criterion_03_short_range_gate():
    assert criterion_3()


def test_criterion_04_solver_convergence():
    assert criterion_4()


def test_criterion_05_energy():
    assert criterion_5()


@pytest.mark.slow
def test_criterion_06_homogeneous_strichartz():
    assert criterion_6()


@pytest.mark.slow
def test_criterion_07_inhomogeneous_strichartz():
    assert criterion_7()


@pytest.mark.slow
def test_criterion_08_semilinear_contraction():
    assert criterion_8()


@pytest.mark.slow
def test_criterion_09_holder_bound():
    assert criterion_9()


def test_criterion_10_determinism(tmp_path):
    assert criterion_10(tmp_path)


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    ok = True
    for fn in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9):
        ok = fn() and ok
    with tempfile.TemporaryDirectory() as tmp:
        ok = criterion_10(Path(tmp)) and ok
    sys.exit(0 if ok else 1)
