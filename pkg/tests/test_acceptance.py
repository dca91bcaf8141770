"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import csv
import io
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import gram_target, well_conditioned
from equiangular.errors import AngleInfeasible, RootsNotReal
from equiangular.etf import frame_sum_check, simplex_frame, verify_tight
from equiangular.generator import generate, modified_gs
from equiangular.gram import (
    condition_number, eigenvalue_bounds, eigenvalue_modulus, equiangular_inverse,
    equiangular_solve, gram_inverse, gram_matrix, gram_sqrt, inverse_row_geometry, make_spec,
    spec_from_alpha,
)
from equiangular.linalg import invert_dense, polynomial_roots
from equiangular.spectral import (
    alpha_feasibility_threshold, factor_rSSt, g_poly, sds_factorize, two_eigen_parameters,
)
from equiangular.sr import sr_enumerate, sr_factorize
from equiangular.stability import report_csv, stability_harness
from equiangular.tolerances import REALNESS_TOL

A4 = np.array([[1, 1, 1, 1], [1, 2, 2, 2], [1, 2, 3, 3], [1, 2, 3, 4]], dtype=float)


@pytest.fixture
def report(capsys):
    def _report(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return _report


def test_criterion_01_sr_examples(report):
    t0 = time.perf_counter()
    r1 = sr_factorize(A4, math.pi / 6).r
    r2 = sr_factorize(A4, 3 * math.pi / 8).r
    elapsed = time.perf_counter() - t0
    dev1 = max(np.max(np.abs(r1[0] - [2.0, 2.0, 1.1444, 0.1830])),
               np.max(np.abs(np.diag(r1) - [2.0, 1.7321, 1.8436, 1.6834])))
    dev2 = np.max(np.abs(np.diag(r2)[1:] - [0.9374, 0.9197, 0.8159]))
    ok = dev1 < 5e-4 and dev2 < 5e-4 and elapsed < 1.0
    report(1, ok, f"pi/6 dev {dev1:.1e}, 3pi/8 dev {dev2:.1e}, {elapsed:.3f} s (default all-plus signs)")


def test_criterion_02_identity(report):
    f = sr_factorize(np.eye(4), math.pi / 4)
    dev_d = np.max(np.abs(np.diag(f.s) - [1, 0.7071, 0.6436, 0.6154]))
    upper = np.all(np.tril(f.s, -1) == 0) and np.all(f.s >= 0)
    rt = 0.6154 * f.r.T
    g = rt.T @ rt
    dev_c = np.max(np.abs(g[~np.eye(4, dtype=bool)] + 0.2929))
    ok = dev_d < 5e-4 and dev_c < 5e-4 and upper
    report(2, ok, f"diagonal dev {dev_d:.1e}, scaled R^T cosine dev {dev_c:.1e}")


def test_criterion_03_gram_identities(report):
    worst_inv = worst_sqrt = 0.0
    for n in range(2, 51):
        for alpha in (0.1, 0.25, 0.5, 0.7071, 0.9):
            sp = spec_from_alpha(n, alpha)
            g = gram_matrix(sp).dense()
            worst_inv = max(worst_inv, np.max(np.abs(gram_inverse(sp).dense() @ g - np.eye(n))))
            st = gram_sqrt(sp).structure(n).dense()
            worst_sqrt = max(worst_sqrt, np.max(np.abs(st @ st - g)))
    pair = gram_sqrt(spec_from_alpha(3, 0.5))
    dev_st = max(abs(pair.s - 0.9428), abs(pair.t - 0.2357))
    ok = worst_inv <= 1e-12 and worst_sqrt <= 1e-12 and dev_st <= 5e-5
    report(3, ok, f"inverse {worst_inv:.1e}, sqrt {worst_sqrt:.1e}, (s,t) dev {dev_st:.1e}")


def test_criterion_04_structured_inverse(report):
    rng = np.random.default_rng(4)
    thetas = (math.pi / 6, math.pi / 4, math.pi / 3)
    worst = {"inverse": 0.0, "rows": 0.0, "solve": 0.0}
    t0 = time.perf_counter()
    for i in range(200):
        n = int(rng.integers(2, 31))
        theta = thetas[i % 3]
        sp = make_spec(n, theta)
        s, _ = generate(rng.standard_normal((n, n)), theta)
        kappa = condition_number(sp)
        inv = equiangular_inverse(s, sp)
        worst["inverse"] = max(worst["inverse"], np.max(np.abs(inv - invert_dense(s))) / (1e-8 * kappa))
        rg = inverse_row_geometry(s, sp, tol=1e-8)
        worst["rows"] = max(worst["rows"], abs(rg.row_norm - math.sqrt(sp.k)) / 1e-8,
                            abs(rg.row_cosine - sp.h) / 1e-8)
        b = rng.standard_normal(n)
        x = equiangular_solve(s, b, sp)
        worst["solve"] = max(worst["solve"], np.linalg.norm(s @ x - b) / (1e-8 * np.linalg.norm(b)))
    elapsed = time.perf_counter() - t0
    ok = all(v <= 1.0 for v in worst.values()) and elapsed < 30
    detail = ", ".join(f"{k} {v:.2e} of budget" for k, v in worst.items())
    report(4, ok, f"{detail}, {elapsed:.2f} s")


def test_criterion_05_spectral_bounds(report):
    rng = np.random.default_rng(5)
    worst_bound = worst_kappa = worst_mod = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 16))
        alpha = float(rng.uniform(0.05, 0.95))
        sp = spec_from_alpha(n, alpha)
        s, _ = generate(well_conditioned(rng, n), alpha=alpha)
        lo, hi = eigenvalue_bounds(sp)
        w, x = np.linalg.eig(s)
        mod = np.abs(w)
        worst_bound = max(worst_bound, np.max(lo - mod), np.max(mod - hi), 0.0)
        sv = np.linalg.svd(s, compute_uv=False)
        worst_kappa = max(worst_kappa, abs(sv[0] / sv[-1] - condition_number(sp)))
        for lam, vec in zip(w, x.T):
            worst_mod = max(worst_mod, abs(abs(lam) - eigenvalue_modulus(vec / np.linalg.norm(vec), sp)))
    ok = worst_bound <= 1e-8 and worst_kappa <= 1e-6 and worst_mod <= 1e-8
    report(5, ok, f"bound violation {worst_bound:.1e}, kappa dev {worst_kappa:.1e}, modulus dev {worst_mod:.1e}")


def test_criterion_06_sds(report):
    a = np.diag([1.0, 2.0, 3.0])
    thr = alpha_feasibility_threshold(a)
    f = sds_factorize(a, 0.15)
    rec = np.max(np.abs(f.reconstruct() - a))
    dsum = abs(f.d.sum() - 6.0)
    try:
        sds_factorize(a, 0.3)
        refused = False
    except RootsNotReal:
        refused = True
    r, alpha = two_eigen_parameters(Fraction(1), Fraction(2), 3)
    exact = (r, alpha) == (Fraction(4, 3), Fraction(1, 4))
    tf = factor_rSSt(np.diag([1.0, 1.0, 2.0]))
    float_ok = abs(tf.r - 4 / 3) <= 1e-12 and abs(tf.alpha_used - 0.25) <= 1e-12
    ok = abs(thr - 0.1843) <= 0.002 and rec <= 1e-7 and dsum <= 1e-8 and refused and exact and float_ok
    report(6, ok, f"threshold {thr:.5f}, reconstruction {rec:.1e}, sum(d) dev {dsum:.1e}, "
                  f"refused at 0.3: {refused}, r={tf.r:.12f} alpha={tf.alpha_used:.12f}")


def test_criterion_07_g_poly_nonreal(report):
    rng = np.random.default_rng(7)
    counterexamples = 0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        r = float(rng.uniform(0.1, 10.0)) * (1 if rng.random() < 0.5 else -1)
        alpha = float(rng.uniform(0.05, 0.95))
        z = polynomial_roots(g_poly(n, r, alpha))
        if z.nonreal(REALNESS_TOL).sum() < 2:
            counterexamples += 1
    report(7, counterexamples == 0, f"{counterexamples} counterexamples in 100 trials")


def test_criterion_08_etf(report):
    worst = 0.0
    for n in range(1, 26):
        s = simplex_frame(n).s_n
        rep = verify_tight(s)
        worst = max(worst, rep.tightness_residual, abs(rep.measured_coherence - 1 / n),
                    np.max(np.abs(s.sum(axis=1))))
    rng = np.random.default_rng(8)
    worst_sum = 0.0
    for n in range(1, 11):
        s = simplex_frame(n).s_n
        for _ in range(50):
            lhs, rhs = frame_sum_check(s, rng.standard_normal(n))
            worst_sum = max(worst_sum, abs(lhs - rhs) / rhs)
    lhs, rhs = frame_sum_check(simplex_frame(2).s_n, [1.0, 0.0])
    ok = worst <= 1e-10 and worst_sum <= 1e-10 and abs(lhs - 1.5) <= 1e-12 and abs(rhs - 1.5) <= 1e-12
    report(8, ok, f"frame invariants {worst:.1e}, frame sum {worst_sum:.1e}, n=2 sum {lhs:.15f}")


def test_criterion_09_enumeration(report):
    rng = np.random.default_rng(9)
    counts = []
    worst = 0.0
    for a in (well_conditioned(rng, 3), A4):
        facs = sr_enumerate(a, math.pi / 3)
        distinct = {tuple(np.round(f.s, 8).ravel()) for f in facs}
        counts.append((len(facs), len(distinct)))
        for f in facs:
            worst = max(worst, np.max(np.abs(f.s.T @ f.s - gram_target(a.shape[1], f.alpha))))
    ok = counts == [(4, 4), (8, 8)] and worst <= 1e-8
    report(9, ok, f"(count, distinct) = {counts}, Gram dev {worst:.1e}")


def test_criterion_10_feasibility_boundary(report):
    rng = np.random.default_rng(10)
    results = []
    for n in (3, 5, 10):
        v = well_conditioned(rng, n)
        boundary = -1 / (n - 1)
        generate(v, alpha=boundary + 0.01)
        try:
            generate(v, alpha=boundary)
            results.append(False)
        except AngleInfeasible:
            results.append(True)
    report(10, all(results), f"refused at the boundary for n=3,5,10: {results}")


def test_criterion_11_stability(report):
    recs = stability_harness(["hilbert", "vandermonde"], list(range(2, 17)), [math.pi / 3, math.pi / 6])
    rows = list(csv.reader(io.StringIO(report_csv(recs))))
    complete = len(rows) == 1 + 2 * 15 * 5 and all(len(r) == len(rows[0]) for r in rows)
    rng = np.random.default_rng(11)
    worst = 0.0
    for n in range(2, 17):
        v = well_conditioned(rng, n)
        s, _ = generate(v, alpha=0.0)
        worst = max(worst, np.max(np.abs(s - modified_gs(v)[0])))
    ok = complete and worst <= 1e-10
    report(11, ok, f"{len(rows) - 1} records, complete: {complete}, right-angle vs MGS {worst:.1e}")
