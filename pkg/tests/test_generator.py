import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import well_conditioned
from equiangular.errors import AlphaOutOfRange, AngleInfeasible, InputError, LinearlyDependent
from equiangular.generator import (
    SignPolicy, b_basis_of, cot_phi, ev_step, generate, gs_reference, initial_state,
    modified_gs, standard_basis, trihedral_cosine,
)
from equiangular.gram import gram_deviation

VANDER = np.array([[1, 1, 1, 1], [1, 2, 3, 4], [1, 4, 9, 16], [1, 8, 27, 64]], dtype=float)


def test_standard_basis_gram():
    s = standard_basis(3, 0.5)
    assert gram_deviation(s, 0.5) < 1e-12


def test_standard_basis_limits():
    assert np.allclose(standard_basis(4, 1e-9), np.eye(4), atol=1e-8)
    assert np.allclose(standard_basis(4, 1 - 1e-12), np.full((4, 4), 0.5), atol=1e-5)


def test_standard_basis_removable_point():
    # (1 - alpha)(n - 1) = 1 is where the quotient form of x reads 0/0
    n = 5
    alpha = 1 - 1 / (n - 1)
    assert gram_deviation(standard_basis(n, alpha), alpha) < 1e-12


@given(st.integers(1, 30), st.floats(1e-6, 1 - 1e-6))
def test_standard_basis_property(n, alpha):
    assert gram_deviation(standard_basis(n, alpha), alpha) < 1e-10


def test_standard_basis_rejects():
    with pytest.raises(AlphaOutOfRange):
        standard_basis(3, -0.1)


def test_cot_phi_examples():
    for th in (0.2, 0.7, 1.3):
        assert cot_phi(1, th) == pytest.approx(1 / math.tan(th))
    assert cot_phi(5, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert cot_phi(2, math.pi / 3) == pytest.approx(0.7071, abs=5e-5)
    # cot phi from cos phi = cos(theta) / cos(theta / 2)
    cphi = math.cos(math.pi / 3) / math.cos(math.pi / 6)
    assert cot_phi(2, math.pi / 3) == pytest.approx(cphi / math.sqrt(1 - cphi * cphi))


def test_cot_phi_infeasible():
    with pytest.raises(AngleInfeasible):
        cot_phi(3, alpha=-1 / 3)


def test_trihedral_cosine():
    assert trihedral_cosine(0.4, 0.0) == pytest.approx(math.cos(0.4))
    assert trihedral_cosine(math.pi / 3, math.pi / 3) == pytest.approx(0.25)


def test_ev_step_gs_behaviour():
    st0 = ev_step(initial_state(alpha=0.0), np.array([1.0, 0.0, 0.0]))
    st1 = ev_step(st0, np.array([0.0, 1.0, 0.0]))
    assert np.allclose(st1.s_cols[1], [0, 1, 0])


def test_identity_example():
    s, diag = generate(np.eye(4), math.pi / 4)
    assert np.allclose(s[0], [1, 0.7071, 0.7071, 0.7071], atol=5e-4)
    assert np.allclose(np.diag(s), [1, 0.7071, 0.6436, 0.6154], atol=5e-4)
    assert np.allclose(np.tril(s, -1), 0, atol=1e-15)
    assert np.all(s >= -1e-15)
    assert np.allclose(diag.r @ s, np.eye(4), atol=1e-12)


def test_vandermonde_examples():
    s1, _ = generate(VANDER, math.pi / 3)
    expected1 = np.array([[0.5, -0.1942, 0.5502, -0.1266],
                         [0.5, -0.0327, 0.0410, 0.7514],
                         [0.5, 0.2904, -0.3488, -0.2302],
                         [0.5, 0.9364, 0.7576, 0.6053]])
    assert np.max(np.abs(s1 - expected1)) < 5e-4
    s2, _ = generate(VANDER, math.pi / 4)
    expected2 = np.array([[0.5, -0.0091, 0.5567, 0.0417],
                         [0.5, 0.1228, 0.1675, 0.7174],
                         [0.5, 0.3865, -0.1154, -0.0392],
                         [0.5, 0.9140, 0.8055, 0.6943]])
    assert np.max(np.abs(s2 - expected2)) < 5e-4


def test_right_angle_is_modified_gs(rng):
    v = well_conditioned(rng, 7, 5)
    s, diag = generate(v, math.pi / 2)
    q, r = modified_gs(v)
    assert np.max(np.abs(s - q)) < 1e-10
    assert np.max(np.abs(diag.r - r)) < 1e-10


def test_b_basis_of():
    s = np.eye(4)
    b = b_basis_of(s)
    assert len(b) == 3
    assert np.allclose(b[0], [1, -1, 0, 0])
    assert np.allclose(b[1], [1, 1, -2, 0])
    assert np.allclose(b[2], [1, 1, 1, -3])
    assert len(b_basis_of(np.eye(2))) == 1


def test_b_basis_is_orthogonal_for_generated(rng):
    s, diag = generate(well_conditioned(rng, 6), alpha=0.4)
    b = np.column_stack(diag.b_basis)
    g = b.T @ b
    assert np.max(np.abs(g - np.diag(np.diag(g)))) < 1e-10
    assert np.allclose(b, np.column_stack(b_basis_of(s)))


def test_gs_reference_examples():
    assert np.allclose(gs_reference(np.eye(3))[0], np.eye(3))
    q, r = gs_reference(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert np.allclose(q, np.eye(2)) and np.allclose(r, [[1, 1], [0, 1]])
    with pytest.raises(InputError):
        gs_reference(np.eye(2), "householder")


def _random_instance(seed, n, m=None):
    return well_conditioned(np.random.default_rng(seed), m or n, n)


@given(st.integers(1, 20), st.integers(0, 3), st.floats(-0.04, 0.95), st.integers(0, 2**31 - 1))
def test_generate_invariants(n, extra, alpha, seed):
    if n > 1 and 1 + (n - 1) * alpha < 0.05:
        return
    v = _random_instance(seed, n, n + extra)
    s, diag = generate(v, alpha=alpha)
    # equiangular with unit norms
    assert gram_deviation(s, alpha) < 1e-8
    assert np.max(np.abs(np.linalg.norm(s, axis=0) - 1)) < 1e-12
    # v = S R with R upper triangular: every prefix span is preserved
    assert np.allclose(np.triu(diag.r), diag.r)
    for k in range(n):
        resid = v[:, k] - s[:, :k + 1] @ diag.r[:k + 1, k]
        assert np.linalg.norm(resid) <= 1e-8 * np.linalg.norm(v[:, k])
    assert np.all(np.diag(diag.r) > 0)


@given(st.integers(2, 12), st.floats(-0.05, 0.9), st.integers(0, 2**31 - 1))
def test_running_sum_norm_and_trihedral(n, alpha, seed):
    if 1 + (n - 1) * alpha < 0.05:
        return
    s, _ = generate(_random_instance(seed, n), alpha=alpha)
    for k in range(1, n):
        total = s[:, :k].sum(axis=1)
        tn = np.linalg.norm(total)
        assert tn == pytest.approx(math.sqrt(k * (1 + (k - 1) * alpha)), abs=1e-10)
        c_new = s[:, k] @ total / tn
        for j in range(k):
            c_old = s[:, j] @ total / tn
            assert c_new * c_old == pytest.approx(alpha, abs=1e-10)


def test_sign_enumeration_n3(rng):
    v = well_conditioned(rng, 3)
    outs = [generate(v, math.pi / 3, SignPolicy.from_index(i, 3))[0] for i in range(4)]
    for s in outs:
        assert gram_deviation(s, 0.5) < 1e-8
    for i in range(4):
        for j in range(i):
            assert np.max(np.abs(outs[i] - outs[j])) > 1e-3


@pytest.mark.parametrize("n", [3, 5, 10])
def test_obtuse_feasibility(n, rng):
    v = well_conditioned(rng, n)
    boundary = -1 / (n - 1)
    s, _ = generate(v, alpha=boundary + 0.01)
    assert gram_deviation(s, boundary + 0.01) < 1e-8
    with pytest.raises(AngleInfeasible):
        generate(v, alpha=boundary)


def test_dependent_column_raises():
    v = np.array([[1.0, 2.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    with pytest.raises(LinearlyDependent) as exc:
        generate(v, math.pi / 3)
    assert exc.value.column == 1


def test_too_many_columns():
    with pytest.raises(LinearlyDependent):
        generate(np.ones((2, 3)), math.pi / 3)


def test_policy_validation():
    with pytest.raises(InputError):
        SignPolicy((1, 0))
    with pytest.raises(InputError):
        generate(np.eye(3), math.pi / 3, SignPolicy((1,)))
    assert SignPolicy.from_index(2, 3).label == "+-"
    assert SignPolicy().label == "default"


def test_classical_projection_mode(rng):
    v = well_conditioned(rng, 6)
    s_c, _ = generate(v, math.pi / 3, projection="classical")
    s_m, _ = generate(v, math.pi / 3)
    assert np.max(np.abs(s_c - s_m)) < 1e-10
