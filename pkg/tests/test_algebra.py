import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rs_hierarchy import algebra
from rs_hierarchy.algebra import (NotPositiveDefiniteError, RegularityError,
                                  TorusReg, chol_upper, dual_basis, pairing,
                                  project_special, r_apply, r_bracket,
                                  split_grade, split_ub)


def _E(n, j, k):
    M = np.zeros((n, n), dtype=complex)
    M[j, k] = 1.0
    return M


def _rand_gl(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


# ---------------------------------------------------------------------------
# pairing


def test_pairing_examples():
    I2 = np.eye(2, dtype=complex)
    assert pairing(1j * I2, I2) == pytest.approx(2.0)
    assert pairing(_E(2, 0, 1), _E(2, 1, 0)) == pytest.approx(0.0)
    assert pairing(1j * _E(2, 0, 1), _E(2, 1, 0)) == pytest.approx(1.0)


def test_pairing_dimension_mismatch():
    with pytest.raises(ValueError):
        pairing(np.eye(2, dtype=complex), np.eye(3, dtype=complex))


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
@settings(max_examples=30, deadline=None)
def test_pairing_bilinear_symmetric(seed, n):
    rng = np.random.default_rng(seed)
    X, Y, Z = (_rand_gl(rng, n) for _ in range(3))
    a, b = rng.standard_normal(2)
    assert pairing(X, Y) == pytest.approx(pairing(Y, X), abs=1e-12)
    assert pairing(a * X + b * Z, Y) == pytest.approx(
        a * pairing(X, Y) + b * pairing(Z, Y), rel=1e-10, abs=1e-10)


def test_pairing_nondegenerate_gram_identity():
    # Gram matrix of a full basis against its dual is the identity.
    for n in (2, 3, 4):
        for space in ("u", "herm"):
            B, D = dual_basis(space, n)
            G = np.array([[pairing(d, b) for b in B] for d in D])
            assert np.allclose(G, np.eye(len(B)), atol=1e-14)


@given(st.integers(0, 10 ** 6), st.integers(2, 4))
@settings(max_examples=20, deadline=None)
def test_isotropic_subspaces(seed, n):
    rng = np.random.default_rng(seed)
    Xu = algebra.make_anti_hermitian(_rand_gl(rng, n))
    Yu = algebra.make_anti_hermitian(_rand_gl(rng, n))
    _, Xb = split_ub(_rand_gl(rng, n))
    _, Yb = split_ub(_rand_gl(rng, n))
    assert abs(pairing(Xu, Yu)) < 1e-12 * (1 + np.linalg.norm(Xu) * np.linalg.norm(Yu))
    assert abs(pairing(Xb, Yb)) < 1e-12 * (1 + np.linalg.norm(Xb) * np.linalg.norm(Yb))


# ---------------------------------------------------------------------------
# splittings


def test_split_ub_examples():
    E12, E21 = _E(2, 0, 1), _E(2, 1, 0)
    u, b = split_ub(E12)
    assert np.allclose(u, 0) and np.allclose(b, E12)
    u, b = split_ub(1j * np.eye(2))
    assert np.allclose(u, 1j * np.eye(2)) and np.allclose(b, 0)
    u, b = split_ub(E21)
    assert np.allclose(u, E21 - E12)
    assert np.allclose(b, E12)


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
@settings(max_examples=30, deadline=None)
def test_split_ub_reconstruction_and_memberships(seed, n):
    rng = np.random.default_rng(seed)
    X = _rand_gl(rng, n)
    u, b = split_ub(X)
    assert np.array_equal(u + b, X) or np.allclose(u + b, X, atol=0)
    assert np.allclose(u + u.conj().T, 0, atol=1e-15)
    assert np.allclose(np.tril(b, -1), 0)
    assert np.allclose(np.imag(np.diag(b)), 0)
    # idempotence: re-splitting the parts is stable
    u2, b_of_u = split_ub(u)
    assert np.allclose(u2, u) and np.allclose(b_of_u, 0, atol=1e-15)


def test_split_grade():
    X = np.diag([1.0 + 0j, 2.0])
    up, d, lo = split_grade(X)
    assert np.allclose(up, 0) and np.allclose(d, X) and np.allclose(lo, 0)
    Y = _E(2, 0, 1) + _E(2, 1, 0)
    up, d, lo = split_grade(Y)
    assert np.allclose(up, _E(2, 0, 1)) and np.allclose(lo, _E(2, 1, 0))
    rng = np.random.default_rng(0)
    Z = _rand_gl(rng, 4)
    up, d, lo = split_grade(Z)
    assert np.array_equal(up + d + lo, Z)


def test_project_special():
    X = np.diag([1 + 2j, 3 + 0j])
    assert np.allclose(project_special(X, "im_diag"), np.diag([2j, 0]))
    assert np.allclose(project_special(X, "real_diag"), np.diag([1, 3]))
    assert np.allclose(project_special(np.triu(np.ones((3, 3)), 1), "im_diag"), 0)
    with pytest.raises(ValueError):
        project_special(X, "bogus")


# ---------------------------------------------------------------------------
# R-operator


def test_r_apply_kills_diagonal():
    Q = TorusReg(np.array([0.2, 1.1, 2.5]))
    assert np.allclose(r_apply(Q, np.diag([1.0 + 2j, 3j, -1])), 0)


def test_r_apply_cotangent_multiplier():
    q1, q2 = 0.3, 1.9
    Q = TorusReg(np.array([q1, q2]))
    out = r_apply(Q, _E(2, 0, 1))
    expected = -0.5j / np.tan((q1 - q2) / 2.0) * _E(2, 0, 1)
    assert np.allclose(out, expected, atol=1e-14)


def test_r_apply_antisymmetric_under_pairing():
    rng = np.random.default_rng(3)
    Q = TorusReg(rng.uniform(0, 2 * np.pi, 4))
    for _ in range(10):
        X, Y = _rand_gl(rng, 4), _rand_gl(rng, 4)
        defect = pairing(r_apply(Q, X), Y) + pairing(X, r_apply(Q, Y))
        assert abs(defect) <= 1e-12 * np.linalg.norm(X) * np.linalg.norm(Y)


def test_r_apply_against_dense_operator_oracle():
    # Build (Ad_Q - id)^{-1} restricted to the off-diagonal entries as a
    # dense linear operator and compose with (Ad_Q + id)/2.
    rng = np.random.default_rng(7)
    for n in (2, 3, 4):
        Q = TorusReg(rng.uniform(0, 2 * np.pi, n))
        Qm = Q.matrix()
        off = [(j, k) for j in range(n) for k in range(n) if j != k]
        dim = len(off)
        A = np.zeros((dim, dim), dtype=complex)
        for col, (j, k) in enumerate(off):
            img = Qm @ _E(n, j, k) @ Qm.conj().T - _E(n, j, k)
            for row, (a, b) in enumerate(off):
                A[row, col] = img[a, b]
        Ainv = np.linalg.inv(A)
        X = _rand_gl(rng, n)
        x_off = np.array([X[j, k] for j, k in off])
        y_off = Ainv @ x_off
        Y = np.zeros((n, n), dtype=complex)
        for (j, k), v in zip(off, y_off):
            Y[j, k] = v
        oracle = 0.5 * (Qm @ Y @ Qm.conj().T + Y)
        assert np.allclose(r_apply(Q, X), oracle, atol=1e-12 * np.linalg.norm(X))


def test_r_bracket_antisymmetry():
    rng = np.random.default_rng(5)
    Q = TorusReg(rng.uniform(0, 2 * np.pi, 3))
    X, Y = _rand_gl(rng, 3), _rand_gl(rng, 3)
    assert np.allclose(r_bracket(Q, X, X), 0, atol=1e-13)
    assert np.allclose(r_bracket(Q, X, Y), -r_bracket(Q, Y, X), atol=1e-13)
    D1, D2 = np.diag([1.0 + 0j, 2, 3]), np.diag([4.0 + 0j, 5, 6])
    assert np.allclose(r_bracket(Q, D1, D2), 0, atol=1e-14)


def test_torus_regularity_enforced():
    with pytest.raises(RegularityError):
        TorusReg(np.array([0.5, 0.5 + 1e-9]))


# ---------------------------------------------------------------------------
# triangular factorization


def test_chol_upper_examples():
    assert np.allclose(chol_upper(np.eye(3, dtype=complex)), np.eye(3))
    L = np.array([[2, 1], [1, 1]], dtype=complex)
    b = chol_upper(L)
    assert np.allclose(b, [[1, 1], [0, 1]])
    assert np.allclose(b @ b.conj().T, L)
    L2 = np.array([[1, 1j], [-1j, 2]], dtype=complex)
    b2 = chol_upper(L2)
    s = np.sqrt(2.0)
    assert np.allclose(b2, [[1 / s, 1j / s], [0, s]])
    assert np.allclose(b2 @ b2.conj().T, L2)


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
@settings(max_examples=25, deadline=None)
def test_chol_upper_uniqueness(seed, n):
    rng = np.random.default_rng(seed)
    A = _rand_gl(rng, n)
    L = A @ A.conj().T + 0.5 * np.eye(n)
    b = chol_upper(L)
    assert np.allclose(np.tril(b, -1), 0)
    assert np.all(np.real(np.diag(b)) > 0) and np.allclose(np.imag(np.diag(b)), 0)
    assert np.linalg.norm(b @ b.conj().T - L) <= 1e-12 * np.linalg.norm(L)
    # refactorizing b b^dagger returns the same factor
    assert np.allclose(chol_upper(b @ b.conj().T), b, atol=1e-12 * np.linalg.norm(b))


def test_chol_upper_rejects_indefinite():
    with pytest.raises(NotPositiveDefiniteError):
        chol_upper(np.diag([1.0, -1.0]).astype(complex))


# ---------------------------------------------------------------------------
# dual bases


def test_dual_basis_examples():
    B, D = dual_basis("u", 3)
    # i E_jj pairs to 1 with E_jj
    assert pairing(D[0], B[0]) == pytest.approx(1.0)
    # (E_jk - E_kj) pairs to 1 with -i E_jk
    A01 = _E(3, 0, 1) - _E(3, 1, 0)
    idx = next(i for i, b in enumerate(B) if np.allclose(b, A01))
    assert np.allclose(D[idx], -1j * _E(3, 0, 1))


def test_dual_basis_gram_identity_all_pairs():
    for space in ("u", "b", "u0", "b0", "uperp", "bplus", "herm", "herm0", "hermperp"):
        B, D = dual_basis(space, 3)
        G = np.array([[pairing(d, b) for b in B] for d in D])
        assert np.allclose(G, np.eye(len(B)), atol=1e-13)


def test_strict_projection_raises():
    with pytest.raises(algebra.SubspaceError):
        algebra.make_unipotent_upper(np.ones((3, 3), dtype=complex), strict=True)
