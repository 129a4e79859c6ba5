import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unruh_fermions.fock import fock_state, tensor_alice
from unruh_fermions.measures import (
    Bipartition,
    DensityMatrix,
    from_pure,
    hermitian_eigh,
    hermitian_eigenvalues,
    negativity,
    partial_trace,
    partial_transpose,
)


def random_state(rng, dims, rank=None):
    d = int(np.prod(dims))
    rank = rank or d
    x = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = x @ x.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def pure(vec, dims):
    vec = np.asarray(vec, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    return DensityMatrix(np.outer(vec, vec.conj()), dims)


def brute_negativity(mat, dims, over):
    # Independent oracle: explicit index loop for the partial transpose, LAPACK eigvalsh.
    d0, d1 = dims
    pt = np.zeros_like(mat)
    for i in range(d0):
        for j in range(d1):
            for k in range(d0):
                for l in range(d1):
                    if over == 0:
                        pt[k * d1 + j, i * d1 + l] = mat[i * d1 + j, k * d1 + l]
                    else:
                        pt[i * d1 + l, k * d1 + j] = mat[i * d1 + j, k * d1 + l]
    w = np.linalg.eigvalsh(pt)
    return float(-w[w < 0].sum())


def bell(alpha):
    v = np.zeros(4)
    v[0], v[3] = math.cos(alpha), math.sin(alpha)
    return pure(v, (2, 2))


# ---- DensityMatrix -----------------------------------------------------------

def test_density_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(3) / 3, (2, 2))
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4) / 2, (2, 2))
    with pytest.raises(ValueError):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]), (2,))


def test_validate_rejects_non_psd():
    rho = DensityMatrix(np.diag([1.5, -0.5]), (2,))
    with pytest.raises(ValueError, match="semidefinite"):
        rho.validate()


def test_density_matrix_is_read_only():
    rho = DensityMatrix(np.eye(2) / 2, (2,))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_from_pure_requires_normalization():
    with pytest.raises(ValueError):
        from_pure(2 * fock_state("1000"))
    assert from_pure(fock_state("1000")).dims == (16,)


# ---- partial trace -------------------------------------------------------------

def test_partial_trace_keep_all_is_identity_map():
    rho = random_state(np.random.default_rng(0), (2, 3))
    np.testing.assert_allclose(partial_trace(rho, [0, 1]).matrix, rho.matrix)


def test_partial_trace_reorders_factors():
    rng = np.random.default_rng(1)
    a, b = random_state(rng, (2,)), random_state(rng, (3,))
    rho = DensityMatrix(np.kron(a.matrix, b.matrix), (2, 3))
    swapped = partial_trace(rho, [1, 0])
    assert swapped.dims == (3, 2)
    np.testing.assert_allclose(swapped.matrix, np.kron(b.matrix, a.matrix), atol=1e-15)


def test_partial_trace_product_state():
    rng = np.random.default_rng(2)
    a, b, c = (random_state(rng, (d,)) for d in (2, 3, 2))
    rho = DensityMatrix(np.kron(np.kron(a.matrix, b.matrix), c.matrix), (2, 3, 2))
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a.matrix, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b.matrix, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [2, 0]).matrix, np.kron(c.matrix, a.matrix), atol=1e-14)


def test_partial_trace_schmidt_spectrum():
    # Reduced spectrum of a pure state equals its squared singular values.
    rng = np.random.default_rng(3)
    psi = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    psi /= np.linalg.norm(psi)
    rho = pure(psi.ravel(), (3, 4))
    s = np.linalg.svd(psi, compute_uv=False)
    for keep in ([0], [1]):
        w = hermitian_eigenvalues(partial_trace(rho, keep).matrix)
        np.testing.assert_allclose(w[-3:], np.sort(s**2), atol=1e-13)


@pytest.mark.parametrize("keep", [[], [2], [0, 0], [-1]])
def test_partial_trace_rejects_bad_keep(keep):
    rho = random_state(np.random.default_rng(4), (2, 2))
    with pytest.raises(ValueError):
        partial_trace(rho, keep)


# ---- partial transpose ---------------------------------------------------------

def test_partial_transpose_involution_and_full_transpose():
    rho = random_state(np.random.default_rng(5), (2, 3, 2))
    for over in ([0], [1], [2], [0, 2]):
        twice = partial_transpose(partial_transpose(rho, over), over, rho.dims)
        np.testing.assert_allclose(twice, rho.matrix)
    np.testing.assert_allclose(partial_transpose(rho, [0, 1, 2]), rho.matrix.T)


@pytest.mark.parametrize("over", [0, 1])
def test_partial_transpose_matches_index_loop(over):
    rho = random_state(np.random.default_rng(6 + over), (2, 3))
    d0, d1 = rho.dims
    expected = np.zeros_like(rho.matrix)
    m = rho.matrix
    for i in range(d0):
        for j in range(d1):
            for k in range(d0):
                for l in range(d1):
                    if over == 0:
                        expected[k * d1 + j, i * d1 + l] = m[i * d1 + j, k * d1 + l]
                    else:
                        expected[i * d1 + l, k * d1 + j] = m[i * d1 + j, k * d1 + l]
    np.testing.assert_allclose(partial_transpose(rho, [over]), expected)


def test_bell_partial_transpose_spectrum():
    w = hermitian_eigenvalues(partial_transpose(bell(math.pi / 4), [0]))
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)


def test_partial_transpose_bare_matrix_needs_dims():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4) / 4, [0])
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4) / 4, [0], (2, 3))


# ---- eigensolver ---------------------------------------------------------------

def test_eigenvalues_identity_and_diagonal():
    np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4) / 4), [0.25] * 4)
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0])), [-1, 2, 3])
    np.testing.assert_allclose(hermitian_eigenvalues(np.array([[0.7]])), [0.7])


def test_eigenvalues_trace_and_determinant():
    rng = np.random.default_rng(8)
    x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    m = (x + x.conj().T) / 2
    w = hermitian_eigenvalues(m)
    assert w.sum() == pytest.approx(np.trace(m).real, abs=1e-12)
    assert np.prod(w) == pytest.approx(np.linalg.det(m).real, rel=1e-10)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 32), st.integers(0, 2**32 - 1))
def test_eigh_residuals(d, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = (x + x.conj().T) / 2
    w, v = hermitian_eigh(m)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(m @ v, v * w, atol=1e-10)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)


def test_eigh_degenerate_and_zero():
    np.testing.assert_allclose(hermitian_eigenvalues(np.zeros((5, 5))), np.zeros(5))
    p = np.full((4, 4), 0.25)  # rank-one projector
    np.testing.assert_allclose(hermitian_eigenvalues(p), [0, 0, 0, 1], atol=1e-15)


def test_eigh_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eigh(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        hermitian_eigh(np.ones((2, 3)))


# ---- negativity ----------------------------------------------------------------

@pytest.mark.parametrize("alpha", np.linspace(0, math.pi / 2, 9))
def test_negativity_schmidt_form(alpha):
    rho = bell(alpha)
    assert negativity(rho) == pytest.approx(0.5 * abs(math.sin(2 * alpha)), abs=1e-12)
    assert negativity(rho) == pytest.approx(brute_negativity(rho.matrix, (2, 2), 0), abs=1e-12)


@pytest.mark.parametrize("F", np.linspace(0, 1, 11))
def test_negativity_two_qubit_werner(F):
    rho = DensityMatrix(F * bell(math.pi / 4).matrix + (1 - F) * np.eye(4) / 4, (2, 2))
    assert negativity(rho) == pytest.approx(max(0.0, (3 * F - 1) / 4), abs=1e-12)


def test_negativity_zero_for_products():
    rng = np.random.default_rng(9)
    for _ in range(10):
        a, b = random_state(rng, (2,)), random_state(rng, (4,))
        assert negativity(DensityMatrix(np.kron(a.matrix, b.matrix), (2, 4))) == 0.0


@pytest.mark.parametrize("over", [0, 1])
def test_negativity_random_against_brute_force(over):
    rng = np.random.default_rng(10 + over)
    for _ in range(20):
        rho = random_state(rng, (2, 4), rank=int(rng.integers(1, 4)))
        cut = Bipartition((over,), (1 - over,))
        assert negativity(rho, cut) == pytest.approx(brute_negativity(rho.matrix, (2, 4), over), abs=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_negativity_local_unitary_and_bound(seed):
    rng = np.random.default_rng(seed)
    rho = random_state(rng, (2, 2, 2), rank=int(rng.integers(1, 5)))
    n = negativity(rho)
    assert 0.0 <= n <= 0.5 + 1e-12  # Alice is a qubit
    # Relabel Bob's two qubits and apply a local unitary on Alice.
    swapped = partial_trace(rho, [0, 2, 1])
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    u = np.kron(q, np.eye(4))
    rotated = DensityMatrix(u @ swapped.matrix @ u.conj().T, (2, 2, 2))
    assert negativity(rotated) == pytest.approx(n, abs=1e-10)


def test_negativity_of_physical_state_reduction():
    r = math.sqrt(0.5)
    psi = tensor_alice(("0", "1"), {"0": r * fock_state("0000"), "1": r * fock_state("1000")})
    assert negativity(from_pure(psi)) == pytest.approx(0.5, abs=1e-12)


def test_bipartition_checks():
    rho = random_state(np.random.default_rng(12), (2, 2, 2))
    for cut in (Bipartition((0,), (1,)), Bipartition((0, 1), (1, 2)), Bipartition((), (0, 1, 2))):
        with pytest.raises(ValueError):
            negativity(rho, cut)
