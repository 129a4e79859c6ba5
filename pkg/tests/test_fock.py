import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unruh_fermions.fock import (
    ALTERNATE,
    CANONICAL,
    FOCK_DIM,
    Mode,
    StateVector,
    annihilation_operator,
    apply_annihilation,
    apply_creation,
    basis_index,
    creation_operator,
    fock_state,
    inner_product,
    occupations,
    tensor_alice,
    to_register,
)

MODES = list(Mode)


def kron_jordan_wigner(mode, order=(0, 1, 2, 3)):
    """Creation operator from explicit Kronecker products of Z strings."""
    raise_ = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0> -> |1>
    z = np.diag([1.0, -1.0])
    before = set(order[: order.index(mode)])
    factors = [raise_ if k == mode else (z if k in before else np.eye(2)) for k in range(4)]
    return reduce(np.kron, factors)


def random_fock(rng):
    v = rng.normal(size=FOCK_DIM) + 1j * rng.normal(size=FOCK_DIM)
    return StateVector(v / np.linalg.norm(v))


@pytest.mark.parametrize("mode", MODES)
def test_creation_matches_kron_construction(mode):
    np.testing.assert_array_equal(creation_operator(mode), kron_jordan_wigner(mode))


@pytest.mark.parametrize("mode", MODES)
def test_alternate_creation_matches_reversed_string(mode):
    np.testing.assert_array_equal(
        creation_operator(mode, ALTERNATE), kron_jordan_wigner(mode, (3, 2, 1, 0))
    )


def test_create_on_vacuum():
    out = apply_creation(fock_state("0000"), Mode.PARTICLE_I)
    np.testing.assert_array_equal(out.amplitudes, fock_state("1000").amplitudes)


def test_pauli_exclusion():
    out = apply_creation(fock_state("1000"), Mode.PARTICLE_I)
    assert out.norm() == 0.0


def test_sign_from_preceding_occupied_mode():
    # One occupied mode (particle-I) precedes antiparticle-II.
    out = apply_creation(fock_state("1000"), Mode.ANTIPARTICLE_II)
    np.testing.assert_array_equal(out.amplitudes, -fock_state("1100").amplitudes)


def test_annihilation_examples():
    out = apply_annihilation(fock_state("1000"), Mode.PARTICLE_I)
    np.testing.assert_array_equal(out.amplitudes, fock_state("0000").amplitudes)
    for mode in MODES:
        assert apply_annihilation(fock_state("0000"), mode).norm() == 0.0


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("ordering", [CANONICAL, ALTERNATE])
def test_annihilation_is_adjoint(mode, ordering):
    c = creation_operator(mode, ordering)
    a = annihilation_operator(mode, ordering)
    assert np.max(np.abs(a - c.conj().T)) <= 1e-15


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(MODES))
def test_adjoint_on_random_states(seed, mode):
    rng = np.random.default_rng(seed)
    psi, phi = random_fock(rng), random_fock(rng)
    lhs = inner_product(psi, apply_annihilation(phi, mode))
    rhs = np.conj(inner_product(phi, apply_creation(psi, mode)))
    assert abs(lhs - rhs) < 1e-14


@pytest.mark.parametrize("ordering", [CANONICAL, ALTERNATE])
def test_canonical_anticommutation(ordering):
    eye = np.eye(FOCK_DIM)
    for i, j in itertools.product(MODES, MODES):
        ci, cj = creation_operator(i, ordering), creation_operator(j, ordering)
        ai = annihilation_operator(i, ordering)
        np.testing.assert_array_equal(ai @ cj + cj @ ai, eye * (i == j))
        np.testing.assert_array_equal(ci @ cj + cj @ ci, 0 * eye)


@pytest.mark.parametrize("mode", MODES)
def test_nilpotent_and_number_operator(mode):
    c = creation_operator(mode)
    np.testing.assert_array_equal(c @ c, np.zeros_like(c))
    number = c @ annihilation_operator(mode)
    expected = np.diag([occupations(i)[mode] for i in range(FOCK_DIM)])
    np.testing.assert_array_equal(number, expected)


def test_inner_product():
    v = fock_state("0110")
    assert inner_product(v, v) == 1
    assert inner_product(fock_state("0000"), fock_state("1000")) == 0
    a = StateVector(np.arange(16) * 1j)
    b = StateVector(np.ones(16))
    assert inner_product(a, b) == np.conj(inner_product(b, a))


def test_inner_product_dimension_mismatch():
    with pytest.raises(ValueError):
        inner_product(fock_state("0000"), tensor_alice(("0", "1"), {"0": fock_state("0000")}))


def test_state_vector_validation():
    with pytest.raises(ValueError):
        StateVector(np.zeros(15))
    with pytest.raises(ValueError):
        StateVector(np.zeros(16)).normalized()
    with pytest.raises(ValueError):
        basis_index("012")


def test_state_vector_is_immutable():
    v = fock_state("0000")
    with pytest.raises(ValueError):
        v.amplitudes[0] = 2.0


def test_mode_labels():
    assert [(m.region.value, m.species.value) for m in Mode] == [
        ("I", "particle"),
        ("II", "antiparticle"),
        ("I", "antiparticle"),
        ("II", "particle"),
    ]


def test_register_regroup_signs():
    # |pqmn> = |1111> = p+ q+ m+ n+ |0>; regrouping to p m n q needs two swaps.
    assert to_register(fock_state("1111").amplitudes)[0b1111] == 1
    # |1101> -> p n q after regrouping: one transposition.
    out = to_register(fock_state("1101").amplitudes)
    assert out[0b1011] == -1
    # ALTERNATE reads the register in string order: a pure relabelling.
    assert np.all(np.abs(to_register(fock_state("1101").amplitudes, ALTERNATE)) <= 1)
    assert to_register(fock_state("1101").amplitudes, ALTERNATE)[0b1011] == 1
