"""Four-mode fermionic Fock space for a single frequency sector.

Modes are stored in the fixed notation order ``|p q m n>``::

    p  particle, region I
    q  antiparticle, region II
    m  antiparticle, region I
    n  particle, region II

A basis ket is an occupation bit pattern; its integer index puts mode ``p``
in the most significant bit, so ``|1011>`` has index ``0b1011``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

N_MODES = 4
FOCK_DIM = 2**N_MODES


class Region(enum.Enum):
    I = "I"
    II = "II"


class Species(enum.Enum):
    PARTICLE = "particle"
    ANTIPARTICLE = "antiparticle"


class Mode(enum.IntEnum):
    """Canonical mode positions (``|pqmn>`` order)."""

    PARTICLE_I = 0
    ANTIPARTICLE_II = 1
    ANTIPARTICLE_I = 2
    PARTICLE_II = 3

    @property
    def region(self) -> Region:
        return Region.I if self in (Mode.PARTICLE_I, Mode.ANTIPARTICLE_I) else Region.II

    @property
    def species(self) -> Species:
        if self in (Mode.PARTICLE_I, Mode.PARTICLE_II):
            return Species.PARTICLE
        return Species.ANTIPARTICLE

    @classmethod
    def of(cls, region: Region, species: Species) -> "Mode":
        for mode in cls:
            if mode.region is region and mode.species is species:
                return mode
        raise ValueError(f"no mode for {region}, {species}")  # pragma: no cover


@dataclass(frozen=True)
class Ordering:
    """Operator ordering used for fermionic signs and for tracing.

    ``string_order`` is the order in which creation operators are applied to
    build a basis ket: a creation operator on mode ``k`` picks up
    ``(-1)**(number of occupied modes before k in string_order)``.
    ``register_order`` is the mode order in which the Fock space is read as a
    tensor product of qubits when tracing out modes. Moving from one to the
    other reorders creation operators and costs the permutation sign.
    """

    name: str
    string_order: tuple[int, ...]
    register_order: tuple[int, ...]


#: Kets written in ``|pqmn>`` order, traced after grouping modes by region
#: as (particle-I, antiparticle-I, particle-II, antiparticle-II).
CANONICAL = Ordering(
    "canonical",
    string_order=(0, 1, 2, 3),
    register_order=(
        Mode.PARTICLE_I,
        Mode.ANTIPARTICLE_I,
        Mode.PARTICLE_II,
        Mode.ANTIPARTICLE_II,
    ),
)

#: Reversed sign string, and the ``|pqmn>`` register traced as plain qubits.
ALTERNATE = Ordering("alternate", string_order=(3, 2, 1, 0), register_order=(3, 2, 1, 0))

ORDERINGS = {o.name: o for o in (CANONICAL, ALTERNATE)}


def occupations(index: int) -> tuple[int, ...]:
    """Occupation numbers of basis ket ``index`` in ``|pqmn>`` order."""
    return tuple((index >> (N_MODES - 1 - k)) & 1 for k in range(N_MODES))


def basis_index(occ: Sequence[int] | str) -> int:
    if isinstance(occ, str):
        return _label_index(occ)
    if len(occ) != N_MODES or any(o not in (0, 1) for o in occ):
        raise ValueError(f"invalid occupation pattern {occ!r}")
    return int("".join(str(o) for o in occ), 2)


@lru_cache(maxsize=None)
def _label_index(label: str) -> int:
    if len(label) != N_MODES or set(label) - {"0", "1"}:
        raise ValueError(f"invalid occupation pattern {label!r}")
    return int(label, 2)


def _bit(mode: int) -> int:
    return 1 << (N_MODES - 1 - mode)


@lru_cache(maxsize=None)
def _creation_matrix(mode: int, string_order: tuple[int, ...]) -> np.ndarray:
    mat = np.zeros((FOCK_DIM, FOCK_DIM))
    before = string_order[: string_order.index(mode)]
    for idx in range(FOCK_DIM):
        if idx & _bit(mode):
            continue
        occ = occupations(idx)
        sign = (-1) ** sum(occ[k] for k in before)
        mat[idx | _bit(mode), idx] = sign
    mat.setflags(write=False)
    return mat


def creation_operator(mode: int, ordering: Ordering = CANONICAL) -> np.ndarray:
    """Real 16x16 matrix of the creation operator on ``mode``."""
    return _creation_matrix(int(mode), ordering.string_order)


def annihilation_operator(mode: int, ordering: Ordering = CANONICAL) -> np.ndarray:
    return creation_operator(mode, ordering).T


@lru_cache(maxsize=None)
def _register_transform(string_order: tuple[int, ...], register_order: tuple[int, ...]):
    # Signed permutation taking |pqmn> amplitudes to the register basis.
    perm = np.zeros(FOCK_DIM, dtype=int)
    signs = np.zeros(FOCK_DIM)
    for idx in range(FOCK_DIM):
        occ = occupations(idx)
        rank = [string_order.index(k) for k in register_order if occ[k]]
        inversions = sum(
            1 for i in range(len(rank)) for j in range(i + 1, len(rank)) if rank[i] > rank[j]
        )
        perm[idx] = basis_index([occ[k] for k in register_order])
        signs[idx] = (-1) ** inversions
    perm.setflags(write=False)
    signs.setflags(write=False)
    return perm, signs


def to_register(fock_amplitudes: np.ndarray, ordering: Ordering = CANONICAL) -> np.ndarray:
    """Re-express Fock amplitudes (last axis, ``|pqmn>`` order) in the register order.

    Bit ``j`` of the output index (most significant first) is the occupation
    of ``ordering.register_order[j]``.
    """
    perm, signs = _register_transform(ordering.string_order, ordering.register_order)
    amps = np.asarray(fock_amplitudes)
    out = np.zeros_like(amps, dtype=complex)
    out[..., perm] = amps * signs
    return out


@dataclass(frozen=True, eq=False)
class StateVector:
    """Amplitudes over ``(Alice label) x (16-dim Fock space)``.

    ``alice_labels`` is empty for a bare Fock ket, otherwise a pair such as
    ``("0", "1")`` or ``("+", "-")``. Amplitudes are not required to be
    normalized; operator application may legitimately return zero.
    """

    amplitudes: np.ndarray
    alice_labels: tuple[str, ...] = ()

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.alice_dim * FOCK_DIM:
            raise ValueError(
                f"expected {self.alice_dim * FOCK_DIM} amplitudes, got {amps.size}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def alice_dim(self) -> int:
        return max(1, len(self.alice_labels))

    @property
    def blocks(self) -> np.ndarray:
        """Amplitudes as an ``(alice_dim, 16)`` array."""
        return self.amplitudes.reshape(self.alice_dim, FOCK_DIM)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n, self.alice_labels)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_compatible(self, other)
        return StateVector(self.amplitudes + other.amplitudes, self.alice_labels)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "StateVector":
        return StateVector(scalar * self.amplitudes, self.alice_labels)

    def __repr__(self) -> str:
        terms = []
        for i, amp in enumerate(self.amplitudes):
            if abs(amp) > 1e-14:
                a, f = divmod(i, FOCK_DIM)
                alice = f"|{self.alice_labels[a]}>" if self.alice_labels else ""
                terms.append(f"{amp:.6g}{alice}|{f:04b}>")
        return "StateVector(" + (" + ".join(terms) or "0") + ")"


def _check_compatible(a: StateVector, b: StateVector) -> None:
    if a.alice_labels != b.alice_labels:
        raise ValueError(f"basis mismatch: {a.alice_labels} vs {b.alice_labels}")


def fock_state(occ: Sequence[int] | str) -> StateVector:
    """Basis ket with the given ``|pqmn>`` occupations, e.g. ``fock_state("1000")``."""
    amps = np.zeros(FOCK_DIM, dtype=complex)
    amps[basis_index(occ)] = 1.0
    return StateVector(amps)


def tensor_alice(alice_labels: tuple[str, ...], parts: dict[str, StateVector]) -> StateVector:
    """Build ``sum_label |label>_A (x) parts[label]`` from bare Fock kets."""
    blocks = np.zeros((len(alice_labels), FOCK_DIM), dtype=complex)
    for label, ket in parts.items():
        if ket.alice_labels:
            raise ValueError("components must be bare Fock kets")
        blocks[alice_labels.index(label)] += ket.amplitudes
    return StateVector(blocks, alice_labels)


def apply_operator(state: StateVector, op: np.ndarray) -> StateVector:
    """Apply a 16x16 Fock-space operator to every Alice block."""
    return StateVector(state.blocks @ np.asarray(op).T, state.alice_labels)


def apply_creation(state: StateVector, mode: int, ordering: Ordering = CANONICAL) -> StateVector:
    return apply_operator(state, creation_operator(mode, ordering))


def apply_annihilation(
    state: StateVector, mode: int, ordering: Ordering = CANONICAL
) -> StateVector:
    return apply_operator(state, annihilation_operator(mode, ordering))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, antilinear in ``a``."""
    _check_compatible(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))
