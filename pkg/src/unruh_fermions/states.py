"""Unruh-mode kets and the shared Alice-Bob states built from them."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    CANONICAL,
    FOCK_DIM,
    Mode,
    Ordering,
    StateVector,
    annihilation_operator,
    apply_operator,
    basis_index,
    creation_operator,
    tensor_alice,
)
from .measures import DensityMatrix, from_pure

GAMMA_MAX = math.pi / 4
_TOL = 1e-12


def gamma_from_acceleration(a: float, omega: float, c: float = 1.0) -> float:
    """Unruh angle for proper acceleration ``a`` and mode frequency ``omega``.

    ``cos(gamma) = (exp(-2 pi omega c / a) + 1) ** -0.5``, so ``gamma`` runs
    from 0 (inertial) towards pi/4 (infinite acceleration).
    """
    if not a > 0:
        raise ValueError(f"acceleration must be positive, got {a}")
    if not omega > 0:
        raise ValueError(f"frequency must be positive, got {omega}")
    return math.acos((math.exp(-2 * math.pi * omega * c / a) + 1.0) ** -0.5)


@dataclass(frozen=True)
class UnruhParams:
    gamma: float
    q_R: float = 1.0

    def __post_init__(self):
        if not -_TOL <= self.gamma <= GAMMA_MAX + _TOL:
            raise ValueError(f"gamma must lie in [0, pi/4], got {self.gamma}")
        if not -_TOL <= self.q_R <= 1 + _TOL:
            raise ValueError(f"q_R must lie in [0, 1], got {self.q_R}")

    @property
    def q_L(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.q_R**2))


def _ket(terms: dict[str, float]) -> StateVector:
    amps = np.zeros(FOCK_DIM, dtype=complex)
    for label, coeff in terms.items():
        amps[basis_index(label)] += coeff
    return StateVector(amps)


def unruh_vacuum(p: UnruhParams) -> StateVector:
    c, s = math.cos(p.gamma), math.sin(p.gamma)
    return _ket({"0000": c * c, "0011": -s * c, "1100": s * c, "1111": -s * s})


def unruh_particle(p: UnruhParams) -> StateVector:
    c, s = math.cos(p.gamma), math.sin(p.gamma)
    return _ket(
        {"1000": p.q_R * c, "1011": -p.q_R * s, "1101": p.q_L * s, "0001": p.q_L * c}
    )


def unruh_antiparticle(p: UnruhParams) -> StateVector:
    c, s = math.cos(p.gamma), math.sin(p.gamma)
    return _ket(
        {"0100": p.q_L * c, "0111": -p.q_L * s, "1110": p.q_R * s, "0010": p.q_R * c}
    )


# Operator-level construction. Rindler-wedge Unruh operators:
#   A_R = cos g a_I  - sin g b_II^+      A_L = cos g a_II - sin g b_I^+
#   B_R = cos g b_I  + sin g a_II^+      B_L = cos g b_II + sin g a_I^+
# where a/b act on particle/antiparticle modes. The antiparticle signs are the
# ones for which q_L B_L^+ + q_R B_R^+ maps the vacuum onto
# ``unruh_antiparticle``.


def unruh_annihilators(p: UnruhParams, ordering: Ordering = CANONICAL) -> dict[str, np.ndarray]:
    c, s = math.cos(p.gamma), math.sin(p.gamma)
    a = lambda m: annihilation_operator(m, ordering)  # noqa: E731
    ad = lambda m: creation_operator(m, ordering)  # noqa: E731
    return {
        "A_R": c * a(Mode.PARTICLE_I) - s * ad(Mode.ANTIPARTICLE_II),
        "A_L": c * a(Mode.PARTICLE_II) - s * ad(Mode.ANTIPARTICLE_I),
        "B_R": c * a(Mode.ANTIPARTICLE_I) + s * ad(Mode.PARTICLE_II),
        "B_L": c * a(Mode.ANTIPARTICLE_II) + s * ad(Mode.PARTICLE_I),
    }


def unruh_particle_creator(p: UnruhParams, ordering: Ordering = CANONICAL) -> np.ndarray:
    """``q_L A_L^+ + q_R A_R^+`` as a 16x16 matrix."""
    ops = unruh_annihilators(p, ordering)
    return p.q_L * ops["A_L"].T + p.q_R * ops["A_R"].T


def unruh_antiparticle_creator(p: UnruhParams, ordering: Ordering = CANONICAL) -> np.ndarray:
    ops = unruh_annihilators(p, ordering)
    return p.q_L * ops["B_L"].T + p.q_R * ops["B_R"].T


def vacuum_from_operators(p: UnruhParams, ordering: Ordering = CANONICAL) -> StateVector:
    """Common null vector of the four Unruh annihilators, phase fixed so <0000|.> > 0.

    Raises ValueError if the annihilators have no common null vector.
    """
    stacked = np.vstack(list(unruh_annihilators(p, ordering).values()))
    _, sv, vh = np.linalg.svd(stacked)
    if sv[-1] > 1e-10:
        raise ValueError("Unruh annihilators have no common vacuum")
    vec = vh[-1].conj()
    pivot = vec[basis_index("0000")]
    vec = vec * (abs(pivot) / pivot) if abs(pivot) > 1e-14 else vec
    return StateVector(vec / np.linalg.norm(vec))


def particle_from_operators(
    p: UnruhParams,
    ordering: Ordering = CANONICAL,
    vacuum: StateVector | None = None,
    normalize: bool = True,
) -> StateVector:
    """``a_U^+ |0_U>``; the vacuum defaults to the closed form.

    When the vacuum really is annihilated by the Unruh operators the result
    already has unit norm, so ``normalize=False`` is the stricter comparison.
    """
    vac = unruh_vacuum(p) if vacuum is None else vacuum
    out = apply_operator(vac, unruh_particle_creator(p, ordering))
    return out.normalized() if normalize else out


def antiparticle_from_operators(
    p: UnruhParams,
    ordering: Ordering = CANONICAL,
    vacuum: StateVector | None = None,
    normalize: bool = True,
) -> StateVector:
    vac = unruh_vacuum(p) if vacuum is None else vacuum
    out = apply_operator(vac, unruh_antiparticle_creator(p, ordering))
    return out.normalized() if normalize else out


class Family(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PHI_STAR = "phi*"
    WERNER = "werner"

    @classmethod
    def parse(cls, text: str) -> "Family":
        key = text.strip().lower().replace("_", "").replace("plus", "+").replace("minus", "-")
        key = key.replace("star", "*")
        for fam in cls:
            if fam.value == key:
                return fam
        raise ValueError(f"unknown family {text!r}; choose from {[f.value for f in cls]}")


@dataclass(frozen=True)
class SharedStateSpec:
    family: Family
    alpha: float = math.pi / 4
    fidelity: float | None = None

    def __post_init__(self):
        if not -_TOL <= self.alpha <= math.pi / 2 + _TOL:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        if self.family is Family.WERNER:
            if self.fidelity is None:
                raise ValueError("Werner state requires a fidelity F")
            if not 0.0 <= self.fidelity <= 1.0:
                raise ValueError(f"fidelity must lie in [0, 1], got {self.fidelity}")


def build_shared_state(spec: SharedStateSpec, p: UnruhParams) -> StateVector | DensityMatrix:
    """Alice (inertial) and Bob (Unruh modes) after Bob starts accelerating.

    Pure families give a 32-amplitude ``StateVector``; the Werner family gives
    a 32x32 ``DensityMatrix`` with factors ``(2, 16)``.
    """
    ca, sa = math.cos(spec.alpha), math.sin(spec.alpha)
    vac, plus, minus = unruh_vacuum(p), unruh_particle(p), unruh_antiparticle(p)
    if spec.family is Family.PHI_PLUS:
        return tensor_alice(("0", "1"), {"0": ca * vac, "1": sa * plus})
    if spec.family is Family.PHI_MINUS:
        return tensor_alice(("0", "1"), {"0": ca * vac, "1": sa * minus})
    if spec.family is Family.PHI_STAR:
        return tensor_alice(("+", "-"), {"+": ca * plus, "-": sa * minus})

    bell = tensor_alice(("0", "1"), {"0": math.sqrt(0.5) * vac, "1": math.sqrt(0.5) * plus})
    noise = np.zeros((2 * FOCK_DIM, 2 * FOCK_DIM), dtype=complex)
    for a in range(2):
        for ket in (vac, plus):
            v = np.zeros((2, FOCK_DIM), dtype=complex)
            v[a] = ket.amplitudes
            v = v.reshape(-1)
            noise += np.outer(v, v.conj())
    F = spec.fidelity
    mat = F * from_pure(bell).matrix + (1 - F) / 4 * noise
    return DensityMatrix(mat, (2, FOCK_DIM))
