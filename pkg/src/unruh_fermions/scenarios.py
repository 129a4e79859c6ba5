"""Detector configurations and the reduced Alice-Bob states they see."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import CANONICAL, FOCK_DIM, Mode, Ordering, Region, Species, StateVector, to_register
from .measures import DensityMatrix, negativity, partial_trace
from .states import Family, SharedStateSpec, UnruhParams, build_shared_state


@dataclass(frozen=True)
class DetectorConfig:
    """Who observes (Bob in region I or anti-Bob in region II) and what they resolve.

    A non-distinguishing detector keeps both species of its region, particle
    first; a distinguishing one keeps only ``species``.
    """

    region: Region
    distinguishing: bool = False
    species: Species | None = None

    def __post_init__(self):
        if self.distinguishing and self.species is None:
            raise ValueError("a distinguishing detector needs a species")
        if not self.distinguishing and self.species is not None:
            raise ValueError("a non-distinguishing detector keeps both species")

    @property
    def modes(self) -> tuple[Mode, ...]:
        if self.distinguishing:
            return (Mode.of(self.region, self.species),)
        return (
            Mode.of(self.region, Species.PARTICLE),
            Mode.of(self.region, Species.ANTIPARTICLE),
        )

    @property
    def name(self) -> str:
        base = "bob-I" if self.region is Region.I else "antibob-II"
        return f"{base}-{self.species.value}" if self.distinguishing else base

    @classmethod
    def parse(cls, text: str) -> "DetectorConfig":
        for cfg in ALL_CONFIGS:
            if cfg.name.lower() == text.strip().lower():
                return cfg
        raise ValueError(
            f"unknown detector config {text!r}; choose from {[c.name for c in ALL_CONFIGS]}"
        )

    def __str__(self) -> str:
        return self.name


BOB_I = DetectorConfig(Region.I)
ANTIBOB_II = DetectorConfig(Region.II)
BOB_I_PARTICLE = DetectorConfig(Region.I, True, Species.PARTICLE)
BOB_I_ANTIPARTICLE = DetectorConfig(Region.I, True, Species.ANTIPARTICLE)
ANTIBOB_II_PARTICLE = DetectorConfig(Region.II, True, Species.PARTICLE)
ANTIBOB_II_ANTIPARTICLE = DetectorConfig(Region.II, True, Species.ANTIPARTICLE)

NON_DISTINGUISHING = (BOB_I, ANTIBOB_II)
DISTINGUISHING = (BOB_I_PARTICLE, BOB_I_ANTIPARTICLE, ANTIBOB_II_PARTICLE, ANTIBOB_II_ANTIPARTICLE)
ALL_CONFIGS = NON_DISTINGUISHING + DISTINGUISHING


@lru_cache(maxsize=None)
def _register_unitary(ordering: Ordering) -> np.ndarray:
    u = np.kron(np.eye(2), to_register(np.eye(FOCK_DIM), ordering).T.real)
    u.setflags(write=False)
    return u


@lru_cache(maxsize=None)
def _kept_factors(config: DetectorConfig, ordering: Ordering) -> tuple[tuple[int, ...], tuple[int, ...]]:
    keep = [0] + [1 + ordering.register_order.index(m) for m in config.modes]
    return tuple(keep), tuple(keep) + tuple(i for i in range(5) if i not in keep)


def reduce_for(
    config: DetectorConfig,
    state: StateVector | DensityMatrix,
    ordering: Ordering = CANONICAL,
) -> DensityMatrix:
    """Reduced state of Alice and the modes ``config`` can detect.

    The Fock part is first rewritten in ``ordering.register_order`` (with the
    fermionic reordering signs) and then traced as a qubit register. Output
    factors are ``(2, 2, 2)`` or ``(2, 2)``: Alice, then ``config.modes``.
    """
    keep, axes = _kept_factors(config, ordering)
    if isinstance(state, StateVector):
        if state.alice_dim != 2:
            raise ValueError("expected an Alice x Fock state, got a bare Fock ket")
        if abs(state.norm() - 1) > 1e-9:
            raise ValueError(f"state is not normalized (norm {state.norm()!r})")
        t = to_register(state.blocks, ordering).reshape(2, 2, 2, 2, 2)
        t = t.transpose(axes)
        t = t.reshape(2 ** len(keep), -1)
        return DensityMatrix(t @ t.conj().T, (2,) * len(keep))
    if state.dims != (2, FOCK_DIM):
        raise ValueError(f"expected an Alice x Fock state with factors (2, 16), got {state.dims}")
    u = _register_unitary(ordering)
    full = DensityMatrix(u @ state.matrix @ u.T, (2, 2, 2, 2, 2))
    return partial_trace(full, keep)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    reduced: DensityMatrix
    negativity: float
    family: Family
    alpha: float
    gamma: float
    q_R: float
    fidelity: float | None
    config: DetectorConfig


def scenario_negativity(
    family: Family,
    alpha: float,
    fidelity: float | None,
    params: UnruhParams,
    config: DetectorConfig,
    ordering: Ordering = CANONICAL,
) -> ScenarioResult:
    spec = SharedStateSpec(family, alpha, fidelity)
    reduced = reduce_for(config, build_shared_state(spec, params), ordering)
    return ScenarioResult(
        reduced=reduced,
        negativity=negativity(reduced),
        family=family,
        alpha=alpha,
        gamma=params.gamma,
        q_R=params.q_R,
        fidelity=fidelity,
        config=config,
    )
