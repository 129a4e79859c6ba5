"""Fermionic Unruh-mode entanglement beyond the single-mode approximation."""

from .fock import ALTERNATE, CANONICAL, Mode, Ordering, StateVector
from .measures import Bipartition, DensityMatrix, negativity, partial_trace, partial_transpose
from .scenarios import ALL_CONFIGS, DetectorConfig, reduce_for, scenario_negativity
from .states import Family, SharedStateSpec, UnruhParams, build_shared_state

__all__ = [
    "ALL_CONFIGS",
    "ALTERNATE",
    "Bipartition",
    "CANONICAL",
    "DensityMatrix",
    "DetectorConfig",
    "Family",
    "Mode",
    "Ordering",
    "SharedStateSpec",
    "StateVector",
    "UnruhParams",
    "build_shared_state",
    "negativity",
    "partial_trace",
    "partial_transpose",
    "reduce_for",
    "scenario_negativity",
]
