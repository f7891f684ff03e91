"""Stabilizer-circuit simulation of reset-induced entanglement phase
transitions in measurement-free random Clifford circuits."""

__version__ = "0.1.0"

from .circuit import CircuitConfig, TrajectoryRecord, run_trajectory, step
from .clifford import CliffordGate2, apply_gate, sample_clifford2
from .gf2 import BitMatrix, rank, symplectic_product
from .observables import Cut, half_cut, log_purity, negativity
from .pauli import PauliString, StabilizerState, canonicalize, multiply
from .reset import classify_site, reduce_to_representatives, reset_site

__all__ = [
    "BitMatrix",
    "CircuitConfig",
    "CliffordGate2",
    "Cut",
    "PauliString",
    "StabilizerState",
    "TrajectoryRecord",
    "apply_gate",
    "canonicalize",
    "classify_site",
    "half_cut",
    "log_purity",
    "multiply",
    "negativity",
    "rank",
    "reduce_to_representatives",
    "reset_site",
    "run_trajectory",
    "sample_clifford2",
    "step",
    "symplectic_product",
]
