# Domain models package
from .circuit import Gate, MismatchFreeCircuit, MultiControlledX, Toffoli, ToffoliCircuit
from .pauli import Pauli
from .permutation import PermGate

__all__ = [
    "Gate",
    "MismatchFreeCircuit",
    "MultiControlledX",
    "Pauli",
    "PermGate",
    "Toffoli",
    "ToffoliCircuit",
]
