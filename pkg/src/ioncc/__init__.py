"""Compiler from OpenQASM 2.0 circuits to a restricted trapped-ion native gate set."""

__version__ = "0.1.0"

from .circuit import CircuitDag, Gate, GateKind, gate, new_circuit  # noqa: E402
from .pipeline import CompileOptions, CompileReport, compile_circuit, compile_naive, count_gates  # noqa: E402
from .qasm import load_qasm, parse_qasm, lower_to_dag  # noqa: E402

__all__ = [
    "CircuitDag",
    "CompileOptions",
    "CompileReport",
    "Gate",
    "GateKind",
    "compile_circuit",
    "compile_naive",
    "count_gates",
    "gate",
    "load_qasm",
    "lower_to_dag",
    "new_circuit",
    "parse_qasm",
]
