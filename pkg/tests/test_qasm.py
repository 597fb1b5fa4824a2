import math

import numpy as np
import pytest
from hypothesis import given, settings

from ioncc.circuit import GateKind
from ioncc.errors import QasmError, UnsupportedFeatureError, UnsupportedGateError
from ioncc.oracle import circuit_unitary, circuits_equivalent, phase_distance
from ioncc.qasm import Measure, circuit_to_qasm, evaluate, load_qasm, lower_to_dag, parse_qasm, qasm_to_circuit

from .conftest import circuits

K = GateKind
HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'
INPUT_KINDS = [k for k in K if k not in (K.R,)]


def kinds_of(c):
    return [(g.kind, g.qubits) for g in c.ordered_gates()]


def test_minimal_program_without_header():
    prog = parse_qasm("qreg q[3]; cx q[0],q[1];")
    assert prog.qregs == {"q": 3}
    c = lower_to_dag(prog).circuit
    assert kinds_of(c) == [(K.CNOT, (0, 1))]


def test_measure_is_recorded_and_stripped():
    text = HEADER + "qreg q[2];\ncreg c[2];\nh q[0];\nmeasure q -> c;\nbarrier q;\n"
    prog = parse_qasm(text)
    assert any(isinstance(s, Measure) for s in prog.statements)
    low = lower_to_dag(prog)
    assert low.measures_stripped == 1 and low.barriers_stripped == 1
    assert kinds_of(low.circuit) == [(K.H, (0,))]


def test_if_is_unsupported():
    with pytest.raises(UnsupportedFeatureError):
        parse_qasm("qreg q[1]; creg c[2]; if(c==1) x q[0];")


@pytest.mark.parametrize("stmt", ["opaque g q;", "reset q[0];"])
def test_other_unsupported_features(stmt):
    with pytest.raises(UnsupportedFeatureError):
        parse_qasm(f"qreg q[1];\n{stmt}\n")


def test_version_three_is_rejected():
    with pytest.raises(UnsupportedFeatureError):
        parse_qasm("OPENQASM 3.0;\nqreg q[1];")


def test_clifford_t_statements_in_order():
    c = qasm_to_circuit(HEADER + "qreg q[2];\nh q[0];\nt q[1];\ntdg q[0];\ncx q[0],q[1];\n")
    assert kinds_of(c) == [(K.H, (0,)), (K.T, (1,)), (K.TDG, (0,)), (K.CNOT, (0, 1))]


def test_cu1_parameter_in_pi_units():
    c = qasm_to_circuit(HEADER + "qreg q[2];\ncu1(pi/2) q[0],q[1];\n")
    (g,) = c.ordered_gates()
    assert g.kind is K.CU1 and math.isclose(g.params[0], 0.5)


def test_ccx_matches_toffoli():
    c = qasm_to_circuit(HEADER + "qreg q[3];\nccx q[0],q[1],q[2];\n")
    assert len(c) == 15
    tof = np.eye(8, dtype=complex)
    # controls on qubits 0 and 1 (low bits), target qubit 2
    tof[[3, 7]] = tof[[7, 3]]
    assert phase_distance(circuit_unitary(c), tof) < 1e-10


def test_register_broadcast_and_multiple_registers():
    c = qasm_to_circuit(HEADER + "qreg a[2];\nqreg b[2];\nh a;\ncx a,b;\ncx a[0],b;\n")
    assert c.n == 4
    assert kinds_of(c) == [
        (K.H, (0,)), (K.H, (1,)),
        (K.CNOT, (0, 2)), (K.CNOT, (1, 3)),
        (K.CNOT, (0, 2)), (K.CNOT, (0, 3)),
    ]


def test_user_gate_is_inlined():
    text = HEADER + "gate foo(a) x, y { rz(a/2) x; cx x, y; }\nqreg q[2];\nfoo(pi) q[1], q[0];\n"
    c = qasm_to_circuit(text)
    assert kinds_of(c) == [(K.RZ, (1,)), (K.CNOT, (1, 0))]
    assert math.isclose(c.ordered_gates()[0].params[0], 0.5)


def test_recursive_gate_is_rejected():
    text = "gate a x { b x; }\ngate b x { a x; }\nqreg q[1];\na q[0];\n"
    with pytest.raises(QasmError):
        qasm_to_circuit(text)


def test_unknown_gate():
    with pytest.raises(UnsupportedGateError):
        qasm_to_circuit("qreg q[1];\nfrob q[0];\n")


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("qreg q[2];\ncx q[0] q[1];\n", 2, 9),
        ("qreg q[2];\nh q[5];\n", 2, 3),
        ("qreg q[2];\n\nh r[0];\n", 3, 3),
        ("qreg q[2];\nh q[0];\n  $\n", 3, 3),
    ],
)
def test_errors_carry_position(text, line, col):
    with pytest.raises(QasmError) as e:
        qasm_to_circuit(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_arity_mismatch_and_repeated_qubits():
    with pytest.raises(QasmError):
        qasm_to_circuit("qreg q[2];\ncx q[0];\n")
    with pytest.raises(QasmError):
        qasm_to_circuit("qreg q[2];\ncx q[0],q[0];\n")


def test_no_register():
    with pytest.raises(QasmError):
        qasm_to_circuit("OPENQASM 2.0;\n")


def test_expressions():
    prog = parse_qasm("qreg q[1];\nrz(-pi/4 + 2*sin(pi/2)^2 - cos(0)) q[0];\n")
    (stmt,) = prog.statements
    assert math.isclose(evaluate(stmt.params[0]), -math.pi / 4 + 1)


def test_load_from_file(tmp_path):
    p = tmp_path / "x.qasm"
    p.write_text(HEADER + "qreg q[1];\nx q[0];\n")
    assert kinds_of(load_qasm(p).circuit) == [(K.X, (0,))]


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=4, max_gates=15, kinds=INPUT_KINDS))
def test_round_trip_preserves_unitary(c):
    back = qasm_to_circuit(circuit_to_qasm(c))
    assert back.n == c.n
    assert circuits_equivalent(c, back)
