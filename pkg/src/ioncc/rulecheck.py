"""Self-test of every rewrite identity and frontend lowering against dense matrices."""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

import numpy as np

from .circuit import GateKind, gate
from .gates import ALL_RULES, gate_matrix
from .oracle import gates_unitary, phase_distance
from .qasm import BUILTINS

K = GateKind
RULE_TOL = 1e-10


@dataclass
class RuleCheck:
    name: str
    case: str
    distance: float

    @property
    def ok(self) -> bool:
        return self.distance < RULE_TOL


def _check_rules(rng: random.Random) -> list[RuleCheck]:
    out = []
    for rule in ALL_RULES:
        arity = rule.kind.arity
        orders = [tuple(range(arity)), tuple(reversed(range(arity)))]
        for sample in rule.samples:
            params = sample if sample is not None else tuple(rng.uniform(0, 2) for _ in range(rule.kind.num_params))
            for qs in orders:
                g = gate(rule.kind, *qs, params=params)
                lhs = gates_unitary(arity, [g])
                rhs = gates_unitary(arity, rule.template(g))
                case = f"{rule.kind.label}{tuple(round(p, 6) for p in params)} on {qs}"
                out.append(RuleCheck(rule.name, case, phase_distance(lhs, rhs)))
    return out


# Reference matrices for the frontend, written out independently of gates.py.
# Convention: the first qubit argument is the most significant bit.


def _rz(t: float) -> np.ndarray:
    return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])


def _ry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _u3(t: float, p: float, l: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array(
        [[c, -cmath.exp(1j * l) * s], [cmath.exp(1j * p) * s, cmath.exp(1j * (p + l)) * c]], dtype=complex
    )


def _controlled(u: np.ndarray) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_TOFFOLI = np.eye(8, dtype=complex)
_TOFFOLI[[6, 7]] = _TOFFOLI[[7, 6]]

FRONTEND_REFERENCE = {
    "id": lambda: np.eye(2, dtype=complex),
    "x": lambda: _X,
    "y": lambda: np.array([[0, -1j], [1j, 0]]),
    "z": lambda: np.diag([1, -1]).astype(complex),
    "h": lambda: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "s": lambda: np.diag([1, 1j]),
    "sdg": lambda: np.diag([1, -1j]),
    "t": lambda: np.diag([1, cmath.exp(0.25j * math.pi)]),
    "tdg": lambda: np.diag([1, cmath.exp(-0.25j * math.pi)]),
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
    "u1": lambda l: np.diag([1, cmath.exp(1j * l)]),
    "u2": lambda p, l: _u3(math.pi / 2, p, l),
    "u3": _u3,
    "U": _u3,
    "cx": lambda: _controlled(_X),
    "CX": lambda: _controlled(_X),
    "cz": lambda: np.diag([1, 1, 1, -1]).astype(complex),
    "cu1": lambda l: np.diag([1, 1, 1, cmath.exp(1j * l)]),
    "cry": lambda t: _controlled(_ry(t)),
    "rzz": lambda t: np.diag([1, cmath.exp(1j * t), cmath.exp(1j * t), 1]),
    "swap": lambda: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "ccx": lambda: _TOFFOLI,
}


def _check_frontend(rng: random.Random) -> list[RuleCheck]:
    out = []
    for name, (npar, nq, build) in BUILTINS.items():
        ref = FRONTEND_REFERENCE[name]
        for trial in range(3):
            params = [rng.uniform(-2 * math.pi, 2 * math.pi) for _ in range(npar)]
            if trial == 0:
                params = [math.pi / 2] * npar
            # qubit k of the statement is placed on wire nq-1-k, so the first
            # argument is the most significant bit of the unitary.
            qubits = [nq - 1 - k for k in range(nq)]
            got = gates_unitary(nq, build(*[p / math.pi for p in params], *qubits))
            want = ref(*params)
            case = f"{name}({', '.join(f'{p:.4f}' for p in params)})"
            out.append(RuleCheck(f"qasm:{name}", case, phase_distance(got, want)))
    return out


def _check_matrices() -> list[RuleCheck]:
    # Spot checks of the native gate definitions.
    out = []
    for t in (0.0, 0.3, 1.0, 1.7):
        out.append(RuleCheck("matrix:Rx", f"{t}", phase_distance(gate_matrix(K.RX, (t,)), _rx(t * math.pi))))
        out.append(RuleCheck("matrix:Ry", f"{t}", phase_distance(gate_matrix(K.RY, (t,)), _ry(t * math.pi))))
    out.append(RuleCheck("matrix:X=iRx(pi)", "", phase_distance(_X, 1j * gate_matrix(K.RX, (1.0,)))))
    return out


def check_rules(seed: int = 0) -> list[RuleCheck]:
    rng = random.Random(seed)
    return _check_rules(rng) + _check_frontend(rng) + _check_matrices()
