"""Native gate sets, gate matrices and the decomposition rule catalog.

Matrices use the local convention that ``qubits[0]`` is the most significant
bit of the gate's own ``2^m``-dimensional space (so CNOT is the textbook
matrix with control first). All angles are in units of pi.

Rule templates return gates in *circuit order* (first executed first). Where
an identity is usually written as an operator product it reads right to left,
so the templates below are the reversed products.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import angles
from .angles import EPS
from .circuit import Gate, GateKind, gate

K = GateKind

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def r_matrix(theta: float, phi: float) -> np.ndarray:
    t, p = math.pi * theta, math.pi * phi
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array(
        [[c, -1j * cmath.exp(-1j * p) * s], [-1j * cmath.exp(1j * p) * s, c]], dtype=complex
    )


def rz_matrix(phi: float) -> np.ndarray:
    p = math.pi * phi
    return np.diag([cmath.exp(-0.5j * p), cmath.exp(0.5j * p)])


def zz_matrix(theta: float) -> np.ndarray:
    t = math.pi * theta
    a, b = cmath.exp(-0.5j * t), cmath.exp(0.5j * t)
    return np.diag([a, b, b, a])


def _controlled(u: np.ndarray) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


_FIXED = {
    K.X: _X,
    K.Y: _Y,
    K.Z: _Z,
    K.H: np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    K.S: np.diag([1, 1j]),
    K.SDG: np.diag([1, -1j]),
    K.T: np.diag([1, cmath.exp(0.25j * math.pi)]),
    K.TDG: np.diag([1, cmath.exp(-0.25j * math.pi)]),
    K.CNOT: _controlled(_X),
    K.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    K.SWAP: np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_CCX = np.eye(8, dtype=complex)
_CCX[6:, 6:] = _X
_FIXED[K.CCX] = _CCX


def gate_matrix(kind: GateKind, params: Sequence[float] = ()) -> np.ndarray:
    """Unitary of one gate in its local qubit order."""
    if kind in _FIXED:
        return _FIXED[kind].copy()
    if kind is K.R:
        return r_matrix(params[0], params[1])
    if kind is K.RX:
        return r_matrix(params[0], 0.0)
    if kind is K.RY:
        return r_matrix(params[0], 0.5)
    if kind is K.RZ:
        return rz_matrix(params[0])
    if kind is K.ZZ:
        return zz_matrix(params[0])
    if kind is K.TK1:
        a, b, c = params
        return rz_matrix(a) @ r_matrix(b, 0.0) @ rz_matrix(c)
    if kind is K.CU1:
        return np.diag([1, 1, 1, cmath.exp(1j * math.pi * params[0])])
    if kind is K.CRY:
        return _controlled(r_matrix(params[0], 0.5))
    raise ValueError(f"no matrix for {kind}")


def matrix_of(g: Gate) -> np.ndarray:
    return gate_matrix(g.kind, g.params)


# --- gate sets ----------------------------------------------------------------


class GateSet(enum.Enum):
    M = "M"
    N = "N"
    # M with free single-qubit angles but ZZ restricted to multiples of pi/2;
    # the shape a circuit has right after rebasing.
    M_FREE_ANGLES = "M-with-free-angles"


R_PULSE_AREAS = (0.5, 1.0)
ZZ_REBASED_ANGLES = (0.5, 1.0, 1.5)


def rotation_pulse_area(g: Gate) -> float | None:
    """Pulse area of an R-type gate (R, Rx, Ry); None for anything else."""
    if g.kind in (K.R, K.RX, K.RY):
        return g.params[0]
    return None


def in_gate_set(g: Gate, which: GateSet) -> bool:
    if g.kind is K.RZ:
        return True
    if g.kind in (K.R, K.RX, K.RY):
        if which is GateSet.N:
            return angles.in_set(g.params[0], R_PULSE_AREAS)
        return True
    if g.kind is K.ZZ:
        if which is GateSet.N:
            return angles.close(g.params[0], 0.5)
        if which is GateSet.M_FREE_ANGLES:
            return angles.in_set(g.params[0], ZZ_REBASED_ANGLES)
        return True
    return False


def in_n(g: Gate) -> bool:
    return in_gate_set(g, GateSet.N)


# --- single-qubit synthesis ----------------------------------------------------


def zxz_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Angles (alpha, beta, gamma) in units of pi with u ~ Rz(alpha) Rx(beta) Rz(gamma).

    beta lies in [0, 1]. At the degenerate points beta = 0 and beta = 1 gamma is
    fixed to 0 and the whole z rotation is carried by alpha.
    """
    det = np.linalg.det(u)
    v = u / cmath.sqrt(det)
    a, b = v[0, 0], v[0, 1]
    beta = 2.0 * math.atan2(abs(b), abs(a))
    if abs(b) < 1e-12:
        alpha, gamma = -2.0 * cmath.phase(a), 0.0
        beta = 0.0
    elif abs(a) < 1e-12:
        alpha, gamma = -2.0 * cmath.phase(b) - math.pi, 0.0
        beta = math.pi
    else:
        pa, pb = cmath.phase(a), cmath.phase(b)
        alpha = -pa - pb - math.pi / 2
        gamma = -pa + pb + math.pi / 2
    return (
        angles.normalize(alpha / math.pi),
        angles.normalize(beta / math.pi),
        angles.normalize(gamma / math.pi),
    )


def is_identity_up_to_phase(u: np.ndarray, tol: float = 1e-9) -> bool:
    d = u.shape[0]
    c = np.trace(u) / d
    if abs(abs(c) - 1.0) > tol:
        return False
    return float(np.linalg.norm(u - c * np.eye(d))) < tol * d


def tk1_of(u: np.ndarray, qubit: int) -> Gate | None:
    """A TK1 gate for the 2x2 unitary ``u``; None when ``u`` is the identity."""
    if is_identity_up_to_phase(u):
        return None
    return gate(K.TK1, qubit, params=zxz_angles(u))


def tk1_to_rx_rz(g: Gate, drop_identities: bool = True) -> list[Gate]:
    """TK1(a, b, c) = Rz(a) Rx(b) Rz(c): circuit order Rz(c), Rx(b), Rz(a)."""
    a, b, c = g.params
    q = g.qubits[0]
    seq = [gate(K.RZ, q, params=[c]), gate(K.RX, q, params=[b]), gate(K.RZ, q, params=[a])]
    if drop_identities:
        seq = [s for s in seq if not angles.is_zero(s.params[0])]
    return seq


# --- decomposition rules ----------------------------------------------------------


@dataclass(frozen=True)
class DecompositionRule:
    name: str
    kind: GateKind
    template: Callable[[Gate], list[Gate]]
    applies: Callable[[Gate], bool] = lambda g: True
    # Parameter values used by the identity self-test; None means "random".
    samples: tuple[tuple[float, ...] | None, ...] = (None,)


def apply_rule(rule: DecompositionRule, g: Gate) -> list[Gate] | None:
    if g.kind is not rule.kind or not rule.applies(g):
        return None
    return rule.template(g)


def _cry_macro(g: Gate) -> list[Gate]:
    i, j = g.qubits
    (t,) = g.params
    return [
        gate(K.RX, j, params=[-0.5]),
        gate(K.RZ, j, params=[-t / 2]),
        gate(K.ZZ, i, j, params=[t / 2]),
        gate(K.RX, j, params=[0.5]),
    ]


def _zz_generic(g: Gate) -> list[Gate]:
    i, j = g.qubits
    (t,) = g.params
    return [
        gate(K.RZ, i, params=[1.0]),
        gate(K.RZ, j, params=[1.5]),
        gate(K.RX, j, params=[1.5]),
        gate(K.ZZ, i, j, params=[0.5]),
        gate(K.RX, j, params=[-t]),
        gate(K.RZ, j, params=[1.0]),
        gate(K.ZZ, i, j, params=[0.5]),
        gate(K.RX, j, params=[0.5]),
        gate(K.RZ, j, params=[0.5]),
    ]


def _cnot(g: Gate) -> list[Gate]:
    i, j = g.qubits
    return [
        gate(K.RX, i, params=[0.5]),
        gate(K.RZ, i, params=[1.0]),
        gate(K.RX, i, params=[0.5]),
        gate(K.RZ, j, params=[0.5]),
        gate(K.RX, j, params=[0.5]),
        gate(K.ZZ, i, j, params=[0.5]),
        gate(K.RZ, i, params=[0.5]),
        gate(K.RZ, j, params=[0.5]),
        gate(K.RX, j, params=[0.5]),
        gate(K.RZ, j, params=[0.5]),
    ]


def _zz_pi(g: Gate) -> list[Gate]:
    return [gate(K.ZZ, *g.qubits, params=[0.5]) for _ in range(2)]


def _zz_three_half_pi(g: Gate) -> list[Gate]:
    return [gate(K.ZZ, *g.qubits, params=[0.5]) for _ in range(3)]


def rx_restriction(theta: float, qubit: int = 0) -> list[Gate]:
    """Rewrite Rx(theta) using only pulse areas pi/2 and pi plus free Rz."""
    theta = angles.normalize(theta)
    if angles.is_zero(theta):
        return []
    if angles.in_set(theta, R_PULSE_AREAS):
        return [gate(K.RX, qubit, params=[angles.snap(theta)])]
    if angles.close(theta, 1.5):
        return [gate(K.RX, qubit, params=[1.0]), gate(K.RX, qubit, params=[0.5])]
    return [
        gate(K.RZ, qubit, params=[0.5]),
        gate(K.RX, qubit, params=[0.5]),
        gate(K.RZ, qubit, params=[theta + 1.0]),
        gate(K.RX, qubit, params=[0.5]),
        gate(K.RZ, qubit, params=[0.5]),
    ]


def _tk1(g: Gate) -> list[Gate]:
    return tk1_to_rx_rz(g, drop_identities=False)


def _rx(g: Gate) -> list[Gate]:
    return rx_restriction(g.params[0], g.qubits[0])


def _pulse_area_not_allowed(g: Gate) -> bool:
    return not angles.in_set(g.params[0], R_PULSE_AREAS)


def _zz_needs_generic(g: Gate) -> bool:
    return not angles.in_set(g.params[0], (0.0, 0.5, 1.0, 1.5))


# Templates into {TK1, CNOT} for two- and three-qubit gates that are not ZZ.
# None of these come from a published identity; each is checked by the
# oracle self-test below.


def _h(q: int) -> Gate:
    return gate(K.TK1, q, params=[0.5, 0.5, 0.5])


def _rz_tk1(q: int, phi: float) -> Gate:
    return gate(K.TK1, q, params=[phi, 0.0, 0.0])


def _ry_tk1(q: int, theta: float) -> Gate:
    # Ry(t) = Rz(1/2) Rx(t) Rz(-1/2)
    return gate(K.TK1, q, params=[0.5, theta, -0.5])


def _cz_lower(g: Gate) -> list[Gate]:
    i, j = g.qubits
    return [_h(j), gate(K.CNOT, i, j), _h(j)]


def _cu1_lower(g: Gate) -> list[Gate]:
    i, j = g.qubits
    (lam,) = g.params
    return [
        _rz_tk1(i, lam / 2),
        gate(K.CNOT, i, j),
        _rz_tk1(j, -lam / 2),
        gate(K.CNOT, i, j),
        _rz_tk1(j, lam / 2),
    ]


def _swap_lower(g: Gate) -> list[Gate]:
    i, j = g.qubits
    return [gate(K.CNOT, i, j), gate(K.CNOT, j, i), gate(K.CNOT, i, j)]


def _cry_lower(g: Gate) -> list[Gate]:
    i, j = g.qubits
    (t,) = g.params
    return [
        _ry_tk1(j, t / 2),
        gate(K.CNOT, i, j),
        _ry_tk1(j, -t / 2),
        gate(K.CNOT, i, j),
    ]


def ccx_network(a: int, b: int, c: int) -> list[Gate]:
    """Standard 15-gate Clifford+T Toffoli (controls a, b; target c)."""
    return [
        gate(K.H, c),
        gate(K.CNOT, b, c),
        gate(K.TDG, c),
        gate(K.CNOT, a, c),
        gate(K.T, c),
        gate(K.CNOT, b, c),
        gate(K.TDG, c),
        gate(K.CNOT, a, c),
        gate(K.T, b),
        gate(K.T, c),
        gate(K.H, c),
        gate(K.CNOT, a, b),
        gate(K.T, a),
        gate(K.TDG, b),
        gate(K.CNOT, a, b),
    ]


def _ccx_lower(g: Gate) -> list[Gate]:
    out = []
    for s in ccx_network(*g.qubits):
        if s.arity == 1:
            out.append(gate(K.TK1, s.qubits[0], params=zxz_angles(matrix_of(s))))
        else:
            out.append(s)
    return out


CRY_MACRO = DecompositionRule(
    "cry-macro", K.CRY, _cry_macro, samples=((0.5,), (1.0,), (1.5,), (2.0,), (3.0,), None)
)
ZZ_GENERIC = DecompositionRule(
    "zz-generic", K.ZZ, _zz_generic, _zz_needs_generic, samples=((0.3,), (1.75,), None)
)
CNOT_TO_ZZ = DecompositionRule("cnot-to-zz", K.CNOT, _cnot, samples=((),))
TK1_TO_RX_RZ = DecompositionRule("tk1-to-rx-rz", K.TK1, _tk1, samples=(None, None))
RX_RESTRICT = DecompositionRule(
    "rx-restrict", K.RX, _rx, _pulse_area_not_allowed, samples=((0.0,), (1.5,), (0.25,), None)
)
ZZ_PI = DecompositionRule("zz-pi", K.ZZ, _zz_pi, lambda g: angles.close(g.params[0], 1.0), samples=((1.0,),))
ZZ_THREE_HALF_PI = DecompositionRule(
    "zz-three-half-pi", K.ZZ, _zz_three_half_pi, lambda g: angles.close(g.params[0], 1.5), samples=((1.5,),)
)

LOWER_CZ = DecompositionRule("cz-to-cnot", K.CZ, _cz_lower, samples=((),))
LOWER_CU1 = DecompositionRule("cu1-to-cnot", K.CU1, _cu1_lower, samples=((0.5,), None))
LOWER_SWAP = DecompositionRule("swap-to-cnot", K.SWAP, _swap_lower, samples=((),))
LOWER_CRY = DecompositionRule("cry-to-cnot", K.CRY, _cry_lower, samples=((0.5,), (3.0,), None))
LOWER_CCX = DecompositionRule("ccx-to-cnot", K.CCX, _ccx_lower, samples=((),))

# Lowering of multi-qubit gates into {TK1, CNOT}, keyed by kind.
TK1_CNOT_CATALOG = {r.kind: r for r in (LOWER_CZ, LOWER_CU1, LOWER_SWAP, LOWER_CRY, LOWER_CCX)}

ALL_RULES = (
    CRY_MACRO,
    ZZ_GENERIC,
    CNOT_TO_ZZ,
    TK1_TO_RX_RZ,
    RX_RESTRICT,
    ZZ_PI,
    ZZ_THREE_HALF_PI,
    LOWER_CZ,
    LOWER_CU1,
    LOWER_SWAP,
    LOWER_CRY,
    LOWER_CCX,
)


@lru_cache(maxsize=None)
def rule_by_name(name: str) -> DecompositionRule:
    for r in ALL_RULES:
        if r.name == name:
            return r
    raise KeyError(name)


def is_pi_multiple_cry(g: Gate) -> bool:
    return g.kind is K.CRY and angles.is_pi_multiple(g.params[0])


__all__ = [
    "ALL_RULES",
    "DecompositionRule",
    "EPS",
    "GateSet",
    "TK1_CNOT_CATALOG",
    "apply_rule",
    "ccx_network",
    "gate_matrix",
    "in_gate_set",
    "in_n",
    "matrix_of",
    "rx_restriction",
    "tk1_of",
    "tk1_to_rx_rz",
    "zxz_angles",
]
