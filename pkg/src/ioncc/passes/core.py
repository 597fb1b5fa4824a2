"""Architecture-independent passes: swap elimination, peephole reduction,
macro matching, rebasing into {Rx, Rz, ZZ} and pulse-area restriction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import angles
from ..circuit import TERMINAL, CircuitDag, Gate, GateKind
from ..errors import PassOrderError, UnsupportedGateError
from ..gates import (
    CNOT_TO_ZZ,
    CRY_MACRO,
    TK1_CNOT_CATALOG,
    ZZ_GENERIC,
    ZZ_REBASED_ANGLES,
    DecompositionRule,
    R_PULSE_AREAS,
    is_identity_up_to_phase,
    matrix_of,
    rx_restriction,
    tk1_to_rx_rz,
    zxz_angles,
)

K = GateKind


@dataclass
class PassResult:
    changed: bool = False
    gates_removed: int = 0
    gates_added: int = 0

    @classmethod
    def from_sizes(cls, before: int, after: int, changed: bool) -> "PassResult":
        return cls(changed or before != after, max(0, before - after), max(0, after - before))

    def __add__(self, other: "PassResult") -> "PassResult":
        return PassResult(
            self.changed or other.changed,
            self.gates_removed + other.gates_removed,
            self.gates_added + other.gates_added,
        )


# --- swap elimination ----------------------------------------------------------


def eliminate_swaps(c: CircuitDag) -> PassResult:
    """Drop every SWAP and relabel the gates after it instead.

    ``wire[q]`` is the wire currently carrying the state that the original
    circuit would have on wire ``q``; each SWAP exchanges two entries.
    """
    before = len(c)
    wire = list(range(c.n))
    kept = []
    for g in c.ordered_gates():
        if g.kind is K.SWAP:
            i, j = g.qubits
            wire[i], wire[j] = wire[j], wire[i]
            continue
        kept.append(g.with_qubits([wire[q] for q in g.qubits]))
    if len(kept) == before:
        return PassResult()
    c.rebuild(kept)
    c.output_permutation = [wire[p] for p in c.output_permutation]
    return PassResult.from_sizes(before, len(c), True)


# --- redundancy removal ------------------------------------------------------------

_ADDITIVE = {K.RZ, K.RX, K.RY}
_SYMMETRIC_ADDITIVE = {K.ZZ, K.CU1}
_SELF_INVERSE = {K.X, K.Y, K.Z, K.H}
_SYMMETRIC_SELF_INVERSE = {K.CZ, K.SWAP}
_INVERSE_PAIRS = {(K.S, K.SDG), (K.SDG, K.S), (K.T, K.TDG), (K.TDG, K.T)}

_CANCEL = object()


def is_trivial(g: Gate) -> bool:
    """True for rotations that act as the identity up to global phase."""
    k = g.kind
    if k in _ADDITIVE or k in _SYMMETRIC_ADDITIVE:
        return angles.is_zero(g.params[0])
    if k is K.R:
        return angles.is_zero(g.params[0])
    if k is K.CRY:
        return angles.is_zero(g.params[0], 4.0)
    if k is K.TK1:
        a, b, cc = g.params
        return angles.is_zero(b) and angles.is_zero(a + cc)
    return False


def _combine(a: Gate, b: Gate):
    """Merge two adjacent gates: a new gate, _CANCEL, or None if they don't combine."""
    ka, kb = a.kind, b.kind
    if ka is kb:
        if ka in _ADDITIVE or ka in _SYMMETRIC_ADDITIVE:
            merged = a.with_params(a.params[0] + b.params[0])
        elif ka is K.CRY and a.qubits == b.qubits:
            merged = a.with_params(a.params[0] + b.params[0])
        elif ka is K.R and angles.close(a.params[1], b.params[1]):
            merged = a.with_params(a.params[0] + b.params[0], a.params[1])
        elif ka in _SELF_INVERSE or ka in _SYMMETRIC_SELF_INVERSE:
            return _CANCEL
        elif ka is K.CNOT and a.qubits == b.qubits:
            return _CANCEL
        elif ka is K.CCX and a.qubits[2] == b.qubits[2]:
            return _CANCEL
        else:
            return None
        return _CANCEL if is_trivial(merged) else merged
    if (ka, kb) in _INVERSE_PAIRS:
        return _CANCEL
    return None


def adjacent_successor(c: CircuitDag, gid: int) -> int | None:
    """The gate directly after ``gid`` on all of its wires, acting on the same qubits."""
    g = c.gates[gid]
    nxt = c.next_on(gid, g.qubits[0])
    if nxt == TERMINAL:
        return None
    if any(c.next_on(gid, q) != nxt for q in g.qubits[1:]):
        return None
    if set(c.gates[nxt].qubits) != set(g.qubits):
        return None
    return nxt


def remove_redundancies(c: CircuitDag) -> PassResult:
    before = len(c)
    progress = True
    while progress:
        progress = False
        for gid in c.execution_order():
            if gid not in c.gates:
                continue
            if is_trivial(c.gates[gid]):
                c.remove(gid)
                progress = True
                continue
            while gid in c.gates:
                nxt = adjacent_successor(c, gid)
                if nxt is None:
                    break
                merged = _combine(c.gates[gid], c.gates[nxt])
                if merged is None:
                    break
                progress = True
                c.remove(nxt)
                if merged is _CANCEL:
                    c.remove(gid)
                else:
                    c.update(gid, merged)
    return PassResult.from_sizes(before, len(c), False)


# --- commutation --------------------------------------------------------------------

DIAGONAL = frozenset({K.RZ, K.Z, K.S, K.SDG, K.T, K.TDG})
X_AXIS = frozenset({K.RX, K.X})


def commutes_through(one: Gate, multi: Gate, q: int) -> bool:
    """Whether single-qubit ``one`` on wire ``q`` commutes with ``multi``."""
    k = multi.kind
    if one.kind in DIAGONAL:
        if k in (K.ZZ, K.CZ, K.CU1):
            return True
        if k in (K.CNOT, K.CRY):
            return q == multi.qubits[0]
        if k is K.CCX:
            return q != multi.qubits[2]
    elif one.kind in X_AXIS:
        if k is K.CNOT:
            return q == multi.qubits[1]
        if k is K.CCX:
            return q == multi.qubits[2]
    return False


def _push_back(c: CircuitDag, gid: int) -> int:
    g = c.gates[gid]
    q = g.qubits[0]
    moved = 0
    while True:
        p = c.prev_on(gid, q)
        if p == TERMINAL:
            return moved
        m = c.gates[p]
        if m.arity == 1 or not commutes_through(g, m, q):
            return moved
        c.move_before(gid, p)
        moved += 1


def commute_through_multis(c: CircuitDag) -> PassResult:
    """One sweep moving single-qubit gates toward the inputs.

    Gates are visited in execution order so that a gate meets its wire
    predecessors after they have already moved.
    """
    moved = 0
    for gid in c.execution_order():
        g = c.gates.get(gid)
        if g is not None and g.arity == 1:
            moved += _push_back(c, gid)
    return PassResult(changed=moved > 0)


def reduce_fixpoint(c: CircuitDag) -> PassResult:
    total = remove_redundancies(c)
    while True:
        total += commute_through_multis(c)
        r = remove_redundancies(c)
        total += r
        if r.gates_removed == 0:
            return total


def merge_rz_sweep(c: CircuitDag) -> PassResult:
    """Push every Rz back through the two-qubit gates it commutes with and merge
    it into the Rz it lands on."""
    before = len(c)
    changed = False
    for q in range(c.n):
        for gid in c.wire(q):
            if gid not in c.gates or c.gates[gid].kind is not K.RZ:
                continue
            changed |= _push_back(c, gid) > 0
            p = c.prev_on(gid, q)
            if p != TERMINAL and c.gates[p].kind is K.RZ:
                merged = c.gates[p].with_params(c.gates[p].params[0] + c.gates[gid].params[0])
                c.remove(gid)
                if is_trivial(merged):
                    c.remove(p)
                else:
                    c.update(p, merged)
            elif is_trivial(c.gates[gid]):
                c.remove(gid)
    return PassResult.from_sizes(before, len(c), changed)


# --- macros -------------------------------------------------------------------------


@dataclass(frozen=True)
class Macro:
    rule: DecompositionRule
    applies: object  # Callable[[Gate], bool]


def _cry_pi_multiple(g: Gate) -> bool:
    return angles.is_pi_multiple(g.params[0])


DEFAULT_MACROS = (Macro(CRY_MACRO, _cry_pi_multiple),)


def match_macros(c: CircuitDag, macros=DEFAULT_MACROS) -> PassResult:
    before = len(c)
    hit = False
    for gid in c.execution_order():
        g = c.gates[gid]
        for m in macros:
            if g.kind is m.rule.kind and m.applies(g):
                c.splice(gid, m.rule.template(g))
                hit = True
                break
    return PassResult.from_sizes(before, len(c), hit) + reduce_fixpoint(c)


# --- single-qubit runs ------------------------------------------------------------------


def _runs(c: CircuitDag, q: int) -> list[list[int]]:
    runs, cur = [], []
    for gid in c.wire(q):
        if c.gates[gid].arity == 1:
            cur.append(gid)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _nonzero(vals) -> int:
    return sum(not angles.is_zero(v) for v in vals)


def tk1_params(u: np.ndarray) -> tuple[float, float, float]:
    """ZXZ angles of ``u``, preferring the equivalent form with fewer nonzero angles.

    (a, b, c) and (a + 1, -b, c + 1) describe the same operator up to phase; the
    second often saves gates, e.g. Rx(3pi/2) stays one rotation.
    """
    a, b, cc = zxz_angles(u)
    alt = (angles.normalize(a + 1), angles.normalize(-b), angles.normalize(cc + 1))
    return alt if _nonzero(alt) < _nonzero((a, b, cc)) else (a, b, cc)


def squash_single_qubit_runs(c: CircuitDag) -> PassResult:
    before = len(c)
    changed = False
    for q in range(c.n):
        for run in _runs(c, q):
            u = np.eye(2, dtype=complex)
            for gid in run:
                u = matrix_of(c.gates[gid]) @ u
            if is_identity_up_to_phase(u):
                for gid in run:
                    c.remove(gid)
                changed = True
                continue
            if len(run) == 1 and c.gates[run[0]].kind is K.TK1:
                continue
            c.update(run[0], Gate(K.TK1, (q,), tk1_params(u)))
            for gid in run[1:]:
                c.remove(gid)
            changed = True
    return PassResult.from_sizes(before, len(c), changed)


def expand_tk1(c: CircuitDag) -> PassResult:
    before = len(c)
    hit = False
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is K.TK1:
            c.splice(gid, tk1_to_rx_rz(g))
            hit = True
    return PassResult.from_sizes(before, len(c), hit)


# --- rebasing -------------------------------------------------------------------------


def needs_generic_zz(g: Gate) -> bool:
    return g.kind is K.ZZ and ZZ_GENERIC.applies(g)


def lower_to_tk1_cnot(c: CircuitDag) -> PassResult:
    """Lower every multi-qubit gate other than ZZ and CNOT into {TK1, CNOT}."""
    before = len(c)
    hit = False
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.arity == 1 or g.kind in (K.ZZ, K.CNOT):
            continue
        rule = TK1_CNOT_CATALOG.get(g.kind)
        if rule is None:
            raise UnsupportedGateError(f"no lowering for {g.kind.label}")
        c.splice(gid, rule.template(g))
        hit = True
    return PassResult.from_sizes(before, len(c), hit)


def splice_all(c: CircuitDag, rule: DecompositionRule, pred=None) -> PassResult:
    before = len(c)
    hit = False
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is rule.kind and (pred is None or pred(g)):
            c.splice(gid, rule.template(g))
            hit = True
    return PassResult.from_sizes(before, len(c), hit)


def check_rebased(c: CircuitDag) -> None:
    for g in c.gates.values():
        if g.kind in (K.RX, K.RZ):
            continue
        if g.kind is K.ZZ and angles.in_set(g.params[0], ZZ_REBASED_ANGLES):
            continue
        raise PassOrderError(f"{g} is not in {{Rx, Rz, ZZ(k pi/2)}} after rebasing")


def rebase_to_m(c: CircuitDag) -> PassResult:
    r = splice_all(c, ZZ_GENERIC, needs_generic_zz)
    r += reduce_fixpoint(c)
    r += squash_single_qubit_runs(c)
    r += lower_to_tk1_cnot(c)
    r += splice_all(c, CNOT_TO_ZZ)
    # Single-qubit gates that were not squashed (none should remain) get a TK1 first.
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.arity == 1 and g.kind not in (K.TK1, K.RX, K.RZ):
            c.update(gid, Gate(K.TK1, g.qubits, tk1_params(matrix_of(g))))
    r += expand_tk1(c)
    r += remove_zero_rotations(c)
    check_rebased(c)
    return r


def remove_zero_rotations(c: CircuitDag) -> PassResult:
    before = len(c)
    for gid in list(c.gates):
        if is_trivial(c.gates[gid]):
            c.remove(gid)
    return PassResult.from_sizes(before, len(c), False)


# --- sequences and restriction ------------------------------------------------------------


def build_rx_rz_sequences(c: CircuitDag) -> PassResult:
    r = squash_single_qubit_runs(c)
    r += expand_tk1(c)
    r += merge_rz_sweep(c)
    r += reduce_fixpoint(c)
    r += merge_rz_sweep(c)
    return r


def restrict_single_qubit_angles(c: CircuitDag) -> PassResult:
    before = len(c)
    hit = False
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is K.RX and not angles.in_set(g.params[0], R_PULSE_AREAS):
            c.splice(gid, rx_restriction(g.params[0], g.qubits[0]))
            hit = True
    r = PassResult.from_sizes(before, len(c), hit) + merge_rz_sweep(c)
    for g in c.gates.values():
        if g.kind is K.RX and not angles.in_set(g.params[0], R_PULSE_AREAS):
            raise PassOrderError(f"{g} survived pulse-area restriction")
    return r
