"""Circuit DAG with per-qubit subnodes.

A circuit on ``n`` qubits has one input vertex ``v_i`` and one output vertex
``w_i`` per qubit, and one vertex per gate. A gate acting on ``m`` qubits owns
``m`` subnodes (one per slot, controls first, target last); each subnode has
exactly one incoming and one outgoing wire edge. Following the edges from
``v_i`` visits every gate acting on qubit ``i`` in execution order and ends at
``w_i``.

Internally the edges are stored as per-slot ``prev``/``next`` pointers. A
pointer value ``>= 0`` is a gate id; :data:`TERMINAL` stands for the input
vertex (in ``prev``) or the output vertex (in ``next``) of the slot's wire.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from . import angles
from .errors import InvalidRegisterError, MalformedGateError, SpliceError, WireError

TERMINAL = -1


class GateKind(enum.Enum):
    # value: (json name, arity, parameter count)
    R = ("R", 1, 2)
    RZ = ("Rz", 1, 1)
    ZZ = ("ZZ", 2, 1)
    RX = ("Rx", 1, 1)
    RY = ("Ry", 1, 1)
    X = ("X", 1, 0)
    Y = ("Y", 1, 0)
    Z = ("Z", 1, 0)
    H = ("H", 1, 0)
    S = ("S", 1, 0)
    SDG = ("Sdg", 1, 0)
    T = ("T", 1, 0)
    TDG = ("Tdg", 1, 0)
    TK1 = ("TK1", 1, 3)
    CNOT = ("CNOT", 2, 0)
    CZ = ("CZ", 2, 0)
    CU1 = ("CU1", 2, 1)
    SWAP = ("SWAP", 2, 0)
    CRY = ("CRy", 2, 1)
    CCX = ("CCX", 3, 0)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def arity(self) -> int:
        return self.value[1]

    @property
    def num_params(self) -> int:
        return self.value[2]

    @property
    def period(self) -> float:
        # A controlled Ry picks up a relative (not global) sign at 2*pi.
        return 4.0 if self is GateKind.CRY else 2.0

    @classmethod
    def from_label(cls, label: str) -> "GateKind":
        try:
            return _BY_LABEL[label]
        except KeyError:
            raise MalformedGateError(f"unknown gate kind {label!r}") from None


_BY_LABEL = {k.label: k for k in GateKind}


@dataclass(frozen=True, slots=True)
class Gate:
    """One operation. ``params`` are angles in units of pi."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    id: int = -1

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != self.kind.arity:
            raise MalformedGateError(
                f"{self.kind.label} acts on {self.kind.arity} qubit(s), got {len(qubits)}"
            )
        if len(set(qubits)) != len(qubits):
            raise MalformedGateError(f"{self.kind.label} has duplicate qubits {qubits}")
        if any(q < 0 for q in qubits):
            raise MalformedGateError(f"negative qubit index in {qubits}")
        if len(self.params) != self.kind.num_params:
            raise MalformedGateError(
                f"{self.kind.label} takes {self.kind.num_params} parameter(s), got {len(self.params)}"
            )
        period = self.kind.period
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", tuple(angles.normalize(p, period) for p in self.params))

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def with_id(self, gid: int) -> "Gate":
        return Gate(self.kind, self.qubits, self.params, gid)

    def with_params(self, *params: float) -> "Gate":
        return Gate(self.kind, self.qubits, tuple(params), self.id)

    def with_qubits(self, qubits: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(qubits), self.params, self.id)

    def __str__(self) -> str:
        args = ",".join(f"{p:g}pi" for p in self.params)
        qs = ",".join(map(str, self.qubits))
        return f"{self.kind.label}{'(' + args + ')' if args else ''}_{qs}"


def gate(kind: GateKind, *qubits: int, params: Iterable[float] = ()) -> Gate:
    """Shorthand used by rule templates and tests."""
    return Gate(kind, tuple(qubits), tuple(params))


class Terminal(NamedTuple):
    """An input (``side == "in"``) or output (``side == "out"``) vertex."""

    side: str
    qubit: int


@dataclass
class CircuitDag:
    n: int
    gates: dict[int, Gate] = field(default_factory=dict)
    output_permutation: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidRegisterError(f"a circuit needs at least one qubit, got {self.n}")
        if not self.output_permutation:
            self.output_permutation = list(range(self.n))
        self._prev: dict[int, list[int]] = {}
        self._next: dict[int, list[int]] = {}
        self._first = [TERMINAL] * self.n
        self._last = [TERMINAL] * self.n
        self._next_id = 0
        self._version = 0
        self._order_cache: tuple[int, list[int]] | None = None
        if self.gates:
            pending, self.gates = self.gates, {}
            self.rebuild([pending[k] for k in sorted(pending)])

    # construction -----------------------------------------------------

    def _check_qubits(self, g: Gate) -> None:
        for q in g.qubits:
            if q >= self.n:
                raise MalformedGateError(f"qubit {q} outside register of size {self.n}")

    def _fresh_id(self) -> int:
        gid = self._next_id
        self._next_id += 1
        return gid

    def _touch(self) -> None:
        self._version += 1

    def append(self, g: Gate) -> int:
        """Splice ``g`` in front of the output vertices of its qubits."""
        self._check_qubits(g)
        gid = self._fresh_id()
        g = g.with_id(gid)
        self.gates[gid] = g
        self._prev[gid] = [TERMINAL] * g.arity
        self._next[gid] = [TERMINAL] * g.arity
        for q in g.qubits:
            self._link(self._last[q], gid, q)
            self._last[q] = gid
        self._touch()
        return gid

    def extend(self, gs: Iterable[Gate]) -> list[int]:
        return [self.append(g) for g in gs]

    # wiring helpers -----------------------------------------------------

    def _slot(self, gid: int, q: int) -> int:
        try:
            return self.gates[gid].qubits.index(q)
        except ValueError:
            raise WireError(f"gate {gid} does not act on qubit {q}") from None

    def _link(self, a: int, b: int, q: int) -> None:
        """Make ``b`` the successor of ``a`` on wire ``q``."""
        if a == TERMINAL:
            self._first[q] = b
        else:
            self._next[a][self._slot(a, q)] = b
        if b == TERMINAL:
            self._last[q] = a
        else:
            self._prev[b][self._slot(b, q)] = a

    def prev_on(self, gid: int, q: int) -> int:
        return self._prev[gid][self._slot(gid, q)]

    def next_on(self, gid: int, q: int) -> int:
        return self._next[gid][self._slot(gid, q)]

    def first_on(self, q: int) -> int:
        return self._first[q]

    def last_on(self, q: int) -> int:
        return self._last[q]

    def wire_neighbors(self, gid: int, q: int) -> tuple[int | Terminal, int | Terminal]:
        if gid not in self.gates:
            raise WireError(f"no gate with id {gid}")
        p, s = self.prev_on(gid, q), self.next_on(gid, q)
        return (
            Terminal("in", q) if p == TERMINAL else p,
            Terminal("out", q) if s == TERMINAL else s,
        )

    def wire(self, q: int) -> list[int]:
        """Gate ids on qubit ``q`` from input to output."""
        out = []
        g = self._first[q]
        while g != TERMINAL:
            out.append(g)
            g = self.next_on(g, q)
        return out

    # editing ------------------------------------------------------------

    def splice(self, target: int, replacement: Sequence[Gate]) -> list[int]:
        """Replace gate ``target`` by ``replacement`` (in order) at the same cut.

        Replacement gates may only act on qubits of ``target``. Returns the ids
        assigned to the new gates; an empty replacement deletes ``target``.
        """
        old = self.gates[target]
        allowed = set(old.qubits)
        for r in replacement:
            if not set(r.qubits) <= allowed:
                raise SpliceError(
                    f"replacement {r} leaves the qubits {sorted(allowed)} of gate {target}"
                )
        heads = {q: self.prev_on(target, q) for q in old.qubits}
        tails = {q: self.next_on(target, q) for q in old.qubits}
        del self.gates[target], self._prev[target], self._next[target]
        cursor = dict(heads)
        new_ids = []
        for r in replacement:
            gid = self._fresh_id()
            self.gates[gid] = r.with_id(gid)
            self._prev[gid] = [cursor[q] for q in r.qubits]
            self._next[gid] = [TERMINAL] * r.arity
            for q in r.qubits:
                self._link(cursor[q], gid, q)
                cursor[q] = gid
            new_ids.append(gid)
        for q in old.qubits:
            self._link(cursor[q], tails[q], q)
        self._touch()
        return new_ids

    def remove(self, gid: int) -> None:
        self.splice(gid, [])

    def update(self, gid: int, new: Gate) -> None:
        """Swap the payload of ``gid`` for ``new`` acting on the same qubits."""
        if new.qubits != self.gates[gid].qubits:
            raise SpliceError("update() cannot change qubits; use splice()")
        self.gates[gid] = new.with_id(gid)
        self._touch()

    def _detach(self, gid: int) -> None:
        for q in self.gates[gid].qubits:
            self._link(self.prev_on(gid, q), self.next_on(gid, q), q)

    def move_before(self, gid: int, anchor: int) -> None:
        """Move single-qubit gate ``gid`` to directly before ``anchor`` on its wire."""
        q = self.gates[gid].qubits[0]
        if self.gates[gid].arity != 1:
            raise SpliceError("only single-qubit gates can be moved")
        self._detach(gid)
        before = self.prev_on(anchor, q)
        self._link(before, gid, q)
        self._link(gid, anchor, q)
        self._touch()

    def move_after(self, gid: int, anchor: int) -> None:
        q = self.gates[gid].qubits[0]
        if self.gates[gid].arity != 1:
            raise SpliceError("only single-qubit gates can be moved")
        self._detach(gid)
        after = self.next_on(anchor, q)
        self._link(anchor, gid, q)
        self._link(gid, after, q)
        self._touch()

    def insert_at_output(self, g: Gate) -> int:
        """Alias for :meth:`append`; reads better for terminal corrections."""
        return self.append(g)

    def insert_after(self, anchor: int, g: Gate) -> int:
        """Insert single-qubit ``g`` right after ``anchor`` (a gate id or TERMINAL for the input)."""
        if g.arity != 1:
            raise SpliceError("insert_after takes single-qubit gates")
        q = g.qubits[0]
        self._check_qubits(g)
        after = self._first[q] if anchor == TERMINAL else self.next_on(anchor, q)
        gid = self._fresh_id()
        self.gates[gid] = g.with_id(gid)
        self._prev[gid] = [anchor]
        self._next[gid] = [after]
        self._link(anchor, gid, q)
        self._link(gid, after, q)
        self._touch()
        return gid

    def rebuild(self, ordered: Sequence[Gate]) -> None:
        """Re-wire the whole circuit from a gate list in execution order.

        Gate ids are kept, so callers that relabel qubits keep provenance.
        """
        self.gates.clear()
        self._prev.clear()
        self._next.clear()
        self._first = [TERMINAL] * self.n
        self._last = [TERMINAL] * self.n
        for g in ordered:
            self._check_qubits(g)
            gid = g.id if g.id >= 0 else self._fresh_id()
            self._next_id = max(self._next_id, gid + 1)
            self.gates[gid] = g.with_id(gid)
            self._prev[gid] = [TERMINAL] * g.arity
            self._next[gid] = [TERMINAL] * g.arity
            for q in g.qubits:
                self._link(self._last[q], gid, q)
                self._last[q] = gid
        self._touch()

    # queries --------------------------------------------------------------

    def execution_order(self) -> list[int]:
        """Topological order; among ready gates the smallest id goes first."""
        if self._order_cache and self._order_cache[0] == self._version:
            return list(self._order_cache[1])
        indeg = {gid: sum(1 for p in prev if p != TERMINAL) for gid, prev in self._prev.items()}
        ready = [gid for gid, d in indeg.items() if d == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            gid = heapq.heappop(ready)
            order.append(gid)
            for nxt in self._next[gid]:
                if nxt == TERMINAL:
                    continue
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    heapq.heappush(ready, nxt)
        if len(order) != len(self.gates):
            raise WireError("circuit graph contains a cycle")
        self._order_cache = (self._version, order)
        return list(order)

    def ordered_gates(self) -> list[Gate]:
        return [self.gates[g] for g in self.execution_order()]

    def __len__(self) -> int:
        return len(self.gates)

    def count(self) -> tuple[int, int]:
        """(single-qubit, multi-qubit) gate counts."""
        single = sum(1 for g in self.gates.values() if g.arity == 1)
        return single, len(self.gates) - single

    def copy(self) -> "CircuitDag":
        c = CircuitDag(self.n)
        c.rebuild(self.ordered_gates())
        c._next_id = self._next_id
        c.output_permutation = list(self.output_permutation)
        return c

    def validate(self) -> None:
        """Raise WireError unless every structural invariant holds."""
        seen: dict[int, int] = {}
        for q in range(self.n):
            prev = TERMINAL
            g = self._first[q]
            steps = 0
            while g != TERMINAL:
                if g not in self.gates:
                    raise WireError(f"wire {q} points at missing gate {g}")
                if self.prev_on(g, q) != prev:
                    raise WireError(f"wire {q}: back edge of gate {g} is broken")
                seen[g] = seen.get(g, 0) + 1
                prev, g = g, self.next_on(g, q)
                steps += 1
                if steps > len(self.gates):
                    raise WireError(f"wire {q} loops")
            if self._last[q] != prev:
                raise WireError(f"wire {q}: output vertex not attached to last gate")
        for gid, g in self.gates.items():
            if seen.get(gid, 0) != g.arity:
                raise WireError(f"gate {gid} visited {seen.get(gid, 0)} times, arity {g.arity}")
            if len(self._prev[gid]) != g.arity or len(self._next[gid]) != g.arity:
                raise WireError(f"gate {gid} has a wrong number of subnodes")
        if sorted(self.output_permutation) != list(range(self.n)):
            raise WireError("output permutation is not a bijection")
        self.execution_order()

    # serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gates": [
                {"id": g.id, "kind": g.kind.label, "qubits": list(g.qubits), "params_pi": list(g.params)}
                for g in self.ordered_gates()
            ],
            "output_permutation": list(self.output_permutation),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CircuitDag":
        c = cls(int(data["n"]))
        c.rebuild(
            [
                Gate(GateKind.from_label(d["kind"]), tuple(d["qubits"]), tuple(d.get("params_pi", ())), int(d["id"]))
                for d in data["gates"]
            ]
        )
        perm = data.get("output_permutation")
        if perm is not None:
            c.output_permutation = [int(p) for p in perm]
        c.validate()
        return c


def new_circuit(n: int) -> CircuitDag:
    return CircuitDag(n)


def from_gates(n: int, gates: Iterable[Gate]) -> CircuitDag:
    c = CircuitDag(n)
    c.extend(gates)
    return c
