"""Passes specific to a segmented ion trap with a single laser interaction zone.

Blocks are a side structure over the circuit: a ZZ gate together with pairs of
identical single-qubit gates executed right before (``p``) or right after
(``s``) it on both of its wires. Every other single-qubit gate belongs to a
blockless sequence, a maximal run of unclaimed gates on one wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import angles
from ..circuit import TERMINAL, CircuitDag, Gate, GateKind
from ..errors import PassOrderError
from .core import PassResult

K = GateKind

_ROTATIONS = (K.R, K.RX, K.RY)


# --- phase tracking ----------------------------------------------------------


def _as_r(g: Gate) -> Gate:
    if g.kind is K.RX:
        return Gate(K.R, g.qubits, (g.params[0], 0.0), g.id)
    if g.kind is K.RY:
        return Gate(K.R, g.qubits, (g.params[0], 0.5), g.id)
    return g


def phase_tracking(c: CircuitDag, drop_terminal_rz: bool = False) -> PassResult:
    """Fold every Rz into the phases of the rotations after it.

    R(t, f) Rz(z) = Rz(z) R(t, f - z), and Rz commutes with ZZ, so each wire can
    carry its accumulated z rotation to the end, where one Rz settles it.
    """
    before = len(c)
    for q in range(c.n):
        b = 0.0
        for gid in c.wire(q):
            g = c.gates[gid]
            if g.kind is K.ZZ:
                continue
            if g.kind is K.RZ:
                b += g.params[0]
                c.remove(gid)
                continue
            if g.kind not in _ROTATIONS:
                raise PassOrderError(f"phase tracking met {g}; expected R, Rx, Ry, Rz or ZZ")
            r = _as_r(g)
            c.update(gid, r.with_params(r.params[0], r.params[1] - b))
        if not drop_terminal_rz and not angles.is_zero(b):
            last = c.last_on(q)
            c.insert_after(last, Gate(K.RZ, (q,), (b,)))
    return PassResult.from_sizes(before, len(c), True)


# --- blocks ---------------------------------------------------------------------


@dataclass
class Block:
    zz: int
    qubits: tuple[int, int]
    p: list[tuple[int, int]] = field(default_factory=list)
    s: list[tuple[int, int]] = field(default_factory=list)

    def gate_ids(self) -> list[int]:
        out = [g for pair in self.p for g in pair]
        out.append(self.zz)
        out.extend(g for pair in self.s for g in pair)
        return out

    def slot(self, q: int) -> int:
        return self.qubits.index(q)

    def front(self, q: int) -> int:
        return self.p[0][self.slot(q)] if self.p else self.zz

    def back(self, q: int) -> int:
        return self.s[-1][self.slot(q)] if self.s else self.zz


@dataclass
class BlocklessSequence:
    qubit: int
    gates: list[int]


def same_gate(a: Gate, b: Gate) -> bool:
    if a.kind is not b.kind or a.arity != 1:
        return False
    return all(angles.close(x, y) for x, y in zip(a.params, b.params))


@dataclass
class Partition:
    blocks: list[Block]
    owner: dict[int, int]  # gate id -> index into blocks

    def is_free(self, c: CircuitDag, gid: int) -> bool:
        return gid != TERMINAL and gid not in self.owner and c.gates[gid].arity == 1

    def blockless(self, c: CircuitDag) -> list[BlocklessSequence]:
        out = []
        for q in range(c.n):
            cur: list[int] = []
            for gid in c.wire(q):
                if self.is_free(c, gid):
                    cur.append(gid)
                elif cur:
                    out.append(BlocklessSequence(q, cur))
                    cur = []
            if cur:
                out.append(BlocklessSequence(q, cur))
        return out

    def _starts(self, c: CircuitDag, gid: int) -> int:
        if not self.is_free(c, gid):
            return 0
        q = c.gates[gid].qubits[0]
        return int(not self.is_free(c, c.prev_on(gid, q)))

    def local_count(self, c: CircuitDag, gids: set[int]) -> int:
        """Number of blockless runs starting at ``gids`` or right after them."""
        probe = set()
        for g in gids:
            if g == TERMINAL or g not in c.gates:
                continue
            probe.add(g)
            for q in c.gates[g].qubits:
                nxt = c.next_on(g, q)
                if nxt != TERMINAL:
                    probe.add(nxt)
        return sum(self._starts(c, g) for g in probe)

    def claim(self, gids, idx: int) -> None:
        for g in gids:
            self.owner[g] = idx

    def release(self, gids) -> None:
        for g in gids:
            self.owner.pop(g, None)

    def check(self, c: CircuitDag) -> None:
        seen: dict[int, int] = {}
        for k, blk in enumerate(self.blocks):
            zz = c.gates[blk.zz]
            if zz.kind is not K.ZZ or set(zz.qubits) != set(blk.qubits):
                raise PassOrderError(f"block {k} is not anchored on a ZZ gate")
            for a, b in blk.p + blk.s:
                if not same_gate(c.gates[a], c.gates[b]):
                    raise PassOrderError(f"block {k} pairs different gates {a}, {b}")
            for g in blk.gate_ids():
                if g in seen:
                    raise PassOrderError(f"gate {g} claimed by blocks {seen[g]} and {k}")
                seen[g] = k
            for q in blk.qubits:
                ids = [pair[blk.slot(q)] for pair in blk.p] + [blk.zz] + [pair[blk.slot(q)] for pair in blk.s]
                for x, y in zip(ids, ids[1:]):
                    if c.next_on(x, q) != y:
                        raise PassOrderError(f"block {k} is not contiguous on qubit {q}")
        if seen != self.owner:
            raise PassOrderError("ownership map out of sync with blocks")
        free = {g for seq in self.blockless(c) for g in seq.gates}
        if free | set(seen) != set(c.gates) or free & set(seen):
            raise PassOrderError("blocks and blockless sequences do not partition the circuit")


def _grow_back(c: CircuitDag, part: Partition, idx: int) -> int:
    blk = part.blocks[idx]
    i, j = blk.qubits
    grown = 0
    while True:
        a, b = c.prev_on(blk.front(i), i), c.prev_on(blk.front(j), j)
        if not (part.is_free(c, a) and part.is_free(c, b)) or not same_gate(c.gates[a], c.gates[b]):
            return grown
        blk.p.insert(0, (a, b))
        part.claim((a, b), idx)
        grown += 1


def _grow_forward(c: CircuitDag, part: Partition, idx: int) -> int:
    blk = part.blocks[idx]
    i, j = blk.qubits
    grown = 0
    while True:
        a, b = c.next_on(blk.back(i), i), c.next_on(blk.back(j), j)
        if not (part.is_free(c, a) and part.is_free(c, b)) or not same_gate(c.gates[a], c.gates[b]):
            return grown
        blk.s.append((a, b))
        part.claim((a, b), idx)
        grown += 1


def build_blocks(c: CircuitDag) -> tuple[Partition, list[BlocklessSequence]]:
    part = Partition([], {})
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is not K.ZZ:
            if g.arity > 1:
                raise PassOrderError(f"block building met {g}")
            continue
        idx = len(part.blocks)
        part.blocks.append(Block(gid, (g.qubits[0], g.qubits[1])))
        part.claim((gid,), idx)
        _grow_back(c, part, idx)
        _grow_forward(c, part, idx)
    return part, part.blockless(c)


def _free_run_before(c: CircuitDag, part: Partition, gid: int, q: int) -> list[int]:
    run = []
    p = c.prev_on(gid, q)
    while part.is_free(c, p):
        run.append(p)
        p = c.prev_on(p, q)
    run.reverse()
    return run


def _try_rearrange(c: CircuitDag, part: Partition, alpha: int, qi: int, qj: int) -> bool:
    A = part.blocks[alpha]
    b_mu = _free_run_before(c, part, A.front(qi), qi)
    if not b_mu:
        return False
    x = c.prev_on(A.front(qj), qj)
    if x == TERMINAL or x not in part.owner:
        return False
    beta = part.owner[x]
    B = part.blocks[beta]
    if beta == alpha or not B.s or B.s[-1][B.slot(qj)] != x:
        return False
    n = len(b_mu)
    if len(B.s) < n:
        return False
    s_e = B.s[-n:]
    tail_j = [pair[B.slot(qj)] for pair in s_e]
    if not all(same_gate(c.gates[a], c.gates[b]) for a, b in zip(b_mu, tail_j)):
        return False
    qk = B.qubits[1 - B.slot(qj)]
    b_nu = [pair[B.slot(qk)] for pair in s_e]

    touched = set(b_mu) | set(tail_j) | set(b_nu)
    saved = {alpha: (list(A.p), list(A.s)), beta: (list(B.p), list(B.s))}

    B.s = B.s[:-n]
    part.release(tail_j + b_nu)
    new_pairs = [(a, b) if A.qubits == (qi, qj) else (b, a) for a, b in zip(b_mu, tail_j)]
    A.p = new_pairs + A.p
    part.claim(b_mu + tail_j, alpha)

    # The q_k half of s_e is now loose; let the block it runs into take it.
    gamma = None
    y = c.next_on(b_nu[-1], qk)
    while part.is_free(c, y):
        y = c.next_on(y, qk)
    if y != TERMINAL and y in part.owner:
        gamma = part.owner[y]
        G = part.blocks[gamma]
        if G.front(qk) == y:
            saved.setdefault(gamma, (list(G.p), list(G.s)))
            ql = G.qubits[1 - G.slot(qk)]
            touched |= set(_free_run_before(c, part, G.front(ql), ql))
            _grow_back(c, part, gamma)

    after = part.local_count(c, touched)
    committed = {k: (list(part.blocks[k].p), list(part.blocks[k].s)) for k in saved}
    _apply_states(part, saved)
    before = part.local_count(c, touched)
    if after < before:
        _apply_states(part, committed)
        return True
    return False


def _apply_states(part: Partition, states: dict[int, tuple[list, list]]) -> None:
    for k in states:
        part.release(part.blocks[k].gate_ids())
    for k, (p, s) in states.items():
        blk = part.blocks[k]
        blk.p, blk.s = list(p), list(s)
        part.claim(blk.gate_ids(), k)


def rearrange_blocks(c: CircuitDag, part: Partition) -> PassResult:
    """Hand blockless runs to a neighbouring block when a whole chain works out."""
    changed = False
    progress = True
    while progress:
        progress = False
        for alpha, A in enumerate(part.blocks):
            for qi, qj in (A.qubits, A.qubits[::-1]):
                if _try_rearrange(c, part, alpha, qi, qj):
                    progress = changed = True
    return PassResult(changed=changed)


def _axis(g: Gate) -> float | None:
    if g.kind is K.R:
        return g.params[1]
    if g.kind is K.RX:
        return 0.0
    if g.kind is K.RY:
        return 0.5
    return None


def _with_area(g: Gate, theta: float) -> Gate:
    return Gate(g.kind, g.qubits, (theta,) + g.params[1:])


def _try_split(c: CircuitDag, part: Partition, idx: int, side: str) -> bool:
    blk = part.blocks[idx]
    i, j = blk.qubits
    if side == "p":
        ga, gb = c.prev_on(blk.front(i), i), c.prev_on(blk.front(j), j)
    else:
        ga, gb = c.next_on(blk.back(i), i), c.next_on(blk.back(j), j)
    if not (part.is_free(c, ga) and part.is_free(c, gb)):
        return False
    a, b = c.gates[ga], c.gates[gb]
    if a.kind is not b.kind or a.kind not in _ROTATIONS:
        return False
    if not angles.close(_axis(a), _axis(b)):
        return False
    ta, tb = a.params[0], b.params[0]
    if angles.close(ta, tb):
        return False
    small, big = (ga, gb) if ta < tb else (gb, ga)
    q_small = c.gates[small].qubits[0]
    # Only worth it if the donor's blockless run is exactly this one gate.
    if part.is_free(c, c.prev_on(small, q_small)) or part.is_free(c, c.next_on(small, q_small)):
        return False
    gs, gbig = c.gates[small], c.gates[big]
    piece = _with_area(gbig, gs.params[0])
    rest = _with_area(gbig, gbig.params[0] - gs.params[0])
    if side == "p":
        new = c.splice(big, [rest, piece])
        paired = new[1]
    else:
        new = c.splice(big, [piece, rest])
        paired = new[0]
    pair = (small, paired) if gs.qubits[0] == i else (paired, small)
    part.claim(pair, idx)
    if side == "p":
        blk.p.insert(0, pair)
        _grow_back(c, part, idx)
    else:
        blk.s.append(pair)
        _grow_forward(c, part, idx)
    return True


def split_angles(c: CircuitDag, part: Partition) -> PassResult:
    before = len(c)
    changed = False
    progress = True
    while progress:
        progress = False
        for idx in range(len(part.blocks)):
            for side in ("p", "s"):
                while _try_split(c, part, idx, side):
                    progress = changed = True
    return PassResult.from_sizes(before, len(c), changed)


# --- ordering ----------------------------------------------------------------------


@dataclass
class ScheduleEntry:
    type: str  # "block" or "sequence"
    qubits: list[int]
    gates: list[int]

    def to_json(self) -> dict:
        return {"type": self.type, "qubits": list(self.qubits), "gates": list(self.gates)}


def order_blocks(c: CircuitDag, part: Partition) -> list[ScheduleEntry]:
    """Linear schedule of blocks and blockless sequences.

    Blocks on the same pair are kept back to back when nothing else has to run
    in between; each blockless sequence runs right after the block before it on
    its wire, and the one on the qubit the next block needs goes last.
    """
    pos = {g: k for k, g in enumerate(c.execution_order())}
    nb = len(part.blocks)
    succ: list[set[int]] = [set() for _ in range(nb)]
    indeg = [0] * nb
    seq_after: dict[int, list[BlocklessSequence]] = {k: [] for k in range(nb)}
    seq_before: dict[int, list[BlocklessSequence]] = {k: [] for k in range(nb)}
    loose: list[BlocklessSequence] = []

    for q in range(c.n):
        last_block = None
        cur: list[int] = []
        pending: list[BlocklessSequence] = []
        for gid in c.wire(q):
            if part.is_free(c, gid):
                cur.append(gid)
                continue
            if cur:
                pending.append(BlocklessSequence(q, cur))
                cur = []
            k = part.owner[gid]
            if k == last_block:
                continue
            for seq in pending:
                (seq_after[last_block] if last_block is not None else seq_before[k]).append(seq)
            pending = []
            if last_block is not None and k not in succ[last_block]:
                succ[last_block].add(k)
                indeg[k] += 1
            last_block = k
        if cur:
            pending.append(BlocklessSequence(q, cur))
        for seq in pending:
            (seq_after[last_block] if last_block is not None else loose).append(seq)

    order: list[int] = []
    ready = {k for k in range(nb) if indeg[k] == 0}
    prev_pair = None
    while ready:
        same = [k for k in ready if prev_pair is not None and set(part.blocks[k].qubits) == prev_pair]
        pool = same or list(ready)
        k = min(pool, key=lambda b: pos[part.blocks[b].zz])
        ready.discard(k)
        order.append(k)
        prev_pair = set(part.blocks[k].qubits)
        for m in succ[k]:
            indeg[m] -= 1
            if indeg[m] == 0:
                ready.add(m)
    if len(order) != nb:
        raise PassOrderError("block dependency graph has a cycle")

    def seq_entry(seq: BlocklessSequence) -> ScheduleEntry:
        return ScheduleEntry("sequence", [seq.qubit], list(seq.gates))

    out = [seq_entry(s) for s in loose]
    for n_, k in enumerate(order):
        blk = part.blocks[k]
        out.extend(seq_entry(s) for s in seq_before[k])
        out.append(ScheduleEntry("block", list(blk.qubits), blk.gate_ids()))
        trailing = seq_after[k]
        nxt = next((m for m in order[n_ + 1 :] if set(part.blocks[m].qubits) & set(blk.qubits)), None)
        if nxt is not None:
            shared = set(part.blocks[nxt].qubits) & set(blk.qubits)
            if len(shared) == 1:
                trailing = sorted(trailing, key=lambda s: s.qubit in shared)
        out.extend(seq_entry(s) for s in trailing)
    return out


def check_schedule(c: CircuitDag, schedule: list[ScheduleEntry]) -> None:
    """The flattened schedule must cover every gate once and respect every wire."""
    flat = [g for e in schedule for g in e.gates]
    if sorted(flat) != sorted(c.gates):
        raise PassOrderError("schedule does not cover the circuit exactly once")
    at = {g: k for k, g in enumerate(flat)}
    for q in range(c.n):
        ids = c.wire(q)
        if any(at[x] > at[y] for x, y in zip(ids, ids[1:])):
            raise PassOrderError(f"schedule breaks the gate order on qubit {q}")


# --- ZZ angle restriction -------------------------------------------------------------

# ZZ(0) is the identity and is simply dropped.
_ZZ_COPIES = {0.0: 0, 0.5: 1, 1.0: 2, 1.5: 3}


def restrict_zz_angles(c: CircuitDag, schedule: list[ScheduleEntry] | None = None) -> PassResult:
    before = len(c)
    replaced: dict[int, list[int]] = {}
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is not K.ZZ:
            continue
        copies = next((n for a, n in _ZZ_COPIES.items() if angles.close(g.params[0], a)), None)
        if copies is None:
            raise PassOrderError(f"{g} has an angle that is not a multiple of pi/2")
        if copies != 1:
            replaced[gid] = c.splice(gid, [g.with_params(0.5)] * copies)
    if schedule is not None and replaced:
        for e in schedule:
            e.gates = [x for g in e.gates for x in replaced.get(g, [g])]
    return PassResult.from_sizes(before, len(c), bool(replaced))
