import pytest
from hypothesis import given, settings

from ioncc.circuit import CircuitDag, GateKind, from_gates, gate
from ioncc.errors import PassOrderError
from ioncc.oracle import circuit_unitary, circuits_equivalent, equal_up_to_diagonal
from ioncc.passes import FULL_PIPELINE, REGISTRY, PassContext
from ioncc.passes.ion import (
    build_blocks,
    check_schedule,
    order_blocks,
    phase_tracking,
    rearrange_blocks,
    restrict_zz_angles,
    split_angles,
)

from .conftest import circuits

K = GateKind


def R(q, theta, phi):
    return gate(K.R, q, params=(theta, phi))


def ZZ(i, j, theta=0.5):
    return gate(K.ZZ, i, j, params=(theta,))


def labels(c):
    return [str(g) for g in c.ordered_gates()]


def run_until(c: CircuitDag, last: str, drop_terminal_rz: bool = False) -> PassContext:
    ctx = PassContext(c, drop_terminal_rz=drop_terminal_rz)
    for name in FULL_PIPELINE:
        REGISTRY[name](ctx)
        if name == last:
            return ctx
    raise AssertionError(last)


# --- phase tracking ------------------------------------------------------------------


def test_rz_folds_into_next_rotation():
    c = from_gates(1, [gate(K.RZ, 0, params=(0.3,)), R(0, 0.5, 0.7)])
    before = c.copy()
    phase_tracking(c)
    assert labels(c) == ["R(0.5pi,0.4pi)_0", "Rz(0.3pi)_0"]
    assert circuits_equivalent(before, c)


def test_rx_and_ry_become_r():
    c = from_gates(1, [gate(K.RX, 0, params=(0.5,)), gate(K.RY, 0, params=(1.0,))])
    phase_tracking(c)
    assert labels(c) == ["R(0.5pi,0pi)_0", "R(1pi,0.5pi)_0"]


def test_no_terminal_rz_when_phase_returns_to_zero():
    c = from_gates(
        2,
        [
            gate(K.RZ, 0, params=(0.5,)), gate(K.RX, 0, params=(0.5,)), ZZ(0, 1),
            gate(K.RZ, 0, params=(1.5,)), gate(K.RX, 1, params=(1.0,)),
        ],
    )
    before = c.copy()
    phase_tracking(c)
    assert not any(g.kind is K.RZ for g in c.gates.values())
    assert circuits_equivalent(before, c)


def test_rz_passes_through_zz():
    c = from_gates(2, [gate(K.RZ, 0, params=(0.25,)), ZZ(0, 1), gate(K.RX, 0, params=(0.5,))])
    phase_tracking(c)
    assert labels(c) == ["ZZ(0.5pi)_0,1", "R(0.5pi,1.75pi)_0", "Rz(0.25pi)_0"]


def test_phase_tracking_rejects_other_gates():
    with pytest.raises(PassOrderError):
        phase_tracking(from_gates(1, [gate(K.H, 0)]))


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=4, max_gates=25))
def test_dropping_terminal_rz_is_diagonal_equivalent(c):
    ctx = run_until(c, "merge_rz_sweep")
    before = ctx.circuit.copy()
    kept = ctx.circuit.copy()
    phase_tracking(ctx.circuit, drop_terminal_rz=True)
    phase_tracking(kept)
    assert circuits_equivalent(before, kept)
    assert equal_up_to_diagonal(circuit_unitary(ctx.circuit), circuit_unitary(before))
    single, _ = kept.count()
    assert single <= 4 * sum(g.kind is K.ZZ for g in kept.gates.values()) + 3 * kept.n


# --- blocks --------------------------------------------------------------------------------


def test_matching_predecessors_join_block():
    c = from_gates(2, [R(0, 1.0, 0.3), R(1, 1.0, 0.3), ZZ(0, 1)])
    part, free = build_blocks(c)
    assert len(part.blocks) == 1 and len(part.blocks[0].p) == 1 and not part.blocks[0].s
    assert free == []
    part.check(c)


def test_unmatched_neighbours_leave_bare_blocks():
    c = from_gates(3, [R(0, 1.0, 0.3), R(1, 0.5, 0.3), ZZ(0, 1), ZZ(1, 2), R(2, 0.5, 0.0)])
    part, free = build_blocks(c)
    assert [(b.p, b.s) for b in part.blocks] == [([], []), ([], [])]
    assert len(free) == 3
    part.check(c)


def test_three_blocks_one_bare():
    c = from_gates(
        4,
        [
            R(0, 0.5, 0.1), R(1, 0.5, 0.1), ZZ(0, 1), R(0, 1.0, 0.2), R(1, 1.0, 0.2),
            R(2, 0.5, 0.4), ZZ(0, 2), R(3, 1.0, 0.0),
            R(2, 0.5, 0.9), R(3, 0.5, 0.9), ZZ(2, 3), R(2, 1.0, 1.1), R(3, 1.0, 1.1),
            R(0, 0.5, 0.6), R(1, 0.5, 0.3),
        ],
    )
    part, free = build_blocks(c)
    part.check(c)
    a, b, d = part.blocks
    assert (len(a.p), len(a.s)) == (1, 1)
    assert (b.p, b.s) == ([], [])
    assert (len(d.p), len(d.s)) == (1, 1)
    assert len(free) == 4


def rearrange_fixture() -> CircuitDag:
    x = (0.5, 0.3)
    return from_gates(
        3,
        [
            ZZ(2, 1), R(2, *x), R(1, *x),   # block beta with a trailing pair
            R(0, *x), ZZ(0, 2),             # b_mu on q0 before block alpha
            R(0, *x), ZZ(0, 1),             # b_xi on q0 before block gamma
        ],
    )


def test_rearrange_hands_runs_over():
    c = rearrange_fixture()
    before = c.copy()
    part, free = build_blocks(c)
    assert len(free) == 2
    assert rearrange_blocks(c, part).changed
    part.check(c)
    assert len(part.blockless(c)) < len(free)
    assert part.blockless(c) == []
    assert circuits_equivalent(before, c)


def test_rearrange_without_matching_tails():
    c = from_gates(2, [R(0, 0.5, 0.1), ZZ(0, 1), R(1, 1.0, 0.7)])
    part, _ = build_blocks(c)
    assert not rearrange_blocks(c, part).changed


def test_split_pi_against_half_pi():
    c = from_gates(2, [ZZ(0, 1), R(0, 1.0, 0.3), R(1, 0.5, 0.3), ZZ(0, 1)])
    before = c.copy()
    part, free = build_blocks(c)
    assert len(free) == 2
    r = split_angles(c, part)
    assert r.changed and r.gates_added == 1
    part.check(c)
    assert len(part.blockless(c)) < len(free)
    assert circuits_equivalent(before, c)
    assert sorted(g.params[0] for g in c.gates.values() if g.kind is K.R) == [0.5, 0.5, 0.5]


def test_no_split_for_equal_areas_or_different_phase():
    c = from_gates(2, [ZZ(0, 1), R(0, 1.0, 0.3), R(1, 0.5, 0.4), ZZ(0, 1)])
    part, _ = build_blocks(c)
    assert not split_angles(c, part).changed
    c = from_gates(2, [ZZ(0, 1), R(0, 1.0, 0.3), R(1, 1.0, 0.3)])
    part, _ = build_blocks(c)
    assert part.blocks[0].s
    assert not split_angles(c, part).changed


# --- ordering -------------------------------------------------------------------------------


def test_single_block_schedule():
    c = from_gates(2, [ZZ(0, 1)])
    part, _ = build_blocks(c)
    sched = order_blocks(c, part)
    assert [(e.type, e.gates) for e in sched] == [("block", [0])]


def test_sequence_for_next_block_goes_last():
    c = from_gates(
        4,
        [
            ZZ(2, 3), R(2, 0.5, 0.1), R(3, 1.0, 0.1), ZZ(2, 3),
            R(2, 0.5, 0.7), R(3, 1.0, 0.2), ZZ(1, 2),
        ],
    )
    part, _ = build_blocks(c)
    sched = order_blocks(c, part)
    check_schedule(c, sched)
    kinds = [(e.type, e.qubits) for e in sched]
    assert kinds[0][0] == "block"
    second = [k for k, e in enumerate(sched) if e.type == "block"][1]
    # between the two (2,3) blocks only their own sequences run
    assert all(e.type == "sequence" and e.qubits[0] in (2, 3) for e in sched[1:second])
    tail = sched[second + 1 : second + 3]
    assert [e.qubits for e in tail] == [[3], [2]]


def test_schedule_checker_rejects_bad_order():
    c = from_gates(1, [R(0, 0.5, 0.0), R(0, 1.0, 0.0)])
    part, _ = build_blocks(c)
    sched = order_blocks(c, part)
    check_schedule(c, sched)
    sched[0].gates.reverse()
    with pytest.raises(PassOrderError):
        check_schedule(c, sched)


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=5, max_gates=40, kinds=[K.H, K.T, K.CNOT, K.RX, K.CZ, K.RZ]))
def test_block_passes_keep_invariants(c):
    ctx = run_until(c, "phase_tracking")
    before = ctx.circuit.copy()
    part, _ = build_blocks(ctx.circuit)
    rearrange_blocks(ctx.circuit, part)
    part.check(ctx.circuit)
    split_angles(ctx.circuit, part)
    part.check(ctx.circuit)
    sched = order_blocks(ctx.circuit, part)
    check_schedule(ctx.circuit, sched)
    assert circuits_equivalent(before, ctx.circuit)


# --- ZZ restriction ----------------------------------------------------------------------------


def test_zz_pi_becomes_two_halves():
    c = from_gates(3, [ZZ(2, 0, 1.0)])
    restrict_zz_angles(c)
    assert labels(c) == ["ZZ(0.5pi)_2,0", "ZZ(0.5pi)_2,0"]


def test_zz_half_pi_untouched():
    c = from_gates(2, [ZZ(0, 1)])
    assert not restrict_zz_angles(c).changed


def test_zz_three_half_pi():
    c = from_gates(2, [ZZ(0, 1, 1.5)])
    before = c.copy()
    restrict_zz_angles(c)
    assert len(c) == 3 and circuits_equivalent(before, c)


def test_zz_restriction_rewrites_schedule():
    c = from_gates(2, [ZZ(0, 1, 1.0)])
    part, _ = build_blocks(c)
    sched = order_blocks(c, part)
    restrict_zz_angles(c, sched)
    check_schedule(c, sched)


def test_zz_restriction_rejects_generic_angle():
    with pytest.raises(PassOrderError):
        restrict_zz_angles(from_gates(2, [ZZ(0, 1, 0.3)]))


def test_zz_zero_is_dropped():
    c = from_gates(2, [ZZ(0, 1, 0.0), gate(K.H, 0)])
    restrict_zz_angles(c)
    assert labels(c) == ["H_0"]
