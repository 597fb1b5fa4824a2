"""Named passes over a shared context, so pipelines can be listed by name."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..circuit import CircuitDag
from .core import (
    DEFAULT_MACROS,
    PassResult,
    build_rx_rz_sequences,
    commute_through_multis,
    eliminate_swaps,
    match_macros,
    merge_rz_sweep,
    rebase_to_m,
    reduce_fixpoint,
    remove_redundancies,
    restrict_single_qubit_angles,
    squash_single_qubit_runs,
)
from .ion import (
    Partition,
    ScheduleEntry,
    build_blocks,
    order_blocks,
    phase_tracking,
    rearrange_blocks,
    restrict_zz_angles,
    split_angles,
)


@dataclass
class PassContext:
    circuit: CircuitDag
    drop_terminal_rz: bool = False
    macros: tuple = DEFAULT_MACROS
    partition: Partition | None = None
    schedule: list[ScheduleEntry] | None = None
    notes: dict = field(default_factory=dict)


def _partition(ctx: PassContext) -> Partition:
    if ctx.partition is None:
        ctx.partition, _ = build_blocks(ctx.circuit)
    return ctx.partition


def _build_blocks(ctx: PassContext) -> PassResult:
    ctx.partition, seqs = build_blocks(ctx.circuit)
    ctx.notes["blockless_initial"] = len(seqs)
    return PassResult()


def _order(ctx: PassContext) -> PassResult:
    ctx.schedule = order_blocks(ctx.circuit, _partition(ctx))
    ctx.notes["blockless_final"] = sum(e.type == "sequence" for e in ctx.schedule)
    return PassResult()


def _phase_tracking(ctx: PassContext) -> PassResult:
    ctx.partition = None
    return phase_tracking(ctx.circuit, ctx.drop_terminal_rz)


PassFn = Callable[[PassContext], PassResult]

REGISTRY: dict[str, PassFn] = {
    "eliminate_swaps": lambda ctx: eliminate_swaps(ctx.circuit),
    "remove_redundancies": lambda ctx: remove_redundancies(ctx.circuit),
    "commute_through_multis": lambda ctx: commute_through_multis(ctx.circuit),
    "reduce_fixpoint": lambda ctx: reduce_fixpoint(ctx.circuit),
    "match_macros": lambda ctx: match_macros(ctx.circuit, ctx.macros),
    "rebase_to_m": lambda ctx: rebase_to_m(ctx.circuit),
    "squash_single_qubit_runs": lambda ctx: squash_single_qubit_runs(ctx.circuit),
    "build_rx_rz_sequences": lambda ctx: build_rx_rz_sequences(ctx.circuit),
    "restrict_single_qubit_angles": lambda ctx: restrict_single_qubit_angles(ctx.circuit),
    "merge_rz_sweep": lambda ctx: merge_rz_sweep(ctx.circuit),
    "phase_tracking": _phase_tracking,
    "build_blocks": _build_blocks,
    "rearrange_blocks": lambda ctx: rearrange_blocks(ctx.circuit, _partition(ctx)),
    "split_angles": lambda ctx: split_angles(ctx.circuit, _partition(ctx)),
    "order_blocks": _order,
    "restrict_zz_angles": lambda ctx: restrict_zz_angles(ctx.circuit, ctx.schedule),
}

FULL_PIPELINE = (
    "eliminate_swaps",
    "reduce_fixpoint",
    "match_macros",
    "reduce_fixpoint",
    "rebase_to_m",
    "build_rx_rz_sequences",
    "restrict_single_qubit_angles",
    "merge_rz_sweep",
    "phase_tracking",
    "build_blocks",
    "rearrange_blocks",
    "split_angles",
    "order_blocks",
    "restrict_zz_angles",
)

__all__ = ["FULL_PIPELINE", "PassContext", "PassResult", "REGISTRY"]
