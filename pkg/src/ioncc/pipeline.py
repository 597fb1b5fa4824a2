"""Compilation driver: runs the pass chain, measures it and checks the result."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from . import angles, oracle
from .circuit import TERMINAL, CircuitDag, Gate, GateKind
from .errors import CompilerError, StageError, VerificationError
from .gates import CNOT_TO_ZZ, R_PULSE_AREAS, ZZ_GENERIC, in_n, matrix_of, rx_restriction
from .passes import FULL_PIPELINE, REGISTRY, PassContext
from .passes.core import (
    DEFAULT_MACROS,
    eliminate_swaps,
    expand_tk1,
    lower_to_tk1_cnot,
    needs_generic_zz,
    remove_redundancies,
    splice_all,
    tk1_params,
)
from .passes.ion import restrict_zz_angles

K = GateKind

# Stage after which each single-qubit bound must hold: (multiplier of omega, of n).
BOUNDS = {
    "build_rx_rz_sequences": (4, 3),
    "restrict_single_qubit_angles": (8, 5),
    "phase_tracking": (4, 3),
}


@dataclass
class CompileOptions:
    verify: bool = False
    verify_qubit_cap: int = oracle.MAX_QUBITS
    drop_terminal_rz: bool = False
    pass_override: list[str] | None = None
    phase_tracking: bool = True
    macros: tuple[str, ...] = ("CRy",)

    def __post_init__(self):
        if self.verify_qubit_cap < 1:
            raise ValueError("verify_qubit_cap must be at least 1")
        unknown = [m for m in self.macros if m != "CRy"]
        if unknown:
            raise ValueError(f"unknown macros {unknown}")

    def passes(self) -> list[str]:
        if self.pass_override is not None:
            bad = [p for p in self.pass_override if p not in REGISTRY]
            if bad:
                raise ValueError(f"unknown passes {bad}; known: {sorted(REGISTRY)}")
            return list(self.pass_override)
        names = list(FULL_PIPELINE)
        if not self.phase_tracking:
            names.remove("phase_tracking")
        return names


@dataclass
class StageSnapshot:
    stage: str
    single_qubit: int
    two_qubit: int
    seconds: float


@dataclass
class CompileReport:
    n: int
    original: tuple[int, int] = (0, 0)
    stages: list[StageSnapshot] = field(default_factory=list)
    omega: int = 0
    bounds: dict[str, bool] = field(default_factory=dict)
    verification: str = "not run"
    output_permutation: list[int] = field(default_factory=list)
    measures_stripped: int = 0
    barriers_stripped: int = 0
    final: tuple[int, int] = (0, 0)
    final_without_terminal_rz: tuple[int, int] = (0, 0)
    compile_seconds: float = 0.0
    schedule: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def seconds_per_gate(self) -> float:
        total = sum(self.original)
        return self.compile_seconds / total if total else 0.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["seconds_per_gate"] = self.seconds_per_gate
        return d


def is_terminal_rz(c: CircuitDag, gid: int) -> bool:
    g = c.gates[gid]
    return g.kind is K.RZ and c.next_on(gid, g.qubits[0]) == TERMINAL


def count_gates(c: CircuitDag, include_terminal_rz: bool = True) -> tuple[int, int]:
    single, multi = c.count()
    if not include_terminal_rz:
        single -= sum(1 for gid in c.gates if is_terminal_rz(c, gid))
    return single, multi


def zz_count(c: CircuitDag) -> int:
    return sum(1 for g in c.gates.values() if g.kind is K.ZZ)


def verify_equivalent(original: CircuitDag, compiled: CircuitDag, up_to_diagonal: bool, tol: float = 1e-8) -> bool:
    u = oracle.logical_unitary(original)
    u = oracle.permutation_matrix(compiled.output_permutation) @ u
    v = oracle.circuit_unitary(compiled)
    if up_to_diagonal:
        return oracle.equal_up_to_diagonal(v, u, tol)
    return oracle.equal_up_to_global_phase(v, u, tol)


def _run(name: str, fn, ctx: PassContext, report: CompileReport) -> None:
    t0 = time.perf_counter()
    try:
        fn(ctx)
    except CompilerError as e:
        raise StageError(name, e) from e
    dt = time.perf_counter() - t0
    s, m = ctx.circuit.count()
    report.stages.append(StageSnapshot(name, s, m, dt))
    if name in BOUNDS:
        a, b = BOUNDS[name]
        omega = zz_count(ctx.circuit)
        report.bounds[f"{name}: 1q <= {a}w+{b}n"] = s <= a * omega + b * ctx.circuit.n


def _finish(original: CircuitDag, out: CircuitDag, report: CompileReport, opts: CompileOptions, diag: bool) -> None:
    report.final = count_gates(out)
    report.final_without_terminal_rz = count_gates(out, include_terminal_rz=False)
    report.output_permutation = list(out.output_permutation)
    if not opts.verify:
        return
    if out.n > opts.verify_qubit_cap:
        report.verification = f"skipped: {out.n} qubits above cap {opts.verify_qubit_cap}"
        return
    if not verify_equivalent(original, out, diag):
        report.verification = "failed"
        raise VerificationError("compiled circuit is not equivalent to its input")
    report.verification = "passed (up to diagonal)" if diag else "passed"


def compile_circuit(c: CircuitDag, opts: CompileOptions | None = None) -> tuple[CircuitDag, CompileReport]:
    opts = opts or CompileOptions()
    out = c.copy()
    report = CompileReport(n=c.n, original=c.count())
    macros = tuple(m for m in DEFAULT_MACROS if m.rule.kind.label in opts.macros)
    ctx = PassContext(out, drop_terminal_rz=opts.drop_terminal_rz, macros=macros)
    t0 = time.perf_counter()
    for name in opts.passes():
        if name == "restrict_zz_angles":
            report.omega = zz_count(out)
        _run(name, REGISTRY[name], ctx, report)
    report.compile_seconds = time.perf_counter() - t0
    if "restrict_zz_angles" not in opts.passes():
        report.omega = zz_count(out)
    if ctx.schedule is not None:
        report.schedule = [e.to_json() for e in ctx.schedule]
    report.notes.update(ctx.notes)
    _finish(c, out, report, opts, diag=opts.drop_terminal_rz and "phase_tracking" in opts.passes())
    return out, report


# --- naive baseline ------------------------------------------------------------------


def _each_single_to_tk1(c: CircuitDag) -> None:
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.arity == 1 and g.kind is not K.TK1:
            c.update(gid, Gate(K.TK1, g.qubits, tk1_params(matrix_of(g))))


def _restrict_rx_only(c: CircuitDag) -> None:
    for gid in c.execution_order():
        g = c.gates[gid]
        if g.kind is K.RX and not angles.in_set(g.params[0], R_PULSE_AREAS):
            c.splice(gid, rx_restriction(g.params[0], g.qubits[0]))


def compile_naive(
    c: CircuitDag, remove_trivial: bool = False, opts: CompileOptions | None = None
) -> tuple[CircuitDag, CompileReport]:
    """Gate-by-gate substitution with no optimization at all (or only trivial
    redundancy removal when ``remove_trivial`` is set)."""
    opts = opts or CompileOptions()
    out = c.copy()
    report = CompileReport(n=c.n, original=c.count())
    ctx = PassContext(out)
    steps = [
        ("eliminate_swaps", lambda x: eliminate_swaps(x.circuit)),
        ("lower_to_tk1_cnot", lambda x: lower_to_tk1_cnot(x.circuit)),
        ("zz_generic", lambda x: splice_all(x.circuit, ZZ_GENERIC, needs_generic_zz)),
        ("cnot_to_zz", lambda x: splice_all(x.circuit, CNOT_TO_ZZ)),
        ("single_to_tk1", lambda x: _each_single_to_tk1(x.circuit)),
        ("expand_tk1", lambda x: expand_tk1(x.circuit)),
    ]
    if remove_trivial:
        steps.append(("remove_redundancies", lambda x: remove_redundancies(x.circuit)))
    steps += [
        ("restrict_rx", lambda x: _restrict_rx_only(x.circuit)),
        ("restrict_zz_angles", lambda x: restrict_zz_angles(x.circuit)),
    ]
    t0 = time.perf_counter()
    for name, fn in steps:
        if name == "restrict_zz_angles":
            report.omega = zz_count(out)
        _run(name, fn, ctx, report)
    report.compile_seconds = time.perf_counter() - t0
    _finish(c, out, report, opts, diag=False)
    return out, report


def all_in_n(c: CircuitDag) -> bool:
    return all(in_n(g) for g in c.gates.values())
