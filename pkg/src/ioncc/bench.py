"""Benchmark harness: compile every .qasm file in a directory and tabulate counts."""

from __future__ import annotations

import csv
import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import CompilerError
from .pipeline import CompileOptions, compile_circuit, compile_naive
from .qasm import load_qasm

# The first nine columns are the usual comparison layout; the rest are extras.
COLUMNS = [
    "name",
    "q",
    "1qg",
    "2qg",
    "compiled_1qg",
    "compiled_2qg",
    "naive_1qg",
    "naive_2qg",
    "reduction_factor",
    "compiled_1qg_no_terminal_rz",
    "naive_trivial_1qg",
    "naive_trivial_2qg",
    "no_phase_tracking_1qg",
    "no_phase_tracking_2qg",
    "omega",
    "bounds_ok",
    "ms_per_gate",
    "verification",
    "sha256",
    "status",
    "error",
]


@dataclass
class BenchRow:
    name: str
    q: int = 0
    one_qg: int = 0
    two_qg: int = 0
    compiled_1qg: int = 0
    compiled_2qg: int = 0
    naive_1qg: int = 0
    naive_2qg: int = 0
    reduction_factor: float = 0.0
    compiled_1qg_no_terminal_rz: int = 0
    naive_trivial_1qg: int = 0
    naive_trivial_2qg: int = 0
    no_phase_tracking_1qg: int = 0
    no_phase_tracking_2qg: int = 0
    omega: int = 0
    bounds_ok: bool = True
    ms_per_gate: float = 0.0
    verification: str = ""
    sha256: str = ""
    status: str = "ok"
    error: str = ""

    @property
    def original_total(self) -> int:
        return self.one_qg + self.two_qg

    @property
    def compiled_total(self) -> int:
        return self.compiled_1qg + self.compiled_2qg

    @property
    def naive_total(self) -> int:
        return self.naive_1qg + self.naive_2qg

    def as_csv(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]


def file_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def bench_file(path: str | Path, verify: bool = False, verify_cap: int = 10) -> BenchRow:
    path = Path(path)
    row = BenchRow(name=path.stem)
    try:
        row.sha256 = file_hash(path)
        c = load_qasm(path).circuit
        row.q = c.n
        row.one_qg, row.two_qg = c.count()
        opts = CompileOptions(verify=verify, verify_qubit_cap=verify_cap)
        out, rep = compile_circuit(c, opts)
        row.compiled_1qg, row.compiled_2qg = rep.final
        row.compiled_1qg_no_terminal_rz = rep.final_without_terminal_rz[0]
        row.omega = rep.omega
        row.bounds_ok = all(rep.bounds.values())
        row.verification = rep.verification
        row.ms_per_gate = 1e3 * rep.seconds_per_gate
        naive, _ = compile_naive(c)
        row.naive_1qg, row.naive_2qg = naive.count()
        trivial, _ = compile_naive(c, remove_trivial=True)
        row.naive_trivial_1qg, row.naive_trivial_2qg = trivial.count()
        no_pt, _ = compile_circuit(c, CompileOptions(phase_tracking=False))
        row.no_phase_tracking_1qg, row.no_phase_tracking_2qg = no_pt.count()
        row.reduction_factor = row.naive_total / row.compiled_total if row.compiled_total else 0.0
    except (CompilerError, OSError, ValueError) as e:
        row.status = "failed"
        row.error = f"{type(e).__name__}: {e}"
    return row


def run_benchmark(
    directory: str | Path, jobs: int = 1, verify: bool = False, verify_cap: int = 10
) -> list[BenchRow]:
    files = sorted(Path(directory).glob("*.qasm"))
    if jobs <= 1:
        return [bench_file(f, verify, verify_cap) for f in files]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(bench_file, files, [verify] * len(files), [verify_cap] * len(files)))


def write_csv(rows: list[BenchRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow(r.as_csv())


def summarize(rows: list[BenchRow]) -> dict:
    ok = [r for r in rows if r.status == "ok"]
    big = [r for r in ok if r.original_total >= 50]
    return {
        "circuits": len(rows),
        "failed": len(rows) - len(ok),
        "mean_reduction_factor": sum(r.reduction_factor for r in big) / len(big) if big else None,
        "rows": [asdict(r) for r in rows],
    }
