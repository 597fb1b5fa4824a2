"""HTTP service around the compiler.

The request handlers are plain functions so the CLI can call them in-process;
``app`` exposes the same functions over FastAPI.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .bench import run_benchmark, summarize
from .errors import CompilerError, QasmError, StageError, UnsupportedGateError, VerificationError
from .pipeline import CompileOptions, all_in_n, compile_circuit, compile_naive
from .qasm import lower_to_dag, parse_qasm
from .rulecheck import check_rules


class CompileRequest(BaseModel):
    qasm: str
    verify: bool = False
    verify_qubit_cap: int = Field(10, ge=1)
    drop_terminal_rz: bool = False
    naive: bool = False
    naive_remove_trivial: bool = False
    passes: list[str] | None = None


class GateModel(BaseModel):
    id: int
    kind: str
    qubits: list[int]
    params_pi: list[float]


class ScheduleEntryModel(BaseModel):
    type: Literal["block", "sequence"]
    qubits: list[int]
    gates: list[int]


class CompileResponse(BaseModel):
    n: int
    gates: list[GateModel]
    output_permutation: list[int]
    schedule: list[ScheduleEntryModel]
    report: dict
    in_restricted_set: bool


class RuleCheckModel(BaseModel):
    name: str
    case: str
    distance: float
    ok: bool


class RuleCheckResponse(BaseModel):
    ok: bool
    checks: list[RuleCheckModel]


class BenchRequest(BaseModel):
    directory: str
    jobs: int = Field(1, ge=1)
    verify: bool = False
    verify_cap: int = Field(10, ge=1)


class ErrorResponse(BaseModel):
    kind: Literal["parse", "verification", "compile", "usage"]
    message: str


class ServiceError(Exception):
    """Error carrying the kind the CLI maps onto an exit code."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        self.message = message
        super().__init__(message)


def _classify(e: Exception) -> ServiceError:
    cause = e.cause if isinstance(e, StageError) else e
    if isinstance(cause, (QasmError, UnsupportedGateError)):
        return ServiceError("parse", str(e))
    if isinstance(cause, VerificationError):
        return ServiceError("verification", str(e))
    if isinstance(cause, ValueError):
        return ServiceError("usage", str(e))
    return ServiceError("compile", str(e))


def handle_compile(req: CompileRequest) -> CompileResponse:
    try:
        lowered = lower_to_dag(parse_qasm(req.qasm))
        opts = CompileOptions(
            verify=req.verify,
            verify_qubit_cap=req.verify_qubit_cap,
            drop_terminal_rz=req.drop_terminal_rz,
            pass_override=req.passes,
        )
        if req.naive:
            out, report = compile_naive(lowered.circuit, req.naive_remove_trivial, opts)
        else:
            out, report = compile_circuit(lowered.circuit, opts)
    except (CompilerError, ValueError) as e:
        raise _classify(e) from e
    report.measures_stripped = lowered.measures_stripped
    report.barriers_stripped = lowered.barriers_stripped
    body = out.to_json()
    return CompileResponse(
        n=body["n"],
        gates=body["gates"],
        output_permutation=body["output_permutation"],
        schedule=report.schedule,
        report=report.to_json(),
        in_restricted_set=all_in_n(out),
    )


def handle_check_rules(seed: int = 0) -> RuleCheckResponse:
    checks = check_rules(seed)
    return RuleCheckResponse(
        ok=all(c.ok for c in checks),
        checks=[RuleCheckModel(name=c.name, case=c.case, distance=c.distance, ok=c.ok) for c in checks],
    )


def handle_bench(req: BenchRequest) -> dict:
    return summarize(run_benchmark(req.directory, req.jobs, req.verify, req.verify_cap))


_STATUS = {"parse": 422, "verification": 409, "compile": 500, "usage": 400}

app = FastAPI(title="ioncc", version=__version__)


@app.exception_handler(ServiceError)
async def _service_error(_, exc: ServiceError):
    return JSONResponse(status_code=_STATUS[exc.kind], content={"kind": exc.kind, "message": exc.message})


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/compile", response_model=CompileResponse, responses={422: {"model": ErrorResponse}, 409: {"model": ErrorResponse}})
def compile_endpoint(req: CompileRequest) -> CompileResponse:
    return handle_compile(req)


@app.post("/check-rules", response_model=RuleCheckResponse)
def check_rules_endpoint(seed: int = 0) -> RuleCheckResponse:
    return handle_check_rules(seed)


@app.post("/bench")
def bench_endpoint(req: BenchRequest) -> dict:
    return handle_bench(req)
