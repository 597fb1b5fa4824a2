"""Command line client.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 verification failure.
By default the commands run in-process; ``--server URL`` sends them to a
running ``ioncc serve`` instead.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bench import run_benchmark, write_csv

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VERIFY = 0, 1, 2, 3
_EXIT_BY_KIND = {"parse": EXIT_PARSE, "verification": EXIT_VERIFY, "usage": EXIT_USAGE, "compile": EXIT_VERIFY}


class Failure(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def _remote(server: str, path: str, payload: dict | None = None, params: dict | None = None) -> dict:
    import httpx

    try:
        r = httpx.post(server.rstrip("/") + path, json=payload, params=params, timeout=None)
    except httpx.HTTPError as e:
        raise Failure(EXIT_USAGE, f"cannot reach {server}: {e}") from e
    body = r.json()
    if r.status_code >= 400:
        kind = body.get("kind", "usage") if isinstance(body, dict) else "usage"
        raise Failure(_EXIT_BY_KIND.get(kind, EXIT_USAGE), body.get("message", str(body)))
    return body


def _local_compile(payload: dict) -> dict:
    from .service import CompileRequest, ServiceError, handle_compile

    try:
        return handle_compile(CompileRequest(**payload)).model_dump()
    except ServiceError as e:
        raise Failure(_EXIT_BY_KIND[e.kind], e.message) from e


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Compile OpenQASM circuits into a restricted trapped-ion gate set."""


@cli.command("compile")
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--verify", is_flag=True, help="Check the result against the input with dense unitaries.")
@click.option("--verify-cap", default=10, show_default=True, type=click.IntRange(min=1))
@click.option("--drop-terminal-rz", is_flag=True, help="Omit the final Rz on each wire.")
@click.option("--naive", is_flag=True, help="Use the gate-by-gate baseline instead.")
@click.option("--naive-remove-trivial", is_flag=True, help="Baseline plus trivial redundancy removal.")
@click.option("--passes", default=None, help="Comma-separated pass names (debugging).")
@click.option("--report", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--server", default=None, help="URL of a running service.")
def compile_cmd(source, output, verify, verify_cap, drop_terminal_rz, naive, naive_remove_trivial, passes, report, server):
    payload = {
        "qasm": source.read_text(),
        "verify": verify,
        "verify_qubit_cap": verify_cap,
        "drop_terminal_rz": drop_terminal_rz,
        "naive": naive or naive_remove_trivial,
        "naive_remove_trivial": naive_remove_trivial,
        "passes": [p.strip() for p in passes.split(",")] if passes else None,
    }
    result = _remote(server, "/compile", payload) if server else _local_compile(payload)
    output.write_text(json.dumps(result, indent=1))
    if report is not None:
        report.write_text(json.dumps(result["report"], indent=1))
    single, two = result["report"]["final"]
    click.echo(f"{source.name}: {single} single-qubit, {two} two-qubit gates -> {output}")


@cli.command("bench")
@click.argument("directory", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--verify", is_flag=True)
@click.option("--verify-cap", default=10, show_default=True, type=click.IntRange(min=1))
@click.option("--server", default=None)
def bench_cmd(directory, csv_path, jobs, verify, verify_cap, server):
    if server:
        from .bench import BenchRow

        body = _remote(server, "/bench", {"directory": str(directory), "jobs": jobs, "verify": verify, "verify_cap": verify_cap})
        rows = [BenchRow(**r) for r in body["rows"]]
    else:
        rows = run_benchmark(directory, jobs, verify, verify_cap)
    write_csv(rows, csv_path)
    failed = [r for r in rows if r.status != "ok"]
    click.echo(f"{len(rows)} circuits, {len(failed)} failed -> {csv_path}")
    for r in failed:
        click.echo(f"  {r.name}: {r.error}", err=True)
    if any("VerificationError" in r.error for r in failed):
        raise Failure(EXIT_VERIFY, "verification failed on at least one circuit")


@cli.command("check-rules")
@click.option("--seed", default=0, show_default=True)
@click.option("-v", "--verbose", is_flag=True)
@click.option("--server", default=None)
def check_rules_cmd(seed, verbose, server):
    if server:
        body = _remote(server, "/check-rules", params={"seed": seed})
    else:
        from .service import handle_check_rules

        body = handle_check_rules(seed).model_dump()
    bad = [c for c in body["checks"] if not c["ok"]]
    for c in body["checks"]:
        if verbose or not c["ok"]:
            click.echo(f"{'ok  ' if c['ok'] else 'FAIL'} {c['name']:<22} {c['case']:<40} {c['distance']:.2e}")
    click.echo(f"{len(body['checks']) - len(bad)}/{len(body['checks'])} identities hold")
    if bad:
        raise Failure(EXIT_VERIFY, f"{len(bad)} identities failed")


@cli.command("corpus")
@click.argument("directory", type=click.Path(file_okay=False, path_type=Path))
def corpus_cmd(directory):
    """Write the synthetic benchmark corpus into DIRECTORY."""
    from .corpus import write_corpus

    paths = write_corpus(directory)
    click.echo(f"wrote {len(paths)} circuits to {directory}")


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve_cmd(host, port):
    import uvicorn

    uvicorn.run("ioncc.service:app", host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="ioncc", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except Failure as e:
        click.echo(f"error: {e}", err=True)
        return e.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
