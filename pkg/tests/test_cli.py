import csv
import json

from ioncc.cli import EXIT_OK, EXIT_PARSE, EXIT_USAGE, EXIT_VERIFY, main

BELL = 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\nh q[0];\ncx q[0],q[1];\n'


def test_compile_writes_json(tmp_path):
    src, out, rep = tmp_path / "bell.qasm", tmp_path / "out.json", tmp_path / "rep.json"
    src.write_text(BELL)
    assert main(["compile", str(src), "-o", str(out), "--verify", "--report", str(rep)]) == EXIT_OK
    body = json.loads(out.read_text())
    assert body["in_restricted_set"] and body["report"]["verification"] == "passed"
    assert json.loads(rep.read_text())["final"] == body["report"]["final"]


def test_compile_naive_and_drop_rz(tmp_path):
    src, out = tmp_path / "bell.qasm", tmp_path / "out.json"
    src.write_text(BELL)
    assert main(["compile", str(src), "-o", str(out), "--naive"]) == EXIT_OK
    assert main(["compile", str(src), "-o", str(out), "--drop-terminal-rz", "--verify"]) == EXIT_OK
    assert not any(g["kind"] == "Rz" for g in json.loads(out.read_text())["gates"])


def test_parse_error_exit_code(tmp_path):
    src = tmp_path / "bad.qasm"
    src.write_text("qreg q[2];\ncx q[0] q[1];\n")
    assert main(["compile", str(src), "-o", str(tmp_path / "o.json")]) == EXIT_PARSE


def test_usage_errors(tmp_path):
    assert main(["compile", str(tmp_path / "missing.qasm"), "-o", "x.json"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    src = tmp_path / "bell.qasm"
    src.write_text(BELL)
    assert main(["compile", str(src), "-o", str(tmp_path / "o.json"), "--passes", "nope"]) == EXIT_USAGE


def test_verification_failure_exit_code(tmp_path, monkeypatch):
    from ioncc.circuit import GateKind, gate
    from ioncc.passes import REGISTRY

    def sabotage(ctx):
        ctx.circuit.append(gate(GateKind.R, 0, params=(1.0, 0.0)))

    monkeypatch.setitem(REGISTRY, "order_blocks", sabotage)
    src = tmp_path / "bell.qasm"
    src.write_text(BELL)
    assert main(["compile", str(src), "-o", str(tmp_path / "o.json"), "--verify"]) == EXIT_VERIFY


def test_check_rules(capsys):
    assert main(["check-rules"]) == EXIT_OK
    assert "identities hold" in capsys.readouterr().out


def test_bench_writes_csv(tmp_path):
    d = tmp_path / "c"
    d.mkdir()
    (d / "bell.qasm").write_text(BELL)
    (d / "broken.qasm").write_text("qreg q[1];\nfrob q[0];\n")
    out = tmp_path / "r.csv"
    assert main(["bench", str(d), "--csv", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert [r["name"] for r in rows] == ["bell", "broken"]
    assert rows[0]["status"] == "ok" and rows[1]["status"] == "failed"


def test_server_mode_uses_http(tmp_path, monkeypatch):
    import httpx
    from fastapi.testclient import TestClient

    from ioncc.service import app

    client = TestClient(app)

    def post(url, json=None, params=None, timeout=None):
        return client.post(url.removeprefix("http://svc"), json=json, params=params)

    monkeypatch.setattr(httpx, "post", post)
    src, out = tmp_path / "bell.qasm", tmp_path / "out.json"
    src.write_text(BELL)
    assert main(["compile", str(src), "-o", str(out), "--server", "http://svc"]) == EXIT_OK
    assert json.loads(out.read_text())["in_restricted_set"]
    src.write_text("qreg q[1];\nfrob q[0];\n")
    assert main(["compile", str(src), "-o", str(out), "--server", "http://svc"]) == EXIT_PARSE
    assert main(["check-rules", "--server", "http://svc"]) == EXIT_OK
