from fastapi.testclient import TestClient

from ioncc.service import app

client = TestClient(app)
BELL = (
    'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\ncreg c[2];\n'
    "h q[0];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\n"
)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200 and r.json()["status"] == "ok"


def test_compile_ok():
    r = client.post("/compile", json={"qasm": BELL, "verify": True})
    assert r.status_code == 200
    body = r.json()
    assert body["n"] == 2 and body["in_restricted_set"]
    assert body["report"]["verification"] == "passed"
    assert body["report"]["measures_stripped"] == 1
    assert sum(len(e["gates"]) for e in body["schedule"]) == len(body["gates"])


def test_compile_naive():
    r = client.post("/compile", json={"qasm": BELL, "naive": True})
    assert r.status_code == 200 and r.json()["in_restricted_set"]


def test_parse_error_is_422_with_kind():
    r = client.post("/compile", json={"qasm": "qreg q[1];\nfrob q[0];\n"})
    assert r.status_code == 422 and r.json()["kind"] == "parse"


def test_bad_pass_name_is_usage():
    r = client.post("/compile", json={"qasm": BELL, "passes": ["nope"]})
    assert r.status_code == 400 and r.json()["kind"] == "usage"


def test_request_validation():
    assert client.post("/compile", json={"verify": True}).status_code == 422


def test_check_rules():
    r = client.post("/check-rules")
    body = r.json()
    assert r.status_code == 200 and body["ok"] and len(body["checks"]) > 50


def test_bench(tmp_path):
    (tmp_path / "bell.qasm").write_text(BELL)
    r = client.post("/bench", json={"directory": str(tmp_path)})
    body = r.json()
    assert body["circuits"] == 1 and body["failed"] == 0
    assert body["rows"][0]["name"] == "bell"
