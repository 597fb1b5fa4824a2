"""Deterministic generator for a RevLib-style benchmark corpus.

The families mimic what reversible-logic benchmark suites look like once they
are lowered to ``cx`` and single-qubit gates: NOT/CNOT/Toffoli networks,
CNOT-only code converters, textbook QFTs with ``cu1`` spelled out, and
Ising-type evolution steps. Files are plain OpenQASM 2.0.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def _ccx(a: int, b: int, c: int) -> list[str]:
    return [
        f"h q[{c}];",
        f"cx q[{b}],q[{c}];",
        f"tdg q[{c}];",
        f"cx q[{a}],q[{c}];",
        f"t q[{c}];",
        f"cx q[{b}],q[{c}];",
        f"tdg q[{c}];",
        f"cx q[{a}],q[{c}];",
        f"t q[{b}];",
        f"t q[{c}];",
        f"h q[{c}];",
        f"cx q[{a}],q[{b}];",
        f"t q[{a}];",
        f"tdg q[{b}];",
        f"cx q[{a}],q[{b}];",
    ]


def _cu1(lam: float, a: int, b: int) -> list[str]:
    return [
        f"u1({lam / 2!r}) q[{a}];",
        f"cx q[{a}],q[{b}];",
        f"u1({-lam / 2!r}) q[{b}];",
        f"cx q[{a}],q[{b}];",
        f"u1({lam / 2!r}) q[{b}];",
    ]


def nct(rng: random.Random, n: int, gates: int) -> list[str]:
    out: list[str] = []
    for _ in range(gates):
        r = rng.random()
        if r < 0.1:
            out.append(f"x q[{rng.randrange(n)}];")
        elif r < 0.55 or n < 3:
            a, b = rng.sample(range(n), 2)
            out.append(f"cx q[{a}],q[{b}];")
        else:
            out.extend(_ccx(*rng.sample(range(n), 3)))
    return out


def cnot_only(rng: random.Random, n: int, gates: int) -> list[str]:
    out = []
    for _ in range(gates):
        a, b = rng.sample(range(n), 2)
        out.append(f"cx q[{a}],q[{b}];")
    return out


def qft(n: int, swaps: bool = True) -> list[str]:
    out = []
    for j in range(n):
        out.append(f"h q[{j}];")
        for k in range(j + 1, n):
            out.extend(_cu1(math.pi / 2 ** (k - j), k, j))
    if swaps:
        for j in range(n // 2):
            out.append(f"swap q[{j}],q[{n - 1 - j}];")
    return out


def ising(rng: random.Random, n: int, steps: int) -> list[str]:
    out = [f"h q[{j}];" for j in range(n)]
    for _ in range(steps):
        theta = rng.uniform(0.05, 1.5)
        for j in range(n - 1):
            out += [f"cx q[{j}],q[{j + 1}];", f"u1({theta!r}) q[{j + 1}];", f"cx q[{j}],q[{j + 1}];"]
        field_ = rng.uniform(0.05, 1.5)
        out += [f"u3({field_!r},{-math.pi / 2!r},{math.pi / 2!r}) q[{j}];" for j in range(n)]
    return out


@dataclass(frozen=True)
class Entry:
    name: str
    n: int
    family: str
    size: int
    seed: int


def default_entries() -> list[Entry]:
    specs = []
    seed = 0
    # Small NCT networks: many of them, a few dozen to a few hundred gates.
    for n in (3, 4, 5, 6, 7, 8):
        for size in (2, 4, 8, 16, 32):
            seed += 1
            specs.append(Entry(f"nct{n}_{size}", n, "nct", size, seed))
    for n in (9, 10):
        for size in (4, 16):
            seed += 1
            specs.append(Entry(f"nct{n}_{size}", n, "nct", size, seed))
    # Large ones for the runtime spread.
    for n, size in ((5, 150), (6, 300), (7, 400)):
        seed += 1
        specs.append(Entry(f"nct{n}_{size}", n, "nct", size, seed))
    for n, size in ((6, 5), (6, 40), (8, 200)):
        seed += 1
        specs.append(Entry(f"graycode{n}_{size}", n, "cnot", size, seed))
    for n in (3, 4, 5, 6, 8):
        specs.append(Entry(f"qft{n}", n, "qft", n, 0))
    for n, steps in ((4, 2), (6, 4), (8, 3)):
        seed += 1
        specs.append(Entry(f"ising{n}_{steps}", n, "ising", steps, seed))
    return specs


def render(spec: Entry) -> str:
    rng = random.Random(spec.seed)
    if spec.family == "nct":
        body = nct(rng, spec.n, spec.size)
    elif spec.family == "cnot":
        body = cnot_only(rng, spec.n, spec.size)
    elif spec.family == "qft":
        body = qft(spec.n)
    elif spec.family == "ising":
        body = ising(rng, spec.n, spec.size)
    else:
        raise ValueError(spec.family)
    return HEADER + f"qreg q[{spec.n}];\ncreg c[{spec.n}];\n" + "\n".join(body) + "\n" + (
        f"measure q -> c;\n"
    )


def write_corpus(directory: str | Path, specs: list[Entry] | None = None) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for spec in specs or default_entries():
        p = d / f"{spec.name}.qasm"
        p.write_text(render(spec))
        paths.append(p)
    return paths
