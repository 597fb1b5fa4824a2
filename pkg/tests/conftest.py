import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from ioncc.circuit import CircuitDag, GateKind, gate

CORPUS = Path(__file__).resolve().parent.parent / "benchmarks" / "corpus"

K = GateKind
_ANGLE_CHOICES = (0.0, 0.25, 0.5, 1.0, 1.5)


def random_circuit(rng: random.Random, n: int, m: int, kinds=None) -> CircuitDag:
    """Random circuit over ``kinds`` (all kinds that fit by default)."""
    c = CircuitDag(n)
    pool = [k for k in (kinds or list(K)) if k.arity <= n]
    for _ in range(m):
        k = rng.choice(pool)
        qs = rng.sample(range(n), k.arity)
        ps = [rng.choice(_ANGLE_CHOICES + (rng.uniform(0, 2),)) for _ in range(k.num_params)]
        c.append(gate(k, *qs, params=ps))
    return c


@st.composite
def circuits(draw, max_qubits=4, max_gates=25, kinds=None):
    n = draw(st.integers(1, max_qubits))
    m = draw(st.integers(0, max_gates))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_circuit(random.Random(seed), n, m, kinds)


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    if not any(CORPUS.glob("*.qasm")):
        from ioncc.corpus import write_corpus

        write_corpus(CORPUS)
    return CORPUS


# One line per acceptance criterion, printed at the end of the session.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
