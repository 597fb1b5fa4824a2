"""Dense-unitary reference semantics, used by tests and the verifier.

Basis states are indexed with qubit 0 as the least significant bit.
"""

from __future__ import annotations

import numpy as np

from .circuit import CircuitDag, Gate
from .errors import CapacityError, DimensionError
from .gates import matrix_of

MAX_QUBITS = 10


def _apply(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    # ``state`` has n row axes (axis k holds qubit n-1-k) plus one column axis.
    m = g.arity
    u = matrix_of(g).reshape((2,) * (2 * m))
    axes = [n - 1 - q for q in g.qubits]
    out = np.tensordot(u, state, axes=(list(range(m, 2 * m)), axes))
    return np.moveaxis(out, list(range(m)), axes)


def gates_unitary(n: int, gates: list[Gate]) -> np.ndarray:
    if n > MAX_QUBITS:
        raise CapacityError(f"dense unitaries are limited to {MAX_QUBITS} qubits, got {n}")
    dim = 2**n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in gates:
        state = _apply(state, g, n)
    return state.reshape(dim, dim)


def circuit_unitary(c: CircuitDag) -> np.ndarray:
    """Unitary of the gates in execution order, ignoring the output permutation."""
    return gates_unitary(c.n, c.ordered_gates())


def permutation_matrix(perm: list[int]) -> np.ndarray:
    """Matrix moving the state of qubit ``q`` onto qubit ``perm[q]``."""
    n = len(perm)
    dim = 2**n
    p = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        out = 0
        for q in range(n):
            if idx >> q & 1:
                out |= 1 << perm[q]
        p[out, idx] = 1
    return p


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of ``a - c b`` for the phase ``c`` that best aligns them."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    t = np.trace(a @ b.conj().T)
    if abs(t) > 1e-6:
        c = t / abs(t)
    else:
        k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
        if abs(a[k]) < 1e-12:
            return float(np.linalg.norm(a - b))
        c = a[k] / b[k]
        c /= abs(c)
    return float(np.linalg.norm(a - c * b))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    return phase_distance(a, b) < tol * a.shape[0]


def equal_up_to_diagonal(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """True when ``a = D b`` for some diagonal unitary ``D``."""
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    m = a @ b.conj().T
    off = m - np.diag(np.diag(m))
    return float(np.linalg.norm(off)) < tol * a.shape[0] and np.allclose(
        np.abs(np.diag(m)), 1.0, atol=tol * 10
    )


def equal_up_to_permutation_and_phase(
    original: np.ndarray, compiled: np.ndarray, perm: list[int], tol: float = 1e-8
) -> bool:
    """Check ``compiled = P(perm) original`` up to a global phase."""
    if sorted(perm) != list(range(len(perm))) or 2 ** len(perm) != original.shape[0]:
        raise DimensionError(f"{perm} is not a permutation of the register")
    return equal_up_to_global_phase(permutation_matrix(perm) @ original, compiled, tol)


def logical_unitary(c: CircuitDag) -> np.ndarray:
    """Unitary of ``c`` with its output permutation undone.

    A circuit whose gates give ``V`` and whose permutation is ``p`` implements
    ``P(p)^-1 V`` on the original qubit labels.
    """
    u = circuit_unitary(c)
    if c.output_permutation != list(range(c.n)):
        u = permutation_matrix(c.output_permutation).T @ u
    return u


def circuits_equivalent(original: CircuitDag, compiled: CircuitDag, tol: float = 1e-8) -> bool:
    if original.n != compiled.n:
        raise DimensionError(f"register sizes differ: {original.n} vs {compiled.n}")
    u = logical_unitary(original)
    v = circuit_unitary(compiled)
    return equal_up_to_permutation_and_phase(u, v, compiled.output_permutation, tol)
