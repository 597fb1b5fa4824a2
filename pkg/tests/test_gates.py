import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ioncc.circuit import GateKind, gate
from ioncc.gates import (
    ALL_RULES,
    CNOT_TO_ZZ,
    CRY_MACRO,
    ZZ_GENERIC,
    ZZ_PI,
    ZZ_THREE_HALF_PI,
    GateSet,
    apply_rule,
    ccx_network,
    gate_matrix,
    in_gate_set,
    in_n,
    matrix_of,
    rx_restriction,
    tk1_of,
    zxz_angles,
)
from ioncc.oracle import equal_up_to_global_phase, gates_unitary, phase_distance
from ioncc.rulecheck import RULE_TOL, check_rules

K = GateKind
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2)


def _u(n, gs):
    return gates_unitary(n, gs)


@given(st.floats(0, 2))
def test_r_zero_pulse_is_identity(phi):
    assert np.allclose(gate_matrix(K.R, (0.0, phi)), I2)


def test_r_pi_is_x_up_to_phase():
    assert np.allclose(gate_matrix(K.R, (1.0, 0.0)), -1j * X)


def test_swap_matrix():
    want = 0.5 * (np.kron(I2, I2) + np.kron(X, X) + np.kron(Y, Y) + np.kron(Z, Z))
    assert np.allclose(gate_matrix(K.SWAP), want)


def test_zz_is_diagonal():
    m = gate_matrix(K.ZZ, (0.5,))
    assert np.allclose(m, np.diag(np.diag(m)))


@pytest.mark.parametrize("kind", list(K))
def test_every_matrix_is_unitary(kind):
    params = [0.37 * (i + 1) for i in range(kind.num_params)]
    m = gate_matrix(kind, params)
    assert m.shape == (2**kind.arity,) * 2
    assert np.allclose(m @ m.conj().T, np.eye(m.shape[0]))


# --- rules ----------------------------------------------------------------------------


def test_cnot_rule_has_one_zz_and_local_rotations():
    seq = apply_rule(CNOT_TO_ZZ, gate(K.CNOT, 0, 1))
    zz = [g for g in seq if g.kind is K.ZZ]
    assert len(zz) == 1 and zz[0].params == (0.5,)
    assert all(g.kind in (K.RX, K.RZ) for g in seq if g.kind is not K.ZZ)
    assert len(seq) == 10
    assert equal_up_to_global_phase(_u(2, seq), _u(2, [gate(K.CNOT, 0, 1)]))


def test_zz_generic_rule():
    g = gate(K.ZZ, 0, 1, params=(0.3,))
    seq = apply_rule(ZZ_GENERIC, g)
    assert len(seq) == 9
    assert [s.params for s in seq if s.kind is K.ZZ] == [(0.5,), (0.5,)]
    assert any(s.kind is K.RX and math.isclose(s.params[0], 1.7) for s in seq)
    assert equal_up_to_global_phase(_u(2, seq), _u(2, [g]))


def test_zz_pi_and_three_half_pi():
    assert [s.params for s in apply_rule(ZZ_PI, gate(K.ZZ, 0, 1, params=(1.0,)))] == [(0.5,)] * 2
    seq = apply_rule(ZZ_THREE_HALF_PI, gate(K.ZZ, 1, 0, params=(1.5,)))
    assert [s.params for s in seq] == [(0.5,)] * 3
    assert apply_rule(ZZ_PI, gate(K.ZZ, 0, 1, params=(0.5,))) is None


def test_rule_kind_mismatch_is_no_match():
    assert apply_rule(CNOT_TO_ZZ, gate(K.CZ, 0, 1)) is None


@pytest.mark.parametrize("theta", [1.0, 2.0, 3.0])
def test_cry_macro_on_pi_multiples(theta):
    g = gate(K.CRY, 3, 1, params=(theta,))
    seq = apply_rule(CRY_MACRO, g)
    assert len(seq) == 4
    assert [s.params[0] for s in seq if s.kind is K.ZZ] == [theta / 2 % 2]
    assert equal_up_to_global_phase(_u(4, seq), _u(4, [g]))


def test_rx_restriction_examples():
    assert rx_restriction(0.0) == []
    assert [(g.kind, g.params) for g in rx_restriction(1.5)] == [(K.RX, (1.0,)), (K.RX, (0.5,))]
    assert [(g.kind, g.params) for g in rx_restriction(1.0)] == [(K.RX, (1.0,))]
    seq = rx_restriction(0.25)
    assert len(seq) == 5
    assert seq[2].kind is K.RZ and math.isclose(seq[2].params[0], 1.25)
    assert equal_up_to_global_phase(_u(1, seq), gate_matrix(K.RX, (0.25,)))


@settings(max_examples=100)
@given(st.floats(0, 2, allow_nan=False))
def test_rx_restriction_property(theta):
    seq = rx_restriction(theta)
    assert all(in_n(g) for g in seq)
    assert phase_distance(_u(1, seq), gate_matrix(K.RX, (theta,))) < 1e-9


def test_ccx_network_is_toffoli():
    tof = np.eye(8, dtype=complex)
    tof[[6, 7]] = tof[[7, 6]]
    # qubit 2 is the most significant bit, so (2, 1, 0) puts controls on top
    seq = ccx_network(2, 1, 0)
    assert len(seq) == 15
    assert phase_distance(_u(3, seq), tof) < 1e-10


def test_rule_identity_suite():
    checks = check_rules(seed=3)
    names = {c.name for c in checks}
    assert {r.name for r in ALL_RULES} <= names
    bad = [c for c in checks if not c.ok]
    assert not bad, bad
    assert max(c.distance for c in checks) < RULE_TOL


# --- gate sets ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "g,expected",
    [
        (gate(K.R, 0, params=(0.5, 0.3)), True),
        (gate(K.R, 0, params=(1.0, 1.9)), True),
        (gate(K.R, 0, params=(0.25, 0.0)), False),
        (gate(K.RZ, 0, params=(0.123,)), True),
        (gate(K.ZZ, 0, 1, params=(0.5,)), True),
        (gate(K.ZZ, 0, 1, params=(1.0,)), False),
        (gate(K.CNOT, 0, 1), False),
        (gate(K.H, 0), False),
    ],
)
def test_n_membership(g, expected):
    assert in_n(g) is expected


def test_n_is_subset_of_m():
    samples = [gate(K.R, 0, params=(t, 0.1)) for t in (0.5, 0.7, 1.0)] + [
        gate(K.ZZ, 0, 1, params=(t,)) for t in (0.5, 1.0, 0.3)
    ]
    for g in samples:
        if in_gate_set(g, GateSet.N):
            assert in_gate_set(g, GateSet.M)
    assert in_gate_set(gate(K.ZZ, 0, 1, params=(0.3,)), GateSet.M)


# --- single-qubit synthesis ------------------------------------------------------------


@settings(max_examples=150)
@given(st.floats(0, 2), st.floats(0, 2), st.floats(0, 2))
def test_zxz_reconstructs(a, b, c):
    u = _u(1, [gate(K.RZ, 0, params=(c,)), gate(K.RX, 0, params=(b,)), gate(K.RZ, 0, params=(a,))])
    alpha, beta, gamma = zxz_angles(u)
    assert 0 <= beta <= 1 + 1e-12
    v = matrix_of(gate(K.TK1, 0, params=(alpha, beta, gamma)))
    assert phase_distance(u, v) < 1e-9


def test_tk1_of_identity_is_none():
    assert tk1_of(np.exp(0.3j) * I2, 0) is None
    assert tk1_of(X, 0) is not None
