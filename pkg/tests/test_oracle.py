"""Dense density-matrix oracle and the stabilizer co-simulation."""

import numpy as np
import pytest

from resetsim.circuit import CircuitConfig
from resetsim.clifford import cnot_gate, sample_clifford2
from resetsim.oracle import (
    MAX_DENSE_SITES,
    apply_unitary_two_site,
    cosimulate,
    cosimulate_pairs,
    dense_negativity,
    dense_purity,
    dense_reset,
    dense_stabilizer_state,
    dense_zero_state,
    gate_unitary,
    pauli_matrix,
)
from resetsim.observables import Cut
from resetsim.pauli import PauliString, StabilizerState

from test_reset import random_state


def test_site_cap():
    with pytest.raises(ValueError):
        dense_zero_state(MAX_DENSE_SITES + 1)


def test_zero_state_and_pauli_matrix():
    st = dense_zero_state(2)
    st.validate()
    assert st.rho[0, 0] == 1.0
    zz = pauli_matrix(PauliString.from_label("-ZZ"))
    assert np.allclose(zz, -np.diag([1.0, -1.0, -1.0, 1.0]))


def test_dense_stabilizer_state_purity_is_L_minus_k():
    rng = np.random.default_rng(30)
    for _ in range(15):
        L = int(rng.integers(2, 6))
        s = random_state(rng, L)
        st = dense_stabilizer_state(s)
        st.validate()
        assert abs(dense_purity(st) - (L - s.k)) < 1e-10


def test_dense_reset_on_bell_pair():
    bell = dense_stabilizer_state(StabilizerState.from_labels(["+XX", "+ZZ"]))
    after = dense_reset(bell, 0)
    # site 0 in |0>, site 1 maximally mixed
    want = np.diag([0.5, 0.5, 0.0, 0.0])
    assert np.allclose(after.rho, want, atol=1e-12)
    assert abs(dense_purity(after) - 1.0) < 1e-10
    final = dense_reset(after, 1)
    assert np.allclose(final.rho, np.diag([1.0, 0.0, 0.0, 0.0]), atol=1e-12)


def test_gate_unitary_reproduces_truth_table():
    # CNOT has a known matrix up to global phase
    u = gate_unitary(cnot_gate())
    cx = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    phase = u[0, 0] / cx[0, 0]
    assert abs(abs(phase) - 1.0) < 1e-9
    assert np.allclose(u, phase * cx, atol=1e-9)


def test_gate_unitary_is_unitary_for_random_gates():
    rng = np.random.default_rng(31)
    for _ in range(20):
        u = gate_unitary(sample_clifford2(rng))
        assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-9)


def test_apply_unitary_matches_tableau_conjugation():
    rng = np.random.default_rng(32)
    from resetsim.clifford import apply_gate

    for _ in range(10):
        L = 3
        s = random_state(rng, L)
        gate = sample_clifford2(rng)
        i, j = 2, 0
        dense = dense_stabilizer_state(s)
        dense_after = apply_unitary_two_site(dense, gate_unitary(gate), i, j)
        apply_gate(s, gate, (i, j))
        assert np.allclose(dense_after.rho, dense_stabilizer_state(s).rho, atol=1e-10)


def test_dense_negativity_bell_pair():
    bell = dense_stabilizer_state(StabilizerState.from_labels(["+XX", "+ZZ"]))
    assert abs(dense_negativity(bell, Cut([0])) - 1.0) < 1e-12


def test_cosimulate_brickwork_matches():
    for L, seed in ((2, 0), (4, 1), (6, 2)):
        res = cosimulate(CircuitConfig(L=L, T=4 * L, p=0.25, seed=seed))
        assert res.matches, res


def test_cosimulate_pairs_matches_odd_sizes():
    for L, seed in ((3, 0), (5, 1)):
        res = cosimulate_pairs(L, 4 * L, 0.25, seed)
        assert res.matches, res
