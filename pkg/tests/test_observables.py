"""Logarithmic purity and many-body negativity on stabilizer states."""

import numpy as np
import pytest

from resetsim.observables import Cut, build_K, half_cut, log_purity, negativity
from resetsim.oracle import (
    dense_negativity,
    dense_purity,
    dense_stabilizer_state,
)
from resetsim.pauli import StabilizerState

from test_reset import random_state


def test_cut_validation():
    Cut([0, 1]).validate(4)
    with pytest.raises(ValueError):
        Cut([]).validate(4)
    with pytest.raises(ValueError):
        Cut([0, 0]).validate(4)
    with pytest.raises(ValueError):
        Cut([4]).validate(4)
    with pytest.raises(ValueError):
        Cut(range(4)).validate(4)  # not a proper subset
    assert half_cut(6).subsystem_sites == (0, 1, 2)
    assert Cut([0, 2]).complement(4).subsystem_sites == (1, 3)


def test_log_purity_counts_lost_generators():
    assert log_purity(StabilizerState.zero_state(5)) == 0
    assert log_purity(StabilizerState.from_labels(["+ZII"], sites=3)) == 2
    assert log_purity(StabilizerState(4)) == 4  # maximally mixed


def test_bell_state_negativity():
    bell = StabilizerState.from_labels(["+XX", "+ZZ"])
    cut = Cut([0])
    K = build_K(bell, cut).to_dense()
    assert np.array_equal(K, [[0, 1], [1, 0]])  # XX vs ZZ clash on site 0
    assert negativity(bell, cut) == 1
    product = StabilizerState.zero_state(2)
    assert negativity(product, cut) == 0


def test_negativity_symmetric_under_complement():
    rng = np.random.default_rng(20)
    for _ in range(25):
        L = int(rng.integers(2, 7))
        s = random_state(rng, L)
        n = int(rng.integers(1, L))
        cut = Cut(sorted(rng.choice(L, size=n, replace=False).tolist()))
        assert negativity(s, cut) == negativity(s, cut.complement(L))


def test_negativity_matches_dense_oracle():
    rng = np.random.default_rng(21)
    for _ in range(25):
        L = int(rng.integers(2, 7))
        s = random_state(rng, L)
        cut = half_cut(L) if L > 1 else Cut([0])
        dense = dense_stabilizer_state(s)
        assert abs(negativity(s, cut) - dense_negativity(dense, cut)) < 1e-9
        assert abs(log_purity(s) - dense_purity(dense)) < 1e-9


def test_ghz_negativity_any_cut():
    ghz = StabilizerState.from_labels(["+XXX", "+ZZI", "+IZZ"])
    for cut in (Cut([0]), Cut([1]), Cut([0, 2])):
        assert negativity(ghz, cut) == 1
