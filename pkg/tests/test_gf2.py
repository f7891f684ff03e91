"""Bit-packed GF(2) matrices: round trips, rank, symplectic products."""

import numpy as np
import pytest

from resetsim.gf2 import BitMatrix, rank, symplectic_product
from resetsim.pauli import PauliString


def dense_rank_mod2(a: np.ndarray) -> int:
    """Reference rank by plain dense elimination over GF(2)."""
    a = (np.array(a, dtype=np.int64) % 2).copy()
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        pivots = np.flatnonzero(a[r:, c])
        if pivots.size == 0:
            continue
        a[[r, r + pivots[0]]] = a[[r + pivots[0], r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def test_from_dense_round_trip():
    rng = np.random.default_rng(0)
    for rows, cols in [(1, 1), (3, 7), (5, 64), (4, 65), (10, 130)]:
        dense = rng.integers(0, 2, size=(rows, cols))
        m = BitMatrix.from_dense(dense)
        assert np.array_equal(m.to_dense(), dense)


def test_get_set_and_row_ops():
    m = BitMatrix(3, 70)
    m.set(0, 0, 1)
    m.set(1, 69, 1)
    assert m.get(0, 0) == 1 and m.get(1, 69) == 1 and m.get(2, 35) == 0
    m.xor_row_into(1, 0)
    assert m.get(0, 69) == 1
    m.swap_rows(0, 2)
    assert m.get(2, 0) == 1 and m.get(0, 0) == 0
    with pytest.raises(IndexError):
        m.get(0, 70)


def test_rank_matches_dense_reference():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rows = int(rng.integers(1, 12))
        cols = int(rng.integers(1, 100))
        dense = rng.integers(0, 2, size=(rows, cols))
        assert rank(BitMatrix.from_dense(dense)) == dense_rank_mod2(dense)


def test_rank_edge_cases():
    assert rank(BitMatrix.from_dense(np.zeros((4, 4), dtype=int))) == 0
    assert rank(BitMatrix.from_dense(np.eye(6, dtype=int))) == 6
    # rank is read-only: the input is untouched
    dense = np.eye(3, dtype=int)
    dense[2] = dense[0] ^ dense[1]
    m = BitMatrix.from_dense(dense)
    assert rank(m) == 2
    assert np.array_equal(m.to_dense(), dense)


def test_symplectic_product_pairs():
    cases = [
        ("+XX", "+ZZ", 0),   # anticommute twice -> commute
        ("+XI", "+ZI", 1),
        ("+XI", "+XI", 0),
        ("+YI", "+ZI", 1),
        ("+YI", "+YI", 0),
        ("+XY", "+YX", 0),
        ("+XY", "+YY", 1),
    ]
    for a, b, want in cases:
        pa, pb = PauliString.from_label(a), PauliString.from_label(b)
        assert symplectic_product(pa, pb) == want
        assert symplectic_product(pb, pa) == want
        assert pa.commutes_with(pb) == (want == 0)


def test_symplectic_product_length_mismatch():
    with pytest.raises(ValueError):
        symplectic_product(PauliString.from_label("+X"), PauliString.from_label("+XX"))
