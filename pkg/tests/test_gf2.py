import numpy as np
import pytest

from bplcosd.channel import PauliVector
from bplcosd.codes import five_qubit_code
from bplcosd.gf2 import (
    BitMatrix,
    ge_reduce,
    nullspace_basis,
    pack_bits,
    rank,
    symplectic_syndrome,
    unpack_bits,
)

HAMMING_H = [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
]


def random_bitmatrix(rng, rows, cols):
    return BitMatrix.from_dense(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))


def test_pack_unpack_roundtrip():
    rng = np.random.default_rng(1)
    for n in (1, 17, 64, 65, 130):
        bits = rng.integers(0, 2, size=n, dtype=np.uint8)
        assert np.array_equal(unpack_bits(pack_bits(bits), n), bits)


def test_get_set_dense_roundtrip():
    rng = np.random.default_rng(2)
    dense = rng.integers(0, 2, size=(5, 70), dtype=np.uint8)
    m = BitMatrix.from_dense(dense)
    assert np.array_equal(m.to_dense(), dense)
    assert m.get(3, 66) == dense[3, 66]
    m.set(3, 66, 1 - dense[3, 66])
    assert m.get(3, 66) == 1 - dense[3, 66]
    with pytest.raises(IndexError):
        m.get(0, 70)


def test_ge_identity_any_preference():
    m = BitMatrix.identity(4)
    for pref in ([0, 1, 2, 3], [2, 0, 3, 1]):
        res = ge_reduce(m, pref)
        assert res.rank == 4
        assert list(res.pivot_cols) == pref
        assert res.reduced.to_dense().sum() == 4


def test_ge_hamming_rank():
    assert rank(BitMatrix.from_dense(HAMMING_H)) == 3


def test_ge_five_qubit_extended_rank():
    code = five_qubit_code()
    hp = BitMatrix.hstack(code.H, BitMatrix.identity(4))
    assert rank(hp) == 4


def test_ge_bad_preference_rejected():
    with pytest.raises(ValueError):
        ge_reduce(BitMatrix.identity(3), [0, 1, 1])


def test_ge_pivot_columns_are_unit():
    rng = np.random.default_rng(3)
    for _ in range(25):
        m = random_bitmatrix(rng, 6, 11)
        pref = rng.permutation(11).tolist()
        res = ge_reduce(m, pref)
        dense = res.reduced.to_dense()
        for row, col in enumerate(res.pivot_cols):
            column = dense[:, col]
            assert column[row] == 1 and column.sum() == 1


def test_ge_preserves_row_space():
    # reduced = T @ M for invertible T: check both row spaces coincide via
    # stacked-rank tests, and that rank is preference-invariant.
    rng = np.random.default_rng(4)
    for _ in range(25):
        m = random_bitmatrix(rng, 5, 9)
        pref1 = rng.permutation(9).tolist()
        pref2 = rng.permutation(9).tolist()
        r1 = ge_reduce(m, pref1)
        r2 = ge_reduce(m, pref2)
        assert r1.rank == r2.rank == rank(m)
        stacked = BitMatrix.from_dense(
            np.concatenate([m.to_dense(), r1.reduced.to_dense()], axis=0)
        )
        assert rank(stacked) == r1.rank


def test_nullspace_identity_empty():
    assert nullspace_basis(BitMatrix.identity(6)) == []


def test_nullspace_sizes_and_membership():
    code = five_qubit_code()
    hp = BitMatrix.hstack(code.H, BitMatrix.identity(4))
    basis = nullspace_basis(hp)
    assert len(basis) == 10  # 14 - 4
    for v in basis:
        assert not hp.mul_vec(v).any()

    hm = BitMatrix.from_dense(HAMMING_H)
    basis = nullspace_basis(hm)
    assert len(basis) == 4
    for v in basis:
        assert not hm.mul_vec(v).any()


def test_nullspace_random_membership():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = random_bitmatrix(rng, 4, 10)
        basis = nullspace_basis(m)
        assert len(basis) == 10 - rank(m)
        for v in basis:
            assert not m.mul_vec(v).any()


def test_symplectic_syndrome_examples():
    code = five_qubit_code()
    assert np.array_equal(
        symplectic_syndrome(code.H, PauliVector.from_string("IYIII")), [1, 1, 0, 1]
    )
    assert np.array_equal(
        symplectic_syndrome(code.H, PauliVector.identity(5)), [0, 0, 0, 0]
    )
    # X on qubit 1: only row 4 of H carries Z there
    assert np.array_equal(
        symplectic_syndrome(code.H, PauliVector.from_string("XIIII")), [0, 0, 0, 1]
    )


def test_symplectic_syndrome_ignores_extra_columns():
    code = five_qubit_code()
    hp = BitMatrix.hstack(code.H, BitMatrix.identity(4))
    e = PauliVector.from_string("IYIII")
    assert np.array_equal(symplectic_syndrome(hp, e), symplectic_syndrome(code.H, e))


def test_symplectic_syndrome_dimension_mismatch():
    code = five_qubit_code()
    with pytest.raises(ValueError):
        symplectic_syndrome(code.H, PauliVector.identity(6))


def test_symplectic_syndrome_linearity():
    code = five_qubit_code()
    rng = np.random.default_rng(6)
    for _ in range(50):
        e1 = PauliVector.from_codes(rng.integers(0, 4, size=5))
        e2 = PauliVector.from_codes(rng.integers(0, 4, size=5))
        lhs = symplectic_syndrome(code.H, e1 * e2)
        rhs = symplectic_syndrome(code.H, e1) ^ symplectic_syndrome(code.H, e2)
        assert np.array_equal(lhs, rhs)
