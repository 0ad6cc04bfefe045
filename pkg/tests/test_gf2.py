from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qformc.errors import DimensionError, SingularMatrixError
from qformc.gf2 import (
    BitMatrix,
    BitVector,
    d_vec,
    diag_vec,
    invert,
    lower_strict,
    mat_mul,
    rank_normal_decompose,
    solve_affine,
    solve_many,
)


def bm(rows):
    return BitMatrix.from_rows(rows)


def random_matrix(rng: random.Random, r: int, c: int) -> BitMatrix:
    return BitMatrix.from_rows([[rng.randint(0, 1) for _ in range(c)] for _ in range(r)], cols=c)


def naive_product(a: BitMatrix, b: BitMatrix) -> list[list[int]]:
    al, bl = a.tolist(), b.tolist()
    return [
        [sum(al[i][k] * bl[k][j] for k in range(a.cols)) % 2 for j in range(b.cols)]
        for i in range(a.rows)
    ]


def naive_rank(m: BitMatrix) -> int:
    arr = m.to_numpy().astype(np.uint8) % 2
    rank, rows, cols = 0, arr.shape[0], arr.shape[1]
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if arr[r, c]), None)
        if piv is None:
            continue
        arr[[rank, piv]] = arr[[piv, rank]]
        for r in range(rows):
            if r != rank and arr[r, c]:
                arr[r] ^= arr[rank]
        rank += 1
    return rank


matrices = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n)
)


class TestBitVector:
    def test_roundtrip_and_indexing(self):
        v = BitVector.from_list([1, 0, 1, 1])
        assert v.tolist() == [1, 0, 1, 1]
        assert v[0] == 1 and v[1] == 0
        assert len(v) == 4 and v.weight() == 3

    def test_addition_is_xor(self):
        a = BitVector.from_list([1, 1, 0])
        b = BitVector.from_list([0, 1, 1])
        assert (a + b).tolist() == [1, 0, 1]

    def test_dot(self):
        assert BitVector.from_list([1, 1, 0]).dot(BitVector.from_list([1, 1, 1])) == 0
        assert BitVector.from_list([1, 0, 0]).dot(BitVector.from_list([1, 1, 1])) == 1

    def test_rejects_non_bits(self):
        with pytest.raises(ValueError):
            BitVector.from_list([0, 2])


class TestMatMul:
    def test_identity(self):
        i2 = BitMatrix.identity(2)
        assert mat_mul(i2, i2) == i2

    def test_involution(self):
        m = bm([[1, 1], [0, 1]])
        assert mat_mul(m, m) == BitMatrix.identity(2)

    def test_random_against_triple_loop(self):
        rng = random.Random(7)
        for _ in range(50):
            a, b = random_matrix(rng, 4, 4), random_matrix(rng, 4, 4)
            assert mat_mul(a, b).tolist() == naive_product(a, b)

    def test_rectangular(self):
        rng = random.Random(8)
        a, b = random_matrix(rng, 3, 5), random_matrix(rng, 5, 2)
        assert mat_mul(a, b).tolist() == naive_product(a, b)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_mul(BitMatrix.zeros(2, 3), BitMatrix.zeros(2, 3))


class TestInvert:
    def test_identity(self):
        assert invert(BitMatrix.identity(3)) == BitMatrix.identity(3)

    def test_self_inverse(self):
        m = bm([[1, 1], [0, 1]])
        assert invert(m) == m

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            invert(bm([[1, 1], [1, 1]]))

    @settings(max_examples=200, deadline=None)
    @given(matrices)
    def test_inverse_property(self, rows):
        m = bm(rows)
        if naive_rank(m) < m.rows:
            with pytest.raises(SingularMatrixError):
                invert(m)
        else:
            assert mat_mul(m, invert(m)) == BitMatrix.identity(m.rows)


class TestRankNormal:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_zero(self, n):
        assert rank_normal_decompose(BitMatrix.zeros(n)) == (BitMatrix.identity(n), BitMatrix.identity(n), 0)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_identity(self, n):
        i = BitMatrix.identity(n)
        assert rank_normal_decompose(i) == (i, i, n)

    @staticmethod
    def expected_block(n: int, r: int) -> BitMatrix:
        return BitMatrix.from_rows([[int(i == j and i >= n - r) for j in range(n)] for i in range(n)], cols=n)

    def test_rank_one(self):
        g = bm([[1, 0], [0, 0]])
        r1t, r2t, r = rank_normal_decompose(g)
        assert r == 1
        assert invert(r1t) @ g @ r2t == self.expected_block(2, 1)

    def test_postcondition_500_random(self):
        rng = random.Random(11)
        for _ in range(500):
            n = rng.randint(1, 16)
            g = random_matrix(rng, n, n)
            if rng.random() < 0.5:  # push toward low rank
                g = g @ BitMatrix.diagonal(BitVector.from_list([rng.randint(0, 1) for _ in range(n)])) @ g.T
            r1t, r2t, r = rank_normal_decompose(g)
            assert r == naive_rank(g)
            assert invert(r1t) @ g @ r2t == self.expected_block(n, r)


class TestReadOffs:
    def test_diag_vec(self):
        assert diag_vec(BitMatrix.identity(2)).tolist() == [1, 1]
        assert diag_vec(BitMatrix.zeros(3)).tolist() == [0, 0, 0]
        assert diag_vec(bm([[0, 1], [1, 1]])).tolist() == [0, 1]

    def test_diag_vec_non_square(self):
        with pytest.raises(DimensionError):
            diag_vec(BitMatrix.zeros(2, 3))

    def test_d_vec_examples(self):
        assert d_vec(BitMatrix.identity(4)).tolist() == [0, 0, 0, 0]
        assert d_vec(BitMatrix.zeros(4)).tolist() == [0, 0, 0, 0]

    def test_d_vec_odd(self):
        with pytest.raises(DimensionError):
            d_vec(BitMatrix.zeros(3))

    def test_d_vec_triple_product(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(1, 4)
            m = random_matrix(rng, 2 * n, 2 * n)
            j = np.zeros((2 * n, 2 * n), dtype=int)
            j[:n, n:] = np.eye(n, dtype=int)
            a = m.to_numpy().astype(int)
            expected = np.diag(a.T @ j @ a) % 2
            assert d_vec(m).tolist() == expected.tolist()

    def test_lower_strict(self):
        assert lower_strict(BitMatrix.identity(3)) == BitMatrix.zeros(3)
        assert lower_strict(bm([[1, 1], [1, 1]])).tolist() == [[0, 0], [1, 0]]
        assert lower_strict(bm([[1] * 3] * 3)).tolist() == [[0, 0, 0], [1, 0, 0], [1, 1, 0]]

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_lower_strict_reconstructs_symmetric(self, rows):
        m = bm(rows)
        sym = m + m.T + BitMatrix.diagonal(diag_vec(m))
        low = lower_strict(sym)
        assert low + low.T + BitMatrix.diagonal(diag_vec(sym)) == sym


class TestSolve:
    def test_identity(self):
        x = solve_affine(BitMatrix.identity(2), BitVector.from_list([1, 0]))
        assert x.tolist() == [1, 0]

    def test_inconsistent(self):
        assert solve_affine(BitMatrix.zeros(1), BitVector.from_list([1])) is None

    def test_random_consistent(self):
        rng = random.Random(5)
        for _ in range(200):
            r, c = rng.randint(1, 8), rng.randint(1, 8)
            a = random_matrix(rng, r, c)
            x0 = BitVector.from_list([rng.randint(0, 1) for _ in range(c)])
            b = a @ x0
            x = solve_affine(a, b)
            assert x is not None and a @ x == b

    def test_many_matches_single(self):
        rng = random.Random(6)
        a = random_matrix(rng, 5, 4)
        bs = [BitVector.from_list([rng.randint(0, 1) for _ in range(5)]) for _ in range(10)]
        for b, x in zip(bs, solve_many(a, bs)):
            single = solve_affine(a, b)
            assert (x is None) == (single is None)
            if x is not None:
                assert a @ x == b

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            solve_affine(BitMatrix.zeros(2), BitVector.zeros(3))
