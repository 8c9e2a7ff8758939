"""Field arithmetic and exact linear algebra tests.

Matrix inverses are checked against the multiplication oracle (product with
the original must be the identity); Vandermonde invertibility properties
are checked by enumerating submatrices and running Gaussian elimination on
each.
"""

import itertools
import random

import pytest

from qtss.gf import (
    FieldMatrix,
    FieldVector,
    PrimeField,
    SingularMatrixError,
    vandermonde,
)

F5 = PrimeField(5)
F7 = PrimeField(7)


class TestPrimeField:
    def test_modulus_must_be_prime(self):
        with pytest.raises(ValueError, match="not prime"):
            PrimeField(6)
        with pytest.raises(ValueError, match="not prime"):
            PrimeField(1)

    def test_modulus_desk_scale(self):
        with pytest.raises(ValueError, match="desk-scale"):
            PrimeField(65537)

    def test_add_mul_sub(self):
        assert F5.add(3, 4) == 2  # 7 mod 5
        assert F5.mul(2, 4) == 3  # 8 mod 5
        assert F5.sub(0, 1) == 4  # additive inverse
        assert F5.neg(2) == 3

    def test_inverse(self):
        assert F5.inv(2) == 3  # 2*3 = 6 = 1 mod 5
        assert F7.inv(1) == 1
        with pytest.raises(ZeroDivisionError):
            F5.inv(0)

    def test_inverse_involution(self):
        for q in (2, 3, 5, 7, 11, 13):
            f = PrimeField(q)
            for a in range(1, q):
                assert f.inv(f.inv(a)) == a
                assert f.mul(a, f.inv(a)) == 1

    def test_ring_axioms_exhaustive_small(self):
        for q in (2, 3, 5):
            f = PrimeField(q)
            for a in range(q):
                for b in range(q):
                    assert f.add(a, b) == (a + b) % q
                    assert f.mul(a, b) == (a * b) % q
                    assert f.add(f.sub(a, b), b) == a
                    assert f.add(a, f.neg(a)) == 0

    def test_equality_hash(self):
        assert PrimeField(5) == F5
        assert PrimeField(7) != F5
        assert hash(PrimeField(5)) == hash(F5)


class TestFieldVector:
    def test_entries_reduced(self):
        v = FieldVector(F5, (7, -1, 3))
        assert v.entries == (2, 4, 3)

    def test_slice_and_concat(self):
        v = FieldVector(F5, (1, 2, 3, 4))
        assert v[1] == 2
        assert v[1:3].entries == (2, 3)
        assert v[:2].concat(v[2:]).entries == v.entries

    def test_concat_field_mismatch(self):
        with pytest.raises(ValueError):
            FieldVector(F5, (1,)).concat(FieldVector(F7, (1,)))


class TestVandermonde:
    def test_golden_3x3(self):
        v = vandermonde(F5, (1, 2, 3), 3)
        assert v.row_tuples() == ((1, 1, 1), (1, 2, 4), (1, 3, 4))  # 3**2 = 9 = 4

    def test_degenerate_single_node(self):
        assert vandermonde(F5, (1,), 1).row_tuples() == ((1,),)

    def test_rejects_duplicate_and_zero_nodes(self):
        with pytest.raises(ValueError, match="distinct"):
            vandermonde(F5, (1, 2, 1), 2)
        with pytest.raises(ValueError, match="nonzero"):
            vandermonde(F5, (0, 1), 2)

    def test_all_4row_submatrices_invertible_q7(self):
        v = vandermonde(F7, (1, 2, 3, 4, 5, 6), 4)
        for rows in itertools.combinations(range(6), 4):
            sub = v.submatrix(rows, None)
            prod = sub @ sub.inverse()
            assert prod.row_tuples() == FieldMatrix.identity(F7, 4).row_tuples()

    def test_any_row_selection_invertible_random_nodes(self):
        rng = random.Random(20240817)
        for q in (5, 7, 11, 13):
            f = PrimeField(q)
            for _ in range(8):
                n = rng.randint(2, min(6, q - 1))
                nodes = rng.sample(range(1, q), n)
                for width in range(1, n + 1):
                    v = vandermonde(f, nodes, width)
                    for rows in itertools.combinations(range(n), width):
                        v.submatrix(rows, None).inverse()  # raises when singular

    def test_contiguous_column_blocks_invertible(self):
        # Exhaustive over node subsets: [x**(c+j)] = diag(x**c) * Vandermonde,
        # so any contiguous column block of a nonzero-node Vandermonde matrix
        # stays invertible.  Sizes bounded to keep the sweep quick.
        for q in (3, 5, 7, 11, 13):
            f = PrimeField(q)
            for t in range(1, min(q - 1, 5) + 1):
                for nodes in itertools.combinations(range(1, q), t):
                    for start in range(0, 7):
                        m = FieldMatrix.from_rows(
                            f, [[pow(x, start + j, q) for j in range(t)] for x in nodes]
                        )
                        prod = m @ m.inverse()
                        assert prod.row_tuples() == FieldMatrix.identity(f, t).row_tuples()


class TestSubmatrix:
    def test_identity_selection(self):
        v = vandermonde(F5, (1, 2, 3), 3)
        assert v.submatrix(None, None).row_tuples() == v.row_tuples()

    def test_row_selection(self):
        v = vandermonde(F5, (1, 2, 3), 3)
        assert v.submatrix([0, 2], None).row_tuples() == ((1, 1, 1), (1, 3, 4))

    def test_trailing_columns_block(self):
        # The k trailing columns of a k-participant row selection, as used
        # when peeling staircase columns; d=4, k=3 so the block starts at 1.
        v = vandermonde(F7, (1, 2, 3, 4, 5), 4)
        rows = (0, 2, 4)
        block = v.submatrix(rows, range(1, 4))
        expected = [[pow(x, j, 7) for j in (1, 2, 3)] for x in (1, 3, 5)]
        assert block.row_tuples() == tuple(tuple(r) for r in expected)
        block.inverse()  # invertible because nodes are distinct and nonzero

    def test_out_of_range_and_duplicates(self):
        v = vandermonde(F5, (1, 2, 3), 3)
        with pytest.raises(IndexError):
            v.submatrix([0, 3], None)
        with pytest.raises(ValueError, match="duplicate"):
            v.submatrix([0, 0], None)


class TestMatrixAlgebra:
    def test_identity_inverse(self):
        eye = FieldMatrix.identity(F5, 3)
        assert eye.inverse().row_tuples() == eye.row_tuples()

    def test_inverse_product_oracle(self):
        m = FieldMatrix.from_rows(F5, [[1, 1], [1, 2]])
        inv = m.inverse()
        assert (m @ inv).row_tuples() == FieldMatrix.identity(F5, 2).row_tuples()
        assert (inv @ m).row_tuples() == FieldMatrix.identity(F5, 2).row_tuples()

    def test_singular_raises(self):
        m = FieldMatrix.from_rows(F5, [[1, 1], [2, 2]])
        with pytest.raises(SingularMatrixError):
            m.inverse()

    def test_inverse_random_matrices(self):
        rng = random.Random(7)
        for q in (3, 5, 11):
            f = PrimeField(q)
            done = 0
            while done < 20:
                n = rng.randint(1, 5)
                m = FieldMatrix(f, n, n, tuple(rng.randrange(q) for _ in range(n * n)))
                try:
                    inv = m.inverse()
                except SingularMatrixError:
                    continue
                assert (m @ inv).row_tuples() == FieldMatrix.identity(f, n).row_tuples()
                assert (inv @ m).row_tuples() == FieldMatrix.identity(f, n).row_tuples()
                done += 1

    def test_mat_vec_identity_and_column_pick(self):
        eye = FieldMatrix.identity(F5, 3)
        v = FieldVector(F5, (2, 0, 4))
        assert (eye @ v).entries == (2, 0, 4)
        vm = vandermonde(F5, (1, 2, 3), 3)
        assert (vm @ FieldVector(F5, (1, 0, 0))).entries == (1, 1, 1)

    def test_codeword_product_matches_direct_expressions(self):
        # Independent oracle: evaluate the row expressions
        # (s1 + x*s2 + x^2*r1, x*r1 + x^2*r2) directly mod 5.
        s1, s2, r1, r2 = 1, 2, 3, 4
        msg = FieldMatrix.from_rows(F5, [[s1, 0], [s2, r1], [r1, r2]])
        v = vandermonde(F5, (1, 2, 3), 3)
        prod = v @ msg
        for i, x in enumerate((1, 2, 3)):
            expected = (
                (s1 + x * s2 + x * x * r1) % 5,
                (x * r1 + x * x * r2) % 5,
            )
            assert prod.row(i).entries == expected

    def test_dimension_mismatch(self):
        a = FieldMatrix.identity(F5, 2)
        b = FieldMatrix.identity(F5, 3)
        with pytest.raises(ValueError, match="multiply"):
            a @ b
        with pytest.raises(ValueError, match="multiply"):
            a @ FieldVector(F5, (1, 2, 3))

    def test_field_mismatch(self):
        with pytest.raises(ValueError, match="different fields"):
            FieldMatrix.identity(F5, 2) @ FieldMatrix.identity(F7, 2)

    def test_neg_transpose_hstack(self):
        m = FieldMatrix.from_rows(F5, [[1, 2], [3, 4]])
        assert (-m).row_tuples() == ((4, 3), (2, 1))
        assert m.transpose().row_tuples() == ((1, 3), (2, 4))
        st = m.hstack(FieldMatrix.identity(F5, 2))
        assert st.row_tuples() == ((1, 2, 1, 0), (3, 4, 0, 1))

    def test_non_square_inverse_rejected(self):
        with pytest.raises(ValueError, match="non-square"):
            FieldMatrix.zeros(F5, 2, 3).inverse()
