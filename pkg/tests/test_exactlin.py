import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dgforge.exactlin import (
    GF2,
    QQ,
    FieldMismatchError,
    Matrix,
    PrimeField,
    complement_basis,
)

F3 = PrimeField(3)
F5 = PrimeField(5)
FIELDS = [QQ, GF2, F3, F5]


def rand_matrix(field, nrows, ncols, rng, density=0.5):
    entries = {}
    for i in range(nrows):
        for j in range(ncols):
            if rng.random() < density:
                if field is QQ:
                    entries[(i, j)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                else:
                    entries[(i, j)] = rng.randrange(field.p)
    return Matrix(field, nrows, ncols, entries)


def naive_rank(m):
    # plain dense elimination written independently of the library internals
    f = m.field
    rows = m.to_rows()
    rank = 0
    for col in range(m.ncols):
        pivot = None
        for r in range(rank, m.nrows):
            if rows[r][col] != f.zero:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = f.inv(rows[rank][col])
        rows[rank] = [f.mul(inv, v) for v in rows[rank]]
        for r in range(m.nrows):
            if r != rank and rows[r][col] != f.zero:
                c = f.neg(rows[r][col])
                rows[r] = [f.add(a, f.mul(c, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class TestFields:
    def test_prime_field_rejects_composite(self):
        with pytest.raises(ValueError):
            PrimeField(6)

    def test_prime_field_rejects_huge(self):
        with pytest.raises(ValueError):
            PrimeField(2**31 + 11)

    def test_residues_normalized(self):
        assert F3.coerce(-1) == 2
        assert F3.coerce(7) == 1

    def test_fraction_lowest_terms(self):
        v = QQ.coerce(Fraction(2, -4))
        assert v.numerator == -1 and v.denominator == 2

    def test_rational_coerce_int(self):
        assert QQ.coerce(3) == Fraction(3)

    def test_field_equality(self):
        assert PrimeField(5) == F5
        assert PrimeField(5) != F3
        assert QQ != F3


class TestMatrixBasics:
    def test_construction_drops_zeros(self):
        m = Matrix(F3, 2, 2, {(0, 0): 3, (0, 1): 1})
        assert m.entries == {(0, 1): 1}

    def test_out_of_range_entry(self):
        with pytest.raises(ValueError):
            Matrix(F3, 2, 2, {(2, 0): 1})

    def test_field_mismatch(self):
        a = Matrix(F3, 2, 2, {(0, 0): 1})
        b = Matrix(F5, 2, 2, {(0, 0): 1})
        with pytest.raises(FieldMismatchError):
            a + b
        with pytest.raises(FieldMismatchError):
            a @ b

    def test_matmul_identity(self):
        rng = random.Random(0)
        m = rand_matrix(F5, 3, 4, rng)
        assert Matrix.identity(F5, 3) @ m == m
        assert m @ Matrix.identity(F5, 4) == m

    def test_add_cancels(self):
        m = Matrix(F3, 1, 1, {(0, 0): 1})
        n = Matrix(F3, 1, 1, {(0, 0): 2})
        assert (m + n).is_zero()

    def test_stacking(self):
        a = Matrix.from_rows(F3, [[1, 2]])
        b = Matrix.from_rows(F3, [[0, 1]])
        assert a.vstack(b) == Matrix.from_rows(F3, [[1, 2], [0, 1]])
        assert a.hstack(b) == Matrix.from_rows(F3, [[1, 2, 0, 1]])


class TestRank:
    @pytest.mark.parametrize("field", FIELDS)
    def test_rank_matches_naive(self, field):
        rng = random.Random(17)
        for _ in range(40):
            m = rand_matrix(field, rng.randint(0, 6), rng.randint(0, 6), rng)
            assert m.rank() == naive_rank(m)

    @pytest.mark.parametrize("field", FIELDS)
    def test_rank_transpose(self, field):
        rng = random.Random(23)
        for _ in range(30):
            m = rand_matrix(field, rng.randint(0, 6), rng.randint(0, 6), rng)
            assert m.rank() == m.transpose().rank()

    def test_dense_path_agrees(self):
        rng = random.Random(5)
        for _ in range(20):
            m = rand_matrix(F5, 6, 6, rng, density=0.9)
            assert m.rank() == naive_rank(m)

    def test_zero_and_empty(self):
        assert Matrix.zeros(QQ, 0, 4).rank() == 0
        assert Matrix.zeros(QQ, 4, 0).rank() == 0
        assert Matrix.zeros(QQ, 3, 3).rank() == 0


class TestKernel:
    @pytest.mark.parametrize("field", FIELDS)
    def test_kernel_annihilated(self, field):
        rng = random.Random(31)
        for _ in range(25):
            m = rand_matrix(field, rng.randint(0, 5), rng.randint(0, 5), rng)
            k = m.kernel_basis()
            assert k.ncols == m.ncols - m.rank()
            assert (m @ k).is_zero()
            assert k.rank() == k.ncols

    def test_kernel_of_empty_rows(self):
        k = Matrix.zeros(F3, 0, 3).kernel_basis()
        assert k == Matrix.identity(F3, 3)

    def test_kernel_deterministic(self):
        m = Matrix.from_rows(F3, [[1, 2, 0], [0, 0, 1]])
        assert m.kernel_basis() == m.kernel_basis()
        assert m.kernel_basis() == Matrix.from_rows(F3, [[1], [1], [0]])


class TestSolve:
    @pytest.mark.parametrize("field", FIELDS)
    def test_solve_consistent(self, field):
        rng = random.Random(41)
        for _ in range(25):
            m = rand_matrix(field, rng.randint(1, 5), rng.randint(1, 5), rng)
            x = rand_matrix(field, m.ncols, 1, rng)
            b = m @ x
            sol = m.solve(b)
            assert sol is not None
            assert m @ sol == b

    def test_solve_inconsistent(self):
        m = Matrix.from_rows(QQ, [[1, 0], [1, 0]])
        b = Matrix.column(QQ, [1, 2])
        assert m.solve(b) is None

    def test_solve_multi_rhs(self):
        m = Matrix.from_rows(F3, [[1, 1], [0, 1]])
        b = Matrix.identity(F3, 2)
        x = m.solve(b)
        assert m @ x == b

    def test_solve_zero_cols(self):
        m = Matrix.zeros(F3, 2, 0)
        assert m.solve(Matrix.zeros(F3, 2, 1)) is not None
        assert m.solve(Matrix.column(F3, [1, 0])) is None


class TestComplement:
    @pytest.mark.parametrize("field", FIELDS)
    def test_complement_completes(self, field):
        rng = random.Random(53)
        for _ in range(25):
            n = rng.randint(1, 6)
            k = rng.randint(0, n)
            sub = rand_matrix(field, n, k, rng)
            if sub.rank() < k:
                continue
            comp = complement_basis(sub)
            assert comp.ncols == n - k
            assert sub.hstack(comp).rank() == n

    def test_complement_rejects_dependent(self):
        sub = Matrix.from_rows(QQ, [[1, 2], [2, 4]])
        with pytest.raises(ValueError):
            complement_basis(sub)

    def test_complement_canonical(self):
        # greedy scan keeps e_0 (independent of the span) and e_2
        sub = Matrix.column(F3, [1, 1, 0])
        comp = complement_basis(sub)
        assert comp == Matrix(F3, 3, 2, {(0, 0): 1, (2, 1): 1})
        assert complement_basis(sub) == comp


@st.composite
def small_matrix(draw):
    field = draw(st.sampled_from(FIELDS))
    nrows = draw(st.integers(0, 5))
    ncols = draw(st.integers(0, 5))
    entries = {}
    for i in range(nrows):
        for j in range(ncols):
            if draw(st.booleans()):
                if field is QQ:
                    entries[(i, j)] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
                else:
                    entries[(i, j)] = draw(st.integers(0, field.p - 1))
    return Matrix(field, nrows, ncols, entries)


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rank_nullity(m):
    assert m.rank() + m.kernel_basis().ncols == m.ncols


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rref_idempotent(m):
    r = m.rref()
    assert r.rref() == r
    assert r.rank() == m.rank()


@settings(max_examples=40, deadline=None)
@given(small_matrix())
def test_image_basis_spans(m):
    im = m.image_basis()
    assert im.rank() == m.rank()
    # every original column solves against the image basis
    for j in range(m.ncols):
        col = Matrix(m.field, m.nrows, 1, {(i, 0): m[i, j] for i in range(m.nrows)})
        assert im.solve(col) is not None
