import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compatsplit.linalg import (
    Matrix,
    PrimeField,
    Subspace,
    image_basis,
    kernel_basis,
    operator_of_hom_action,
    quotient,
    rank,
    rref,
    solve,
)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def mat(field, rows):
    return Matrix.from_rows(field, rows)


class TestPrimeField:
    def test_accepts_primes(self):
        for p in (2, 3, 5, 7919, 2**31 - 1):
            assert PrimeField(p).p == p

    def test_rejects_nonprimes(self):
        for bad in (0, 1, 4, 6, 9, 561, 2**31, -3):
            with pytest.raises(ValueError):
                PrimeField(bad)


class TestRref:
    def test_identity_fixed(self):
        m = Matrix.identity(F2, 3)
        r, rk, piv = rref(m)
        assert r == m and rk == 3 and piv == [0, 1, 2]

    def test_zero_fixed(self):
        m = Matrix.zero(F3, 2, 3)
        r, rk, piv = rref(m)
        assert r == m and rk == 0 and piv == []

    def test_ones_2x2_f2(self):
        r, rk, _ = rref(mat(F2, [[1, 1], [1, 1]]))
        assert r == mat(F2, [[1, 1], [0, 0]]) and rk == 1

    def test_empty_shapes(self):
        for m in (Matrix.zero(F2, 0, 4), Matrix.zero(F2, 4, 0), Matrix.zero(F2, 0, 0)):
            r, rk, piv = rref(m)
            assert rk == 0 and piv == [] and r.rows == m.rows and r.cols == m.cols


class TestSolve:
    def test_identity(self):
        b = mat(F5, [[3], [1], [4]])
        assert solve(Matrix.identity(F5, 3), b) == b

    def test_inconsistent(self):
        assert solve(mat(F2, [[0]]), mat(F2, [[1]])) is None

    def test_free_variable_zero(self):
        x = solve(mat(F2, [[1, 1]]), mat(F2, [[1]]))
        assert x == mat(F2, [[1], [0]])

    def test_multiple_rhs(self):
        a = mat(F3, [[1, 2], [0, 1]])
        b = mat(F3, [[1, 0], [2, 2]])
        x = solve(a, b)
        assert a @ x == b

    def test_zero_dims(self):
        # 0-dimensional edge cases are first-class
        a = Matrix.zero(F2, 0, 3)
        b = Matrix.zero(F2, 0, 2)
        x = solve(a, b)
        assert x == Matrix.zero(F2, 3, 2)
        assert solve(Matrix.zero(F2, 3, 0), Matrix.zero(F2, 3, 1)) == Matrix.zero(F2, 0, 1)


class TestKernelImage:
    def test_kernel_identity(self):
        assert kernel_basis(Matrix.identity(F2, 3)).dim == 0

    def test_kernel_zero(self):
        k = kernel_basis(Matrix.zero(F3, 4, 4))
        assert k.dim == 4 and k.basis == Matrix.identity(F3, 4)

    def test_kernel_11_f2(self):
        k = kernel_basis(mat(F2, [[1, 1]]))
        assert k.dim == 1 and k.basis.col(0) == [1, 1]

    def test_image_identity(self):
        assert image_basis(Matrix.identity(F5, 2)).dim == 2

    def test_image_zero(self):
        assert image_basis(Matrix.zero(F2, 3, 2)).dim == 0

    def test_image_column(self):
        s = image_basis(mat(F2, [[1], [1]]))
        assert s.dim == 1 and s.basis.col(0) == [1, 1]


class TestQuotient:
    def test_by_line(self):
        s = Subspace(2, mat(F2, [[1], [0]]))
        q = quotient(2, s)
        assert q.dim == 1
        assert q.rep_basis.col(0) == [0, 1]

    def test_by_zero(self):
        q = quotient(3, Subspace(3, Matrix.zero(F2, 3, 0)))
        assert q.dim == 3
        assert q.project == Matrix.identity(F2, 3)
        assert q.rep_basis == Matrix.identity(F2, 3)

    def test_by_everything(self):
        q = quotient(2, Subspace(2, Matrix.identity(F3, 2)))
        assert q.dim == 0

    def test_invariants_nontrivial(self):
        s = Subspace.from_span(mat(F5, [[1, 2], [3, 4], [0, 1]]))
        q = quotient(3, s)
        assert q.project @ q.rep_basis == Matrix.identity(F5, q.dim)
        assert (q.project @ s.basis).is_zero()


class TestOperator:
    def test_identity_commutant(self):
        i2 = Matrix.identity(F3, 2)
        assert operator_of_hom_action(i2, i2).is_zero()

    def test_scalar_1x1(self):
        op = operator_of_hom_action(mat(F5, [[3]]), mat(F5, [[1]]))
        assert op == mat(F5, [[2]])

    def test_zero_left_f2(self):
        op = operator_of_hom_action(Matrix.zero(F2, 1, 1), Matrix.identity(F2, 1))
        assert op == Matrix.identity(F2, 1)  # -1 = 1 over F_2

    def test_matches_direct_action(self):
        left = mat(F3, [[1, 2], [0, 1]])
        right = mat(F3, [[2, 0, 1], [1, 1, 0], [0, 2, 2]])
        op = operator_of_hom_action(left, right, shape=(2, 3))
        phi = mat(F3, [[1, 0, 2], [2, 1, 1]])
        want = left @ phi - phi @ right
        flat = Matrix(F3, 6, 1, phi.data)
        assert (op @ flat).data == want.data


class TestSubspace:
    def test_equality_canonical(self):
        a = Subspace.from_span(mat(F2, [[1, 0], [1, 1], [0, 1]]))
        b = Subspace.from_span(mat(F2, [[0, 1], [1, 0], [1, 1]]))
        assert a == b

    def test_sum_and_intersection(self):
        u = Subspace.from_span(mat(F2, [[1], [0], [0]]))
        w = Subspace.from_span(mat(F2, [[1], [1], [0]]))
        assert u.sum(w).dim == 2
        assert u.intersection(w).dim == 0
        assert u.sum(w).intersection(u) == u


small = st.integers(min_value=0, max_value=6)


@st.composite
def matrices(draw, p):
    r, c = draw(small), draw(small)
    field = PrimeField(p)
    data = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return Matrix(field, r, c, data)


@settings(max_examples=60, deadline=None)
@given(m=st.one_of(matrices(2), matrices(3)))
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.cols


@settings(max_examples=60, deadline=None)
@given(m=st.one_of(matrices(2), matrices(3)), seedcol=st.lists(st.integers(0, 2), min_size=6, max_size=6))
def test_solve_exact_or_truly_inconsistent(m, seedcol):
    b = m @ Matrix(m.field, m.cols, 1, [seedcol[i % 6] for i in range(m.cols)])
    x = solve(m, b)
    assert x is not None and m @ x == b


def test_no_solution_is_real():
    # brute force confirms NoSolution over F_2 (<= 12 unknowns)
    a = mat(F2, [[1, 0, 1], [1, 0, 1]])
    b = mat(F2, [[1], [0]])
    assert solve(a, b) is None
    for bits in itertools.product([0, 1], repeat=3):
        x = Matrix(F2, 3, 1, list(bits))
        assert a @ x != b


@settings(max_examples=40, deadline=None)
@given(m=matrices(3))
def test_rref_idempotent_and_pivot_shape(m):
    r, rk, piv = rref(m)
    r2, rk2, piv2 = rref(r)
    assert r == r2 and rk == rk2 and piv == piv2
    for i, c in enumerate(piv):
        assert r[i, c] == 1
        assert all(r[j, c] == 0 for j in range(m.rows) if j != i)


@settings(max_examples=40, deadline=None)
@given(m=matrices(2))
def test_quotient_invariants(m):
    s = image_basis(m)
    q = quotient(m.rows, s)
    assert q.dim == m.rows - s.dim
    assert q.project @ q.rep_basis == Matrix.identity(m.field, q.dim)
    if s.dim:
        assert (q.project @ s.basis).is_zero()
