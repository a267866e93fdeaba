import random

import pytest

from compatsplit.algebras import (
    Algebra,
    AlgebraEmbedding,
    cyclic_subgroup_embedding,
    make_cyclic_group_algebra,
    make_truncated_poly,
    triangular,
)
from compatsplit.linalg import Matrix, PrimeField


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_presets_validate(p, n):
    assert make_truncated_poly(p, n).validate() == []
    assert make_cyclic_group_algebra(p, n).validate() == []


def test_broken_structure_constants_reported():
    a = make_truncated_poly(2, 3)
    c = [[list(r) for r in pl] for pl in a.structure]
    c[1][2][0] = 1  # x * x^2 = 1 while x^2 * x = 0
    bad = Algebra(a.field, 3, c, a.unit)
    viols = bad.validate()
    assert ("assoc", 1, 1, 1) in viols


def test_broken_unit_reported():
    a = make_truncated_poly(2, 2)
    c = [[list(r) for r in pl] for pl in a.structure]
    c[0][1][1] = 0  # 1 * x = 0
    bad = Algebra(a.field, 2, c, a.unit)
    assert ("unit", "left", 1) in bad.validate()


def test_c2_is_truncated_poly_in_disguise():
    # u = t - 1 identifies F_2[C_2] with F_2[u]/u^2
    grp = make_cyclic_group_algebra(2, 2)
    poly = make_truncated_poly(2, 2)
    phi = [[1, 1], [0, 1]]  # columns: 1 |-> 1, u |-> 1 + t

    def apply(v):
        return [(phi[0][0] * v[0] + phi[0][1] * v[1]) % 2,
                (phi[1][0] * v[0] + phi[1][1] * v[1]) % 2]

    for i in range(2):
        for j in range(2):
            lhs = apply(poly.multiply(poly.basis_vector(i), poly.basis_vector(j)))
            rhs = grp.multiply(apply(poly.basis_vector(i)), apply(poly.basis_vector(j)))
            assert lhs == rhs
    assert apply(poly.unit) == grp.unit


def test_triangular_shape_and_idempotents():
    a = make_truncated_poly(2, 2)
    t = triangular(a)
    assert t.dim == 6
    assert t.validate() == []
    assert t.unit == [1, 0, 0, 0, 1, 0]
    e11 = t.basis_vector(0)
    e22 = t.basis_vector(4)
    assert t.multiply(e11, e11) == e11
    assert t.multiply(e22, e22) == e22
    assert t.multiply(e11, e22) == [0] * 6
    assert t.multiply(e22, e11) == [0] * 6
    # E21 (x) 1 composes as expected: E22*E21 = E21 = E21*E11
    e21 = t.basis_vector(2)
    assert t.multiply(e22, e21) == e21
    assert t.multiply(e21, e11) == e21
    assert t.multiply(e21, e21) == [0] * 6


@pytest.mark.parametrize("p", [2, 3, 5])
def test_triangular_validates(p):
    for base in (make_truncated_poly(p, 2), make_cyclic_group_algebra(p, 3)):
        assert triangular(base).validate() == []


def test_mult_matrices_match_multiply():
    rng = random.Random(7)
    for a in (make_truncated_poly(3, 3), make_cyclic_group_algebra(2, 4), triangular(make_truncated_poly(2, 2))):
        p = a.field.p
        for _ in range(10):
            u = [rng.randrange(p) for _ in range(a.dim)]
            v = [rng.randrange(p) for _ in range(a.dim)]
            uv = a.multiply(u, v)
            assert (a.left_mult(u) @ Matrix(a.field, a.dim, 1, v)).col(0) == uv
            assert (a.right_mult(v) @ Matrix(a.field, a.dim, 1, u)).col(0) == uv


def test_cyclic_subgroup_embedding_validates():
    emb = cyclic_subgroup_embedding(2, 4, 2)
    assert emb.rank == 2
    assert emb.violation() is None
    # iota(t_2) = t_4^2
    assert emb.include([0, 1]) == [0, 0, 1, 0]


def test_right_coords_roundtrip():
    rng = random.Random(11)
    emb = cyclic_subgroup_embedding(3, 6, 3)
    big = emb.big
    for _ in range(8):
        x = [rng.randrange(3) for _ in range(big.dim)]
        beta = emb.right_coords(x)
        acc = [0] * big.dim
        for j, bj in enumerate(beta):
            term = big.multiply(emb.free_basis.col(j), emb.include(bj))
            acc = [(s + t) % 3 for s, t in zip(acc, term)]
        assert acc == x


def test_non_divisor_subgroup_rejected():
    with pytest.raises(ValueError):
        cyclic_subgroup_embedding(2, 4, 3)


def test_non_injective_map_rejected():
    sub = make_truncated_poly(2, 2)
    big = make_truncated_poly(2, 1)
    f = big.field
    with pytest.raises(ValueError, match="injective"):
        AlgebraEmbedding(sub, big, Matrix(f, 1, 2, [1, 0]), Matrix(f, 1, 1, [1]))


def test_non_free_extension_rejected():
    # witness columns are linearly dependent, so the expansion can't be onto
    sub = make_truncated_poly(2, 1)
    big = make_cyclic_group_algebra(2, 2)
    f = big.field
    with pytest.raises(ValueError, match="freeness"):
        AlgebraEmbedding(sub, big, Matrix(f, 2, 1, [1, 0]),
                         Matrix.from_cols(f, [[1, 1], [1, 1]]))
