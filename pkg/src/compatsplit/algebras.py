"""Finite-dimensional unital associative algebras by structure constants."""

from __future__ import annotations

from .linalg import Matrix, PrimeField, rank, solve


class Algebra:
    """Algebra over F_p with basis e_0..e_{d-1}, e_i e_j = sum_k c[i][j][k] e_k."""

    def __init__(self, field: PrimeField, dim: int, structure, unit, label: str = ""):
        if dim < 1:
            raise ValueError("algebra must have dim >= 1 (needs a unit)")
        p = field.p
        self.field = field
        self.dim = dim
        self.structure = tuple(
            tuple(tuple(x % p for x in row) for row in plane) for plane in structure
        )
        if len(self.structure) != dim or any(
            len(pl) != dim or any(len(r) != dim for r in pl) for pl in self.structure
        ):
            raise ValueError("structure constants must be dim x dim x dim")
        self.unit = [x % p for x in unit]
        if len(self.unit) != dim:
            raise ValueError("unit vector has wrong length")
        self.label = label
        self._left_cache: dict[int, Matrix] = {}

    def key(self):
        return (self.field.p, self.dim, self.structure, tuple(self.unit))

    def multiply(self, u, v):
        p = self.field.p
        out = [0] * self.dim
        for i, ui in enumerate(u):
            if ui:
                plane = self.structure[i]
                for j, vj in enumerate(v):
                    if vj:
                        f = ui * vj
                        row = plane[j]
                        for k in range(self.dim):
                            if row[k]:
                                out[k] = (out[k] + f * row[k]) % p
        return out

    def left_mult_basis(self, i: int) -> Matrix:
        """Matrix of x |-> e_i x."""
        m = self._left_cache.get(i)
        if m is None:
            d = self.dim
            data = [0] * (d * d)
            plane = self.structure[i]
            for j in range(d):
                for k in range(d):
                    data[k * d + j] = plane[j][k]
            m = Matrix(self.field, d, d, data)
            self._left_cache[i] = m
        return m

    def left_mult(self, v) -> Matrix:
        d = self.dim
        acc = Matrix.zero(self.field, d, d)
        for i, vi in enumerate(v):
            if vi:
                acc = acc + self.left_mult_basis(i).scale(vi)
        return acc

    def right_mult(self, v) -> Matrix:
        """Matrix of x |-> x v."""
        d = self.dim
        data = [0] * (d * d)
        for i in range(d):
            plane = self.structure[i]
            for j, vj in enumerate(v):
                if vj:
                    for k in range(d):
                        data[k * d + i] = (data[k * d + i] + vj * plane[j][k]) % self.field.p
        return Matrix(self.field, d, d, data)

    def basis_vector(self, i: int):
        v = [0] * self.dim
        v[i] = 1
        return v

    def validate(self):
        """Check associativity and the unit law; returns a list of violations.

        Each violation is ("assoc", i, j, k) or ("unit", side, i).
        """
        out = []
        d = self.dim
        for i in range(d):
            ei = self.basis_vector(i)
            for j in range(d):
                ij = self.multiply(ei, self.basis_vector(j))
                for k in range(d):
                    ek = self.basis_vector(k)
                    lhs = self.multiply(ij, ek)
                    rhs = self.multiply(ei, self.multiply(self.basis_vector(j), ek))
                    if lhs != rhs:
                        out.append(("assoc", i, j, k))
        for i in range(d):
            ei = self.basis_vector(i)
            if self.multiply(self.unit, ei) != ei:
                out.append(("unit", "left", i))
            if self.multiply(ei, self.unit) != ei:
                out.append(("unit", "right", i))
        return out

    def __repr__(self):
        return f"Algebra({self.label or f'dim {self.dim}'} over {self.field})"


def make_truncated_poly(p: int, n: int) -> Algebra:
    """k[x]/x^n over F_p, basis 1, x, ..., x^{n-1}."""
    if n < 1:
        raise ValueError("need n >= 1")
    field = PrimeField(p)
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c[i][j][i + j] = 1
    unit = [1] + [0] * (n - 1)
    return Algebra(field, n, c, unit, label=f"F_{p}[x]/x^{n}")


def make_cyclic_group_algebra(p: int, n: int) -> Algebra:
    """Group algebra F_p[C_n], basis t^0..t^{n-1}."""
    if n < 1:
        raise ValueError("need n >= 1")
    field = PrimeField(p)
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c[i][j][(i + j) % n] = 1
    unit = [1] + [0] * (n - 1)
    return Algebra(field, n, c, unit, label=f"F_{p}[C_{n}]")


# Triangular basis layout: index b*d + i encodes matrix unit block b tensor
# e_i, block order (E11, E21, E22).  The arrow machinery depends on this
# exact ordering; do not reshuffle.
def triangular(a: Algebra) -> Algebra:
    """Lower-triangular 2x2 matrix algebra over a; dim 3d.

    Nonzero block products (matrix-unit composition):
    E11*E11=E11, E21*E11=E21, E22*E21=E21, E22*E22=E22.
    """
    d = a.dim
    dim = 3 * d
    c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    prods = {(0, 0): 0, (1, 0): 1, (2, 1): 1, (2, 2): 2}
    for (bi, bj), bk in prods.items():
        for i in range(d):
            for j in range(d):
                row = a.structure[i][j]
                for k in range(d):
                    if row[k]:
                        c[bi * d + i][bj * d + j][bk * d + k] = row[k]
    unit = [0] * dim
    for k in range(d):
        unit[0 * d + k] = a.unit[k]          # E11 (x) 1
        unit[2 * d + k] = a.unit[k]          # E22 (x) 1
    return Algebra(a.field, dim, c, unit, label=f"tri({a.label or a.dim})")


class AlgebraEmbedding:
    """A unital injective algebra map sub -> big with a freeness witness.

    inclusion: big.dim x sub.dim matrix of the map on basis vectors.
    free_basis: big.dim x J matrix whose columns make big a free sub-module;
    both the left expansion (sub (x) basis -> big) and the right one are
    required to be bijective, which is what makes induction along the
    embedding exact and projective-preserving.
    """

    def __init__(self, sub: Algebra, big: Algebra, inclusion: Matrix, free_basis: Matrix,
                 check: bool = True):
        self.sub = sub
        self.big = big
        self.inclusion = inclusion
        self.free_basis = free_basis
        self._right_phi = None
        self._right_phi_inv = None
        if check:
            problem = self.violation()
            if problem:
                raise ValueError(f"invalid algebra embedding: {problem}")

    def include(self, v):
        return (self.inclusion @ Matrix(self.sub.field, self.sub.dim, 1, list(v))).col(0)

    @property
    def rank(self) -> int:
        return self.free_basis.cols

    def violation(self):
        sub, big = self.sub, self.big
        if sub.field != big.field:
            return "field mismatch"
        if self.inclusion.rows != big.dim or self.inclusion.cols != sub.dim:
            return "inclusion matrix has wrong shape"
        if self.free_basis.rows != big.dim:
            return "free_basis lives in the wrong space"
        if self.include(sub.unit) != big.unit:
            return "inclusion does not preserve the unit"
        for i in range(sub.dim):
            for j in range(sub.dim):
                lhs = self.include(sub.multiply(sub.basis_vector(i), sub.basis_vector(j)))
                rhs = big.multiply(self.include(sub.basis_vector(i)), self.include(sub.basis_vector(j)))
                if lhs != rhs:
                    return f"inclusion not multiplicative at basis pair ({i}, {j})"
        if rank(self.inclusion) != sub.dim:
            return "inclusion is not injective"
        if sub.dim * self.free_basis.cols != big.dim:
            return "free_basis has the wrong rank for a freeness witness"
        if rank(self._expansion(left=True)) != big.dim:
            return "left freeness witness fails (sub (x) basis -> big not bijective)"
        if rank(self._expansion(left=False)) != big.dim:
            return "right freeness witness fails (basis (x) sub -> big not bijective)"
        return None

    def _expansion(self, left: bool) -> Matrix:
        # column (j, s) is iota(e_s) * c_j (left) or c_j * iota(e_s) (right)
        sub, big = self.sub, self.big
        cols = []
        for j in range(self.free_basis.cols):
            cj = self.free_basis.col(j)
            for s in range(sub.dim):
                im = self.include(sub.basis_vector(s))
                cols.append(big.multiply(im, cj) if left else big.multiply(cj, im))
        return Matrix.from_cols(big.field, cols)

    def right_coords(self, x) -> list:
        """Coefficients beta[j][s] with x = sum_j c_j * iota(sum_s beta[j][s] e_s)."""
        if self._right_phi is None:
            self._right_phi = self._expansion(left=False)
            self._right_phi_inv = solve(self._right_phi, Matrix.identity(self.big.field, self.big.dim))
            assert self._right_phi_inv is not None
        v = self._right_phi_inv @ Matrix(self.big.field, self.big.dim, 1, list(x))
        ds = self.sub.dim
        return [v.col(0)[j * ds:(j + 1) * ds] for j in range(self.free_basis.cols)]


def cyclic_subgroup_embedding(p: int, n: int, m: int) -> AlgebraEmbedding:
    """F_p[C_m] -> F_p[C_n] via t_m |-> t_n^{n/m}; requires m | n."""
    if m < 1 or n < 1 or n % m != 0:
        raise ValueError(f"subgroup order {m} must divide {n}")
    sub = make_cyclic_group_algebra(p, m)
    big = make_cyclic_group_algebra(p, n)
    step = n // m
    inc_cols = []
    for i in range(m):
        v = [0] * n
        v[(i * step) % n] = 1
        inc_cols.append(v)
    basis_cols = []
    for j in range(step):
        v = [0] * n
        v[j] = 1
        basis_cols.append(v)
    return AlgebraEmbedding(
        sub, big,
        Matrix.from_cols(big.field, inc_cols),
        Matrix.from_cols(big.field, basis_cols),
    )


def prime_field_embedding(big: Algebra) -> AlgebraEmbedding:
    """The ground field inside big; any basis of big is a freeness witness."""
    p = big.field.p
    sub = Algebra(big.field, 1, [[[1]]], [1], label=f"F_{p}")
    inclusion = Matrix.from_cols(big.field, [list(big.unit)])
    return AlgebraEmbedding(sub, big, inclusion, Matrix.identity(big.field, big.dim))
