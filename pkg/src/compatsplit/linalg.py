"""Exact dense linear algebra over prime fields.

Everything downstream reduces to the operations here: reduced row echelon
form, linear solves, kernel/image bases, quotient presentations, and the
flattened-commutator operator.  All arithmetic is integer mod p; there is no
floating point anywhere.

Determinism contract: rref uses leftmost-pivot / first-nonzero-row
tie-breaking, kernel bases are ordered by free column index, image bases by
pivot column index, and quotient representatives are non-pivot standard
basis vectors.  Every basis produced here is therefore reproducible.
"""

from __future__ import annotations

from . import kernels

_MR_BASES = (2, 3, 5, 7)  # deterministic for n < 3_215_031_751


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p; validates primality at construction."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not (2 <= p <= 2**31 - 1):
            raise ValueError(f"field modulus must be an integer in [2, 2^31-1], got {p!r}")
        if not _is_prime(p):
            raise ValueError(f"field modulus must be prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class Matrix:
    """Dense exact matrix over F_p, row-major, entries in [0, p).

    Values are immutable by contract: no method mutates, every operation
    returns a fresh Matrix.  0 x n and n x 0 matrices are legal and compose.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: PrimeField, rows: int, cols: int, data):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        data = [x % field.p for x in data]
        if len(data) != rows * cols:
            raise ValueError(f"matrix data length {len(data)} != {rows}x{cols}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    # ---------------------------------------------------------- constructors

    @classmethod
    def from_rows(cls, field: PrimeField, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n:
                raise ValueError("ragged rows")
        return cls(field, len(rows), n, [x for r in rows for x in r])

    @classmethod
    def from_cols(cls, field: PrimeField, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        m = len(cols[0]) if cols else 0
        data = [0] * (m * len(cols))
        for j, c in enumerate(cols):
            if len(c) != m:
                raise ValueError("ragged columns")
            for i, x in enumerate(c):
                data[i * len(cols) + j] = x
        return cls(field, m, len(cols), data)

    @classmethod
    def zero(cls, field: PrimeField, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        data = [0] * (n * n)
        for i in range(n):
            data[i * n + i] = 1
        return cls(field, n, n, data)

    # ---------------------------------------------------------- access

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i * self.cols + j]

    def row(self, i: int):
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int):
        return [self.data[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def key(self):
        return (self.rows, self.cols, tuple(self.data))

    def is_zero(self) -> bool:
        return not any(self.data)

    # ---------------------------------------------------------- algebra

    def _check_field(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError("field mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
            and other.cols == self.cols
            and other.data == self.data
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        data = kernels.mat_mul(self.field.p, self.rows, self.cols, other.cols, self.data, other.data)
        return Matrix(self.field, self.rows, other.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in +")
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      [(x + y) % p for x, y in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in -")
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols,
                      [(x - y) % p for x, y in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols, [(-x) % p for x in self.data])

    def scale(self, c: int) -> "Matrix":
        p = self.field.p
        return Matrix(self.field, self.rows, self.cols, [c * x % p for x in self.data])

    def transpose(self) -> "Matrix":
        data = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                data[j * self.rows + i] = self.data[i * self.cols + j]
        return Matrix(self.field, self.cols, self.rows, data)

    # ---------------------------------------------------------- assembly

    @staticmethod
    def hstack(mats) -> "Matrix":
        mats = list(mats)
        if not mats:
            raise ValueError("hstack of nothing")
        first = mats[0]
        if any(m.rows != first.rows for m in mats):
            raise ValueError("row count mismatch in hstack")
        data = []
        for i in range(first.rows):
            for m in mats:
                data.extend(m.row(i))
        return Matrix(first.field, first.rows, sum(m.cols for m in mats), data)

    @staticmethod
    def vstack(mats) -> "Matrix":
        mats = list(mats)
        if not mats:
            raise ValueError("vstack of nothing")
        first = mats[0]
        if any(m.cols != first.cols for m in mats):
            raise ValueError("col count mismatch in vstack")
        data = []
        for m in mats:
            data.extend(m.data)
        return Matrix(first.field, sum(m.rows for m in mats), first.cols, data)

    def select_rows(self, idx) -> "Matrix":
        data = []
        for i in idx:
            data.extend(self.row(i))
        return Matrix(self.field, len(idx), self.cols, data)

    def select_cols(self, idx) -> "Matrix":
        idx = list(idx)
        data = []
        for i in range(self.rows):
            r = self.row(i)
            data.extend(r[j] for j in idx)
        return Matrix(self.field, self.rows, len(idx), data)

    @staticmethod
    def block(grid) -> "Matrix":
        """Assemble from a 2D grid of matrices (rows of blocks)."""
        return Matrix.vstack([Matrix.hstack(brow) for brow in grid])

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows}x{self.cols})"


def rref(m: Matrix):
    """Reduced row echelon form -> (Matrix, rank, pivot column list)."""
    flat, pivots = kernels.rref(m.field.p, m.rows, m.cols, m.data)
    return Matrix(m.field, m.rows, m.cols, flat), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def solve(a: Matrix, b: Matrix):
    """One X with a @ X = b, free variables set to 0; None if inconsistent."""
    a._check_field(b)
    if a.rows != b.rows:
        raise ValueError("solve: row mismatch")
    aug = Matrix.hstack([a, b])
    r, _, pivots = rref(aug)
    n = a.cols
    for c in pivots:
        if c >= n:
            return None
    x = Matrix.zero(a.field, n, b.cols)
    for i, c in enumerate(pivots):
        row = r.row(i)
        for j in range(b.cols):
            x.data[c * b.cols + j] = row[n + j]
    return x


class Subspace:
    """A subspace of F_p^ambient given by a basis matrix (columns independent)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Matrix):
        if basis.rows != ambient_dim:
            raise ValueError("basis rows != ambient dim")
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_span(cls, span: Matrix) -> "Subspace":
        """Subspace spanned by the columns of span (reduced to pivot columns)."""
        _, _, pivots = rref(span)
        return cls(span.rows, span.select_cols(pivots))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def row_canonical(self) -> Matrix:
        r, rk, _ = rref(self.basis.transpose())
        return r.select_rows(range(rk))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.ambient_dim == self.ambient_dim
            and other.row_canonical() == self.row_canonical()
        )

    def _ascol(self, vec) -> Matrix:
        if isinstance(vec, Matrix):
            return vec
        return Matrix(self.basis.field, self.ambient_dim, 1, list(vec))

    def contains(self, vec) -> bool:
        return solve(self.basis, self._ascol(vec)) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return solve(self.basis, other.basis) is not None

    def coords_of(self, vec):
        """Coordinates (dim x 1 Matrix) of vec in this basis; None if outside."""
        return solve(self.basis, self._ascol(vec))

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_span(Matrix.hstack([self.basis, other.basis]))

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        u, w = self.basis, other.basis
        ker = kernel_basis(Matrix.hstack([u, w]))
        top = ker.basis.select_rows(range(u.cols))
        return Subspace.from_span(u @ top)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F^{self.ambient_dim})"


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {v : m v = 0}, ordered by free column index."""
    r, _, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    p = m.field.p
    basis = Matrix.zero(m.field, m.cols, len(free))
    for j, c in enumerate(free):
        basis.data[c * len(free) + j] = 1
        for i, pc in enumerate(pivots):
            basis.data[pc * len(free) + j] = (-r[i, c]) % p
    return Subspace(m.cols, basis)


def image_basis(m: Matrix) -> Subspace:
    """Column-space basis: the pivot columns of m themselves."""
    _, _, pivots = rref(m)
    return Subspace(m.rows, m.select_cols(pivots))


class QuotientPresentation:
    """Coordinates for ambient/subspace.

    project maps ambient coordinates onto quotient coordinates; rep_basis
    embeds quotient coordinates back as chosen coset representatives
    (non-pivot standard basis vectors).  project @ rep_basis = identity and
    project @ subspace.basis = 0.
    """

    __slots__ = ("ambient_dim", "subspace", "rep_basis", "project")

    def __init__(self, ambient_dim, subspace, rep_basis, project):
        self.ambient_dim = ambient_dim
        self.subspace = subspace
        self.rep_basis = rep_basis
        self.project = project

    @property
    def dim(self) -> int:
        return self.rep_basis.cols

    def class_of(self, vec: Matrix) -> Matrix:
        return self.project @ vec

    def __repr__(self):
        return f"Quotient(F^{self.ambient_dim} / dim {self.subspace.dim})"


def quotient(ambient_dim: int, s: Subspace) -> QuotientPresentation:
    """Quotient presentation of F^ambient by s."""
    if s.ambient_dim != ambient_dim:
        raise ValueError("ambient mismatch")
    field = s.basis.field
    r, rk, pivots = rref(s.basis.transpose())
    pivot_set = set(pivots)
    free = [c for c in range(ambient_dim) if c not in pivot_set]
    rep = Matrix.zero(field, ambient_dim, len(free))
    for j, c in enumerate(free):
        rep.data[c * len(free) + j] = 1
    proj = Matrix.zero(field, len(free), ambient_dim)
    p = field.p
    for j, c in enumerate(free):
        proj.data[j * ambient_dim + c] = 1
        for i, pc in enumerate(pivots):
            proj.data[j * ambient_dim + pc] = (-r[i, c]) % p
    return QuotientPresentation(ambient_dim, s, rep, proj)


def kron_sum_matrices(field: PrimeField, terms) -> Matrix:
    """Sum of Kronecker products S_t (x) B_t; all S same shape, all B same shape."""
    terms = list(terms)
    if not terms:
        raise ValueError("kron_sum of nothing")
    s0, b0 = terms[0]
    flat = kernels.kron_sum(field.p, s0.rows, s0.cols, b0.rows, b0.cols,
                            [(s.data, b.data) for s, b in terms])
    return Matrix(field, s0.rows * b0.rows, s0.cols * b0.cols, flat)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; (i*br + k, j*bc + l) = a[i,j] * b[k,l]."""
    a._check_field(b)
    p = a.field.p
    out = Matrix.zero(a.field, a.rows * b.rows, a.cols * b.cols)
    oc = out.cols
    for i in range(a.rows):
        for j in range(a.cols):
            aij = a[i, j]
            if not aij:
                continue
            base = (i * b.rows) * oc + j * b.cols
            for k in range(b.rows):
                row0 = base + k * oc
                for l in range(b.cols):
                    out.data[row0 + l] = (aij * b[k, l]) % p
    return out


def operator_of_hom_action(left: Matrix, right: Matrix, shape=None) -> Matrix:
    """Matrix of phi |-> left @ phi - phi @ right on row-major-flattened phi.

    left is m x m, right is n x n, phi is m x n flattened to length mn.
    """
    left._check_field(right)
    m, n = left.rows, right.rows
    if left.cols != m or right.cols != n:
        raise ValueError("operator_of_hom_action needs square factors")
    if shape is not None and tuple(shape) != (m, n):
        raise ValueError(f"shape {shape} inconsistent with factors {(m, n)}")
    p = left.field.p
    out = Matrix.zero(left.field, m * n, m * n)
    od, mn = out.data, m * n
    for i in range(m):
        for j in range(n):
            r = i * n + j
            for k in range(m):
                od[r * mn + k * n + j] = (od[r * mn + k * n + j] + left[i, k]) % p
            for l in range(n):
                od[r * mn + i * n + l] = (od[r * mn + i * n + l] - right[l, j]) % p
    return out
