"""Finite-dimensional left modules: objects, maps, (co)kernels, split tests."""

from __future__ import annotations

import random

from .algebras import Algebra
from .linalg import (
    Matrix,
    Subspace,
    image_basis,
    kernel_basis,
    kron,
    operator_of_hom_action,
    quotient,
    rank,
    solve,
)


class ModuleRep:
    """Left A-module on F_p^n given by one action matrix per algebra basis vector."""

    def __init__(self, algebra: Algebra, dim: int, action, label: str = ""):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        self.label = label
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.rows != dim or m.cols != dim:
                raise ValueError("action matrix has wrong shape")

    def key(self):
        return (self.algebra.key(), self.dim, tuple(tuple(m.data) for m in self.action))

    def act(self, i: int) -> Matrix:
        return self.action[i]

    def act_vec(self, v) -> Matrix:
        acc = Matrix.zero(self.algebra.field, self.dim, self.dim)
        for i, vi in enumerate(v):
            if vi:
                acc = acc + self.action[i].scale(vi)
        return acc

    def validate(self):
        """Representation axioms; returns list of violations (empty = valid)."""
        out = []
        a = self.algebra
        ident = Matrix.identity(a.field, self.dim)
        if self.act_vec(a.unit) != ident:
            out.append(("unit",))
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.act_vec(a.multiply(a.basis_vector(i), a.basis_vector(j)))
                if lhs != rhs:
                    out.append(("compat", i, j))
        return out

    def __repr__(self):
        return f"ModuleRep({self.label or ''} dim {self.dim} over {self.algebra.label or self.algebra.dim})"


class ModuleMorphism:
    def __init__(self, source: ModuleRep, target: ModuleRep, mat: Matrix, check: bool = False):
        if mat.rows != target.dim or mat.cols != source.dim:
            raise ValueError("morphism matrix has wrong shape")
        self.source = source
        self.target = target
        self.mat = mat
        if check and not self.is_intertwiner():
            raise ValueError("matrix does not intertwine the actions")

    def is_intertwiner(self) -> bool:
        return all(self.mat @ self.source.act(i) == self.target.act(i) @ self.mat
                   for i in range(self.source.algebra.dim))

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        if other.target is not self.source and other.target.key() != self.source.key():
            raise ValueError("composition mismatch")
        return ModuleMorphism(other.source, self.target, self.mat @ other.mat)

    def __add__(self, other):
        return ModuleMorphism(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other):
        return ModuleMorphism(self.source, self.target, self.mat - other.mat)

    def __eq__(self, other):
        return isinstance(other, ModuleMorphism) and self.mat == other.mat

    def is_zero(self):
        return self.mat.is_zero()

    @staticmethod
    def identity(m: ModuleRep) -> "ModuleMorphism":
        return ModuleMorphism(m, m, Matrix.identity(m.algebra.field, m.dim))

    @staticmethod
    def zero(source: ModuleRep, target: ModuleRep) -> "ModuleMorphism":
        return ModuleMorphism(source, target, Matrix.zero(source.algebra.field, target.dim, source.dim))

    def __repr__(self):
        return f"ModuleMorphism({self.source.dim} -> {self.target.dim})"


class NotSplit:
    """Falsy verdict value for the split-mono / split-epi tests."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return "NotSplit"


NOT_SPLIT = NotSplit()


def zero_module(a: Algebra) -> ModuleRep:
    return ModuleRep(a, 0, [Matrix.zero(a.field, 0, 0)] * a.dim, label="0")


def scalar_module(a: Algebra, weights) -> ModuleRep:
    """One-dimensional module where basis element e_i acts by weights[i].

    The weights must define an algebra map A -> F_p (checked); e.g. over
    k[x]/x^n use (1, 0, ..., 0), over a group algebra all ones.
    """
    m = ModuleRep(a, 1, [Matrix(a.field, 1, 1, [w]) for w in weights], label="k")
    bad = m.validate()
    if bad:
        raise ValueError(f"weights are not multiplicative: {bad[0]}")
    return m


def trivial_module(a: Algebra) -> ModuleRep:
    """The scalar module with e_0 = unit acting by 1, other basis elements by 0.

    Correct for k[x]/x^n-style presets (unit first, nilpotents after); group
    algebras need all-ones weights instead, see scalar_module.
    """
    return scalar_module(a, [1] + [0] * (a.dim - 1))


def trivial_group_module(a: Algebra) -> ModuleRep:
    """Scalar module with every basis element acting by 1 (group-like basis)."""
    return scalar_module(a, [1] * a.dim)


def free_module(a: Algebra, r: int) -> ModuleRep:
    """A^r with the left regular action, block-repeated."""
    if r < 0:
        raise ValueError("rank must be >= 0")
    d = a.dim
    action = []
    for i in range(a.dim):
        blk = a.left_mult_basis(i)
        m = Matrix.zero(a.field, r * d, r * d)
        for g in range(r):
            for x in range(d):
                row = (g * d + x) * (r * d) + g * d
                m.data[row:row + d] = blk.data[x * d:(x + 1) * d]
        action.append(m)
    out = ModuleRep(a, r * d, action, label=f"free^{r}")
    out.free_rank = r  # lets the resolution engine skip the cover step
    return out


def hom_basis(m: ModuleRep, n: ModuleRep) -> list[ModuleMorphism]:
    """Deterministically ordered basis of the intertwiner space Hom_A(M, N)."""
    if m.algebra.key() != n.algebra.key():
        raise ValueError("modules live over different algebras")
    f = m.algebra.field
    if m.dim == 0 or n.dim == 0:
        return []
    blocks = [operator_of_hom_action(n.act(i), m.act(i)) for i in range(m.algebra.dim)]
    ker = kernel_basis(Matrix.vstack(blocks))
    out = []
    for j in range(ker.dim):
        flat = ker.basis.col(j)
        out.append(ModuleMorphism(m, n, Matrix(f, n.dim, m.dim, flat)))
    return out


def kernel_module(f: ModuleMorphism):
    """(K, inclusion) with K the kernel of f as a submodule of the source."""
    m = f.source
    a = m.algebra
    ker = kernel_basis(f.mat)
    kmat = ker.basis
    if ker.dim == 0:
        k = zero_module(a)
        return k, ModuleMorphism(k, m, Matrix.zero(a.field, m.dim, 0))
    action = []
    for i in range(a.dim):
        # the action preserves the kernel, so this solve cannot fail
        inside = solve(kmat, m.act(i) @ kmat)
        assert inside is not None
        action.append(inside)
    k = ModuleRep(a, ker.dim, action)
    return k, ModuleMorphism(k, m, kmat)


def image_module(f: ModuleMorphism):
    """(I, inclusion) with I = im f as a submodule of the target."""
    n = f.target
    a = n.algebra
    im = image_basis(f.mat)
    if im.dim == 0:
        i = zero_module(a)
        return i, ModuleMorphism(i, n, Matrix.zero(a.field, n.dim, 0))
    action = []
    for i in range(a.dim):
        inside = solve(im.basis, n.act(i) @ im.basis)
        assert inside is not None
        action.append(inside)
    mod = ModuleRep(a, im.dim, action)
    return mod, ModuleMorphism(mod, n, im.basis)


def cokernel_module(f: ModuleMorphism):
    """(C, projection) with C = target / im f."""
    n = f.target
    a = n.algebra
    q = quotient(n.dim, image_basis(f.mat))
    if q.dim == 0:
        c = zero_module(a)
        return c, ModuleMorphism(n, c, Matrix.zero(a.field, 0, n.dim))
    action = [q.project @ n.act(i) @ q.rep_basis for i in range(a.dim)]
    c = ModuleRep(a, q.dim, action)
    return c, ModuleMorphism(n, c, q.project)


def direct_sum(m: ModuleRep, n: ModuleRep):
    """(M ⊕ N, inc_m, inc_n, proj_m, proj_n) with block-diagonal action."""
    if m.algebra.key() != n.algebra.key():
        raise ValueError("modules live over different algebras")
    a = m.algebra
    f = a.field
    action = [Matrix.block([[m.act(i), Matrix.zero(f, m.dim, n.dim)],
                            [Matrix.zero(f, n.dim, m.dim), n.act(i)]])
              for i in range(a.dim)]
    s = ModuleRep(a, m.dim + n.dim, action)
    im = Matrix.vstack([Matrix.identity(f, m.dim), Matrix.zero(f, n.dim, m.dim)])
    iN = Matrix.vstack([Matrix.zero(f, m.dim, n.dim), Matrix.identity(f, n.dim)])
    pm = Matrix.hstack([Matrix.identity(f, m.dim), Matrix.zero(f, m.dim, n.dim)])
    pn = Matrix.hstack([Matrix.zero(f, n.dim, m.dim), Matrix.identity(f, n.dim)])
    return (s, ModuleMorphism(m, s, im), ModuleMorphism(n, s, iN),
            ModuleMorphism(s, m, pm), ModuleMorphism(s, n, pn))


def _vec(mat: Matrix) -> Matrix:
    return Matrix(mat.field, mat.rows * mat.cols, 1, list(mat.data))


def _split_solve(f: ModuleMorphism, mono: bool):
    # unknowns: the candidate inverse-on-one-side as a flattened matrix
    src, tgt = f.source, f.target
    fld = src.algebra.field
    if mono:
        rrows, rcols = src.dim, tgt.dim      # r: target -> source, r f = id_src
        eqs = [operator_of_hom_action(src.act(i), tgt.act(i)) for i in range(src.algebra.dim)]
        comp = kron(Matrix.identity(fld, src.dim), f.mat.transpose())
        want = _vec(Matrix.identity(fld, src.dim))
    else:
        rrows, rcols = src.dim, tgt.dim      # s: target -> source, f s = id_tgt
        eqs = [operator_of_hom_action(src.act(i), tgt.act(i)) for i in range(src.algebra.dim)]
        comp = kron(f.mat, Matrix.identity(fld, tgt.dim))
        want = _vec(Matrix.identity(fld, tgt.dim))
    if rrows * rcols == 0:
        # no unknowns: splits iff the identity on the relevant side is forced zero
        ok = (src.dim == 0) if mono else (tgt.dim == 0)
        if ok:
            return ModuleMorphism(tgt, src, Matrix.zero(fld, rrows, rcols))
        return NOT_SPLIT
    lhs = Matrix.vstack(eqs + [comp])
    rhs = Matrix.vstack([Matrix.zero(fld, lhs.rows - want.rows, 1), want])
    sol = solve(lhs, rhs)
    if sol is None:
        return NOT_SPLIT
    return ModuleMorphism(tgt, src, Matrix(fld, rrows, rcols, sol.col(0)))


def is_split_mono(f: ModuleMorphism):
    """Retraction r with r∘f = id, or NOT_SPLIT when no intertwiner works."""
    return _split_solve(f, mono=True)


def is_split_epi(f: ModuleMorphism):
    """Section s with f∘s = id, or NOT_SPLIT when no intertwiner works."""
    return _split_solve(f, mono=False)


def lift_through(h: ModuleMorphism, pi: ModuleMorphism):
    """u with pi ∘ u = h, or NOT_SPLIT when h does not factor through pi."""
    if h.target.key() != pi.target.key():
        raise ValueError("h and pi must share a target")
    field = h.mat.field
    basis = hom_basis(h.source, pi.source)
    if not basis:
        if h.is_zero():
            return ModuleMorphism.zero(h.source, pi.source)
        return NOT_SPLIT
    cols = [Matrix(field, h.mat.rows * h.mat.cols, 1, (pi.mat @ b.mat).data)
            for b in basis]
    rhs = Matrix(field, h.mat.rows * h.mat.cols, 1, h.mat.data)
    coeffs = solve(Matrix.hstack(cols), rhs)
    if coeffs is None:
        return NOT_SPLIT
    out = Matrix.zero(field, pi.source.dim, h.source.dim)
    for i, b in enumerate(basis):
        c = coeffs[i, 0]
        if c:
            out = out + b.mat.scale(c)
    return ModuleMorphism(h.source, pi.source, out)


def random_morphism(rng: random.Random, m: ModuleRep, n: ModuleRep) -> ModuleMorphism:
    basis = hom_basis(m, n)
    p = m.algebra.field.p
    mat = Matrix.zero(m.algebra.field, n.dim, m.dim)
    for b in basis:
        c = rng.randrange(p)
        if c:
            mat = mat + b.mat.scale(c)
    return ModuleMorphism(m, n, mat)


def gen_corpus(a: Algebra, max_dim: int, seed: int):
    """Deterministic stream alternating modules and morphisms between them.

    Modules are cokernels of random maps between free modules (hence always
    honest representations); morphisms are random elements of hom spans.
    """
    rng = random.Random(seed)
    pool: list[ModuleRep] = []
    max_rank = max(1, max_dim // a.dim)
    while True:
        while True:
            r1 = rng.randrange(0, max_rank + 1)
            r2 = rng.randrange(1, max_rank + 1)
            g = random_morphism(rng, free_module(a, r1), free_module(a, r2))
            c, _ = cokernel_module(g)
            if c.dim <= max_dim:
                break
        pool.append(c)
        yield c
        if len(pool) >= 2:
            src = pool[rng.randrange(len(pool))]
            tgt = pool[rng.randrange(len(pool))]
            yield random_morphism(rng, src, tgt)
        if len(pool) > 8:
            pool.pop(0)
