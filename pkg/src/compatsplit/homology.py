"""Free resolutions and Ext^n with functoriality.

Free modules never get their (huge, block-diagonal) action matrices
materialized here: morphisms out of free modules are stored as
generator-image matrices, and the full matrices needed for kernels are
assembled with the kron_sum kernel.

Coordinates used throughout:
  * a free module A^r has basis index g*d + b  (generator g, algebra basis b);
  * Hom(A^r, N) is identified with N^r by generator images, flattened
    gen-major: coordinate g*dim(N) + v.
"""

from __future__ import annotations

from .algebras import Algebra
from .linalg import (
    Matrix,
    Subspace,
    image_basis,
    kernel_basis,
    kron,
    kron_sum_matrices,
    quotient,
    rank,
    solve,
)
from .modules import ModuleMorphism, ModuleRep, free_module, is_split_mono


def free_morphism_matrix(a: Algebra, gens: Matrix) -> Matrix:
    """Full matrix of a free-to-free morphism given generator images.

    gens: (tgt_rank*d) x src_rank; result (tgt_rank*d) x (src_rank*d) with
    column (g, b) = action(e_b) applied to gens[:, g].
    """
    d = a.dim
    tgt_rank = gens.rows // d
    src_rank = gens.cols
    f = a.field
    if tgt_rank == 0 or src_rank == 0:
        return Matrix.zero(f, tgt_rank * d, src_rank * d)
    terms = []
    for cp in range(d):
        s = gens.select_rows([h * d + cp for h in range(tgt_rank)])
        bdat = [0] * (d * d)
        for b in range(d):
            for c in range(d):
                bdat[c * d + b] = a.structure[b][cp][c]
        terms.append((s, Matrix(f, d, d, bdat)))
    return kron_sum_matrices(f, terms)


def morphism_matrix_from_gens(target: ModuleRep, gens: Matrix) -> Matrix:
    """Full matrix of A^r -> target with generator images gens (target.dim x r)."""
    a = target.algebra
    d, f = a.dim, a.field
    r = gens.cols
    if target.dim == 0 or r == 0:
        return Matrix.zero(f, target.dim, r * d)
    terms = []
    for vp in range(target.dim):
        s = gens.select_rows([vp])
        bdat = [0] * (target.dim * d)
        for b in range(d):
            act = target.act(b)
            for v in range(target.dim):
                bdat[v * d + b] = act[v, vp]
        terms.append((s, Matrix(f, target.dim, d, bdat)))
    return kron_sum_matrices(f, terms)


def hom_transport(a: Algebra, gens: Matrix, n_mod: ModuleRep) -> Matrix:
    """Operator Hom(A^p, N) -> Hom(A^q, N) of precomposition with u: A^q -> A^p.

    gens: generator images of u, shape (p*d) x q.  In the N^rank coordinates
    the operator is sum_b W_b (x) action_N(e_b) with W_b[h, g] = gens[g*d+b, h].
    """
    d, f = a.dim, a.field
    p_rank = gens.rows // d
    q_rank = gens.cols
    nd = n_mod.dim
    if p_rank * nd == 0 or q_rank * nd == 0:
        return Matrix.zero(f, q_rank * nd, p_rank * nd)
    terms = []
    for b in range(d):
        w = Matrix.zero(f, q_rank, p_rank)
        for h in range(q_rank):
            for g in range(p_rank):
                w.data[h * p_rank + g] = gens[g * d + b, h]
        terms.append((w, n_mod.act(b)))
    return kron_sum_matrices(f, terms)


def postcompose_operator(g: ModuleMorphism, rank_: int) -> Matrix:
    """Operator Hom(A^rank, N) -> Hom(A^rank, N') of postcomposition with g: N -> N'."""
    return kron(Matrix.identity(g.mat.field, rank_), g.mat)


def reduce_to_generators(acts, span_cols: Matrix) -> Matrix:
    """Submodule generating set from a linear spanning set, greedily pruned.

    acts: ambient action matrices, one per algebra basis element.  A spanning
    vector is kept only when it lies outside the submodule generated by the
    vectors kept so far; since a . v is linear in a, one application of each
    basis action closes the orbit.  Keeps resolution ranks near-minimal
    instead of multiplying by the kernel dimension every degree.
    """
    if span_cols.cols <= 1:
        return span_cols
    fld = span_cols.field
    sub = Subspace(span_cols.rows, Matrix.zero(fld, span_cols.rows, 0))
    keep = []
    for j in range(span_cols.cols):
        v = span_cols.select_cols([j])
        if sub.contains(v):
            continue
        keep.append(j)
        orbit = Matrix.hstack([act @ v for act in acts])
        sub = sub.sum(Subspace.from_span(orbit))
        if sub.dim == span_cols.rows:
            break  # submodule is everything; the rest is redundant
    return span_cols.select_cols(keep)


class FreeResolution:
    """Free resolution of a module, grown on demand and stable once computed.

    Data lives in generator-image form; full differential matrices are kept
    alongside because kernel extraction needs them anyway.  Extension appends
    only — earlier degrees never change, so sharing one instance behaves like
    a pure memo.
    """

    @classmethod
    def from_data(cls, module: ModuleRep, aug_gen: Matrix, diff_gens) -> "FreeResolution":
        """Wrap explicitly given generator images (e.g. an evaluated resolution)."""
        self = cls.__new__(cls)
        self.module = module
        self.algebra = module.algebra
        self.aug_gen = aug_gen
        self.diff_gen = list(diff_gens)
        self.ranks = [aug_gen.cols] + [g.cols for g in self.diff_gen]
        self._full = [morphism_matrix_from_gens(module, aug_gen)]
        self._full += [free_morphism_matrix(self.algebra, g) for g in self.diff_gen]
        return self

    def __init__(self, module: ModuleRep):
        self.module = module
        self.algebra = module.algebra
        a = self.algebra
        if getattr(module, "free_rank", None) is not None:
            r0 = module.free_rank
            gens = Matrix.zero(a.field, module.dim, r0)
            for g in range(r0):
                for c in range(a.dim):
                    gens.data[(g * a.dim + c) * r0 + g] = a.unit[c]
            self.aug_gen = gens
        else:
            acts = [module.act(b) for b in range(a.dim)]
            self.aug_gen = reduce_to_generators(acts, Matrix.identity(a.field, module.dim))
        self.ranks = [self.aug_gen.cols]
        self.diff_gen: list[Matrix] = []          # d_i gens, i >= 1
        self._full = [morphism_matrix_from_gens(module, self.aug_gen)]

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def extend_to(self, length: int) -> "FreeResolution":
        a = self.algebra
        while self.length < length:
            ker = kernel_basis(self._full[-1])
            free = free_module(a, self.ranks[-1])
            acts = [free.act(b) for b in range(a.dim)]
            gens = reduce_to_generators(acts, ker.basis)
            self.diff_gen.append(gens)
            self.ranks.append(gens.cols)
            self._full.append(free_morphism_matrix(a, gens))
        return self

    def differential_matrix(self, i: int) -> Matrix:
        """Full matrix of d_i: P_i -> P_{i-1} (i >= 1); i = 0 gives the augmentation."""
        self.extend_to(i)
        return self._full[i]

    def diff_gens(self, i: int) -> Matrix:
        self.extend_to(i)
        return self.diff_gen[i - 1]

    def free_module_at(self, i: int) -> ModuleRep:
        self.extend_to(i)
        return free_module(self.algebra, self.ranks[i])

    @property
    def augmentation(self) -> ModuleMorphism:
        return ModuleMorphism(self.free_module_at(0), self.module, self._full[0])

    @property
    def differentials(self) -> list[ModuleMorphism]:
        return [ModuleMorphism(self.free_module_at(i + 1), self.free_module_at(i),
                               self._full[i + 1])
                for i in range(self.length)]

    def validate(self):
        """Epi augmentation, d*d = 0, and exactness at every computed degree."""
        out = []
        if self.module.dim and rank(self._full[0]) != self.module.dim:
            out.append(("augmentation not epi",))
        for i in range(1, self.length + 1):
            prod = self._full[i - 1] @ self._full[i]
            if not prod.is_zero():
                out.append(("d.d != 0", i))
            ker_dim = self.ranks[i - 1] * self.algebra.dim - rank(self._full[i - 1])
            if rank(self._full[i]) != ker_dim:
                out.append(("not exact", i - 1))
        return out


class ExtGroup:
    """Ext^degree(source, target) presented on cocycle coordinates.

    Elements live in Hom(P_degree, target) = target^{r_degree}; classes are
    quotient coordinates of the cocycle space by the coboundary space.
    """

    def __init__(self, degree: int, source: ModuleRep, target: ModuleRep,
                 resolution: FreeResolution, cocycle_space: Subspace,
                 coboundary_space: Subspace):
        self.degree = degree
        self.source = source
        self.target = target
        self.resolution = resolution
        self.cocycle_space = cocycle_space
        self.coboundary_space = coboundary_space
        self.rank = resolution.ranks[degree]
        self.cochain_dim = self.rank * target.dim
        # coboundaries in cocycle coordinates
        cob_in_z = cocycle_space.coords_of(coboundary_space.basis)
        assert cob_in_z is not None, "coboundaries must be cocycles"
        self.quotient = quotient(cocycle_space.dim, Subspace.from_span(cob_in_z))
        self.dim = self.quotient.dim

    def class_coords(self, cochain) -> Matrix:
        """Quotient coordinates (dim x 1) of a cocycle given in cochain coordinates."""
        z = self.cocycle_space.coords_of(cochain)
        if z is None:
            raise ValueError("cochain is not a cocycle")
        return self.quotient.project @ z

    def cochain_of_class(self, qcoords) -> Matrix:
        """A cocycle representative (cochain_dim x 1) of given quotient coordinates."""
        f = self.source.algebra.field
        if not isinstance(qcoords, Matrix):
            qcoords = Matrix(f, self.dim, 1, list(qcoords))
        if self.dim == 0:
            return Matrix.zero(f, self.cochain_dim, 1)
        return self.cocycle_space.basis @ (self.quotient.rep_basis @ qcoords)

    def is_cocycle(self, cochain) -> bool:
        return self.cocycle_space.contains(cochain)

    def element(self, qcoords) -> "ExtClass":
        return ExtClass(self, self.cochain_of_class(qcoords))

    def basis_classes(self) -> list["ExtClass"]:
        f = self.source.algebra.field
        out = []
        for j in range(self.dim):
            coords = [0] * self.dim
            coords[j] = 1
            out.append(self.element(coords))
        return out

    def __repr__(self):
        return f"ExtGroup(deg {self.degree}, dim {self.dim})"


class ExtClass:
    def __init__(self, parent: ExtGroup, cochain: Matrix):
        if cochain.rows != parent.cochain_dim or cochain.cols != 1:
            raise ValueError("cochain vector has wrong shape")
        if not parent.is_cocycle(cochain):
            raise ValueError("not a cocycle")
        self.parent = parent
        self.cochain = cochain

    def coords(self) -> Matrix:
        return self.parent.class_coords(self.cochain)

    def is_zero(self) -> bool:
        return self.coords().is_zero()

    def as_morphism(self) -> ModuleMorphism:
        """The representative as an honest map P_degree -> target."""
        par = self.parent
        tgt = par.target
        gens = Matrix.zero(tgt.algebra.field, tgt.dim, par.rank)
        for g in range(par.rank):
            for v in range(tgt.dim):
                gens.data[v * par.rank + g] = self.cochain[g * tgt.dim + v, 0]
        full = morphism_matrix_from_gens(tgt, gens)
        return ModuleMorphism(par.resolution.free_module_at(par.degree), tgt, full)

    def __eq__(self, other):
        return (isinstance(other, ExtClass) and self.parent is other.parent
                and (self.coords() == other.coords()))


class ChainMap:
    """Degreewise lift of a module morphism between two free resolutions."""

    def __init__(self, f: ModuleMorphism, r_source: FreeResolution, r_target: FreeResolution,
                 gens: list[Matrix]):
        self.f = f
        self.r_source = r_source
        self.r_target = r_target
        self.gens = gens  # gens[i]: (tgt ranks[i]*d) x (src ranks[i])

    def full(self, i: int) -> Matrix:
        return free_morphism_matrix(self.f.source.algebra, self.gens[i])


def ext_on_resolution(res: FreeResolution, n: ModuleRep, deg: int) -> ExtGroup:
    """Ext^deg(res.module, n) computed on a given projective resolution."""
    a = res.algebra
    f = a.field
    res.extend_to(deg + 1)
    dim_here = res.ranks[deg] * n.dim
    delta_out = hom_transport(a, res.diff_gens(deg + 1), n)
    cocycles = kernel_basis(delta_out) if dim_here else Subspace(0, Matrix.zero(f, 0, 0))
    if deg == 0 or dim_here == 0:
        cob = Subspace(dim_here, Matrix.zero(f, dim_here, 0))
    else:
        delta_in = hom_transport(a, res.diff_gens(deg), n)
        cob = image_basis(delta_in)
    return ExtGroup(deg, res.module, n, res, cocycles, cob)


def horseshoe_twists(inc: ModuleMorphism, eps: ModuleMorphism,
                     res_sub: FreeResolution, res_quot: FreeResolution, upto: int):
    """Twist maps making res_sub (+) res_quot resolve the middle of a short
    exact sequence 0 -> sub -(inc)-> mid -(eps)-> quot -> 0.

    Returns (sigma0_gens, taus): sigma0 lifts the quotient augmentation
    through eps (generator images in mid coordinates), and taus[i-1] holds
    generator images of tau_i: (res_quot)_i -> (res_sub)_{i-1}, so the summed
    complex with differential [[d, tau], [0, d']] and augmentation
    [inc . aug_sub, sigma0] is again a resolution.
    """
    sigma0 = solve(eps.mat, res_quot.aug_gen)
    assert sigma0 is not None, "quotient augmentation must lift through the epi"
    sigma0_full = morphism_matrix_from_gens(eps.source, sigma0)
    a = res_sub.algebra
    taus = []
    prev = solve(inc.mat @ res_sub.differential_matrix(0),
                 -(sigma0_full @ res_quot.diff_gens(1)))
    assert prev is not None, "horseshoe base case must be solvable"
    taus.append(prev)
    for i in range(1, upto):
        full = free_morphism_matrix(a, prev)
        prev = solve(res_sub.differential_matrix(i),
                     -(full @ res_quot.diff_gens(i + 1)))
        assert prev is not None, "horseshoe step must be solvable"
        taus.append(prev)
    return sigma0, taus


class ExtCalculator:
    """Per-algebra engine with memoized resolutions and Ext groups."""

    def __init__(self, algebra: Algebra):
        self.algebra = algebra
        self._res: dict = {}
        self._ext: dict = {}

    def resolution(self, m: ModuleRep, length: int) -> FreeResolution:
        key = m.key()
        res = self._res.get(key)
        if res is None:
            res = FreeResolution(m)
            self._res[key] = res
        return res.extend_to(length)

    def ext(self, m: ModuleRep, n: ModuleRep, deg: int) -> ExtGroup:
        if deg < 0:
            raise ValueError("Ext degree must be >= 0")
        if m.algebra.key() != n.algebra.key():
            raise ValueError("modules live over different algebras")
        key = (m.key(), n.key(), deg)
        got = self._ext.get(key)
        if got is not None:
            return got
        group = ext_on_resolution(self.resolution(m, deg + 1), n, deg)
        self._ext[key] = group
        return group

    def lift_chain_map(self, f: ModuleMorphism, r_source: FreeResolution,
                       r_target: FreeResolution, length: int) -> ChainMap:
        """sigma_i: (source res)_i -> (target res)_i commuting with d and aug."""
        r_source.extend_to(length)
        r_target.extend_to(length)
        gens = []
        rhs = f.mat @ r_source.aug_gen
        g0 = solve(r_target.differential_matrix(0), rhs)
        assert g0 is not None, "augmentation covers: lift must exist"
        gens.append(g0)
        for i in range(1, length + 1):
            prev_full = free_morphism_matrix(self.algebra, gens[i - 1])
            rhs = prev_full @ r_source.diff_gens(i)
            gi = solve(r_target.differential_matrix(i), rhs)
            assert gi is not None, "exactness guarantees chain lifts"
            gens.append(gi)
        return ChainMap(f, r_source, r_target, gens)

    def induced_map(self, f: ModuleMorphism, g: ModuleMorphism, deg: int) -> Matrix:
        """Matrix of Ext^deg(f, g): Ext(M, N) -> Ext(M'', N'') in class coordinates.

        f: M'' -> M acts contravariantly (chain-map lift), g: N -> N''
        covariantly (postcomposition).  Also verifies well-definedness.
        """
        src_ext = self.ext(f.target, g.source, deg)    # Ext(M, N)
        tgt_ext = self.ext(f.source, g.target, deg)    # Ext(M'', N'')
        lift = self.lift_chain_map(f, self.resolution(f.source, deg),
                                   self.resolution(f.target, deg), deg)
        pull = hom_transport(self.algebra, lift.gens[deg], g.source)
        post = postcompose_operator(g, tgt_ext.rank)
        return class_matrix_from_cochain_operator(src_ext, tgt_ext, post @ pull)


def class_matrix_from_cochain_operator(src_ext: ExtGroup, tgt_ext: ExtGroup,
                                       op: Matrix) -> Matrix:
    """Matrix (tgt.dim x src.dim) of a cochain-level operator on Ext classes.

    op must send cocycles to cocycles and coboundaries to coboundaries;
    both are verified, since failure would mean the caller's operator does
    not actually descend to cohomology.
    """
    if op.cols != src_ext.cochain_dim or op.rows != tgt_ext.cochain_dim:
        raise ValueError("operator shape does not match the cochain spaces")
    fld = op.field
    out = Matrix.zero(fld, tgt_ext.dim, src_ext.dim)
    for j in range(src_ext.coboundary_space.dim):
        image = op @ src_ext.coboundary_space.basis.select_cols([j])
        if not tgt_ext.is_cocycle(image) or not tgt_ext.class_coords(image).is_zero():
            raise AssertionError("cochain operator not constant on classes")
    for j in range(src_ext.dim):
        coords = [0] * src_ext.dim
        coords[j] = 1
        image = op @ src_ext.cochain_of_class(coords)
        if not tgt_ext.is_cocycle(image):
            raise AssertionError("cochain operator left the cocycle space")
        col = tgt_ext.class_coords(image)
        for i in range(tgt_ext.dim):
            out.data[i * src_ext.dim + j] = col[i, 0]
    return out


_CALCULATORS: dict = {}


def calculator_for(a: Algebra) -> ExtCalculator:
    key = a.key()
    calc = _CALCULATORS.get(key)
    if calc is None:
        calc = ExtCalculator(a)
        _CALCULATORS[key] = calc
    return calc


def resolve(m: ModuleRep, length: int) -> FreeResolution:
    if length < 0:
        raise ValueError("resolution length must be >= 0")
    return calculator_for(m.algebra).resolution(m, length)


def ext_group(m: ModuleRep, n: ModuleRep, deg: int) -> ExtGroup:
    return calculator_for(m.algebra).ext(m, n, deg)


def lift_chain_map(f: ModuleMorphism, r_source: FreeResolution,
                   r_target: FreeResolution, length=None) -> ChainMap:
    if length is None:
        length = min(r_source.length, r_target.length)
    return calculator_for(f.source.algebra).lift_chain_map(f, r_source, r_target, length)


def induced_ext_map(f: ModuleMorphism, g: ModuleMorphism, deg: int) -> Matrix:
    return calculator_for(f.source.algebra).induced_map(f, g, deg)


def yoneda_class_of_ses(inc: ModuleMorphism, proj: ModuleMorphism) -> ExtClass:
    """Connecting class in Ext^1(M, N) of 0 -> N -(inc)-> E -(proj)-> M -> 0.

    Zero exactly when the sequence splits.
    """
    n_mod, e_mod, m_mod = inc.source, inc.target, proj.target
    if proj.source is not e_mod and proj.source.key() != e_mod.key():
        raise ValueError("not exact: middle modules disagree")
    if rank(inc.mat) != n_mod.dim:
        raise ValueError("not exact at the left term (inclusion not mono)")
    if rank(proj.mat) != m_mod.dim:
        raise ValueError("not exact at the right term (projection not epi)")
    if not (proj.mat @ inc.mat).is_zero():
        raise ValueError("not exact in the middle (composite nonzero)")
    if n_mod.dim + m_mod.dim != e_mod.dim:
        raise ValueError("not exact in the middle (dimension count)")
    calc = calculator_for(m_mod.algebra)
    res = calc.resolution(m_mod, 2)
    sigma0 = solve(proj.mat, res.aug_gen)
    assert sigma0 is not None, "projection is epi so generators lift"
    sigma0_full = morphism_matrix_from_gens(e_mod, sigma0)
    tau = solve(inc.mat, sigma0_full @ res.diff_gens(1))
    assert tau is not None, "sigma.d kills the quotient so it factors through N"
    group = calc.ext(m_mod, n_mod, 1)
    f = m_mod.algebra.field
    vec = Matrix.zero(f, group.cochain_dim, 1)
    for g in range(res.ranks[1]):
        for v in range(n_mod.dim):
            vec.data[g * n_mod.dim + v] = tau[v, g]
    return ExtClass(group, vec)
