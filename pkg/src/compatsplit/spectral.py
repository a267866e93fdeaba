"""Comparison spectral sequence between relative and absolute extension groups.

Columns index the counit resolution of Y by FG-objects, the vertical direction
is absolute Ext into X.  Page one stacks Ext^t(U_s, X) with U_0 = Y kept
untruncated; page two carries the obstruction groups down column zero, and
every interior position of the window has to die at infinity.

The page-two differential is not taken on faith: each splice
0 -> V_s -> U_s -> V_{s-1} -> 0 receives a horseshoe-twisted free resolution,
the boundary of the counit complex lifts to an exact chain map between
neighbouring columns, and d_2 falls out of the usual zig-zag (push across,
solve one level down, push across again).  Rows of the resulting Hom double
complex are exact strictly inside the window, which is both what makes the
zig-zag solvable and the reason the whole thing converges to zero.
"""

from .contexts import (
    ArrowContext,
    BarResolution,
    FalsifiedTheorem,
    SplittingContext,
    sha_n,
)
from .homology import (
    FreeResolution,
    class_matrix_from_cochain_operator,
    ext_group,
    ext_on_resolution,
    free_morphism_matrix,
    hom_transport,
    horseshoe_twists,
    induced_ext_map,
    resolve,
)
from .linalg import Matrix, Subspace, image_basis, kernel_basis, quotient, rank, solve
from .modules import ModuleMorphism, ModuleRep


class PageNode:
    """A page-two node presented as a subquotient of its page-one ambient group.

    kernel lives in ambient class coordinates; quotient presents kernel
    coordinates modulo the incoming differential image.
    """

    def __init__(self, ambient, kernel: Subspace, image_in: Subspace):
        self.ambient = ambient
        self.kernel = kernel
        in_kernel = kernel.coords_of(image_in.basis)
        assert in_kernel is not None, "incoming image must be killed by the outgoing map"
        self.quotient = quotient(kernel.dim, Subspace.from_span(in_kernel))
        self.dim = self.quotient.dim

    def coords(self, ambient_coords: Matrix):
        """Node coordinates of an ambient class vector; None when it is no cycle."""
        k = self.kernel.coords_of(ambient_coords)
        if k is None:
            return None
        return self.quotient.project @ k

    def rep_ambient(self, j: int) -> Matrix:
        """Ambient class coordinates of the j-th node basis vector."""
        return self.kernel.basis @ self.quotient.rep_basis.select_cols([j])

    def __repr__(self):
        return f"PageNode(dim {self.dim} of {self.ambient.dim})"


class SSPage:
    """One page of the sequence on the finite window s <= s_max, t <= t_max.

    groups maps (s, t) to the node data: ExtGroup instances on page one,
    PageNode subquotients on page two.  Page-two nodes stop at column
    s_max - 1 because the last column only sees part of its differentials
    inside the window.  diffs holds the matrices of d_r out of each node
    whose target still lies in the window.
    """

    def __init__(self, r: int, ctx, y, x, s_max: int, t_max: int, bar):
        self.r = r
        self.ctx = ctx
        self.y = y
        self.x = x
        self.s_max = s_max
        self.t_max = t_max
        self.bar = bar
        self.groups: dict = {}
        self.diffs: dict = {}
        self.prev = None

    def dim(self, s: int, t: int) -> int:
        return self.groups[(s, t)].dim

    def dims(self) -> dict:
        return {pos: g.dim for pos, g in sorted(self.groups.items())}

    def __repr__(self):
        return f"SSPage(r={self.r}, window ({self.s_max}, {self.t_max}))"


def e1_page(ctx: SplittingContext, y: ModuleRep, x: ModuleRep,
            s_max: int = 3, t_max: int = 2) -> SSPage:
    """First page E_1^{s,t} = Ext^t(U_s, X), d_1 induced by the counit boundary."""
    if s_max < 2 or t_max < 2:
        raise ValueError("window bounds must be at least 2")
    if y.algebra.key() != x.algebra.key():
        raise ValueError("modules live over different algebras")
    bar = BarResolution(ctx, y, s_max)
    page = SSPage(1, ctx, y, x, s_max, t_max, bar)
    ident = ModuleMorphism.identity(x)
    for s in range(s_max + 1):
        for t in range(t_max + 1):
            page.groups[(s, t)] = ext_group(bar.u(s), x, t)
    for s in range(s_max):
        for t in range(t_max + 1):
            page.diffs[(s, t)] = induced_ext_map(bar.boundary(s + 1), ident, t)
    for s in range(s_max - 1):
        for t in range(t_max + 1):
            if not (page.diffs[(s + 1, t)] @ page.diffs[(s, t)]).is_zero():
                raise FalsifiedTheorem(
                    f"page-one differential fails d.d = 0 at position ({s}, {t})")
    return page


def e2_page(e1: SSPage) -> SSPage:
    """Row cohomology of page one, plus the identification checks.

    Column zero must consist of the obstruction subspaces on the nose (equal
    kernels, not just dimensions); the corner (0, 0) and its neighbour (1, 0)
    vanish over every context; an arrow context pins the whole page down to
    columns zero and two with matching dimensions along d_2 corners.
    """
    if e1.r != 1:
        raise ValueError("expected a page-one object")
    page = SSPage(2, e1.ctx, e1.y, e1.x, e1.s_max, e1.t_max, e1.bar)
    page.prev = e1
    for s in range(e1.s_max):
        for t in range(e1.t_max + 1):
            out = e1.diffs[(s, t)]
            ker = kernel_basis(out)
            if s == 0:
                img = Subspace(ker.ambient_dim,
                               Matrix.zero(out.field, ker.ambient_dim, 0))
            else:
                img = image_basis(e1.diffs[(s - 1, t)])
            page.groups[(s, t)] = PageNode(e1.groups[(s, t)], ker, img)
    _check_identifications(page)
    return page


def _check_identifications(page: SSPage):
    ctx, y, x = page.ctx, page.y, page.x
    for t in range(1, page.t_max + 1):
        sha = sha_n(ctx, y, x, t)
        if page.groups[(0, t)].kernel != sha.subspace:
            raise FalsifiedTheorem(
                f"page-two column zero at t = {t} is not the degree-{t} "
                f"obstruction subspace (dims {page.dim(0, t)} vs {sha.dim})")
    if page.dim(0, 0) != 0:
        raise FalsifiedTheorem("corner (0, 0) must vanish: counits are epi")
    if page.dim(1, 0) != 0:
        raise FalsifiedTheorem(
            "position (1, 0) must vanish: a map killing the first kernel "
            "factors through the counit")
    if isinstance(ctx, ArrowContext):
        for t in range(page.t_max + 1):
            if page.dim(1, t) != 0:
                raise FalsifiedTheorem(
                    f"arrow contexts have no page-two column one, found "
                    f"dim {page.dim(1, t)} at t = {t}")
            for s in range(3, page.s_max):
                if page.dim(s, t) != 0:
                    raise FalsifiedTheorem(
                        f"arrow contexts concentrate page two in columns 0 "
                        f"and 2, found dim {page.dim(s, t)} at ({s}, {t})")
        for t in range(1, page.t_max + 1):
            if page.dim(0, t) != page.dim(2, t - 1):
                raise FalsifiedTheorem(
                    f"corner dimensions disagree: E2(0,{t}) = {page.dim(0, t)} "
                    f"but E2(2,{t - 1}) = {page.dim(2, t - 1)}")


# -- the double complex behind d_2 --------------------------------------------


class DoubleComplex:
    """Horseshoe-twisted column resolutions with an exact lift of the boundary.

    Column 0 is the chosen free resolution of Y; column s >= 1 twists the
    resolutions of V_s and V_{s-1} together along the splice
    0 -> V_s -> U_s -> V_{s-1} -> 0, sub block first.  The boundary lift h_s
    kills the sub block and sends the quotient block identically onto the
    sub block one column over; levelwise that makes every window row an exact
    complex of free modules, hence still exact after Hom(-, X).
    """

    def __init__(self, ctx: SplittingContext, y: ModuleRep, x: ModuleRep,
                 s_max: int = 3, t_max: int = 2):
        if s_max < 2 or t_max < 2:
            raise ValueError("window bounds must be at least 2")
        if y.algebra.key() != x.algebra.key():
            raise ValueError("modules live over different algebras")
        self.ctx = ctx
        self.y = y
        self.x = x
        self.s_max = s_max
        self.t_max = t_max
        self.algebra = y.algebra
        self.depth = t_max + 1  # chain levels 0..depth at every column
        self.bar = BarResolution(ctx, y, s_max)
        fld = self.algebra.field
        d = self.algebra.dim
        res_v = [resolve(v, self.depth) for v in self.bar.vs]
        self.columns = [res_v[0]]
        self._sub_rank = [[0] * (self.depth + 1)]
        for s in range(1, s_max + 1):
            sub, quo = res_v[s], res_v[s - 1]
            sigma0, taus = horseshoe_twists(self.bar.incs[s], self.bar.eps[s],
                                            sub, quo, self.depth)
            aug = Matrix.hstack([self.bar.incs[s].mat @ sub.aug_gen, sigma0])
            dgens = []
            for q in range(1, self.depth + 1):
                top = Matrix.hstack([sub.diff_gens(q), taus[q - 1]])
                bot = Matrix.hstack(
                    [Matrix.zero(fld, quo.ranks[q - 1] * d, sub.ranks[q]),
                     quo.diff_gens(q)])
                dgens.append(Matrix.vstack([top, bot]))
            self.columns.append(FreeResolution.from_data(self.bar.u(s), aug, dgens))
            self._sub_rank.append([sub.ranks[q] for q in range(self.depth + 1)])
        self._h = {}
        self._dh = {}
        self._nodes = {}
        self._page_nodes = {}
        self._d1 = {}

    # -- raw chain data --------------------------------------------------

    def h_gens(self, s: int, q: int) -> Matrix:
        """Generator images of the boundary lift Q_{s,q} -> Q_{s-1,q}."""
        got = self._h.get((s, q))
        if got is not None:
            return got
        a = self.algebra
        d, fld = a.dim, a.field
        src_sub = self._sub_rank[s][q]
        cols = self.columns[s].ranks[q]
        rows = self.columns[s - 1].ranks[q] * d
        m = Matrix.zero(fld, rows, cols)
        for g in range(cols - src_sub):  # quotient-block generator g
            for c in range(d):
                m.data[(g * d + c) * cols + (src_sub + g)] = a.unit[c]
        self._h[(s, q)] = m
        return m

    def dh_out(self, s: int, q: int) -> Matrix:
        """Hom(Q_{s,q}, X) -> Hom(Q_{s+1,q}, X) by precomposition with the lift."""
        got = self._dh.get((s, q))
        if got is None:
            got = hom_transport(self.algebra, self.h_gens(s + 1, q), self.x)
            self._dh[(s, q)] = got
        return got

    # -- vertical cohomology ----------------------------------------------

    def node(self, s: int, t: int):
        """Ext^t(U_s, X) presented on the twisted column; dims must agree with
        the standard resolution, which is checked every time a node is built."""
        got = self._nodes.get((s, t))
        if got is None:
            got = ext_on_resolution(self.columns[s], self.x, t)
            standard = ext_group(self.bar.u(s), self.x, t)
            assert got.dim == standard.dim, (
                f"twisted column {s} disagrees with the standard resolution "
                f"at t = {t}: {got.dim} vs {standard.dim}")
            self._nodes[(s, t)] = got
        return got

    def d1_matrix(self, s: int, t: int) -> Matrix:
        """Class matrix of the boundary lift: node (s,t) -> node (s+1,t)."""
        got = self._d1.get((s, t))
        if got is None:
            got = class_matrix_from_cochain_operator(
                self.node(s, t), self.node(s + 1, t), self.dh_out(s, t))
            self._d1[(s, t)] = got
        return got

    def page_node(self, s: int, t: int) -> PageNode:
        """Page-two node at an interior position, in column coordinates."""
        got = self._page_nodes.get((s, t))
        if got is not None:
            return got
        if s > self.s_max - 1:
            raise ValueError("page-two nodes live strictly inside the window")
        ker = kernel_basis(self.d1_matrix(s, t))
        if s == 0:
            img = Subspace(ker.ambient_dim,
                           Matrix.zero(self.algebra.field, ker.ambient_dim, 0))
        else:
            img = image_basis(self.d1_matrix(s - 1, t))
        got = PageNode(self.node(s, t), ker, img)
        self._page_nodes[(s, t)] = got
        return got

    # -- verification ------------------------------------------------------

    def validate(self):
        """Columns resolve, the lift chain-commutes, window rows are Hom-exact."""
        a = self.algebra
        for s, col in enumerate(self.columns):
            problems = col.validate()
            assert not problems, f"column {s} is not a resolution: {problems}"
        full = {(s, q): free_morphism_matrix(a, self.h_gens(s, q))
                for s in range(1, self.s_max + 1)
                for q in range(self.depth + 1)}
        for s in range(1, self.s_max + 1):
            col, tgt = self.columns[s], self.columns[s - 1]
            aug_sq = tgt.differential_matrix(0) @ full[(s, 0)]
            assert aug_sq == self.bar.boundary(s).mat @ col.differential_matrix(0), (
                f"boundary lift misses the augmentation square at column {s}")
            for q in range(1, self.depth + 1):
                lhs = full[(s, q - 1)] @ col.differential_matrix(q)
                assert lhs == tgt.differential_matrix(q) @ full[(s, q)], (
                    f"boundary lift fails to chain-commute at ({s}, {q})")
        for s in range(2, self.s_max + 1):
            for q in range(self.depth + 1):
                assert (full[(s - 1, q)] @ full[(s, q)]).is_zero(), (
                    f"boundary lift fails h.h = 0 at ({s}, {q})")
        for q in range(self.t_max + 1):
            first = self.dh_out(0, q)
            if rank(first) != first.cols:
                raise FalsifiedTheorem(
                    f"window row {q} is not Hom-exact at column 0")
            for s in range(1, self.s_max):
                into, out = self.dh_out(s - 1, q), self.dh_out(s, q)
                if not (out @ into).is_zero():
                    raise FalsifiedTheorem(
                        f"window row {q} differentials do not compose to zero "
                        f"at column {s}")
                if rank(into) != out.cols - rank(out):
                    raise FalsifiedTheorem(
                        f"window row {q} is not Hom-exact at column {s}")

    def row_first_e1_dims(self) -> dict:
        """Row-first page-one dimensions at interior positions; all must be 0.

        Levelwise the rows are contractible complexes of free modules, so
        taking Hom(-, X) first and row cohomology second kills everything
        strictly inside the window.
        """
        out = {}
        for q in range(self.t_max + 1):
            for s in range(self.s_max):
                d_out = self.dh_out(s, q)
                ker_dim = d_out.cols - rank(d_out)
                img_dim = rank(self.dh_out(s - 1, q)) if s >= 1 else 0
                out[(s, q)] = ker_dim - img_dim
        return out

    # -- the page-two differential -----------------------------------------

    def d2_matrix(self, s: int, t: int) -> Matrix:
        """d_2: E_2^{s,t} -> E_2^{s+2,t-1} in page-node coordinates."""
        if t < 1 or t > self.t_max:
            raise ValueError("d_2 needs 1 <= t <= t_max")
        if s < 0 or s + 2 > self.s_max - 1:
            raise ValueError("d_2 target leaves the verifiable window")
        src = self.page_node(s, t)
        tgt = self.page_node(s + 2, t - 1)
        dv = hom_transport(self.algebra, self.columns[s + 1].diff_gens(t), self.x)
        fld = self.algebra.field
        out = Matrix.zero(fld, tgt.dim, src.dim)
        for j in range(src.dim):
            z = src.ambient.cochain_of_class(src.rep_ambient(j))
            col = self._zigzag(s, t, z, dv, tgt)
            for i in range(tgt.dim):
                out.data[i * src.dim + j] = col[i, 0]
        if src.dim and self.columns[s].ranks[t - 1] * self.x.dim:
            # representative independence: a vertical coboundary shift is inert
            z = src.ambient.cochain_of_class(src.rep_ambient(0))
            shift_op = hom_transport(self.algebra, self.columns[s].diff_gens(t),
                                     self.x)
            u = Matrix.zero(fld, shift_op.cols, 1)
            u.data[0] = 1
            col = self._zigzag(s, t, z + shift_op @ u, dv, tgt)
            assert col == out.select_cols([0]), (
                "page-two differential depends on the chosen representative")
        return out

    def _zigzag(self, s: int, t: int, z: Matrix, dv: Matrix,
                tgt: PageNode) -> Matrix:
        rhs = self.dh_out(s, t) @ z
        w = solve(dv, rhs)
        assert w is not None, (
            "zig-zag has no vertical lift; the window rows cannot be exact")
        push = self.dh_out(s + 1, t - 1) @ w
        coords = tgt.coords(self.node(s + 2, t - 1).class_coords(push))
        assert coords is not None, "zig-zag image is not a page-two class"
        return coords


def double_complex_d2(ctx: SplittingContext, y: ModuleRep, x: ModuleRep,
                      corner, bounds=(3, 2)) -> Matrix:
    """d_2 at corner = (s, t), computed on a fully verified double complex.

    Validation covers column exactness, the chain-map squares of the boundary
    lift, and Hom-exactness of the window rows; over an arrow context a
    column-zero corner additionally has to produce an isomorphism.
    """
    s, t = corner
    dc = DoubleComplex(ctx, y, x, bounds[0], bounds[1])
    dc.validate()
    mat = dc.d2_matrix(s, t)
    if isinstance(ctx, ArrowContext) and s == 0:
        if mat.rows != mat.cols or rank(mat) != mat.rows:
            raise FalsifiedTheorem(
                f"d_2 at (0, {t}) must be an isomorphism over an arrow "
                f"context, got shape {mat.rows} x {mat.cols} of rank {rank(mat)}")
    return mat


# -- collapse bookkeeping ------------------------------------------------------


class CollapseReport:
    """Per-position verdicts for vanishing at infinity inside the window.

    verdicts: (s, t) -> "verified" | "unverifiable" | "boundary".  Positions
    that provably survive raise instead of being recorded.
    """

    def __init__(self, s_max: int, t_max: int):
        self.s_max = s_max
        self.t_max = t_max
        self.verdicts: dict = {}
        self.e3_dims: dict = {}
        self.d2_ranks: dict = {}

    @property
    def interior_verified(self) -> bool:
        return all(v == "verified" for (s, _), v in self.verdicts.items()
                   if s < self.s_max)

    def summary(self) -> list:
        return [f"({s},{t}): {self.verdicts[(s, t)]}"
                for (s, t) in sorted(self.verdicts)]

    def __repr__(self):
        done = sum(1 for v in self.verdicts.values() if v == "verified")
        return f"CollapseReport({done} verified of {len(self.verdicts)})"


def verify_collapse(e2: SSPage) -> CollapseReport:
    """Decide interior vanishing at infinity from page two plus d_2 ranks.

    A position dies once the differentials still available to it account for
    its whole dimension; a position all of whose remaining differentials are
    pinned to zero but which keeps positive dimension is a counterexample and
    raises.  Positions depending on differentials that reach outside the
    window stay honestly unverifiable, as does the boundary column.
    """
    if e2.r != 2:
        raise ValueError("expected a page-two object")
    s_max, t_max = e2.s_max, e2.t_max
    report = CollapseReport(s_max, t_max)
    dc_box = []

    def d2_rank(s, t):
        if (s, t) not in report.d2_ranks:
            if not dc_box:
                dc = DoubleComplex(e2.ctx, e2.y, e2.x, s_max, t_max)
                dc.validate()
                dc_box.append(dc)
            dc = dc_box[0]
            mat = dc.d2_matrix(s, t)
            assert dc.page_node(s, t).dim == e2.dim(s, t), (
                "double complex and counit pages disagree at the source")
            assert dc.page_node(s + 2, t - 1).dim == e2.dim(s + 2, t - 1), (
                "double complex and counit pages disagree at the target")
            report.d2_ranks[(s, t)] = rank(mat)
        return report.d2_ranks[(s, t)]

    for t in range(t_max + 1):
        report.verdicts[(s_max, t)] = "boundary"
    for s in range(s_max):
        for t in range(t_max + 1):
            dim2 = e2.dim(s, t)
            if dim2 == 0:
                report.e3_dims[(s, t)] = 0
                report.verdicts[(s, t)] = "verified"
                continue
            known = True
            out_rank = in_rank = 0
            if t - 1 >= 0:
                if s + 2 <= s_max - 1:
                    out_rank = d2_rank(s, t)
                else:
                    known = False
            if s - 2 >= 0:
                if t + 1 <= t_max:
                    in_rank = d2_rank(s - 2, t + 1)
                else:
                    known = False
            e3 = dim2 - out_rank - in_rank
            assert e3 >= 0, "differential ranks exceed the page dimension"
            if e3 == 0:
                # the known ranks already cover the whole dimension, and an
                # unknown rank could only lower a count that cannot go negative
                report.e3_dims[(s, t)] = 0
                report.verdicts[(s, t)] = "verified"
                continue
            if not known:
                report.verdicts[(s, t)] = "unverifiable"
                continue
            report.e3_dims[(s, t)] = e3
            # pages three and up: partners are (s + r, t - r + 1) and
            # (s - r, t + r - 1); survival is only provable when every one of
            # them is pinned to zero, and only refutable the same way
            blocked = False
            for r in range(3, max(t + 2, s + 1) + 1):
                for ps, pt in ((s + r, t - r + 1), (s - r, t + r - 1)):
                    if ps < 0 or pt < 0:
                        continue  # outside the quadrant: pinned to zero
                    if ps <= s_max - 1 and pt <= t_max and e2.dim(ps, pt) == 0:
                        continue  # E_r is a subquotient of E_2 = 0
                    blocked = True
            if blocked:
                report.verdicts[(s, t)] = "unverifiable"
            else:
                report.verdicts[(s, t)] = "falsified"
                raise FalsifiedTheorem(
                    f"interior position ({s}, {t}) survives to infinity with "
                    f"dimension {e3}")
    return report
