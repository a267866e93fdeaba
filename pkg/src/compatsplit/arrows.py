"""The arrow category of Mod(A) as modules over the triangular algebra.

An arrow f: X -> Y becomes a module over T = triangular(A) on X (+) Y, with
the T-basis layout block*dim(A) + i for blocks (E11, E21, E22).  Free
T-modules evaluate to free A-modules (dom of T^r is A^r, cod is A^{2r}),
which is what makes the Ext-comparison maps literal coordinate selections
on resolutions.
"""

from __future__ import annotations

from .algebras import Algebra, triangular
from .homology import (
    ExtGroup,
    FreeResolution,
    calculator_for,
    class_matrix_from_cochain_operator,
    ext_group,
    hom_transport,
)
from .linalg import Matrix, image_basis, solve
from .modules import (
    ModuleMorphism,
    ModuleRep,
    direct_sum,
    is_split_epi,
    is_split_mono,
    zero_module,
)

_TRIANGULAR: dict = {}


def arrow_algebra(a: Algebra) -> Algebra:
    """The (memoized) triangular algebra hosting arrows over a."""
    key = a.key()
    t = _TRIANGULAR.get(key)
    if t is None:
        t = triangular(a)
        _TRIANGULAR[key] = t
    return t


class ArrowObject:
    """An object X -> Y of the arrow category."""

    def __init__(self, f: ModuleMorphism):
        self.f = f
        self.dom = f.source
        self.cod = f.target
        self.algebra = f.source.algebra
        self._t_module = None

    def t_module(self) -> ModuleRep:
        if self._t_module is None:
            self._t_module = to_triangular_module(self)
        return self._t_module

    def key(self):
        return (self.algebra.key(), self.dom.key(), self.cod.key(), tuple(self.f.mat.data))

    def is_zero(self) -> bool:
        return self.dom.dim == 0 and self.cod.dim == 0

    def __repr__(self):
        return f"Arrow({self.dom.dim} -> {self.cod.dim})"


class ArrowMorphism:
    """A commuting square (a, b) from one arrow to another."""

    def __init__(self, src: ArrowObject, dst: ArrowObject, a: ModuleMorphism,
                 b: ModuleMorphism, check: bool = True):
        self.src = src
        self.dst = dst
        self.a = a
        self.b = b
        if check and b.mat @ src.f.mat != dst.f.mat @ a.mat:
            raise ValueError("square does not commute")

    def t_morphism(self) -> ModuleMorphism:
        f = self.a.mat.field
        mat = Matrix.block([
            [self.a.mat, Matrix.zero(f, self.a.mat.rows, self.b.mat.cols)],
            [Matrix.zero(f, self.b.mat.rows, self.a.mat.cols), self.b.mat],
        ])
        return ModuleMorphism(self.src.t_module(), self.dst.t_module(), mat)

    def __repr__(self):
        return f"ArrowMorphism({self.src} => {self.dst})"


def to_triangular_module(arrow: ArrowObject) -> ModuleRep:
    a = arrow.algebra
    t = arrow_algebra(a)
    f = a.field
    dx, dy = arrow.dom.dim, arrow.cod.dim
    n = dx + dy
    zxx = Matrix.zero(f, dx, dx)
    zxy = Matrix.zero(f, dx, dy)
    zyx = Matrix.zero(f, dy, dx)
    zyy = Matrix.zero(f, dy, dy)
    action = []
    for i in range(a.dim):
        action.append(Matrix.block([[arrow.dom.act(i), zxy], [zyx, zyy]]))
    for i in range(a.dim):
        action.append(Matrix.block([[zxx, zxy], [arrow.f.mat @ arrow.dom.act(i), zyy]]))
    for i in range(a.dim):
        action.append(Matrix.block([[zxx, zxy], [zyx, arrow.cod.act(i)]]))
    return ModuleRep(t, n, action)


def from_triangular_module(m: ModuleRep, base: Algebra) -> ArrowObject:
    """Inverse of to_triangular_module; exact round-trip on its outputs."""
    return from_triangular_module_with_witness(m, base)[0]


def from_triangular_module_with_witness(m: ModuleRep, base: Algebra):
    """(arrow, u) where u: arrow.t_module() -> m is an invertible intertwiner.

    u columns are the chosen dom/cod bases inside m, so u is the identity
    whenever m itself came from to_triangular_module.
    """
    t = m.algebra
    d = base.dim
    if t.dim != 3 * d:
        raise ValueError("module is not over triangular(base)")
    f = base.field
    e11 = [0] * t.dim
    e22 = [0] * t.dim
    for c in range(d):
        e11[c] = base.unit[c]
        e22[2 * d + c] = base.unit[c]
    p1 = m.act_vec(e11)
    p2 = m.act_vec(e22)
    if p1 @ p1 != p1 or p2 @ p2 != p2 or not (p1 @ p2).is_zero():
        raise ValueError("idempotent decomposition failed; not a triangular module")
    bx = image_basis(p1).basis
    by = image_basis(p2).basis
    dom_act, cod_act = [], []
    for i in range(d):
        ax = solve(bx, m.act_vec(_t_basis_vec(t, 0, d, i)) @ bx)
        ay = solve(by, m.act_vec(_t_basis_vec(t, 2, d, i)) @ by)
        if ax is None or ay is None:
            raise ValueError("idempotent decomposition failed; not a triangular module")
        dom_act.append(ax)
        cod_act.append(ay)
    dom = ModuleRep(base, bx.cols, dom_act)
    cod = ModuleRep(base, by.cols, cod_act)
    e21 = _t_basis_vec(t, 1, d, None, base.unit)
    fmat = solve(by, m.act_vec(e21) @ bx)
    if fmat is None:
        raise ValueError("E21 action does not map dom into cod")
    arrow = ArrowObject(ModuleMorphism(dom, cod, fmat))
    return arrow, Matrix.hstack([bx, by])


def _t_basis_vec(t, block, d, i, coeffs=None):
    v = [0] * t.dim
    if coeffs is None:
        v[block * d + i] = 1
    else:
        for c, x in enumerate(coeffs):
            v[block * d + c] = x
    return v


def fg_arrow(arrow: ArrowObject):
    """FG(arrow) = (X -> X (+) Y by [id; 0]); returns (new arrow, sum pieces)."""
    f = arrow.algebra.field
    s, ix, iy, px, py = direct_sum(arrow.dom, arrow.cod)
    mat = ix.mat
    return ArrowObject(ModuleMorphism(arrow.dom, s, mat)), (s, ix, iy, px, py)


def counit_arrow(arrow: ArrowObject) -> ArrowMorphism:
    """The counit square FG(arrow) -> arrow: (id_X, [f  id_Y])."""
    fg, (s, _, _, _, _) = fg_arrow(arrow)
    b = Matrix.hstack([arrow.f.mat, Matrix.identity(arrow.algebra.field, arrow.cod.dim)])
    return ArrowMorphism(fg, arrow, ModuleMorphism.identity(arrow.dom),
                         ModuleMorphism(s, arrow.cod, b))


def ker_counit_arrow(arrow: ArrowObject):
    """Kernel of the counit square, identified with (0 -> X).

    Returns (kernel arrow, inclusion into FG(arrow), m, m_inv) where the
    inclusion's codomain component is x |-> (x, -f x) and m = [[id, 0], [f, id]]
    straightens it to the first-factor inclusion (m @ j = [id; 0]).
    """
    eps = counit_arrow(arrow)
    fg = eps.src
    a = arrow.algebra
    f = a.field
    dx, dy = arrow.dom.dim, arrow.cod.dim
    kernel = ArrowObject(ModuleMorphism(zero_module(a), arrow.dom,
                                        Matrix.zero(f, dx, 0)))
    j = Matrix.vstack([Matrix.identity(f, dx), -arrow.f.mat])
    include = ArrowMorphism(
        kernel, fg,
        ModuleMorphism(kernel.dom, fg.dom, Matrix.zero(f, dx, 0)),
        ModuleMorphism(kernel.cod, fg.cod, j),
    )
    ident_x = Matrix.identity(f, dx)
    ident_y = Matrix.identity(f, dy)
    zxy = Matrix.zero(f, dx, dy)
    m = Matrix.block([[ident_x, zxy], [arrow.f.mat, ident_y]])
    m_inv = Matrix.block([[ident_x, zxy], [-arrow.f.mat, ident_y]])
    return kernel, include, m, m_inv


def is_E_projective(arrow: ArrowObject):
    """Witness retraction iff the underlying map is a split mono."""
    return is_split_mono(arrow.f)


def is_E_injective(arrow: ArrowObject):
    """Witness section iff the underlying map is a split epi."""
    return is_split_epi(arrow.f)


def arrow_ext(f: ArrowObject, g: ArrowObject, deg: int) -> ExtGroup:
    """Ext^deg in the arrow category = Ext^deg over the triangular algebra."""
    return ext_group(f.t_module(), g.t_module(), deg)


def _dom_eval_resolution(res: FreeResolution, arrow: ArrowObject) -> FreeResolution:
    """Apply dom to a T-free resolution of the arrow: an A-free resolution of X."""
    a = arrow.algebra
    d = a.dim
    dx = arrow.dom.dim
    aug = res.aug_gen.select_rows(range(dx))
    diffs = []
    for i in range(1, res.length + 1):
        k = res.diff_gen[i - 1]
        prev_rank = res.ranks[i - 1]
        rows = [g * 3 * d + b for g in range(prev_rank) for b in range(d)]
        diffs.append(k.select_rows(rows))
    return FreeResolution.from_data(arrow.dom, aug, diffs)


def _cod_eval_resolution(res: FreeResolution, arrow: ArrowObject) -> FreeResolution:
    """Apply cod: an A-free resolution of Y with two generators per T-generator."""
    a = arrow.algebra
    d = a.dim
    f = a.field
    dx, dy = arrow.dom.dim, arrow.cod.dim
    r0 = res.ranks[0]
    aug = Matrix.zero(f, dy, 2 * r0)
    for g in range(r0):
        vg = res.aug_gen.col(g)
        top = arrow.f.mat @ Matrix(f, dx, 1, vg[:dx])
        for w in range(dy):
            aug.data[w * 2 * r0 + 2 * g] = top[w, 0]
            aug.data[w * 2 * r0 + 2 * g + 1] = vg[dx + w]
    diffs = []
    for i in range(1, res.length + 1):
        k = res.diff_gen[i - 1]
        prev_rank, this_rank = res.ranks[i - 1], res.ranks[i]
        out = Matrix.zero(f, 2 * prev_rank * d, 2 * this_rank)
        oc = out.cols
        for h in range(this_rank):
            for gp in range(prev_rank):
                for c in range(d):
                    # E21 * gen_h pushes the E11 block into the E21 slot
                    out.data[((2 * gp) * d + c) * oc + 2 * h] = k[gp * 3 * d + c, h]
                    # E22 * gen_h keeps the E21/E22 blocks where they are
                    out.data[((2 * gp) * d + c) * oc + 2 * h + 1] = k[gp * 3 * d + d + c, h]
                    out.data[((2 * gp + 1) * d + c) * oc + 2 * h + 1] = k[gp * 3 * d + 2 * d + c, h]
        diffs.append(out)
    return FreeResolution.from_data(arrow.cod, aug, diffs)


def eval_ext_maps(f: ArrowObject, g: ArrowObject, deg: int):
    """The two comparison maps Ext^deg_T(f,g) -> Ext^deg_A(X,V), Ext^deg_A(Y,W).

    Returned as matrices in the canonical class coordinates of arrow_ext and
    ext_group; their common kernel is the obstruction group.
    """
    if f.algebra.key() != g.algebra.key():
        raise ValueError("arrows live over different base algebras")
    a = f.algebra
    calc = calculator_for(a)
    e_t = arrow_ext(f, g, deg)
    t_res = e_t.resolution
    t_res.extend_to(deg + 1)
    dv, dw = g.dom.dim, g.cod.dim

    dom_res = _dom_eval_resolution(t_res, f)
    cod_res = _cod_eval_resolution(t_res, f)
    e_dom = calc.ext(f.dom, g.dom, deg)
    e_cod = calc.ext(f.cod, g.cod, deg)
    fld = a.field

    r_t = t_res.ranks[deg]
    n_t = dv + dw
    # cochain-level evaluation: select dom components of each generator image
    sel_dom = Matrix.zero(fld, r_t * dv, r_t * n_t)
    for gi in range(r_t):
        for v in range(dv):
            sel_dom.data[(gi * dv + v) * (r_t * n_t) + gi * n_t + v] = 1
    sel_cod = Matrix.zero(fld, 2 * r_t * dw, r_t * n_t)
    gmat = g.f.mat
    for gi in range(r_t):
        for w in range(dw):
            row = ((2 * gi) * dw + w) * (r_t * n_t)
            for v in range(dv):
                sel_cod.data[row + gi * n_t + v] = gmat[w, v]
            sel_cod.data[((2 * gi + 1) * dw + w) * (r_t * n_t) + gi * n_t + dv + w] = 1

    lift_dom = calc.lift_chain_map(ModuleMorphism.identity(f.dom),
                                   calc.resolution(f.dom, deg), dom_res, deg)
    lift_cod = calc.lift_chain_map(ModuleMorphism.identity(f.cod),
                                   calc.resolution(f.cod, deg), cod_res, deg)
    pull_dom = hom_transport(a, lift_dom.gens[deg], g.dom)
    pull_cod = hom_transport(a, lift_cod.gens[deg], g.cod)
    mat_dom = class_matrix_from_cochain_operator(e_t, e_dom, pull_dom @ sel_dom)
    mat_cod = class_matrix_from_cochain_operator(e_t, e_cod, pull_cod @ sel_cod)
    return mat_dom, mat_cod
