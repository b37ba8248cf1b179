"""Structure-constant models of finite-dimensional algebras, coalgebras,
bialgebras and Hopf algebras, with exact axiom checkers.

Conventions: the multiplication is a d x d^2 matrix (column i*d+j holds
e_i * e_j), the comultiplication a d^2 x d matrix, covectors are Vec's used
through `pair`.  Integrals, Frobenius forms, Nakayama automorphisms, twisted
antipodes and modular pairs all operate on this representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from opcohom.linalg import (
    DimensionMismatchError,
    Field,
    Mat,
    Vec,
    index_to_tuple,
    inverse,
    outer,
    rank_kernel_image,
    solve,
    swap_matrix,
    tuple_to_index,
)
from opcohom.report import Check, Report, StructureError

LEVELS = ("algebra", "coalgebra", "bialgebra", "hopf")


@dataclass
class FinAlgebraData:
    """A finite-dimensional algebra-like object given by structure constants.

    Optional tensors widen the structure: comult/counit for coalgebras,
    antipode for Hopf algebras, augmentation for augmented algebras.  The
    `checked` set records which axiom levels have been verified.
    """

    field: Field
    dim: int
    basis_names: list
    mult: Mat  # d x d^2
    unit: Vec  # d
    comult: Mat | None = None  # d^2 x d
    counit: Vec | None = None  # covector, d
    antipode: Mat | None = None  # d x d
    augmentation: Vec | None = None  # covector, d
    name: str = ""
    checked: set = dc_field(default_factory=set)

    def __post_init__(self):
        d = self.dim
        if len(self.basis_names) != d:
            raise DimensionMismatchError("need %d basis names" % d)
        if (self.mult.rows, self.mult.cols) != (d, d * d):
            raise DimensionMismatchError("mult must be %dx%d" % (d, d * d))
        if self.unit.dim != d:
            raise DimensionMismatchError("unit must have dim %d" % d)

    # -- basic derived maps -------------------------------------------------

    def product(self, v: Vec, w: Vec) -> Vec:
        return self.mult.apply(v.kron(w))

    def product_all(self, vecs) -> Vec:
        out = vecs[0]
        for v in vecs[1:]:
            out = self.product(out, v)
        return out

    def left_mult(self, v: Vec) -> Mat:
        """Matrix of x -> v*x."""
        f = self.field
        ent = []
        for j in range(self.dim):
            col = self.product(v, Vec.basis(f, self.dim, j))
            ent.extend((r, j, val) for r, val in col.e.items())
        return Mat.from_entries(f, self.dim, self.dim, ent)

    def right_mult(self, v: Vec) -> Mat:
        """Matrix of x -> x*v."""
        f = self.field
        ent = []
        for j in range(self.dim):
            col = self.product(Vec.basis(f, self.dim, j), v)
            ent.extend((r, j, val) for r, val in col.e.items())
        return Mat.from_entries(f, self.dim, self.dim, ent)

    def iterated_mult(self, n: int) -> Mat:
        """mu^(n-1): A^{tensor n} -> A; n = 0 gives the unit, n = 1 identity."""
        f = self.field
        d = self.dim
        if n == 0:
            return Mat.from_cols(f, d, [self.unit])
        out = Mat.identity(f, d)
        for _ in range(n - 1):
            out = self.mult.mul(out.kron(Mat.identity(f, d)))
        return out

    def iterated_comult(self, n: int) -> Mat:
        """Delta^(n-1): A -> A^{tensor n}; n = 0 gives the counit, n = 1 identity."""
        f = self.field
        d = self.dim
        if self.comult is None:
            raise StructureError("no comultiplication")
        if n == 0:
            return _covector_matrix(self.counit)
        out = Mat.identity(f, d)
        for k in range(n - 1):
            out = (self.comult.kron(Mat.identity(f, d ** k))).mul(out)
        return out

    @property
    def eff_augmentation(self) -> Vec | None:
        return self.augmentation if self.augmentation is not None else self.counit

    def basis_name(self, i):
        return self.basis_names[i]

    def tuple_name(self, tup):
        return "(" + ",".join(self.basis_names[i] for i in tup) + ")"


def _covector_matrix(cov: Vec) -> Mat:
    """1 x d matrix of a covector."""
    f = cov.field
    return Mat.from_entries(f, 1, cov.dim, ((0, i, v) for i, v in cov.e.items()))


def _witness_pair(a: FinAlgebraData, mismatch, arity_in: int):
    if mismatch is None:
        return None
    r, col = mismatch
    tup = index_to_tuple(col, arity_in, a.dim)
    return "input %s, output row %s" % (a.tuple_name(tup), a.basis_names[r] if r < a.dim else r)


# ---------------------------------------------------------------------------
# axiom checkers


def check_axioms(a: FinAlgebraData, level: str) -> Report:
    """Verify the axioms of the requested level, with witnesses on failure.

    'algebra' checks only the algebra axioms, 'coalgebra' only the coalgebra
    ones; 'bialgebra' checks both plus compatibility, 'hopf' adds the
    convolution-inverse axiom for the antipode.
    """
    if level not in LEVELS:
        raise ValueError("unknown level %r" % level)
    f = a.field
    d = a.dim
    rep = Report("%s axioms for %s" % (level, a.name or "algebra"))
    I = Mat.identity(f, d)

    def cmp(name, lhs, rhs, arity_in):
        diff = lhs.first_difference(rhs)
        rep.add(name, diff is None, _witness_pair(a, diff, arity_in))

    if level != "coalgebra":
        assoc_l = a.mult.mul(a.mult.kron(I))
        assoc_r = a.mult.mul(I.kron(a.mult))
        cmp("associativity", assoc_l, assoc_r, 3)
        unit_l = a.mult.mul(Mat.from_cols(f, d, [a.unit]).kron(I))
        unit_r = a.mult.mul(I.kron(Mat.from_cols(f, d, [a.unit])))
        cmp("left unit", unit_l, I, 1)
        cmp("right unit", unit_r, I, 1)

    if level == "algebra":
        if rep.ok:
            a.checked.add("algebra")
        return rep

    if a.comult is None or a.counit is None:
        raise StructureError("level %r needs comult and counit" % level)
    coassoc_l = (a.comult.kron(I)).mul(a.comult)
    coassoc_r = (I.kron(a.comult)).mul(a.comult)
    cmp("coassociativity", coassoc_l, coassoc_r, 1)
    eps = _covector_matrix(a.counit)
    counit_l = (eps.kron(I)).mul(a.comult)
    counit_r = (I.kron(eps)).mul(a.comult)
    cmp("left counit", counit_l, I, 1)
    cmp("right counit", counit_r, I, 1)

    if level == "coalgebra":
        if rep.ok:
            a.checked.add("coalgebra")
        return rep

    # bialgebra: Delta and epsilon are algebra morphisms
    delta_mu = a.comult.mul(a.mult)
    mu_aa = (a.mult.kron(a.mult)).mul(_middle_swap(f, d))
    cmp("comult is an algebra morphism", delta_mu, mu_aa.mul(a.comult.kron(a.comult)), 2)
    cmp("counit is an algebra morphism", eps.mul(a.mult), eps.kron(eps), 2)
    unit_ok = a.comult.apply(a.unit).eq(a.unit.kron(a.unit))
    rep.add("comult preserves the unit", unit_ok, None if unit_ok else "Delta(1) != 1 tensor 1")
    rep.add("counit of unit is 1", a.counit.pair(a.unit) == f.one)

    if level == "bialgebra":
        if rep.ok:
            a.checked.update(("algebra", "coalgebra", "bialgebra"))
        return rep

    if a.antipode is None:
        raise StructureError("level 'hopf' needs an antipode")
    he = outer(a.unit, a.counit)
    cmp("antipode: S*id = unit.counit", convolution(a.antipode, I, a), he, 1)
    cmp("antipode: id*S = unit.counit", convolution(I, a.antipode, a), he, 1)
    if rep.ok:
        a.checked.update(("algebra", "coalgebra", "bialgebra", "hopf"))
    return rep


def _middle_swap(f: Field, d: int) -> Mat:
    """(A A A A) -> (A A A A) swapping the middle two tensor factors."""
    I = Mat.identity(f, d)
    return I.kron(swap_matrix(f, d, d)).kron(I)


# ---------------------------------------------------------------------------
# convolution algebra and (group-)likeness


def convolution(fm: Mat, gm: Mat, h: FinAlgebraData) -> Mat:
    """f * g = mult . (f tensor g) . comult on Hom(H, H)."""
    if h.comult is None:
        raise StructureError("convolution needs a comultiplication")
    return h.mult.mul(fm.kron(gm)).mul(h.comult)


def convolution_unit(h: FinAlgebraData) -> Mat:
    return outer(h.unit, h.counit)


def is_group_like(h: FinAlgebraData, v: Vec) -> bool:
    if h.comult is None or h.counit is None:
        raise StructureError("group-likeness needs coalgebra structure")
    return h.comult.apply(v).eq(v.kron(v)) and h.counit.pair(v) == h.field.one


def is_character(h: FinAlgebraData, cov: Vec) -> bool:
    """cov(xy) = cov(x)cov(y) and cov(1) = 1."""
    f = h.field
    if cov.dim != h.dim:
        raise DimensionMismatchError("character must be a covector of dim %d" % h.dim)
    lhs = _covector_matrix(cov).mul(h.mult)
    rhs = _covector_matrix(cov).kron(_covector_matrix(cov))
    return lhs.eq(rhs) and cov.pair(h.unit) == f.one


def find_group_likes(h: FinAlgebraData, candidates=None, budget: int = 200000) -> list:
    """All group-likes over a small F_p (exhaustive), or verified candidates over Q."""
    f = h.field
    if candidates is not None:
        return [v for v in candidates if is_group_like(h, v)]
    if f.kind != "Fp":
        raise StructureError("exhaustive group-like search needs F_p or a candidate list")
    if f.p ** h.dim > budget:
        raise StructureError(
            "search space %d^%d exceeds budget %d" % (f.p, h.dim, budget)
        )
    out = []
    from itertools import product as iproduct

    for coeffs in iproduct(range(f.p), repeat=h.dim):
        if all(c == 0 for c in coeffs):
            continue
        v = Vec.from_dense(f, list(coeffs))
        if is_group_like(h, v):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# integrals and unimodularity


def integrals(h: FinAlgebraData, side: str) -> list:
    """Basis of the space of left/right integrals of an augmented algebra."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    eps = h.eff_augmentation
    if eps is None:
        raise StructureError("integrals need an augmentation")
    f = h.field
    d = h.dim
    rows = []
    for i in range(d):
        e_i = Vec.basis(f, d, i)
        m = h.left_mult(e_i) if side == "left" else h.right_mult(e_i)
        shifted = m.sub(Mat.identity(f, d).scale(eps[i]))
        rows.append(shifted)
    ent = []
    for blk, m in enumerate(rows):
        for col, cd in m.c.items():
            for r, v in cd.items():
                ent.append((blk * d + r, col, v))
    system = Mat.from_entries(f, d * d, d, ent)
    _, kernel, _ = rank_kernel_image(system)
    return kernel


def _same_span(f: Field, dim: int, basis_a, basis_b) -> bool:
    if len(basis_a) != len(basis_b):
        return False
    m = Mat.from_cols(f, dim, basis_a)
    return all(solve(m, b) is not None for b in basis_b)


def is_unimodular(h: FinAlgebraData) -> bool:
    f = h.field
    return _same_span(f, h.dim, integrals(h, "left"), integrals(h, "right"))


def distinguished_grouplike(h: FinAlgebraData) -> Vec:
    """The character alpha with t*x = alpha(x) t for a nonzero left integral t."""
    f = h.field
    left = integrals(h, "left")
    if not left:
        raise StructureError("no nonzero left integral")
    t = left[0]
    k = min(t.e)
    alpha = {}
    for j in range(h.dim):
        w = h.product(t, Vec.basis(f, h.dim, j))
        c = f.div(w[k], t[k])
        if not w.eq(t.scale(c)):
            raise StructureError("left integral is not an eigenvector of right multiplication")
        if c != f.zero:
            alpha[j] = c
    cov = Vec(f, h.dim, alpha)
    if not is_character(h, cov):
        raise StructureError("distinguished group-like is not a character")
    return cov


# ---------------------------------------------------------------------------
# Frobenius structure


@dataclass
class FrobeniusData:
    """Frobenius structure from a dual integral: theta[i][j] = phi(e_i e_j)
    (left) or phi(e_j e_i) (right), phi the Frobenius form."""

    theta: Mat
    phi: Vec  # covector
    nakayama: Mat
    symmetric: bool
    side: str


def gram_matrix(h: FinAlgebraData, lam: Vec) -> Mat:
    """gram[i][j] = lam(e_i e_j)."""
    d = h.dim
    gram_lr = _covector_matrix(lam).mul(h.mult)  # 1 x d^2
    return Mat.from_entries(
        h.field, d, d, (((col // d), (col % d), cd[0]) for col, cd in gram_lr.c.items() if 0 in cd)
    )


def frobenius_from_integral(h: FinAlgebraData, lam: Vec, side: str = "right") -> FrobeniusData:
    """Build the Frobenius data of a nonzero integral lam in the dual algebra.

    For a left integral, theta(g) = lam(. g); for a right integral,
    theta(g) = lam(g .).  theta invertible certifies the Frobenius property.
    """
    f = h.field
    d = h.dim
    dual = dualize(h)
    space = integrals(dual, side)
    m = Mat.from_cols(f, d, space)
    if lam.is_zero() or solve(m, lam) is None:
        raise StructureError("lambda is not a %s integral in the dual" % side)
    gram = gram_matrix(h, lam)
    theta = gram if side == "left" else gram.transpose()
    if inverse(theta) is None:
        raise StructureError("Frobenius pairing is degenerate (violates the duality theorem)")
    sym = gram.eq(gram.transpose())
    nak = _nakayama_from_gram(f, gram)
    return FrobeniusData(theta=theta, phi=lam, nakayama=nak, symmetric=sym, side=side)


def _nakayama_from_gram(f: Field, gram: Mat) -> Mat:
    """Solve phi(ab) = phi(sigma(b) a):  gram = gram^T . sigma."""
    gt_inv = inverse(gram.transpose())
    if gt_inv is None:
        raise StructureError("degenerate form has no Nakayama automorphism")
    return gt_inv.mul(gram)


def nakayama(frob: FrobeniusData, h: FinAlgebraData) -> Mat:
    """Re-derive and verify the Nakayama automorphism of frob's form."""
    f = h.field
    d = h.dim
    sig = _nakayama_from_gram(f, gram_matrix(h, frob.phi))
    # defining identity on all basis pairs: phi(e_i e_j) = phi(sigma(e_j) e_i)
    for i in range(d):
        ei = Vec.basis(f, d, i)
        for j in range(d):
            ej = Vec.basis(f, d, j)
            lhs = frob.phi.pair(h.product(ei, ej))
            rhs = frob.phi.pair(h.product(sig.apply(ej), ei))
            if lhs != rhs:
                raise StructureError(
                    "Nakayama identity fails at (%s, %s)" % (h.basis_names[i], h.basis_names[j])
                )
    if not _is_algebra_automorphism(h, sig):
        raise StructureError("Nakayama map is not an algebra automorphism")
    return sig


def _is_algebra_automorphism(h: FinAlgebraData, m: Mat) -> bool:
    if inverse(m) is None:
        return False
    lhs = m.mul(h.mult)
    rhs = h.mult.mul(m.kron(m))
    return lhs.eq(rhs) and m.apply(h.unit).eq(h.unit)


def inner_square_witness(h: FinAlgebraData):
    """An invertible u with S^2(x) u = u x for all x, or None.

    Kernel basis vectors are tried first (lexicographically); since those can
    all be singular (e.g. the idempotents of a dual group algebra), prefix
    sums and weighted sums of the kernel basis are tried as deterministic
    fallbacks."""
    if h.antipode is None:
        raise StructureError("needs an antipode")
    return _invertible_solution(h, h.antipode.mul(h.antipode))


def _invertible_solution(h: FinAlgebraData, twist: Mat):
    """Invertible u with twist(x) u = u x for all x, or None; kernel basis
    vectors, prefix sums, then weighted sums, deterministically."""
    f = h.field
    d = h.dim
    blocks = []
    for i in range(d):
        e_i = Vec.basis(f, d, i)
        blocks.append(h.left_mult(twist.apply(e_i)).sub(h.right_mult(e_i)))
    ent = []
    for blk, m in enumerate(blocks):
        for col, cd in m.c.items():
            for r, v in cd.items():
                ent.append((blk * d + r, col, v))
    system = Mat.from_entries(f, d * d, d, ent)
    _, kernel, _ = rank_kernel_image(system)
    candidates = list(kernel)
    acc = Vec(f, d, {})
    for u in kernel:
        acc = acc.add(u)
        candidates.append(acc)
    for m in range(1, len(kernel) + 1):
        w = Vec(f, d, {})
        for k, u in enumerate(kernel):
            w = w.add(u.scale(f.of((k + 1) ** m)))
        candidates.append(w)
    for u in candidates:
        if not u.is_zero() and inverse(h.left_mult(u)) is not None:
            return u
    return None


def is_symmetric_frobenius(h: FinAlgebraData) -> bool:
    """Does h admit a symmetric Frobenius form?  Certified via the Nakayama
    automorphism of a dual-integral form being inner."""
    dual = dualize(h)
    lam_basis = integrals(dual, "right")
    if not lam_basis:
        raise StructureError("no integral in the dual: not Frobenius by this route")
    frob = frobenius_from_integral(h, lam_basis[0], "right")
    if frob.symmetric:
        return True
    return _invertible_solution(h, frob.nakayama) is not None


# ---------------------------------------------------------------------------
# duals


def dualize(h: FinAlgebraData) -> FinAlgebraData:
    """The dual (bi/Hopf) algebra on the dual basis."""
    if h.comult is None or h.counit is None:
        raise StructureError("dualize needs a coalgebra structure")
    return FinAlgebraData(
        field=h.field,
        dim=h.dim,
        basis_names=[n + "^" for n in h.basis_names],
        mult=h.comult.transpose(),
        unit=h.counit,
        comult=h.mult.transpose(),
        counit=h.unit,
        antipode=h.antipode.transpose() if h.antipode is not None else None,
        augmentation=h.unit,
        name=(h.name + "^") if h.name else "",
    )


# ---------------------------------------------------------------------------
# twisted antipode and modular pairs


def twisted_antipode(h: FinAlgebraData, delta: Vec) -> Mat:
    """S~ = (unit.delta) * S, the convolution twist of the antipode."""
    if h.antipode is None:
        raise StructureError("needs an antipode")
    if not is_character(h, delta):
        raise StructureError("delta is not a character")
    eta_delta = outer(h.unit, delta)
    return convolution(eta_delta, h.antipode, h)


@dataclass
class ModularPair:
    """A character delta and a group-like sigma with delta(sigma) = 1."""

    delta: Vec  # covector
    sigma: Vec
    convention: str = "connes_moscovici"  # or "khalkhali_rangipour"

    def validate(self, h: FinAlgebraData) -> Report:
        rep = Report("modular pair on %s" % (h.name or "H"))
        rep.add("delta is a character", is_character(h, self.delta))
        rep.add("sigma is group-like", is_group_like(h, self.sigma))
        rep.add("delta(sigma) = 1", self.delta.pair(self.sigma) == h.field.one)
        return rep


def cm_tau1(h: FinAlgebraData, mp: ModularPair) -> Mat:
    """tau_1(x) = S~(x) sigma."""
    st = twisted_antipode(h, mp.delta)
    return h.right_mult(mp.sigma).mul(st)


def kr_t1(h: FinAlgebraData, mp: ModularPair) -> Mat:
    """t_1(x) = sigma (S * (unit.delta))(x)."""
    conv = convolution(h.antipode, outer(h.unit, mp.delta), h)
    return h.left_mult(mp.sigma).mul(conv)


def check_modular_pair_involution(h: FinAlgebraData, mp: ModularPair) -> Report:
    rep = mp.validate(h)
    rep.require("modular pair")
    f = h.field
    I = Mat.identity(f, h.dim)
    if mp.convention == "connes_moscovici":
        t = cm_tau1(h, mp)
        name = "tau_1^2 = id"
    elif mp.convention == "khalkhali_rangipour":
        t = kr_t1(h, mp)
        name = "t_1^2 = id"
    else:
        raise ValueError("unknown convention %r" % mp.convention)
    sq = t.mul(t)
    diff = sq.first_difference(I)
    rep.add(name, diff is None, _witness_pair(h, diff, 1))
    return rep
