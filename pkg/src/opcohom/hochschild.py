"""Hochschild (co)chain complexes of algebras and coalgebras, endomorphism
and coendomorphism operads, and the cyclic structure on the Hochschild
cochains of a symmetric Frobenius algebra.

Basis conventions: Hom(A^{tensor n}, A) is flattened with the output index
most significant (element <-> d x d^n matrix, index r*d^n + u); Hom(C,
C^{tensor n}) with the output tuple most significant (index w*d + k).
"""

from __future__ import annotations

from dataclasses import dataclass

from opcohom.hopfcore import FinAlgebraData, FrobeniusData
from opcohom.linalg import (
    Field,
    Mat,
    Vec,
    all_tuples,
    index_to_tuple,
    inverse,
    tuple_to_index,
)
from opcohom.operad import OperadSlice
from opcohom.report import Report, StructureError


def _require_checked(a: FinAlgebraData, level: str):
    if level not in a.checked:
        from opcohom.hopfcore import check_axioms

        rep = check_axioms(a, level)
        rep.require("%s is not a valid %s" % (a.name or "input", level))


# ---------------------------------------------------------------------------
# endomorphism / coendomorphism operads


def end_operad(a: FinAlgebraData, max_arity: int) -> OperadSlice:
    """The endomorphism operad End(A)(n) = Hom(A^{tensor n}, A) with the
    multiplication of A as operadic multiplication."""
    _require_checked(a, "algebra")
    f = a.field
    d = a.dim
    N = max_arity
    dims = [d ** (n + 1) for n in range(N + 1)]
    comp = {}
    for m in range(1, N + 1):
        for n in range(0, N + 1):
            q = m + n - 1
            if q < 0 or q > N:
                continue
            dn = d ** n
            dm = d ** m
            dq = d ** q
            for i in range(1, m + 1):
                ent = []
                for u in all_tuples(m, d):
                    s = u[i - 1]
                    head = u[: i - 1]
                    tail = u[i:]
                    u_idx = tuple_to_index(u, d)
                    for v in all_tuples(n, d):
                        w_idx = tuple_to_index(head + v + tail, d)
                        g_base = s * dn + tuple_to_index(v, d)
                        for r in range(d):
                            ent.append(
                                (r * dq + w_idx, (r * dm + u_idx) * dims[n] + g_base, f.one)
                            )
                comp[(m, n, i)] = Mat.from_entries(f, dims[q], dims[m] * dims[n], ent)
    identity = Vec(f, dims[1], {r * d + r: f.one for r in range(d)})
    mult = Vec(f, dims[2], {k * d * d + ij: v for ij, cd in a.mult.c.items() for k, v in cd.items()})
    return OperadSlice(
        field=f, N=N, dims=dims, comp=comp,
        identity=identity, mult=mult, unit0=Vec(f, d, dict(a.unit.e)),
        name="End(%s)" % (a.name or "A"),
    )


def coend_operad(c: FinAlgebraData, max_arity: int) -> OperadSlice:
    """The coendomorphism operad CoEnd(C)(n) = Hom(C, C^{tensor n}) with the
    comultiplication of C as operadic multiplication."""
    _require_checked(c, "coalgebra")
    f = c.field
    d = c.dim
    N = max_arity
    dims = [d ** (n + 1) for n in range(N + 1)]
    comp = {}
    for m in range(1, N + 1):
        for n in range(0, N + 1):
            q = m + n - 1
            if q < 0 or q > N:
                continue
            for i in range(1, m + 1):
                ent = []
                for w in all_tuples(m, d):
                    l = w[i - 1]
                    head = w[: i - 1]
                    tail = w[i:]
                    w_idx = tuple_to_index(w, d)
                    for v in all_tuples(n, d):
                        out_idx = tuple_to_index(head + v + tail, d)
                        v_idx = tuple_to_index(v, d)
                        for k in range(d):
                            ent.append(
                                (
                                    out_idx * d + k,
                                    (w_idx * d + k) * dims[n] + (v_idx * d + l),
                                    f.one,
                                )
                            )
                comp[(m, n, i)] = Mat.from_entries(f, dims[q], dims[m] * dims[n], ent)
    identity = Vec(f, dims[1], {k * d + k: f.one for k in range(d)})
    mult = Vec(f, dims[2], {ij * d + k: v for k in range(d) for ij, v in c.comult.col_dict(k).items()})
    e0 = Vec(f, d, dict(c.counit.e))
    return OperadSlice(
        field=f, N=N, dims=dims, comp=comp,
        identity=identity, mult=mult, unit0=e0,
        name="CoEnd(%s)" % (c.name or "C"),
    )


def end_element_to_mat(a: FinAlgebraData, n: int, v: Vec) -> Mat:
    """Element of End(A)(n) as a d x d^n matrix."""
    d = a.dim
    dn = d ** n
    return Mat.from_entries(a.field, d, dn, ((idx // dn, idx % dn, val) for idx, val in v.e.items()))


def end_element_from_mat(a: FinAlgebraData, n: int, m: Mat) -> Vec:
    d = a.dim
    dn = d ** n
    return Vec(a.field, d * dn, {r * dn + col: v for col, cd in m.c.items() for r, v in cd.items()})


# ---------------------------------------------------------------------------
# Hochschild complexes with bimodule coefficients


@dataclass
class BimoduleData:
    """A-bimodule given by action matrices: left A tensor M -> M,
    right M tensor A -> M."""

    dim: int
    left_action: Mat  # dM x (d * dM)
    right_action: Mat  # dM x (dM * d)

    @staticmethod
    def regular(a: FinAlgebraData) -> "BimoduleData":
        return BimoduleData(dim=a.dim, left_action=a.mult, right_action=a.mult)

    @staticmethod
    def trivial(a: FinAlgebraData) -> "BimoduleData":
        """The ground field through the augmentation."""
        eps = a.eff_augmentation
        if eps is None:
            raise StructureError("trivial bimodule needs an augmentation")
        f = a.field
        left = Mat.from_entries(f, 1, a.dim, ((0, i, v) for i, v in eps.e.items()))
        right = Mat.from_entries(f, 1, a.dim, ((0, i, v) for i, v in eps.e.items()))
        return BimoduleData(dim=1, left_action=left, right_action=right)

    @staticmethod
    def dual_regular(a: FinAlgebraData) -> "BimoduleData":
        """A^dual with (a.f)(x) = f(xa) and (f.b)(x) = f(bx)."""
        f = a.field
        d = a.dim
        left_ent = []
        right_ent = []
        for i in range(d):  # algebra element
            for j in range(d):  # functional index
                # (e_i . e_j^)(x) = e_j^(x e_i) = mult[j, x*d+i]
                for x in range(d):
                    v = a.mult.entry(j, x * d + i)
                    if v != f.zero:
                        left_ent.append((x, i * d + j, v))
                # (e_j^ . e_i)(x) = e_j^(e_i x) = mult[j, i*d+x]
                for x in range(d):
                    v = a.mult.entry(j, i * d + x)
                    if v != f.zero:
                        right_ent.append((x, j * d + i, v))
        return BimoduleData(
            dim=d,
            left_action=Mat.from_entries(f, d, d * d, left_ent),
            right_action=Mat.from_entries(f, d, d * d, right_ent),
        )

    def check(self, a: FinAlgebraData) -> Report:
        rep = Report("bimodule axioms")
        f = a.field
        d, dM = a.dim, self.dim
        Im = Mat.identity(f, dM)
        Ia = Mat.identity(f, d)
        l, r = self.left_action, self.right_action
        rep.add("left action associative", l.mul(a.mult.kron(Im)).eq(l.mul(Ia.kron(l))))
        rep.add("right action associative", r.mul(Im.kron(a.mult)).eq(r.mul(r.kron(Ia))))
        rep.add("actions commute", l.mul(Ia.kron(r)).eq(r.mul(l.kron(Ia)).scale(f.one)))
        unit_col = Mat.from_cols(f, d, [a.unit])
        rep.add("left unit acts as id", l.mul(unit_col.kron(Im)).eq(Im))
        rep.add("right unit acts as id", r.mul(Im.kron(unit_col)).eq(Im))
        return rep


def hochschild_complex(a: FinAlgebraData, m: BimoduleData, max_degree: int, variant: str = "cochain") -> dict:
    """Degree -> differential matrix of the Hochschild (co)chain complex.

    cochain: d_n : Hom(A^n, M) -> Hom(A^{n+1}, M) for 0 <= n < max_degree.
    chain:   d_n : M tensor A^n -> M tensor A^{n-1} for 1 <= n <= max_degree.
    """
    _require_checked(a, "algebra")
    m.check(a).require("bimodule")
    f = a.field
    d = a.dim
    dM = m.dim
    out = {}
    if variant == "cochain":
        for n in range(max_degree):
            dn = d ** n
            dn1 = d ** (n + 1)
            ent = []
            sign = f.one
            # delta_0: (w0, u) gets l(e_w0 x e_r)
            for u_idx in range(dn):
                for r in range(dM):
                    col = r * dn + u_idx
                    for w0 in range(d):
                        for rr, v in m.left_action.col_dict(w0 * dM + r).items():
                            ent.append((rr * dn1 + w0 * dn + u_idx, col, v))
            # middle faces with sign (-1)^i: merge inputs i-1, i via mult
            for i in range(1, n + 1):
                sgn = f.sign(i)
                for u in all_tuples(n, d):
                    u_idx = tuple_to_index(u, d)
                    head, mid, tail = u[: i - 1], u[i - 1], u[i:]
                    for x in range(d):
                        for y in range(d):
                            vv = a.mult.entry(mid, x * d + y)
                            if vv == f.zero:
                                continue
                            w_idx = tuple_to_index(head + (x, y) + tail, d)
                            for r in range(dM):
                                ent.append((r * dn1 + w_idx, r * dn + u_idx, f.mul(sgn, vv)))
            # last face with sign (-1)^(n+1): right action by the last input
            sgn = f.sign(n + 1)
            for u_idx in range(dn):
                for r in range(dM):
                    col = r * dn + u_idx
                    for wl in range(d):
                        for rr, v in m.right_action.col_dict(r * d + wl).items():
                            ent.append((rr * dn1 + u_idx * d + wl, col, f.mul(sgn, v)))
            out[n] = Mat.from_entries(f, dM * dn1, dM * dn, _accumulate(f, ent))
    elif variant == "chain":
        for n in range(1, max_degree + 1):
            dn = d ** n
            dn1 = d ** (n - 1)
            ent = []
            for u in all_tuples(n, d):
                u_idx = tuple_to_index(u, d)
                rest0 = tuple_to_index(u[1:], d)
                for mm in range(dM):
                    col = mm * dn + u_idx
                    # d_0: m a_1 tensor rest
                    for rr, v in m.right_action.col_dict(mm * d + u[0]).items():
                        ent.append((rr * dn1 + rest0, col, v))
                    # middle merges
                    for i in range(1, n):
                        sgn = f.sign(i)
                        head, tail = u[: i - 1], u[i + 1:]
                        for k, v in _mult_column(a, u[i - 1], u[i]).items():
                            w_idx = tuple_to_index(head + (k,) + tail, d)
                            ent.append((mm * dn1 + w_idx, col, f.mul(sgn, v)))
                    # d_n: a_n m tensor a_1 .. a_{n-1}
                    sgn = f.sign(n)
                    lead = tuple_to_index(u[:-1], d)
                    for rr, v in m.left_action.col_dict(u[-1] * dM + mm).items():
                        ent.append((rr * dn1 + lead, col, f.mul(sgn, v)))
            out[n] = Mat.from_entries(f, dM * dn1, dM * dn, _accumulate(f, ent))
    else:
        raise ValueError("variant must be 'chain' or 'cochain'")
    return out


def _mult_column(a: FinAlgebraData, i: int, j: int) -> dict:
    return a.mult.col_dict(i * a.dim + j)


def _accumulate(f: Field, entries):
    acc = {}
    for r, c, v in entries:
        key = (r, c)
        s = f.add(acc.get(key, f.zero), v)
        if s == f.zero:
            acc.pop(key, None)
        else:
            acc[key] = s
    return ((r, c, v) for (r, c), v in acc.items())


# ---------------------------------------------------------------------------
# the cyclic structure on C^*(A, A) of a symmetric Frobenius algebra


def chain_rotation(f: Field, d: int, n: int, signed: bool) -> Mat:
    """t(a_0 x ... x a_n) = [(-1)^n] a_n x a_0 x ... x a_{n-1} on A^{n+1}."""
    ent = []
    coeff = f.sign(n) if signed else f.one
    for t in all_tuples(n + 1, d):
        src = tuple_to_index(t, d)
        dst = tuple_to_index((t[-1],) + t[:-1], d)
        ent.append((dst, src, coeff))
    return Mat.from_entries(f, d ** (n + 1), d ** (n + 1), ent)


def adjoint_iso(a: FinAlgebraData, frob: FrobeniusData, n: int) -> Mat:
    """J = Ad . C^*(A, Theta): Hom(A^n, A) -> (A^{n+1})^dual,
    J(f)(a_0 x ... x a_n) = phi(a_0 . f(a_1 ... a_n))."""
    from opcohom.hopfcore import gram_matrix

    f = a.field
    d = a.dim
    gram = gram_matrix(a, frob.phi)
    return gram.kron(Mat.identity(f, d ** n))


def frobenius_cyclic(a: FinAlgebraData, frob: FrobeniusData, max_arity: int) -> OperadSlice:
    """End(A) with the cyclic operators transported from the rotation of
    Hochschild chains along J; requires a symmetric Frobenius structure.

    The operad-level tau_n is the transport of the plain (unsigned) rotation;
    (-1)^n tau_n then matches the signed rotation of the chain complex, which
    is the operator entering the Connes coboundary.
    """
    if not frob.symmetric:
        raise StructureError("cyclic transport needs a symmetric Frobenius form")
    _require_checked(a, "algebra")
    op = end_operad(a, max_arity)
    f = a.field
    d = a.dim
    from opcohom.hopfcore import gram_matrix

    gram = gram_matrix(a, frob.phi)
    gram_inv = inverse(gram)
    if gram_inv is None:
        raise StructureError("Frobenius form is degenerate")
    taus = []
    for n in range(max_arity + 1):
        I = Mat.identity(f, d ** n)
        J = gram.kron(I)
        J_inv = gram_inv.kron(I)
        rot = chain_rotation(f, d, n, signed=False)
        taus.append(J_inv.mul(rot.transpose()).mul(J))
    op.cyclic = taus
    op.name = "End(%s) cyclic" % (a.name or "A")
    return op


def hh_bv_table(a: FinAlgebraData, frob: FrobeniusData, max_degree: int, seed: int = 7):
    """Hochschild cohomology of a symmetric Frobenius algebra with its
    Batalin-Vilkovisky tables."""
    from opcohom.operad import cohomology_ring

    op = frobenius_cyclic(a, frob, max_degree + 1)
    return cohomology_ring(op, max_degree, seed=seed)


def hc_lambda(a: FinAlgebraData, frob: FrobeniusData, max_degree: int, seed: int = 11):
    """Cyclic-invariant subcomplex of C^*(A, A) and its cohomology."""
    from opcohom.operad import lambda_subcomplex

    op = frobenius_cyclic(a, frob, max_degree + 1)
    return lambda_subcomplex(op, max_degree, seed=seed)
