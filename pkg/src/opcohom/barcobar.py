"""Bar and cobar constructions, their operads for bialgebras, the
Connes-Moscovici and Khalkhali-Rangipour (co)cyclic modules of a Hopf
algebra with a modular pair, the duality isomorphisms between them, and
Hopf-cyclic cohomology.

Degree-n spaces are tensor powers: the cobar side lives on C^{tensor n}
(index = tuple index), the dual-bar side on the dual basis of A^{tensor n}
(same indexing).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from opcohom.cosimplicial import CosimplicialModule, CyclicModule, _mat_witness
from opcohom.hopfcore import (
    FinAlgebraData,
    ModularPair,
    check_modular_pair_involution,
    dualize,
    twisted_antipode,
)
from opcohom.linalg import (
    Field,
    Mat,
    Vec,
    all_tuples,
    index_to_tuple,
    rank_kernel_image,
    solve,
    subquotient,
    tuple_to_index,
)
from opcohom.operad import (
    OperadSlice,
    bracket,
    check_cyclic,
    check_operad,
    check_operad_morphism,
    cohomology_ring,
    cosimplicial,
    lambda_subcomplex,
)
from opcohom.report import Report, StructureError


def _require(a: FinAlgebraData, level: str, what: str):
    if level not in a.checked:
        from opcohom.hopfcore import check_axioms

        rep = check_axioms(a, level)
        rep.require("%s needs a %s" % (what, level))


# ---------------------------------------------------------------------------
# tensor expansion helpers


def _delta_legs(h: FinAlgebraData, tup):
    """Expand Delta on each basis factor of a tuple: yields (x, y, coeff)
    with x, y tuples of the same length (first and second legs)."""
    f = h.field
    d = h.dim
    terms = [((), (), f.one)]
    for k in tup:
        col = h.comult.col_dict(k)
        new = []
        for x, y, c in terms:
            for jk, v in col.items():
                j, kk = divmod(jk, d)
                new.append((x + (j,), y + (kk,), f.mul(c, v)))
        terms = new
    return terms


def _prod_basis(h: FinAlgebraData, tup) -> Vec:
    """Product of basis elements e_{t1} ... e_{tk} (empty product = 1)."""
    f = h.field
    d = h.dim
    if not tup:
        return Vec(f, d, dict(h.unit.e))
    cur = {tup[0]: f.one}
    for k in tup[1:]:
        nxt = {}
        for r, c in cur.items():
            for rr, v in h.mult.col_dict(r * d + k).items():
                s = f.add(nxt.get(rr, f.zero), f.mul(c, v))
                if s == f.zero:
                    nxt.pop(rr, None)
                else:
                    nxt[rr] = s
        cur = nxt
    return Vec(f, d, cur)


def _kron_sparse(f: Field, vecs):
    """Tensor of sparse Vec's (left factor most significant)."""
    out = vecs[0]
    for v in vecs[1:]:
        out = out.kron(v)
    return out


# ---------------------------------------------------------------------------
# complexes from the algebra / coalgebra structure alone


def cobar_module(c: FinAlgebraData, N: int) -> CosimplicialModule:
    """Cosimplicial module of the cobar construction: X^n = C^{tensor n},
    delta_0 x = 1 tensor x, delta_i applies the diagonal at slot i,
    delta_{n+1} x = x tensor 1, sigma_{i-1} applies the counit at slot i."""
    _require(c, "coalgebra", "cobar construction")
    f = c.field
    d = c.dim
    dims = [d ** n for n in range(N + 1)]
    cofaces = {}
    codegens = {}
    unit_col = {r: v for r, v in c.unit.e.items()}
    for n in range(N):
        maps = []
        ent0 = []
        for u in range(dims[n]):
            for r, v in unit_col.items():
                ent0.append((r * dims[n] + u, u, v))
        maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent0))
        for i in range(1, n + 1):
            ent = []
            for u in all_tuples(n, d):
                u_idx = tuple_to_index(u, d)
                head, mid, tail = u[: i - 1], u[i - 1], u[i:]
                for jk, v in c.comult.col_dict(mid).items():
                    j, k = divmod(jk, d)
                    w_idx = tuple_to_index(head + (j, k) + tail, d)
                    ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent))
        ent_last = []
        for u in range(dims[n]):
            for r, v in unit_col.items():
                ent_last.append((u * d + r, u, v))
        maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent_last))
        cofaces[n] = maps
    for n in range(N + 1):
        maps = []
        for i in range(1, n + 1):
            ent = []
            for u in all_tuples(n, d):
                v = c.counit[u[i - 1]]
                if v == f.zero:
                    continue
                w_idx = tuple_to_index(u[: i - 1] + u[i:], d)
                ent.append((w_idx, tuple_to_index(u, d), v))
            maps.append(Mat.from_entries(f, dims[n - 1], dims[n], ent))
        codegens[n] = maps
    return CosimplicialModule(field=f, N=N, dims=dims, cofaces=cofaces, codegens=codegens)


def bar_dual_module(a: FinAlgebraData, N: int) -> CosimplicialModule:
    """Cosimplicial module of the dual bar construction: X^n = (A^{tensor n})^dual,
    delta_0 f = eps(a_1) f(a_2 ...), middle cofaces merge neighbours,
    delta_{n+1} f = f(...) eps(a_{n+1}), sigma inserts the unit."""
    _require(a, "algebra", "bar construction")
    eps = a.eff_augmentation
    if eps is None:
        raise StructureError("bar construction needs an augmentation")
    f = a.field
    d = a.dim
    dims = [d ** n for n in range(N + 1)]
    cofaces = {}
    codegens = {}
    for n in range(N):
        maps = []
        ent0 = []
        for u in range(dims[n]):
            for r, v in eps.e.items():
                ent0.append((r * dims[n] + u, u, v))
        maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent0))
        for i in range(1, n + 1):
            ent = []
            for u in all_tuples(n, d):
                u_idx = tuple_to_index(u, d)
                head, mid, tail = u[: i - 1], u[i - 1], u[i:]
                for x in range(d):
                    for y in range(d):
                        v = a.mult.entry(mid, x * d + y)
                        if v == f.zero:
                            continue
                        w_idx = tuple_to_index(head + (x, y) + tail, d)
                        ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent))
        ent_last = []
        for u in range(dims[n]):
            for r, v in eps.e.items():
                ent_last.append((u * d + r, u, v))
        maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent_last))
        cofaces[n] = maps
    for n in range(N + 1):
        maps = []
        for i in range(1, n + 1):
            ent = []
            for u in all_tuples(n, d):
                v = a.unit[u[i - 1]]
                if v == f.zero:
                    continue
                w_idx = tuple_to_index(u[: i - 1] + u[i:], d)
                ent.append((w_idx, tuple_to_index(u, d), v))
            maps.append(Mat.from_entries(f, dims[n - 1], dims[n], ent))
        codegens[n] = maps
    return CosimplicialModule(field=f, N=N, dims=dims, cofaces=cofaces, codegens=codegens)


def module_betti(mod: CosimplicialModule, max_degree: int) -> list:
    """Cohomology dimensions of the cochain complex of a cosimplicial module."""
    f = mod.field
    out = []
    for n in range(max_degree + 1):
        d_in = Mat.zeros(f, mod.dims[n], 0) if n == 0 else mod.differential(n - 1)
        h = subquotient(d_in, mod.differential(n))
        out.append(h.dim)
    return out


def ext_betti(a: FinAlgebraData, max_degree: int) -> list:
    """Ext over an augmented algebra, from the dual bar construction."""
    return module_betti(bar_dual_module(a, max_degree + 1), max_degree)


def cotor_betti(c: FinAlgebraData, max_degree: int) -> list:
    """Cotor over a coaugmented coalgebra, from the cobar construction."""
    return module_betti(cobar_module(c, max_degree + 1), max_degree)


# ---------------------------------------------------------------------------
# operads with multiplication on the (co)bar constructions of a bialgebra


def cobar_operad(c: FinAlgebraData, max_arity: int) -> OperadSlice:
    """O(n) = C^{tensor n} with
    (a_1 x ... x a_m) o_i (b_1 x ... x b_n)
      = a_1 x ... x a_{i-1} x a_i^(1) b_1 x ... x a_i^(n) b_n x a_{i+1} x ...
    For n = 0 the slot is dropped against the counit."""
    _require(c, "bialgebra", "cobar operad")
    f = c.field
    d = c.dim
    N = max_arity
    dims = [d ** n for n in range(N + 1)]
    comp = {}
    for m in range(1, N + 1):
        for n in range(0, N + 1):
            q = m + n - 1
            if q < 0 or q > N:
                continue
            for i in range(1, m + 1):
                ent = []
                for u in all_tuples(m, d):
                    u_idx = tuple_to_index(u, d)
                    head, mid, tail = u[: i - 1], u[i - 1], u[i:]
                    if n == 0:
                        v = c.counit[mid]
                        if v == f.zero:
                            continue
                        w_idx = tuple_to_index(head + tail, d)
                        ent.append((w_idx, u_idx * dims[0] + 0, v))
                        continue
                    it = c.iterated_comult(n).col_dict(mid)
                    for xs_idx, coeff in it.items():
                        xs = index_to_tuple(xs_idx, n, d)
                        for b in all_tuples(n, d):
                            b_idx = tuple_to_index(b, d)
                            parts = [_prod_basis(c, (xs[kk], b[kk])) for kk in range(n)]
                            middle = _kron_sparse(f, parts)
                            for mid_idx, vv in middle.e.items():
                                w_idx = tuple_to_index(head + index_to_tuple(mid_idx, n, d) + tail, d)
                                ent.append((w_idx, u_idx * dims[n] + b_idx, f.mul(coeff, vv)))
                comp[(m, n, i)] = Mat.from_entries(f, dims[q], dims[m] * dims[n], _merge(f, ent))
    identity = Vec(f, d, dict(c.unit.e))
    mult = c.unit.kron(c.unit)
    unit0 = Vec(f, 1, {0: f.one})
    return OperadSlice(
        field=f, N=N, dims=dims, comp=comp,
        identity=identity, mult=mult, unit0=unit0,
        name="Cobar(%s)" % (c.name or "C"),
    )


def dual_bar_operad(a: FinAlgebraData, max_arity: int) -> OperadSlice:
    """O(n) = (A^{tensor n})^dual with
    (f o_i g)(a_1 ... a_{m+n-1})
      = f(a_1 ... a_{i-1} x a_i^(1)...a_{i+n-1}^(1) g(a_i^(2) ... ) x a_{i+n} ...)."""
    _require(a, "bialgebra", "dual bar operad")
    f = a.field
    d = a.dim
    N = max_arity
    dims = [d ** n for n in range(N + 1)]
    comp = {}
    for m in range(1, N + 1):
        for n in range(0, N + 1):
            q = m + n - 1
            if q < 0 or q > N:
                continue
            for i in range(1, m + 1):
                ent = []
                if n == 0:
                    for u in all_tuples(m, d):
                        v = a.unit[u[i - 1]]
                        if v == f.zero:
                            continue
                        w_idx = tuple_to_index(u[: i - 1] + u[i:], d)
                        ent.append((w_idx, tuple_to_index(u, d) * dims[0] + 0, v))
                else:
                    for w in all_tuples(q, d):
                        w_idx = tuple_to_index(w, d)
                        head, block, tail = w[: i - 1], w[i - 1: i - 1 + n], w[i - 1 + n:]
                        for xs, ys, coeff in _delta_legs(a, block):
                            z = _prod_basis(a, xs)
                            g_idx = tuple_to_index(ys, d)
                            for r, zr in z.e.items():
                                u_idx = tuple_to_index(head + (r,) + tail, d)
                                ent.append(
                                    (w_idx, u_idx * dims[n] + g_idx, f.mul(coeff, zr))
                                )
                comp[(m, n, i)] = Mat.from_entries(f, dims[q], dims[m] * dims[n], _merge(f, ent))
    identity = Vec(f, d, dict(a.counit.e))
    # multiplication element: the covector eps o mu on A tensor A
    mult_entries = {}
    for col, cd in a.mult.c.items():
        acc = f.zero
        for r, v in cd.items():
            acc = f.add(acc, f.mul(a.counit[r], v))
        if acc != f.zero:
            mult_entries[col] = acc
    mult_cov = Vec(f, d * d, mult_entries)
    unit0 = Vec(f, 1, {0: f.one})
    return OperadSlice(
        field=f, N=N, dims=dims, comp=comp,
        identity=identity, mult=mult_cov, unit0=unit0,
        name="BarDual(%s)" % (a.name or "A"),
    )


def _merge(f: Field, entries):
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
# inclusions into the (co)endomorphism operads


@dataclass
class InclusionMaps:
    """Per-degree inclusion and retraction matrices plus their check report."""

    inclusion: list
    retraction: list
    source: OperadSlice
    target: OperadSlice
    checks: Report


def coalgebra_inclusion(c: FinAlgebraData, max_arity: int) -> InclusionMaps:
    """ext: Cobar(C) -> CoEnd(C), x -> (c -> Delta-expanded c acting on x),
    with retraction f -> f(1)."""
    from opcohom.hochschild import coend_operad

    _require(c, "bialgebra", "cobar inclusion")
    src = cobar_operad(c, max_arity)
    tgt = coend_operad(c, max_arity)
    f = c.field
    d = c.dim
    inclusion = []
    retraction = []
    for n in range(max_arity + 1):
        ent = []
        it = c.iterated_comult(n)
        for cvec in all_tuples(n, d):
            col = tuple_to_index(cvec, d)
            for k in range(d):
                for xs_idx, coeff in it.col_dict(k).items():
                    xs = index_to_tuple(xs_idx, n, d)
                    parts = [_prod_basis(c, (xs[j], cvec[j])) for j in range(n)]
                    out = _kron_sparse(f, parts) if parts else Vec(f, 1, {0: f.one})
                    for w_idx, vv in out.e.items():
                        ent.append((w_idx * d + k, col, f.mul(coeff, vv)))
        inclusion.append(Mat.from_entries(f, tgt.dims[n], src.dims[n], _merge(f, ent)))
        rent = []
        for w_idx in range(d ** n):
            for k, v in c.unit.e.items():
                rent.append((w_idx, w_idx * d + k, v))
        retraction.append(Mat.from_entries(f, src.dims[n], tgt.dims[n], rent))
    rep = check_operad_morphism(src, tgt, inclusion)
    for n in range(max_arity + 1):
        got = retraction[n].mul(inclusion[n])
        I = Mat.identity(f, src.dims[n])
        rep.add("retraction o inclusion = id at degree %d" % n, got.eq(I), _mat_witness(got, I))
    cs_src = cosimplicial(src)
    cs_tgt = cosimplicial(tgt)
    for n in range(max_arity):
        lhs = inclusion[n + 1].mul(cs_src.differential(n))
        rhs = cs_tgt.differential(n).mul(inclusion[n])
        rep.add("inclusion is a chain map at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
        lhs = retraction[n + 1].mul(cs_tgt.differential(n))
        rhs = cs_src.differential(n).mul(retraction[n])
        rep.add("retraction is a chain map at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    return InclusionMaps(inclusion=inclusion, retraction=retraction, source=src, target=tgt, checks=rep)


def algebra_inclusion(a: FinAlgebraData, max_arity: int) -> InclusionMaps:
    """lift: BarDual(A) -> End(A), f -> (a_1...a_n -> a^(1) legs times f(a^(2) legs)),
    with retraction f -> eps o f."""
    from opcohom.hochschild import end_operad

    _require(a, "bialgebra", "bar-dual inclusion")
    src = dual_bar_operad(a, max_arity)
    tgt = end_operad(a, max_arity)
    f = a.field
    d = a.dim
    inclusion = []
    retraction = []
    for n in range(max_arity + 1):
        ent = []
        for avec in all_tuples(n, d):
            row_base = tuple_to_index(avec, d)
            for xs, ys, coeff in _delta_legs(a, avec):
                z = _prod_basis(a, xs)
                col = tuple_to_index(ys, d)
                for r, zr in z.e.items():
                    ent.append((r * d ** n + row_base, col, f.mul(coeff, zr)))
        inclusion.append(Mat.from_entries(f, tgt.dims[n], src.dims[n], _merge(f, ent)))
        rent = []
        for u_idx in range(d ** n):
            for r, v in a.counit.e.items():
                rent.append((u_idx, r * d ** n + u_idx, v))
        retraction.append(Mat.from_entries(f, src.dims[n], tgt.dims[n], rent))
    rep = check_operad_morphism(src, tgt, inclusion)
    for n in range(max_arity + 1):
        got = retraction[n].mul(inclusion[n])
        I = Mat.identity(f, src.dims[n])
        rep.add("retraction o inclusion = id at degree %d" % n, got.eq(I), _mat_witness(got, I))
    cs_src = cosimplicial(src)
    cs_tgt = cosimplicial(tgt)
    for n in range(max_arity):
        lhs = inclusion[n + 1].mul(cs_src.differential(n))
        rhs = cs_tgt.differential(n).mul(inclusion[n])
        rep.add("inclusion is a chain map at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    return InclusionMaps(inclusion=inclusion, retraction=retraction, source=src, target=tgt, checks=rep)


# ---------------------------------------------------------------------------
# duality between the two constructions


@dataclass
class DualityMaps:
    phi: list  # Cobar(C)(n) -> BarDual(C^dual)(n), identity in coordinates
    gamma: list  # CoEnd(C)(n) -> End(C^dual)(n), a permutation
    checks: Report


def duality_maps(c: FinAlgebraData, max_arity: int) -> DualityMaps:
    """phi: Omega C -> (B C^dual)^dual and Gamma: CoEnd(C) -> End(C^dual),
    with the two commuting squares relating them to the inclusions."""
    from opcohom.hochschild import coend_operad, end_operad

    _require(c, "bialgebra", "duality maps")
    f = c.field
    d = c.dim
    a = dualize(c)
    from opcohom.hopfcore import check_axioms

    check_axioms(a, "bialgebra").require("dual bialgebra")
    cob = cobar_operad(c, max_arity)
    bar = dual_bar_operad(a, max_arity)
    coend = coend_operad(c, max_arity)
    end = end_operad(a, max_arity)
    phi = [Mat.identity(f, d ** n) for n in range(max_arity + 1)]
    gamma = []
    for n in range(max_arity + 1):
        dn = d ** n
        ent = [(k * dn + w, w * d + k, f.one) for w in range(dn) for k in range(d)]
        gamma.append(Mat.from_entries(f, d * dn, d * dn, ent))
    rep = Report("bar/cobar duality for %s" % (c.name or "C"))
    # phi is an isomorphism of operads with multiplication
    rep.extend(check_operad_morphism(cob, bar, phi))
    for n in range(max_arity + 1):
        rank, _, _ = rank_kernel_image(phi[n])
        rep.add("phi iso at degree %d" % n, rank == d ** n)
    # Gamma is a morphism of operads with multiplication
    rep.extend(check_operad_morphism(coend, end, gamma))
    for n in range(max_arity + 1):
        rank, _, _ = rank_kernel_image(gamma[n])
        rep.add("Gamma iso at degree %d" % n, rank == d ** (n + 1))
    # square: proj o Gamma = phi o ret (retractions to the (co)bar sides)
    inc_c = coalgebra_inclusion(c, max_arity)
    inc_a = algebra_inclusion(a, max_arity)
    rep.extend(inc_c.checks)
    rep.extend(inc_a.checks)
    for n in range(max_arity + 1):
        lhs = inc_a.retraction[n].mul(gamma[n])
        rhs = phi[n].mul(inc_c.retraction[n])
        rep.add("retraction square commutes at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
        lhs = gamma[n].mul(inc_c.inclusion[n])
        rhs = inc_a.inclusion[n].mul(phi[n])
        rep.add("inclusion square commutes at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    return DualityMaps(phi=phi, gamma=gamma, checks=rep)


# ---------------------------------------------------------------------------
# Connes-Moscovici cocyclic module and Khalkhali-Rangipour cyclic module


def cm_cocyclic(h: FinAlgebraData, mp: ModularPair, N: int) -> CosimplicialModule:
    """The cocyclic module on H^{tensor n} with the last coface twisted by
    sigma and tau_n built from the twisted antipode:
    tau_n(h_1 x ... x h_n) = Delta^{n-1}(S~ h_1) . (h_2 x ... x h_n x sigma)."""
    mp2 = ModularPair(mp.delta, mp.sigma, "connes_moscovici")
    check_modular_pair_involution(h, mp2).require("modular pair in involution (CM)")
    f = h.field
    d = h.dim
    mod = cobar_module(h, N)
    # replace the last coface: x -> x tensor sigma
    for n in range(N):
        ent = []
        for u in range(mod.dims[n]):
            for r, v in mp.sigma.e.items():
                ent.append((u * d + r, u, v))
        mod.cofaces[n][n + 1] = Mat.from_entries(f, mod.dims[n + 1], mod.dims[n], ent)
    st = twisted_antipode(h, mp.delta)
    tau = {0: Mat.identity(f, 1)}
    for n in range(1, N + 1):
        it = h.iterated_comult(n)
        ent = []
        for u in all_tuples(n, d):
            u_idx = tuple_to_index(u, d)
            first = st.column(u[0])
            rest = u[1:]
            for r0, c0 in first.e.items():
                for xs_idx, cc in it.col_dict(r0).items():
                    xs = index_to_tuple(xs_idx, n, d)
                    parts = [_prod_basis(h, (xs[k], rest[k])) for k in range(n - 1)]
                    last = Vec(f, d, {
                        rr: vv for rr, vv in _mult_vec(h, Vec.basis(f, d, xs[n - 1]), mp.sigma).e.items()
                    })
                    parts.append(last)
                    out = _kron_sparse(f, parts)
                    coeff = f.mul(c0, cc)
                    for w_idx, vv in out.e.items():
                        ent.append((w_idx, u_idx, f.mul(coeff, vv)))
        tau[n] = Mat.from_entries(f, mod.dims[n], mod.dims[n], _merge(f, ent))
    mod.tau = tau
    return mod


def _mult_vec(h: FinAlgebraData, v: Vec, w: Vec) -> Vec:
    return h.product(v, w)


def kr_cyclic(k: FinAlgebraData, mp: ModularPair, N: int) -> CyclicModule:
    """The cyclic module on K^{tensor n} with the last face twisted by delta
    and t_n(k_1 x ... x k_n)
      = sigma S(k_1^(1) ... k_n^(1)) x k_1^(2) x ... x k_{n-1}^(2) delta(k_n^(2))."""
    mp2 = ModularPair(mp.delta, mp.sigma, "khalkhali_rangipour")
    check_modular_pair_involution(k, mp2).require("modular pair in involution (KR)")
    f = k.field
    d = k.dim
    dims = [d ** n for n in range(N + 1)]
    faces = {}
    degens = {}
    eps = k.counit
    for n in range(1, N + 1):
        maps = []
        ent0 = []
        for u in all_tuples(n, d):
            v = eps[u[0]]
            if v != f.zero:
                ent0.append((tuple_to_index(u[1:], d), tuple_to_index(u, d), v))
        maps.append(Mat.from_entries(f, dims[n - 1], dims[n], ent0))
        for i in range(1, n):
            ent = []
            for u in all_tuples(n, d):
                u_idx = tuple_to_index(u, d)
                for r, v in k.mult.col_dict(u[i - 1] * d + u[i]).items():
                    w_idx = tuple_to_index(u[: i - 1] + (r,) + u[i + 1:], d)
                    ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n - 1], dims[n], _merge(f, ent)))
        ent_last = []
        for u in all_tuples(n, d):
            v = mp.delta[u[-1]]
            if v != f.zero:
                ent_last.append((tuple_to_index(u[:-1], d), tuple_to_index(u, d), v))
        maps.append(Mat.from_entries(f, dims[n - 1], dims[n], ent_last))
        faces[n] = maps
    for n in range(N):
        maps = []
        for j in range(n + 1):
            ent = []
            for u in all_tuples(n, d):
                u_idx = tuple_to_index(u, d)
                for r, v in k.unit.e.items():
                    w_idx = tuple_to_index(u[:j] + (r,) + u[j:], d)
                    ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent))
        degens[n] = maps
    t = {0: Mat.identity(f, 1)}
    sigma_mult = k.left_mult(mp.sigma)
    for n in range(1, N + 1):
        ent = []
        for u in all_tuples(n, d):
            u_idx = tuple_to_index(u, d)
            for xs, ys, coeff in _delta_legs(k, u):
                z = _prod_basis(k, xs)
                sz = sigma_mult.mul(k.antipode).apply(z)
                dly = mp.delta[ys[-1]]
                if dly == f.zero:
                    continue
                rest_idx = tuple_to_index(ys[:-1], d)
                cc = f.mul(coeff, dly)
                for r, vv in sz.e.items():
                    ent.append((r * dims[n - 1] + rest_idx, u_idx, f.mul(cc, vv)))
        t[n] = Mat.from_entries(f, dims[n], dims[n], _merge(f, ent))
    return CyclicModule(field=f, N=N, dims=dims, faces=faces, degens=degens, t=t)


def psi_duality(k: FinAlgebraData, mp: ModularPair, N: int) -> Report:
    """psi_n identifies (K^dual)^{tensor n} with (K^{tensor n})^dual; it must
    intertwine the CM cocyclic module of K^dual for (ev_sigma, delta) with the
    dual of the KR cyclic module of K for (delta, sigma)."""
    rep = Report("psi duality for %s" % (k.name or "K"))
    f = k.field
    kr = kr_cyclic(k, mp, N)
    kd = dualize(k)
    mp_dual = ModularPair(delta=mp.sigma, sigma=mp.delta, convention="connes_moscovici")
    cm = cm_cocyclic(kd, mp_dual, N)
    dual_kr = kr.dualize()
    psi = [Mat.identity(f, k.dim ** n) for n in range(N + 1)]
    for n in range(N):
        for i in range(n + 2):
            lhs = psi[n + 1].mul(cm.cofaces[n][i])
            rhs = dual_kr.cofaces[n][i].mul(psi[n])
            rep.add(
                "psi delta_%d = d_%d^dual psi at degree %d" % (i, i, n),
                lhs.eq(rhs),
                _mat_witness(lhs, rhs),
            )
    for n in range(1, N + 1):
        for i in range(n):
            lhs = psi[n - 1].mul(cm.codegens[n][i])
            rhs = dual_kr.codegens[n][i].mul(psi[n])
            rep.add(
                "psi sigma_%d = s_%d^dual psi at degree %d" % (i, i, n),
                lhs.eq(rhs),
                _mat_witness(lhs, rhs),
            )
    for n in range(N + 1):
        lhs = psi[n].mul(cm.tau[n])
        rhs = dual_kr.tau[n].mul(psi[n])
        rep.add("psi tau_%d = t_%d^dual psi" % (n, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
    return rep


def modular_pair_duality(k: FinAlgebraData, mp: ModularPair) -> Report:
    """(delta, sigma) is in involution for K (KR) iff (ev_sigma, delta) is in
    involution for K^dual (CM); both truth values computed and compared."""
    rep = Report("modular pair duality")
    kr_rep = check_modular_pair_involution(
        k, ModularPair(mp.delta, mp.sigma, "khalkhali_rangipour")
    )
    kd = dualize(k)
    cm_rep = check_modular_pair_involution(
        kd, ModularPair(delta=mp.sigma, sigma=mp.delta, convention="connes_moscovici")
    )
    rep.add(
        "KR involution on K iff CM involution on the dual",
        kr_rep.ok == cm_rep.ok,
        "KR: %s, CM-dual: %s" % (kr_rep.ok, cm_rep.ok),
    )
    return rep


# ---------------------------------------------------------------------------
# cyclic operads on the (co)bar constructions and Hopf-cyclic cohomology


def cobar_cyclic_operad(h: FinAlgebraData, mp: ModularPair, N: int) -> OperadSlice:
    """Cobar(H) with the CM cyclic operators; a cyclic operad with
    multiplication when sigma = 1."""
    op = cobar_operad(h, N)
    mod = cm_cocyclic(h, mp, N)
    op.cyclic = [mod.tau[n] for n in range(N + 1)]
    op.name = "Cobar(%s) cyclic" % (h.name or "H")
    return op


def ext_bv_operad(k: FinAlgebraData, sigma: Vec, N: int) -> OperadSlice:
    """BarDual(K) with the cyclic operators t_n^dual for the pair (eps, sigma)."""
    mp = ModularPair(delta=Vec(k.field, k.dim, dict(k.counit.e)), sigma=sigma)
    op = dual_bar_operad(k, N)
    kr = kr_cyclic(k, mp, N)
    op.cyclic = [kr.t[n].transpose() for n in range(N + 1)]
    op.name = "BarDual(%s) cyclic" % (k.name or "K")
    return op


def _module_cyclic_cochains(mod: CosimplicialModule, max_degree: int):
    """Cyclic-invariant cochains ker((-1)^n tau_n - id) of a cocyclic module,
    with the restricted differential and its cohomology."""
    f = mod.field
    bases = []
    for n in range(mod.N + 1):
        lam = mod.tau[n].scale(f.sign(n))
        _, kernel, _ = rank_kernel_image(lam.sub(Mat.identity(f, mod.dims[n])))
        bases.append(kernel)
    rest = {}
    closed = []
    for n in range(mod.N):
        mat = Mat.from_cols(f, mod.dims[n + 1], bases[n + 1])
        cols = []
        ok = True
        for v in bases[n]:
            x = solve(mat, mod.differential(n).apply(v))
            if x is None:
                ok = False
                break
            cols.append(x)
        closed.append(ok)
        if ok:
            rest[n] = Mat.from_cols(f, len(bases[n + 1]), cols)
    betti = []
    for n in range(max_degree + 1):
        if n not in rest or (n >= 1 and n - 1 not in rest):
            betti.append(None)
            continue
        d_in = Mat.zeros(f, len(bases[n]), 0) if n == 0 else rest[n - 1]
        betti.append(subquotient(d_in, rest[n]).dim)
    return bases, rest, betti, closed


@dataclass
class HopfCyclicReport:
    convention: str
    identities: Report
    hc_betti: list
    homology_betti: list
    bv: object | None  # CochainReport on Cotor/Ext when the bracket applies
    checks: Report


def hopf_cyclic(h: FinAlgebraData, mp: ModularPair, max_degree: int, convention: str = "cm") -> HopfCyclicReport:
    """Hopf-cyclic cohomology of H for a modular pair in involution.

    convention 'cm': cocyclic module on the cobar side; BV/bracket tables on
    Cotor only when sigma = 1.  convention 'kr': cyclic module on the bar
    side; BV/bracket tables on Ext only when delta = eps.
    """
    f = h.field
    N = max_degree + 1
    checks = Report("hopf-cyclic %s" % (h.name or "H"))
    if convention == "cm":
        mod = cm_cocyclic(h, mp, N)
        identities = mod.check_cosimplicial()
        mod.check_cocyclic(identities)
        bases, rest, hc_betti, closed = _module_cyclic_cochains(mod, max_degree)
        checks.add("cyclic cochains closed under d", all(closed))
        hom = module_betti(mod, max_degree)
        bv = None
        if mp.sigma.eq(h.unit):
            if "bialgebra" in h.checked or _try_level(h, "bialgebra"):
                op = cobar_cyclic_operad(h, mp, N)
                cyc = check_cyclic(op)
                checks.add("cyclic operad axioms", cyc.ok,
                           None if cyc.ok else cyc.failures()[0].name)
                if cyc.ok and identities.ok:
                    bv = cohomology_ring(op, max_degree)
                    checks.add("BV table checks", bv.checks.ok,
                               None if bv.checks.ok else bv.checks.failures()[0].name)
            else:
                checks.add("bialgebra precondition for the bracket", False,
                           "not a bialgebra: bracket and BV table skipped")
        return HopfCyclicReport("cm", identities, hc_betti, hom, bv, checks)
    if convention == "kr":
        mod = kr_cyclic(h, mp, N)
        identities = mod.check_simplicial()
        mod.check_cyclic(identities)
        dual = mod.dualize()
        bases, rest, hc_betti, closed = _module_cyclic_cochains(dual, max_degree)
        checks.add("cyclic cochains closed under d", all(closed))
        hom = []
        for n in range(max_degree + 1):
            d_out = dual.differential(n)
            d_in = Mat.zeros(f, dual.dims[n], 0) if n == 0 else dual.differential(n - 1)
            hom.append(subquotient(d_in, d_out).dim)
        bv = None
        if mp.delta.eq(Vec(f, h.dim, dict(h.counit.e))):
            if "bialgebra" in h.checked or _try_level(h, "bialgebra"):
                op = ext_bv_operad(h, mp.sigma, N)
                cyc = check_cyclic(op)
                checks.add("cyclic operad axioms", cyc.ok,
                           None if cyc.ok else cyc.failures()[0].name)
                if cyc.ok and identities.ok:
                    bv = cohomology_ring(op, max_degree)
                    checks.add("BV table checks", bv.checks.ok,
                               None if bv.checks.ok else bv.checks.failures()[0].name)
            else:
                checks.add("bialgebra precondition for the bracket", False,
                           "not a bialgebra: bracket and BV table skipped")
        return HopfCyclicReport("kr", identities, hc_betti, hom, bv, checks)
    raise ValueError("convention must be 'cm' or 'kr'")


def _try_level(h: FinAlgebraData, level: str) -> bool:
    from opcohom.hopfcore import check_axioms

    return check_axioms(h, level).ok
