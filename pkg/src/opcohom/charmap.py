"""Module-algebra and comodule-algebra actions, the operad morphisms they
induce into the endomorphism operad, the trace-induced chain map gamma from
Hochschild chains to the bar construction, and the characteristic maps on
cohomology with their Lie/BV compatibility and injectivity checks."""

from __future__ import annotations

from dataclasses import dataclass

from opcohom.barcobar import (
    _delta_legs,
    _kron_sparse,
    _merge,
    _prod_basis,
    dual_bar_operad,
    ext_bv_operad,
    kr_cyclic,
)
from opcohom.cosimplicial import CyclicModule, _mat_witness
from opcohom.hopfcore import FinAlgebraData, FrobeniusData, ModularPair, gram_matrix
from opcohom.hochschild import chain_rotation, end_operad, frobenius_cyclic
from opcohom.linalg import (
    Mat,
    Vec,
    all_tuples,
    index_to_tuple,
    inverse,
    rank_kernel_image,
    solve,
    tuple_to_index,
)
from opcohom.operad import (
    bracket,
    check_operad_morphism,
    cohomology,
    cohomology_ring,
    connes_B,
    cup,
    differentials,
    lambda_subcomplex,
)
from opcohom.report import Report, StructureError


@dataclass
class ActionData:
    """A module action H tensor A -> A or a comodule coaction A -> A tensor H."""

    kind: str  # "module_action" | "comodule_coaction"
    map: Mat

    @staticmethod
    def regular_coaction(h: FinAlgebraData) -> "ActionData":
        """A = H coacting on itself by the comultiplication."""
        return ActionData(kind="comodule_coaction", map=h.comult)

    @staticmethod
    def trivial_action(h: FinAlgebraData, a: FinAlgebraData) -> "ActionData":
        """h . x = eps(h) x."""
        f = h.field
        ent = []
        for i, v in h.counit.e.items():
            for x in range(a.dim):
                ent.append((x, i * a.dim + x, v))
        return ActionData(kind="module_action", map=Mat.from_entries(f, a.dim, h.dim * a.dim, ent))

    @staticmethod
    def adjoint_action(h: FinAlgebraData) -> "ActionData":
        """H acting on itself by h . a = h^(1) a S(h^(2))."""
        f = h.field
        d = h.dim
        ent = []
        for i in range(d):
            for jk, c in h.comult.col_dict(i).items():
                j, k = divmod(jk, d)
                skv = h.antipode.column(k)
                for a in range(d):
                    left = _prod_basis(h, (j, a))
                    for sk, sv in skv.e.items():
                        out = h.product(left, Vec.basis(f, d, sk))
                        for r, v in out.e.items():
                            ent.append((r, i * d + a, f.mul(c, f.mul(sv, v))))
        return ActionData(kind="module_action", map=Mat.from_entries(f, d, d * d, _merge(f, ent)))


def check_action(h: FinAlgebraData, a: FinAlgebraData, act: ActionData) -> Report:
    """Module-algebra or comodule-algebra axioms, with witnesses."""
    f = h.field
    dH, dA = h.dim, a.dim
    rep = Report("%s axioms" % act.kind)
    IA = Mat.identity(f, dA)
    IH = Mat.identity(f, dH)
    if act.kind == "module_action":
        m = act.map
        if (m.rows, m.cols) != (dA, dH * dA):
            raise StructureError("module action must be %dx%d" % (dA, dH * dA))
        lhs = m.mul(h.mult.kron(IA))
        rhs = m.mul(IH.kron(m))
        rep.add("action is associative", lhs.eq(rhs), _mat_witness(lhs, rhs))
        unit_col = Mat.from_cols(f, dH, [h.unit])
        got = m.mul(unit_col.kron(IA))
        rep.add("unit of H acts as id", got.eq(IA), _mat_witness(got, IA))
        # h.(ab) = (h^(1).a)(h^(2).b)
        lhs = m.mul(IH.kron(a.mult))
        sw = _swap23(f, dH, dH, dA, dA)
        rhs = a.mult.mul(m.kron(m)).mul(sw).mul(h.comult.kron(IA).kron(IA))
        rep.add("action distributes over products", lhs.eq(rhs), _mat_witness(lhs, rhs))
        # h.1 = eps(h) 1
        unit_a = Mat.from_cols(f, dA, [a.unit])
        lhs = m.mul(IH.kron(unit_a))
        eps_row = Mat.from_entries(f, 1, dH, ((0, i, v) for i, v in h.counit.e.items()))
        rhs = unit_a.mul(eps_row)
        rep.add("action fixes the unit via the counit", lhs.eq(rhs), _mat_witness(lhs, rhs))
        return rep
    if act.kind == "comodule_coaction":
        rho = act.map
        if (rho.rows, rho.cols) != (dA * dH, dA):
            raise StructureError("coaction must be %dx%d" % (dA * dH, dA))
        lhs = (rho.kron(IH)).mul(rho)
        rhs = (IA.kron(h.comult)).mul(rho)
        rep.add("coaction is coassociative", lhs.eq(rhs), _mat_witness(lhs, rhs))
        eps_row = Mat.from_entries(f, 1, dH, ((0, i, v) for i, v in h.counit.e.items()))
        got = (IA.kron(eps_row)).mul(rho)
        rep.add("counit collapses the coaction", got.eq(IA), _mat_witness(got, IA))
        # rho(xy) = x^(1) y^(1) tensor x^(2) y^(2)
        lhs = rho.mul(a.mult)
        sw = _swap23(f, dA, dH, dA, dH)
        rhs = (a.mult.kron(h.mult)).mul(sw).mul(rho.kron(rho))
        rep.add("coaction is an algebra morphism", lhs.eq(rhs), _mat_witness(lhs, rhs))
        got = rho.apply(a.unit)
        want = a.unit.kron(h.unit)
        rep.add("coaction preserves the unit", got.eq(want))
        return rep
    raise ValueError("unknown action kind %r" % act.kind)


def _swap23(f, d1, d2, d3, d4):
    """(V1 V2 V3 V4) -> (V1 V3 V2 V4) exchanging the middle factors."""
    from opcohom.linalg import swap_matrix

    return Mat.identity(f, d1).kron(swap_matrix(f, d2, d3)).kron(Mat.identity(f, d4))


# ---------------------------------------------------------------------------
# the operad morphisms Phi


def phi_module(h: FinAlgebraData, a: FinAlgebraData, act: ActionData, max_arity: int):
    """Phi: Cobar(H)(n) = H^{tensor n} -> End(A)(n),
    (h_1 x ... x h_n) -> (a_1 x ... x a_n -> (h_1.a_1)...(h_n.a_n)).

    Returns (maps, source, target, checks)."""
    if act.kind != "module_action":
        raise StructureError("phi_module needs a module action")
    check_action(h, a, act).require("module algebra")
    from opcohom.barcobar import cobar_operad

    src = cobar_operad(h, max_arity)
    tgt = end_operad(a, max_arity)
    f = h.field
    dH, dA = h.dim, a.dim
    maps = []
    for n in range(max_arity + 1):
        ent = []
        for hvec in all_tuples(n, dH):
            col = tuple_to_index(hvec, dH)
            for avec in all_tuples(n, dA):
                factors = [
                    Vec(f, dA, dict(act.map.col_dict(hvec[k] * dA + avec[k])))
                    for k in range(n)
                ]
                out = a.unit if n == 0 else None
                if n == 0:
                    out = a.unit
                else:
                    out = factors[0]
                    for v in factors[1:]:
                        out = a.product(out, v)
                for r, vv in out.e.items():
                    ent.append((r * dA ** n + tuple_to_index(avec, dA), col, vv))
        maps.append(Mat.from_entries(f, tgt.dims[n], src.dims[n], _merge(f, ent)))
    checks = check_operad_morphism(src, tgt, maps)
    return maps, src, tgt, checks


def phi_comodule(h: FinAlgebraData, a: FinAlgebraData, act: ActionData, max_arity: int):
    """Phi: BarDual(H)(n) = (H^{tensor n})^dual -> End(A)(n),
    f -> (a_1 x ... x a_n -> a_1^(1)...a_n^(1) f(a_1^(2) x ... x a_n^(2))).

    Returns (maps, source, target, checks)."""
    if act.kind != "comodule_coaction":
        raise StructureError("phi_comodule needs a comodule coaction")
    check_action(h, a, act).require("comodule algebra")
    src = dual_bar_operad(h, max_arity)
    tgt = end_operad(a, max_arity)
    f = h.field
    dH, dA = h.dim, a.dim
    maps = []
    for n in range(max_arity + 1):
        ent = []
        for avec in all_tuples(n, dA):
            row_base = tuple_to_index(avec, dA)
            for xs, ys, coeff in _coaction_legs(act, a, h, avec):
                z = _prod_basis(a, xs)
                col = tuple_to_index(ys, dH)
                for r, zr in z.e.items():
                    ent.append((r * dA ** n + row_base, col, f.mul(coeff, zr)))
        maps.append(Mat.from_entries(f, tgt.dims[n], src.dims[n], _merge(f, ent)))
    checks = check_operad_morphism(src, tgt, maps)
    return maps, src, tgt, checks


def _coaction_legs(act: ActionData, a: FinAlgebraData, h: FinAlgebraData, tup):
    """Expand the coaction on each basis factor: yields (x, y, coeff) with
    x a tuple over A (first legs) and y a tuple over H (second legs)."""
    f = a.field
    dH = h.dim
    terms = [((), (), f.one)]
    for k in tup:
        col = act.map.col_dict(k)
        new = []
        for x, y, c in terms:
            for jk, v in col.items():
                j, kk = divmod(jk, dH)
                new.append((x + (j,), y + (kk,), f.mul(c, v)))
        terms = new
    return terms


# ---------------------------------------------------------------------------
# traces and the chain map gamma


@dataclass
class TraceData:
    """A trace tau on A with an invariance datum: the group-like sigma of H
    (comodule side) or the character delta (module side)."""

    tau: Vec  # covector on A
    invariance: Vec  # sigma in H, or delta covector on H
    kind: str  # "sigma" | "delta"

    def frobenius(self, a: FinAlgebraData) -> FrobeniusData:
        gram = gram_matrix(a, self.tau)
        if not gram.eq(gram.transpose()):
            raise StructureError("trace form is not symmetric")
        if inverse(gram) is None:
            raise StructureError("trace form is degenerate")
        return FrobeniusData(
            theta=gram, phi=self.tau, nakayama=Mat.identity(a.field, a.dim),
            symmetric=True, side="trace",
        )


def canonical_trace(h: FinAlgebraData, sigma: Vec) -> TraceData:
    """tau(a) = lambda(sigma^{-1} a) for lambda a right integral in the dual;
    sigma^{-1} = S(sigma) for a group-like sigma."""
    from opcohom.hopfcore import dualize, integrals

    lam = integrals(dualize(h), "right")[0]
    sig_inv = h.antipode.apply(sigma)
    lm = h.left_mult(sig_inv)
    tau = Vec(h.field, h.dim, {})
    ent = {}
    for i in range(h.dim):
        val = lam.pair(lm.apply(Vec.basis(h.field, h.dim, i)))
        if val != h.field.zero:
            ent[i] = val
    return TraceData(tau=Vec(h.field, h.dim, ent), invariance=sigma, kind="sigma")


def check_trace(a: FinAlgebraData, h: FinAlgebraData, act: ActionData, trace: TraceData) -> Report:
    """Non-degeneracy, the trace property, and sigma- or delta-invariance."""
    f = a.field
    rep = Report("trace checks")
    gram = gram_matrix(a, trace.tau)
    rep.add("trace property tau(xy) = tau(yx)", gram.eq(gram.transpose()))
    rep.add("trace form non-degenerate", inverse(gram) is not None)
    if trace.kind == "sigma":
        if act.kind != "comodule_coaction":
            raise StructureError("sigma-invariance needs a coaction")
        # tau(a^(1)) a^(2) = tau(a) sigma
        tau_row = Mat.from_entries(f, 1, a.dim, ((0, i, v) for i, v in trace.tau.e.items()))
        lhs = (tau_row.kron(Mat.identity(f, h.dim))).mul(act.map)
        sig_col = Mat.from_cols(f, h.dim, [trace.invariance])
        rhs = sig_col.mul(tau_row)
        rep.add("trace is sigma-invariant", lhs.eq(rhs), _mat_witness(lhs, rhs))
    else:
        if act.kind != "module_action":
            raise StructureError("delta-invariance needs a module action")
        # tau(h.a) = delta(h) tau(a)
        tau_row = Mat.from_entries(f, 1, a.dim, ((0, i, v) for i, v in trace.tau.e.items()))
        lhs = tau_row.mul(act.map)
        delta_row = Mat.from_entries(f, 1, h.dim, ((0, i, v) for i, v in trace.invariance.e.items()))
        rhs = delta_row.kron(tau_row)
        rep.add("trace is delta-invariant", lhs.eq(rhs), _mat_witness(lhs, rhs))
    return rep


def hochschild_cyclic_module(a: FinAlgebraData, N: int) -> CyclicModule:
    """C_*(A, A) as a cyclic module: X_n = A^{tensor (n+1)}, faces merge
    neighbours (the last one cyclically), degeneracies insert the unit,
    t rotates the last factor to the front."""
    f = a.field
    d = a.dim
    dims = [d ** (n + 1) for n in range(N + 1)]
    faces = {}
    degens = {}
    for n in range(1, N + 1):
        maps = []
        for i in range(n):
            ent = []
            for u in all_tuples(n + 1, d):
                u_idx = tuple_to_index(u, d)
                for r, v in a.mult.col_dict(u[i] * d + u[i + 1]).items():
                    w_idx = tuple_to_index(u[:i] + (r,) + u[i + 2:], d)
                    ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n - 1], dims[n], _merge(f, ent)))
        ent = []
        for u in all_tuples(n + 1, d):
            u_idx = tuple_to_index(u, d)
            for r, v in a.mult.col_dict(u[-1] * d + u[0]).items():
                w_idx = tuple_to_index((r,) + u[1:-1], d)
                ent.append((w_idx, u_idx, v))
        maps.append(Mat.from_entries(f, dims[n - 1], dims[n], _merge(f, ent)))
        faces[n] = maps
    for n in range(N):
        maps = []
        for i in range(n + 1):
            ent = []
            for u in all_tuples(n + 1, d):
                u_idx = tuple_to_index(u, d)
                for r, v in a.unit.e.items():
                    w_idx = tuple_to_index(u[: i + 1] + (r,) + u[i + 1:], d)
                    ent.append((w_idx, u_idx, v))
            maps.append(Mat.from_entries(f, dims[n + 1], dims[n], ent))
        degens[n] = maps
    t = {n: chain_rotation(f, d, n, signed=False) for n in range(N + 1)}
    return CyclicModule(field=f, N=N, dims=dims, faces=faces, degens=degens, t=t)


def gamma_chain(a: FinAlgebraData, h: FinAlgebraData, act: ActionData, trace: TraceData, N: int):
    """gamma_n: A^{tensor (n+1)} -> H^{tensor n},
    a_0 x ... x a_n -> tau(a_0 a_1^(1) ... a_n^(1)) (a_1^(2) x ... x a_n^(2)),
    checked to be a morphism of cyclic modules, with the factorization
    gamma^dual = J . Phi against the comodule operad morphism.

    Returns (gammas, checks)."""
    if act.kind != "comodule_coaction":
        raise StructureError("gamma needs a comodule coaction")
    rep = Report("gamma chain map")
    rep.extend(check_action(h, a, act))
    rep.extend(check_trace(a, h, act, trace))
    rep.require("gamma preconditions")
    f = a.field
    dA, dH = a.dim, h.dim
    gammas = []
    for n in range(N + 1):
        ent = []
        for u in all_tuples(n + 1, d := dA):
            col = tuple_to_index(u, dA)
            for xs, ys, coeff in _coaction_legs(act, a, h, u[1:]):
                z = _prod_basis(a, (u[0],) + xs)
                val = f.mul(coeff, trace.tau.pair(z))
                if val != f.zero:
                    ent.append((tuple_to_index(ys, dH), col, val))
        gammas.append(Mat.from_entries(f, dH ** n, dA ** (n + 1), _merge(f, ent)))
    src = hochschild_cyclic_module(a, N)
    mp = ModularPair(delta=Vec(f, dH, dict(h.counit.e)), sigma=trace.invariance)
    tgt = kr_cyclic(h, mp, N)
    for n in range(1, N + 1):
        for i in range(n + 1):
            lhs = gammas[n - 1].mul(src.faces[n][i])
            rhs = tgt.faces[n][i].mul(gammas[n])
            rep.add("gamma d_%d = d_%d gamma at degree %d" % (i, i, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
    for n in range(N):
        for i in range(n + 1):
            lhs = gammas[n + 1].mul(src.degens[n][i])
            rhs = tgt.degens[n][i].mul(gammas[n])
            rep.add("gamma s_%d = s_%d gamma at degree %d" % (i, i, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
    for n in range(N + 1):
        lhs = gammas[n].mul(src.t[n])
        rhs = tgt.t[n].mul(gammas[n])
        rep.add("gamma t = t gamma at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    # factorization gamma^dual = (gram tensor I) . Phi
    maps, _, _, phi_checks = phi_comodule(h, a, act, N)
    rep.extend(phi_checks)
    gram = gram_matrix(a, trace.tau)
    for n in range(N + 1):
        J = gram.kron(Mat.identity(f, dA ** n))
        lhs = gammas[n].transpose()
        rhs = J.mul(maps[n])
        rep.add("gamma^dual = Ad . C(A, Theta) . Phi at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    return gammas, rep


# ---------------------------------------------------------------------------
# characteristic maps on cohomology


@dataclass
class CharacteristicReport:
    checks: Report
    source_betti: list
    target_betti: list
    induced: dict  # degree -> Mat (source H classes -> target H classes)
    hc_induced: dict  # degree -> Mat on cyclic cohomology classes
    injective: dict  # degree -> bool (full column rank of hc_induced)


def characteristic_on_cohomology(
    a: FinAlgebraData,
    h: FinAlgebraData,
    act: ActionData,
    trace: TraceData,
    max_degree: int,
) -> CharacteristicReport:
    """Push the operad morphism Phi to cohomology and verify that it
    intertwines cup, bracket and the Connes coboundary; compute the induced
    map on cyclic cohomology and its injectivity per degree."""
    N = max_degree + 1
    f = a.field
    gammas, gchecks = gamma_chain(a, h, act, trace, N)
    rep = Report("characteristic map %s -> %s" % (h.name or "H", a.name or "A"))
    rep.extend(gchecks)
    maps, src, tgt, _ = phi_comodule(h, a, act, N)
    src_cyclic = ext_bv_operad(h, trace.invariance, N)
    tgt_cyclic = frobenius_cyclic(a, trace.frobenius(a), N)
    # Phi intertwines the cyclic operators at the chain level
    for n in range(N + 1):
        lhs = maps[n].mul(src_cyclic.cyclic[n])
        rhs = tgt_cyclic.cyclic[n].mul(maps[n])
        rep.add("Phi tau = tau Phi at degree %d" % n, lhs.eq(rhs), _mat_witness(lhs, rhs))
    hs_src = cohomology(src_cyclic, max_degree)
    hs_tgt = cohomology(tgt_cyclic, max_degree)
    src_betti = [x.dim for x in hs_src]
    tgt_betti = [x.dim for x in hs_tgt]
    induced = {}
    for n in range(max_degree + 1):
        cols = [hs_tgt[n].project(maps[n].apply(r)) for r in hs_src[n].class_reps]
        induced[n] = Mat.from_cols(f, hs_tgt[n].dim, cols)
    # compatibility with cup and bracket on class representatives
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            if m + n <= max_degree:
                for ra in hs_src[m].class_reps:
                    for rb in hs_src[n].class_reps:
                        lhs = hs_tgt[m + n].project(maps[m + n].apply(cup(src_cyclic, m, n, ra, rb)))
                        rhs = hs_tgt[m + n].project(
                            cup(tgt_cyclic, m, n, maps[m].apply(ra), maps[n].apply(rb))
                        )
                        rep.add("cup compatibility (deg %d,%d)" % (m, n), lhs.eq(rhs))
            if 0 <= m + n - 1 <= max_degree:
                for ra in hs_src[m].class_reps:
                    for rb in hs_src[n].class_reps:
                        lhs = hs_tgt[m + n - 1].project(
                            maps[m + n - 1].apply(bracket(src_cyclic, m, n, ra, rb))
                        )
                        rhs = hs_tgt[m + n - 1].project(
                            bracket(tgt_cyclic, m, n, maps[m].apply(ra), maps[n].apply(rb))
                        )
                        rep.add("bracket compatibility (deg %d,%d)" % (m, n), lhs.eq(rhs))
    # compatibility with B on class representatives
    b_src = connes_B(src_cyclic)
    b_tgt = connes_B(tgt_cyclic)
    for n in range(1, max_degree + 1):
        for ra in hs_src[n].class_reps:
            lhs = hs_tgt[n - 1].project(maps[n - 1].apply(b_src[n].apply(ra)))
            rhs = hs_tgt[n - 1].project(b_tgt[n].apply(maps[n].apply(ra)))
            rep.add("B compatibility at degree %d" % n, lhs.eq(rhs))
    # induced map on cyclic cohomology and injectivity
    ls = lambda_subcomplex(src_cyclic, max_degree)
    lt = lambda_subcomplex(tgt_cyclic, max_degree)
    hc_induced = {}
    injective = {}
    for n in range(max_degree + 1):
        if ls.betti[n] is None or lt.betti[n] is None:
            continue
        src_basis = Mat.from_cols(f, src_cyclic.dims[n], ls.bases[n])
        tgt_basis = Mat.from_cols(f, tgt_cyclic.dims[n], lt.bases[n])
        d_in = Mat.zeros(f, len(lt.bases[n]), 0) if n == 0 else lt.rest_d[n - 1]
        from opcohom.linalg import subquotient as _sq

        h_t = _sq(d_in, lt.rest_d[n]) if n in lt.rest_d else None
        d_in_s = Mat.zeros(f, len(ls.bases[n]), 0) if n == 0 else ls.rest_d[n - 1]
        h_s = _sq(d_in_s, ls.rest_d[n]) if n in ls.rest_d else None
        if h_s is None or h_t is None:
            continue
        cols = []
        ok = True
        for rrep in h_s.class_reps:
            amb = src_basis.apply(rrep)
            img = maps[n].apply(amb)
            coords = solve(tgt_basis, img)
            if coords is None:
                ok = False
                break
            cols.append(h_t.project(coords))
        rep.add("cyclic classes map to cyclic classes at degree %d" % n, ok)
        if not ok:
            continue
        mat = Mat.from_cols(f, h_t.dim, cols)
        hc_induced[n] = mat
        rank, _, _ = rank_kernel_image(mat)
        injective[n] = rank == h_s.dim
    return CharacteristicReport(
        checks=rep,
        source_betti=src_betti,
        target_betti=tgt_betti,
        induced=induced,
        hc_induced=hc_induced,
        injective=injective,
    )
