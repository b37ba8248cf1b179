import pytest

from opcohom.barcobar import (
    algebra_inclusion,
    bar_dual_module,
    cm_cocyclic,
    coalgebra_inclusion,
    cobar_cyclic_operad,
    cobar_module,
    cobar_operad,
    cotor_betti,
    dual_bar_operad,
    duality_maps,
    ext_betti,
    ext_bv_operad,
    hopf_cyclic,
    kr_cyclic,
    modular_pair_duality,
    psi_duality,
)
from opcohom.fixtures import builtin
from opcohom.hopfcore import ModularPair, check_axioms, dualize
from opcohom.linalg import Field, Mat, Vec, rank_kernel_image, solve
from opcohom.operad import bracket, check_cyclic, check_operad, cohomology, cosimplicial
from opcohom.report import StructureError
from oracles import derivations_into_scalars

Q = Field.Q()


def eps_of(h):
    return Vec(h.field, h.dim, dict(h.counit.e))


def test_cobar_operad_axioms(cache):
    for name in ("group_z2", "sweedler_h4"):
        c = cache.data(name)
        rep = cache.memo(("cobar-ax", name), lambda c=c: check_operad(cobar_operad(c, 4)))
        assert rep.ok, name


def test_cobar_arity_one_composition_is_multiplication(cache):
    c = cache.data("sweedler_h4")
    op = cobar_operad(c, 2)
    for i in range(c.dim):
        for j in range(c.dim):
            got = op.compose(1, 1, 1, Vec.basis(Q, c.dim, i), Vec.basis(Q, c.dim, j))
            assert got.eq(c.product(Vec.basis(Q, c.dim, i), Vec.basis(Q, c.dim, j)))


def test_cobar_identity_is_unit(cache):
    c = cache.data("group_z2")
    op = cobar_operad(c, 2)
    assert op.identity.eq(c.unit)
    assert op.mult.eq(c.unit.kron(c.unit))


def test_cotor1_exterior_is_primitives(cache):
    c = cache.data("exterior_x")
    mod = cobar_module(c, 2)
    h1 = cosimplicial_h1(mod)
    assert len(h1) == 1
    assert h1[0].to_dense() == [0, 1]  # span(x)


def cosimplicial_h1(mod):
    from opcohom.linalg import subquotient

    sq = subquotient(mod.differential(0), mod.differential(1))
    return sq.class_reps


def test_dual_bar_operad_axioms_and_identity(cache):
    a = cache.data("group_z2")
    rep = cache.memo(("bar-ax", "group_z2"), lambda: check_operad(dual_bar_operad(a, 4)))
    assert rep.ok
    op = dual_bar_operad(a, 2)
    # multiplication element is eps o mu; identity is eps
    assert op.identity.eq(eps_of(a))
    want = {}
    for col, cd in a.mult.c.items():
        acc = Q.zero
        for r, v in cd.items():
            acc += a.counit[r] * v
        if acc != 0:
            want[col] = acc
    assert op.mult.eq(Vec(Q, 4, want))
    # o_1 on O(1) is the multiplication of the dual algebra
    dual = dualize(a)
    for i in range(2):
        for j in range(2):
            got = op.compose(1, 1, 1, Vec.basis(Q, 2, i), Vec.basis(Q, 2, j))
            assert got.eq(dual.product(Vec.basis(Q, 2, i), Vec.basis(Q, 2, j)))


def test_ext_betti_values(cache):
    assert ext_betti(cache.data("exterior_x"), 3) == [1, 1, 1, 1]
    assert ext_betti(cache.data("dual_group_z2"), 3) == [1, 0, 0, 0]
    assert cotor_betti(cache.data("group_z2"), 3) == [1, 0, 0, 0]


def test_ext1_is_derivations_into_scalars(cache):
    a = cache.data("exterior_x")
    mod = bar_dual_module(a, 2)
    from opcohom.linalg import subquotient

    sq = subquotient(mod.differential(0), mod.differential(1))
    oracle = derivations_into_scalars(a)
    assert sq.dim == len(oracle) == 1


def test_inclusion_maps_exterior_degrees(cache):
    c = cache.data("group_z2")
    inc = cache.memo(("inc-c", "group_z2"), lambda: coalgebra_inclusion(c, 3))
    assert inc.checks.ok
    a = cache.data("group_z2")
    inca = cache.memo(("inc-a", "group_z2"), lambda: algebra_inclusion(a, 3))
    assert inca.checks.ok


def test_inclusion_induces_injective_map_exterior(cache):
    # rank of H^*(inclusion) equals dim Ext per degree for the bar side
    a = cache.data("exterior_x")
    # exterior is not a bialgebra over Q: the inclusion must refuse
    with pytest.raises(StructureError):
        algebra_inclusion(a, 3)


def test_inclusion_injective_and_bracket_preserved_z2(cache):
    a = cache.data("group_z2")
    inca = cache.memo(("inc-a", "group_z2"), lambda: algebra_inclusion(a, 3))
    src = inca.source
    tgt = inca.target
    hs_s = cohomology(src, 2)
    hs_t = cohomology(tgt, 2)
    for n in range(3):
        cols = [hs_t[n].project(inca.inclusion[n].apply(r)) for r in hs_s[n].class_reps]
        m = Mat.from_cols(Q, hs_t[n].dim, cols)
        rank, _, _ = rank_kernel_image(m)
        assert rank == hs_s[n].dim
    # bracket preserved on pairs of Ext classes (projection level)
    for m_ in range(1, 2):
        for n_ in range(1, 2):
            for ra in hs_s[m_].class_reps:
                for rb in hs_s[n_].class_reps:
                    lhs = hs_t[m_ + n_ - 1].project(
                        inca.inclusion[m_ + n_ - 1].apply(bracket(src, m_, n_, ra, rb))
                    )
                    rhs = hs_t[m_ + n_ - 1].project(
                        bracket(tgt, m_, n_, inca.inclusion[m_].apply(ra), inca.inclusion[n_].apply(rb))
                    )
                    assert lhs.eq(rhs)


def test_duality_maps_z2(cache):
    dm = cache.memo(("dual", "group_z2"), lambda: duality_maps(cache.data("group_z2"), 3))
    assert dm.checks.ok
    # Gamma sends the comultiplication element to the dual multiplication element
    c = cache.data("group_z2")
    from opcohom.hochschild import coend_operad, end_operad

    co = coend_operad(c, 2)
    en = end_operad(dualize(c), 2)
    assert dm.gamma[2].apply(co.mult).eq(en.mult)


def test_cm_cocyclic_identities_z2(cache):
    h = cache.data("group_z2")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    mod = cm_cocyclic(h, mp, 4)
    rep = mod.check_cosimplicial()
    mod.check_cocyclic(rep)
    assert rep.ok
    # tau_1 = S~(.) sigma as matrices
    from opcohom.hopfcore import twisted_antipode

    st = twisted_antipode(h, mp.delta)
    assert mod.tau[1].eq(h.right_mult(mp.sigma).mul(st))


def test_cm_with_sigma_one_is_standard_cobar(cache):
    h = cache.data("group_z3")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    mod = cm_cocyclic(h, mp, 3)
    plain = cobar_module(h, 3)
    for n in range(3):
        for i in range(n + 2):
            assert mod.cofaces[n][i].eq(plain.cofaces[n][i])


def test_cm_refuses_without_involution(cache):
    h = cache.data("sweedler_h4")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    with pytest.raises(StructureError):
        cm_cocyclic(h, mp, 2)


def test_kr_cyclic_identities(cache):
    h = cache.data("group_z2")
    g = Vec.basis(Q, 2, 1)
    mod = kr_cyclic(h, ModularPair(delta=eps_of(h), sigma=g), 4)
    rep = mod.check_simplicial()
    mod.check_cyclic(rep)
    assert rep.ok


def test_psi_duality_and_tau1(cache):
    h = cache.data("group_z2")
    for sigma in (h.unit, Vec.basis(Q, 2, 1)):
        mp = ModularPair(delta=eps_of(h), sigma=sigma)
        assert psi_duality(h, mp, 3).ok
    # tau_1 = t_1 dual
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    kr = kr_cyclic(h, mp, 2)
    cm = cm_cocyclic(dualize(h), ModularPair(delta=h.unit, sigma=eps_of(h)), 2)
    assert cm.tau[1].eq(kr.t[1].transpose())


def test_modular_pair_duality_sweedler(cache):
    h = cache.data("sweedler_h4")
    g = Vec.basis(Q, 4, 1)
    for mp in (
        ModularPair(delta=eps_of(h), sigma=g),
        ModularPair(delta=eps_of(h), sigma=h.unit),
    ):
        assert modular_pair_duality(h, mp).ok


def test_psi_duality_exterior_formal(cache):
    # the psi-commutation identities are formal dualities: they hold for the
    # exterior fixture even though it is not a bialgebra
    h = cache.data("exterior_x")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    assert psi_duality(h, mp, 3).ok


def test_cobar_cyclic_operad_z2(cache):
    h = cache.data("group_z2")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    op = cobar_cyclic_operad(h, mp, 4)
    assert check_cyclic(op).ok


def test_ext_bv_operad_z2(cache):
    h = cache.data("group_z2")
    op = ext_bv_operad(h, Vec.basis(Q, 2, 1), 4)
    assert check_cyclic(op).ok


def test_hopf_cyclic_cm_z2(cache):
    h = cache.data("group_z2")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    out = cache.memo(("hc", "group_z2"), lambda: hopf_cyclic(h, mp, 3, "cm"))
    assert out.identities.ok
    assert out.checks.ok
    assert out.homology_betti == [1, 0, 0, 0]
    assert out.bv is not None and out.bv.checks.ok


def test_hopf_cyclic_exterior_f2_full_bv(cache):
    # over F_2 the exterior algebra is a genuine Hopf algebra: the full
    # Cotor BV table exists and B restricted to degree 1 is eps (= 0 on x)
    h = cache.data("exterior_x", Field.Fp(2))
    mp = ModularPair(delta=Vec(h.field, 2, dict(h.counit.e)), sigma=h.unit)
    out = hopf_cyclic(h, mp, 3, "cm")
    assert out.identities.ok
    assert out.homology_betti == [1, 1, 1, 1]
    assert out.bv is not None and out.bv.checks.ok
    # degree-1 class is the primitive x; B of it is delta(x) = eps(x) = 0
    assert out.bv.b_table[1][0].is_zero()


def test_hopf_cyclic_exterior_char0_defect(cache):
    # over Q the exterior fixture is not a bialgebra: identities fail and the
    # engine refuses the bracket, reporting why
    h = cache.data("exterior_x")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    out = hopf_cyclic(h, mp, 2, "cm")
    assert not out.identities.ok
    assert out.bv is None
    gates = [c for c in out.checks.checks if c.name == "bialgebra precondition for the bracket"]
    assert gates and not gates[0].passed


@pytest.mark.xfail(
    reason="k[x]/(x^2) with primitive x is not a bialgebra in characteristic 0:"
    " Delta(x)^2 = 2 x tensor x while x^2 = 0, so the cocyclic identities"
    " cannot all hold",
    strict=True,
)
def test_hopf_cyclic_exterior_char0_literal(cache):
    h = cache.data("exterior_x")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    out = hopf_cyclic(h, mp, 2, "cm")
    assert out.identities.ok


def test_hopf_cyclic_kr_z3(cache):
    h = cache.data("group_z3")
    mp = ModularPair(delta=eps_of(h), sigma=h.unit)
    out = hopf_cyclic(h, mp, 2, "kr")
    assert out.identities.ok
    assert out.checks.ok
    assert out.homology_betti == [1, 0, 0]
