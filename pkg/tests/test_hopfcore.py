import pytest

from opcohom.fixtures import builtin
from opcohom.hopfcore import (
    ModularPair,
    check_axioms,
    check_modular_pair_involution,
    cm_tau1,
    convolution,
    convolution_unit,
    distinguished_grouplike,
    dualize,
    find_group_likes,
    frobenius_from_integral,
    gram_matrix,
    inner_square_witness,
    integrals,
    is_character,
    is_group_like,
    is_symmetric_frobenius,
    is_unimodular,
    kr_t1,
    nakayama,
    twisted_antipode,
)
from opcohom.linalg import Field, Mat, Vec, outer
from opcohom.report import StructureError

Q = Field.Q()


def test_group_z2_all_axioms(cache):
    rep = check_axioms(cache.fixture("group_z2").data, "hopf")
    assert rep.ok


def test_sweedler_all_axioms(cache):
    rep = check_axioms(cache.fixture("sweedler_h4").data, "hopf")
    assert rep.ok


def test_corrupted_mult_fails_with_witness(cache):
    import copy

    a = builtin("sweedler_h4").data
    bad = copy.deepcopy(a)
    bad.checked = set()
    # flip the sign of x*g: (x g) g = x must then disagree with x (g g)
    col_xg = 2 * 4 + 1
    ent = [
        (r, c, v) for c, cd in a.mult.c.items() for r, v in cd.items() if c != col_xg
    ] + [(3, col_xg, Q.one)]
    bad.mult = Mat.from_entries(Q, 4, 16, ent)
    rep = check_axioms(bad, "algebra")
    assert not rep.ok
    fail = rep.failures()[0]
    assert fail.name == "associativity"
    assert fail.witness


def test_dualize_involution(cache):
    for name in ("group_z2", "sweedler_h4", "group_s3"):
        h = cache.fixture(name).data
        dd = dualize(dualize(h))
        assert dd.mult.eq(h.mult)
        assert dd.comult.eq(h.comult)
        assert dd.antipode.eq(h.antipode)
        assert dd.unit.eq(h.unit)


def test_dual_of_z2_commutative_cocommutative(cache):
    h = dualize(cache.fixture("group_z2").data)
    assert check_axioms(h, "hopf").ok
    from opcohom.linalg import swap_matrix

    sw = swap_matrix(Q, 2, 2)
    assert h.mult.eq(h.mult.mul(sw))
    assert h.comult.eq(sw.mul(h.comult))


def test_dual_of_sweedler_is_hopf(cache):
    assert check_axioms(dualize(cache.fixture("sweedler_h4").data), "hopf").ok


def test_convolution_unit_and_antipode(cache):
    import random

    for name in ("group_z2", "sweedler_h4"):
        h = cache.data(name)
        d = h.dim
        unit = convolution_unit(h)
        rng = random.Random(1)
        fm = Mat.from_rows(Q, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        assert convolution(unit, fm, h).eq(fm)
        assert convolution(fm, unit, h).eq(fm)
        assert convolution(h.antipode, Mat.identity(Q, d), h).eq(unit)
        # associativity on random triples
        gm = Mat.from_rows(Q, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        km = Mat.from_rows(Q, [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
        lhs = convolution(convolution(fm, gm, h), km, h)
        rhs = convolution(fm, convolution(gm, km, h), h)
        assert lhs.eq(rhs)


def test_group_likes(cache):
    h = cache.data("group_z2")
    assert is_group_like(h, h.unit)
    g = Vec.basis(Q, 2, 1)
    assert is_group_like(h, g)
    assert is_character(h, Vec(Q, 2, dict(h.counit.e)))
    found = find_group_likes(h, candidates=[Vec.basis(Q, 2, i) for i in range(2)])
    assert len(found) == 2


def test_group_likes_exhaustive_F3():
    h = builtin("group_z2", Field.Fp(3)).data
    found = find_group_likes(h)
    assert len(found) == 2
    ext = builtin("exterior_x", Field.Fp(3)).data
    founds = find_group_likes(ext)
    assert len(founds) == 1  # only the unit


def test_group_like_budget():
    h = builtin("group_s3", Field.Fp(5)).data
    with pytest.raises(StructureError):
        find_group_likes(h, budget=10)


def test_integrals_z2(cache):
    h = cache.data("group_z2")
    left = integrals(h, "left")
    right = integrals(h, "right")
    assert len(left) == len(right) == 1
    assert left[0].to_dense() == [1, 1]  # 1 + g
    assert right[0].eq(left[0])


def test_integrals_exterior(cache):
    h = cache.data("exterior_x")
    left = integrals(h, "left")
    right = integrals(h, "right")
    assert len(left) == len(right) == 1
    assert left[0].to_dense() == [0, 1]  # x
    assert right[0].eq(left[0])


def test_integrals_sweedler_left_ne_right(cache):
    h = cache.data("sweedler_h4")
    left = integrals(h, "left")
    right = integrals(h, "right")
    assert len(left) == len(right) == 1
    assert left[0].to_dense() == [0, 0, 1, 1]  # x + gx
    assert right[0].to_dense() == [0, 0, 1, -1]  # x - gx
    assert not is_unimodular(h)


def test_integral_spaces_dimension_one_for_hopf_fixtures(cache):
    for name in ("trivial", "group_z2", "group_z3", "group_s3", "dual_group_z2",
                 "dual_group_s3", "sweedler_h4", "exterior_x"):
        h = cache.data(name)
        assert len(integrals(h, "left")) == 1
        assert len(integrals(h, "right")) == 1


def test_unimodular_and_distinguished(cache):
    s3 = cache.data("group_s3")
    assert is_unimodular(s3)
    z2 = cache.data("group_z2")
    alpha = distinguished_grouplike(z2)
    assert alpha.eq(Vec(Q, 2, dict(z2.counit.e)))
    sw = cache.data("sweedler_h4")
    alpha_sw = distinguished_grouplike(sw)
    assert is_character(sw, alpha_sw)
    assert alpha_sw.to_dense() == [1, -1, 0, 0]


def test_frobenius_z2_theta_permutes_to_inverses(cache):
    h = cache.data("group_z2")
    lam = integrals(dualize(h), "right")[0]
    frob = frobenius_from_integral(h, lam, "right")
    assert frob.symmetric
    # Theta(g) = delta_{g^{-1}}: with g^{-1} = g the matrix is a permutation
    assert frob.theta.entry(0, 0) != Q.zero
    assert frob.theta.entry(1, 1) != Q.zero
    assert frob.theta.entry(0, 1) == Q.zero


def test_frobenius_exterior_symmetric(cache):
    h = cache.data("exterior_x")
    lam = integrals(dualize(h), "right")[0]
    frob = frobenius_from_integral(h, lam, "right")
    assert frob.symmetric
    assert nakayama(frob, h).eq(Mat.identity(Q, 2))


def test_frobenius_rejects_non_integral(cache):
    h = cache.data("group_z2")
    with pytest.raises(StructureError):
        frobenius_from_integral(h, Vec.basis(Q, 2, 1), "right")


def test_sweedler_frobenius_not_symmetric_nakayama_formula(cache):
    h = cache.data("sweedler_h4")
    lam = integrals(dualize(h), "right")[0]
    frob = frobenius_from_integral(h, lam, "right")
    assert not frob.symmetric
    sig = nakayama(frob, h)
    # sigma(b) = S^2(b <- alpha) entrywise
    alpha = distinguished_grouplike(h)
    s2 = h.antipode.mul(h.antipode)
    ent = []
    for i in range(4):
        db = h.comult.apply(Vec.basis(Q, 4, i))
        for jk, v in db.e.items():
            j, k = divmod(jk, 4)
            c = Q.mul(alpha[j], v)
            if c != Q.zero:
                ent.append((k, i, c))
    harpoon = Mat.from_entries(Q, 4, 4, ent)
    assert sig.eq(s2.mul(harpoon))


def test_unimodular_nakayama_is_antipode_squared(cache):
    # for a unimodular Hopf algebra the Nakayama of a right dual-integral is S^2
    for name in ("group_z2", "group_s3", "dual_group_z2"):
        h = cache.data(name)
        assert is_unimodular(h)
        lam = integrals(dualize(h), "right")[0]
        frob = frobenius_from_integral(h, lam, "right")
        s2 = h.antipode.mul(h.antipode)
        assert nakayama(frob, h).eq(s2)


def test_symmetric_iff_unimodular_and_inner_square(cache):
    for name in ("trivial", "group_z2", "group_z3", "group_s3",
                 "dual_group_z2", "dual_group_z3", "dual_group_s3", "sweedler_h4"):
        h = cache.data(name)
        sym = is_symmetric_frobenius(h)
        uni = is_unimodular(h)
        u = inner_square_witness(h)
        assert sym == (uni and u is not None), name
        if u is not None:
            # witness identity S^2(x) u = u x on all basis vectors
            s2 = h.antipode.mul(h.antipode)
            for i in range(h.dim):
                e = Vec.basis(h.field, h.dim, i)
                assert h.product(s2.apply(e), u).eq(h.product(u, e))


def test_symmetric_witness_form_for_unimodular_fixtures(cache):
    # beta(h, k) = lambda(u h k) is symmetric and non-degenerate when H is
    # unimodular and S^2(x) = u x u^{-1}
    from opcohom.linalg import inverse

    for name in ("group_z2", "group_s3", "dual_group_s3"):
        h = cache.data(name)
        assert is_unimodular(h)
        u = inner_square_witness(h)
        assert u is not None
        lam = integrals(dualize(h), "right")[0]
        f = h.field
        d = h.dim
        beta = Mat.from_entries(
            f, d, d,
            ((i, j, v) for i in range(d) for j in range(d)
             for v in [lam.pair(h.product_all([u, Vec.basis(f, d, i), Vec.basis(f, d, j)]))]
             if v != f.zero),
        )
        assert beta.eq(beta.transpose()), name
        assert inverse(beta) is not None, name


def test_twisted_antipode_with_counit_is_antipode(cache):
    for name in ("group_z2", "sweedler_h4"):
        h = cache.data(name)
        eps = Vec(Q, h.dim, dict(h.counit.e))
        assert twisted_antipode(h, eps).eq(h.antipode)


def test_twisted_antipode_formula_sweedler(cache):
    h = cache.data("sweedler_h4")
    alpha = distinguished_grouplike(h)
    st = twisted_antipode(h, alpha)
    # S~(h) = alpha(h^(1)) S(h^(2)) entrywise
    for i in range(4):
        db = h.comult.apply(Vec.basis(Q, 4, i))
        acc = Vec.zero(Q, 4)
        for jk, v in db.e.items():
            j, k = divmod(jk, 4)
            acc = acc.add(h.antipode.apply(Vec.basis(Q, 4, k)).scale(Q.mul(alpha[j], v)))
        assert st.apply(Vec.basis(Q, 4, i)).eq(acc)


def test_modular_pair_involution_group(cache):
    h = cache.data("group_z2")
    eps = Vec(Q, 2, dict(h.counit.e))
    mp = ModularPair(delta=eps, sigma=h.unit, convention="connes_moscovici")
    assert check_modular_pair_involution(h, mp).ok
    mp_kr = ModularPair(delta=eps, sigma=Vec.basis(Q, 2, 1), convention="khalkhali_rangipour")
    assert check_modular_pair_involution(h, mp_kr).ok


def test_modular_pair_failure_witness(cache):
    h = cache.data("sweedler_h4")
    eps = Vec(Q, 4, dict(h.counit.e))
    # (eps, 1) is NOT in involution for Sweedler: S~ = S and S^2 != id
    mp = ModularPair(delta=eps, sigma=h.unit, convention="connes_moscovici")
    rep = check_modular_pair_involution(h, mp)
    assert not rep.ok
    assert rep.failures()[0].witness


def test_cm_tau1_equals_twisted_antipode_times_sigma(cache):
    h = cache.data("sweedler_h4")
    eps = Vec(Q, 4, dict(h.counit.e))
    g = Vec.basis(Q, 4, 1)
    t = cm_tau1(h, ModularPair(delta=eps, sigma=g))
    st = twisted_antipode(h, eps)
    assert t.eq(h.right_mult(g).mul(st))
    # (eps, g) is in involution in the CM sense
    assert t.mul(t).eq(Mat.identity(Q, 4))


def test_kr_t1_formula(cache):
    h = cache.data("group_z2")
    eps = Vec(Q, 2, dict(h.counit.e))
    g = Vec.basis(Q, 2, 1)
    t = kr_t1(h, ModularPair(delta=eps, sigma=g))
    conv = convolution(h.antipode, outer(h.unit, eps), h)
    assert t.eq(h.left_mult(g).mul(conv))


def test_symmetric_augmented_implies_unimodular(cache):
    for name in ("trivial", "group_z2", "group_z3", "group_s3",
                 "dual_group_z2", "dual_group_z3", "dual_group_s3", "sweedler_h4"):
        h = cache.data(name)
        if is_symmetric_frobenius(h):
            assert is_unimodular(h), name
