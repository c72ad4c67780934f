"""Vanishing toolkit: base change, augmentation contraction, the closed-form
homotopy, augmentation detection, the Maurer-Cartan criterion, and matrix
factorizations."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfkit.ainf import (CurvedDga, HomElement, check_algebra, check_module,
                          curved_dga_axioms, hom_differential, identity_hom,
                          module_coderivation, module_words)
from ainfkit.fixtures import (dga_rank2, module_from_classical, module_pqab,
                              trivial_algebra)
from ainfkit.graded import GradedSpace, Grading, Vector, sign
from ainfkit.report import UNDECIDED
from ainfkit.rings import (Integers, IntegersMod, PolynomialRing, Rationals,
                           RingHom, constants_hom, evaluation_hom,
                           inclusion_to_rationals, reduction_mod)
from ainfkit.vanish import (FOUND, NONEXISTENT, AugmentationMap,
                            MatrixFactorization, MaurerCartanProblem,
                            UnsupportedStructure, base_change,
                            check_curvature_commutator, check_gamma_agreement,
                            classical_curvature, curvature_insertions,
                            detect_augmentation, gamma_operator,
                            kp_contraction, mc_criterion, mc_evaluate,
                            mf_check, mf_module)

F7 = IntegersMod(7)


def _rank1_free_module(A):
    space = GradedSpace(A.ring, Grading(2), [("m", 0)])
    return module_from_classical(
        A, space, {}, {("m", "e"): Vector.basis(A.ring, "m")})


def _augmentation_for(algebra):
    c = classical_curvature(algebra)
    return AugmentationMap(algebra, {"e": algebra.ring.inv(c.terms["e"])})


# ---------------------------------------------------------------------------
# base change


def test_base_change_reduction_preserves_algebra_validity():
    A = dga_rank2(Integers(), 2, 3, 4).algebra
    assert check_algebra(A, 3).passed
    assert check_algebra(base_change(A, reduction_mod(7)), 3).passed


def test_base_change_preserves_module_validity():
    _, M = module_pqab(Integers(), 2, 1, 1, 3)
    assert check_module(M, 3).passed
    assert check_module(base_change(M, reduction_mod(5)), 3).passed
    assert check_module(base_change(M, inclusion_to_rationals()), 3).passed


def test_base_change_polynomial_evaluation_hits_curvature():
    # a curved rank-one algebra over k[x] with potential x^2: evaluation at
    # a point sends the curvature to its value there
    P = PolynomialRing(F7, ["x"])
    x2 = P.mul(P.variable("x"), P.variable("x"))
    A = trivial_algebra(P, x2)
    at0 = base_change(A, evaluation_hom(P, [0]))
    assert classical_curvature(at0).is_zero()
    at3 = base_change(A, evaluation_hom(P, [3]))
    assert classical_curvature(at3) == Vector.basis(F7, "e", 2)


def test_base_change_identity_map_is_identity():
    A = dga_rank2(F7, 2, 3, 4).algebra
    same = base_change(A, RingHom(F7, F7, lambda v: v, "id"))
    assert same.b.table == A.b.table
    assert same.space.gens == A.space.gens


def test_base_change_rejects_non_homomorphisms():
    A = dga_rank2(F7, 2, 3, 4).algebra
    with pytest.raises(UnsupportedStructure):
        base_change(A, "not a hom")
    with pytest.raises(UnsupportedStructure):
        base_change("not an algebra", reduction_mod(7))


# ---------------------------------------------------------------------------
# augmentation maps


def test_augmentation_requires_unit_value():
    D = dga_rank2(F7, 1, 2, 3)
    # l(c) = 3.l(e) must be 1, so l(e) = 5
    aug = AugmentationMap(D.algebra, {"e": 5})
    assert aug.ell(classical_curvature(D.algebra)) == 1
    with pytest.raises(ValueError):
        AugmentationMap(D.algebra, {"e": 1})


def test_augmentation_rejects_uncurved_algebras():
    D = dga_rank2(F7, 1, 2, 0)
    with pytest.raises(ValueError):
        AugmentationMap(D.algebra, {"e": 1})


def test_augmentation_rejects_odd_support():
    D = dga_rank2(F7, 1, 2, 3)
    with pytest.raises(ValueError):
        AugmentationMap(D.algebra, {"e": 5, "u": 1})


def test_lambda_carries_the_shifted_curvature_to_one():
    # lambda = -l o omega sends b_0(1) to +1
    D = dga_rank2(F7, 1, 2, 3)
    aug = AugmentationMap(D.algebra, {"e": 5})
    total = F7.zero
    for w, c in D.algebra.b.apply(()).terms.items():
        total = F7.add(total, F7.mul(c, aug.lam_letter(w[0])))
    assert total == F7.one


# ---------------------------------------------------------------------------
# the contraction


def test_curvature_commutator_is_the_identity():
    # [B_0, H] = 1 (.) 1^(x) on every word: the first display of the proof
    D, M = module_pqab(F7, 1, 1, 1, 2)
    aug = _augmentation_for(D.algebra)
    assert check_curvature_commutator(M, aug, 3).passed


def test_contraction_on_the_scalar_curved_algebra():
    # A = S = k with m_0(1) = e and l = id: the rank-one free module
    # contracts; the low-weight values of G are computed by hand
    A = trivial_algebra(F7, 1)
    M = _rank1_free_module(A)
    aug = AugmentationMap(A, {"e": 1})
    G, rep = kp_contraction(M, aug, 3)
    assert rep.passed
    assert G(Vector.basis(F7, ("m", ()))).is_zero()
    # H consumes the single letter: lambda(eta) = -1
    assert G(Vector.basis(F7, ("m", ("e",)))) == \
        Vector.basis(F7, ("m", ()), 6)


@settings(max_examples=8, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6),
       st.integers(1, 6))
def test_contraction_identity_on_curved_module_family(p, q, a, b):
    if (a * b) % 7 == 0:
        return
    D, M = module_pqab(F7, p, q, a, b)
    aug = _augmentation_for(D.algebra)
    _, rep = kp_contraction(M, aug, 3)
    assert rep.passed, rep.witness


def test_contraction_rejects_wrong_functional():
    D, M = module_pqab(F7, 1, 1, 1, 2)
    bad = AugmentationMap(D.algebra, {"e": 1}, check_unit=False)
    with pytest.raises(ValueError):
        kp_contraction(M, bad, 2)


# ---------------------------------------------------------------------------
# the closed-form homotopy


def test_gamma_arity_two_and_odd_vanishing():
    D, M = module_pqab(F7, 1, 1, 2, 2)   # differential-free curved algebra
    aug = _augmentation_for(D.algebra)
    gamma = gamma_operator(D, M, aug)
    # gamma_2(m (x) f) = m.l(f), transported with the global sign
    le = aug.ell_letter("e")
    assert gamma(("x", ("e",))) == Vector.basis(F7, "x", F7.neg(le))
    assert gamma(("y", ("e",))) == Vector.basis(F7, "y", le)
    assert gamma(("x", ("u",))).is_zero()   # l vanishes on the odd part
    # even letter counts (odd indices) vanish identically
    assert gamma(("x", ())).is_zero()
    assert gamma(("x", ("u", "u"))).is_zero()
    assert gamma(("y", ("u", "e"))).is_zero()


def test_gamma_agrees_with_the_series_contraction():
    for params in [(1, 1, 2, 2), (2, 3, 3, 1), (3, 1, 1, 5)]:
        D, M = module_pqab(F7, *params)
        aug = _augmentation_for(D.algebra)
        rep = check_gamma_agreement(D, M, aug, 5)
        assert rep.passed, (params, rep.witness)


def test_gamma_refuses_algebras_with_a_differential():
    D, M = module_pqab(F7, 1, 1, 1, 2)   # du != 0 here
    aug = _augmentation_for(D.algebra)
    with pytest.raises(UnsupportedStructure):
        gamma_operator(D, M, aug)


def test_gamma_pair_factor_oracle():
    # on u (x) u the pair factor is L(u (x) u) = l(u^2).e = w.l(e).e
    D, M = module_pqab(F7, 2, 3, 3, 1)   # w = pq = 6, delta = pb - qa = 0
    aug = _augmentation_for(D.algebra)
    gamma = gamma_operator(D, M, aug)
    le = aug.ell_letter("e")
    want = F7.mul(F7.neg(le), F7.mul(6, le))   # -(l(e)) . (w.l(e)) on x
    assert gamma(("x", ("e", "u", "u"))) == Vector.basis(F7, "x", want)


# ---------------------------------------------------------------------------
# augmentation detection


def test_detect_polynomial_potential_is_obstructed():
    # rank one over k[x] with W = x^2: x^2 is not a unit, so no functional
    # sends the curvature to 1 -- matrix factorizations survive
    P = PolynomialRing(F7, ["x"])
    x2 = P.mul(P.variable("x"), P.variable("x"))
    res = detect_augmentation(trivial_algebra(P, x2))
    assert res.status == NONEXISTENT


def test_detect_scalar_curved_line():
    res = detect_augmentation(trivial_algebra(F7, 1))
    assert res.status == FOUND
    assert res.augmentation.values == {"e": 1}


def test_detect_integer_two_is_not_a_unit():
    res = detect_augmentation(trivial_algebra(Integers(), 2))
    assert res.status == NONEXISTENT


def test_detect_uncurved_has_no_augmentation():
    res = detect_augmentation(dga_rank2(F7, 1, 2, 0).algebra)
    assert res.status == NONEXISTENT


def test_detect_found_map_contracts_modules():
    D, M = module_pqab(F7, 2, 1, 3, 2)
    res = detect_augmentation(D.algebra)
    assert res.status == FOUND
    _, rep = kp_contraction(M, res.augmentation, 3)
    assert rep.passed


def test_detect_higher_rank_polynomial_is_undecided():
    P = PolynomialRing(F7, ["x"])
    x2 = P.mul(P.variable("x"), P.variable("x"))
    res = detect_augmentation(dga_rank2(P, 1, 0, x2).algebra)
    assert res.status == UNDECIDED


def test_detect_integer_unit_curvature():
    res = detect_augmentation(trivial_algebra(Integers(), -1))
    assert res.status == FOUND
    assert res.augmentation.ell(classical_curvature(
        trivial_algebra(Integers(), -1))) == 1


# ---------------------------------------------------------------------------
# the Maurer-Cartan criterion


def _unit_hitting_dga():
    """Two generators e (even) and a (odd) with da = e and a^2 = 0."""
    space = GradedSpace(F7, Grading(2), [("e", 0), ("a", 1)])
    prod = {("e", "e"): Vector.basis(F7, "e"),
            ("e", "a"): Vector.basis(F7, "a"),
            ("a", "e"): Vector.basis(F7, "a"),
            ("a", "a"): Vector.zero(F7)}
    D = CurvedDga(space, "e", Vector.zero(F7),
                  {"a": Vector.basis(F7, "e")}, prod)
    assert curved_dga_axioms(D, 3).passed
    return D


def test_mc_rejects_curved_input():
    with pytest.raises(ValueError):
        MaurerCartanProblem(dga_rank2(F7, 1, 2, 3).algebra)


def test_mc_evaluate_zero_argument():
    P = MaurerCartanProblem(dga_rank2(F7, 2, 3, 0).algebra)
    assert mc_evaluate(P, Vector.zero(F7)).is_zero()


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_mc_evaluate_dga_closed_form(w, delta, t):
    # for a dga, mc(t.u) = t.delta.e - t^2.w.e: the binomial signs are
    # (-1)^{C(1,2)} = +1 and (-1)^{C(2,2)} = -1
    P = MaurerCartanProblem(dga_rank2(F7, w, delta, 0).algebra)
    got = mc_evaluate(P, Vector.basis(F7, "u", t) if t else Vector.zero(F7))
    want = (t * delta - t * t * w) % 7
    assert got == (Vector.basis(F7, "e", want) if want else Vector.zero(F7))


def test_mc_dual_numbers_linearization():
    # over S[eps]/eps^2 the eps-linear part of mc(eps.a) is m_1(a); this
    # pins the sign convention of the series against the m-b dictionary
    Pe = PolynomialRing(F7, ["eps"])
    eps = Pe.variable("eps")
    A = base_change(dga_rank2(F7, 2, 3, 0).algebra, constants_hom(Pe))
    P = MaurerCartanProblem(A)
    val = mc_evaluate(P, Vector.basis(Pe, "u", eps))
    truncated = Vector(Pe, {w: Pe.truncate_degree(c, "eps", 2)
                            for w, c in val.terms.items()})
    assert truncated == Vector.basis(Pe, "e", Pe.mul(eps, Pe.constant(3)))


def test_mc_criterion_vanishes_with_witness():
    D = _unit_hitting_dga()
    res = mc_criterion(MaurerCartanProblem(D.algebra))
    assert res.status == "Vanishes"
    assert res.witness == Vector.basis(F7, "a")


def test_mc_criterion_does_not_vanish_without_differential():
    res = mc_criterion(MaurerCartanProblem(dga_rank2(F7, 2, 0, 0).algebra))
    assert res.status == "DoesNotVanish"


def test_mc_criterion_polynomial_is_undecided():
    P = PolynomialRing(F7, ["x"])
    res = mc_criterion(MaurerCartanProblem(dga_rank2(P, 2, 3, 0).algebra))
    assert res.status == UNDECIDED


def test_mc_vanishing_exhibits_a_contracting_boundary():
    # when m_1(a) = e, right multiplication by a (with the parity sign)
    # bounds the identity of the rank-one free module
    D = _unit_hitting_dga()
    space = D.space
    M = module_from_classical(
        D.algebra, space, {"a": Vector.basis(F7, "e")},
        {(m, x): D.mul(D.element(m), D.element(x))
         for m in space.names for x in space.names})
    assert check_module(M, 3).passed
    psi = HomElement(M, M, -1, {
        (m, ()): D.mul(D.element(m), D.element("a")).scaled(
            F7.from_int(sign(space.parity(m))))
        for m in space.names}, 3)
    assert hom_differential(psi, 3).table == identity_hom(M, 3).table


# ---------------------------------------------------------------------------
# matrix factorizations


QX = PolynomialRing(Rationals(), ["x"])
X = QX.variable("x")
X2 = QX.mul(X, X)


def test_mf_symmetric_factorization_passes():
    F = MatrixFactorization(QX, 1, 1, [[QX.zero, X], [X, QX.zero]], X2)
    rep = mf_check(F)
    assert rep.passed
    assert rep.details["square_identity"] == "PASS"
    assert rep.details["module_axioms"] == "PASS"
    assert rep.details["paths_agree"] is True


def test_mf_asymmetric_factorization_passes():
    F = MatrixFactorization(QX, 1, 1, [[QX.zero, QX.one], [X2, QX.zero]], X2)
    assert mf_check(F).passed


def test_mf_mutant_fails_with_entry_witness():
    F = MatrixFactorization(QX, 1, 1, [[QX.zero, X], [QX.one, QX.zero]], X2)
    rep = mf_check(F)
    assert not rep.passed
    assert rep.witness[0][0] == "entry"
    assert rep.details["square_identity"] == "FAIL"
    assert rep.details["module_axioms"] == "FAIL"
    assert rep.details["paths_agree"] is True


def test_mf_parity_preserving_entry_is_rejected():
    F = MatrixFactorization(QX, 1, 1, [[X, QX.zero], [QX.zero, X]], X2)
    rep = mf_check(F)
    assert not rep.passed
    assert rep.details["odd_operator"] == "FAIL"


def test_mf_companion_module_axioms_directly():
    # the companion module lives over the rank-one algebra with curvature
    # -W, so d^2 m = -m.c = W.m matches the matrix identity
    F = MatrixFactorization(F7, 1, 1, [[0, 1], [3, 0]], 3)
    M = mf_module(F)
    assert classical_curvature(M.algebra) == Vector.basis(F7, "e", 4)
    assert check_module(M, 3).passed
    assert mf_check(F).passed


def test_mf_rank_two_blocks():
    # W = x^2 with 2x2 blocks A = x.I, B = x.I
    z, o = QX.zero, X
    d = [[z, z, o, z],
         [z, z, z, o],
         [o, z, z, z],
         [z, o, z, z]]
    F = MatrixFactorization(QX, 2, 2, d, X2)
    assert mf_check(F).passed
