"""Twisted Fourier-series algebra: products, involution, isomorphisms."""
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.coefficients import ExactComplex
from ncdeform.cohomology import (Bicharacter, CohomologyClass, Multiplier,
                                 antisymmetrize, cohomology_witness,
                                 standard_bicharacter)
from ncdeform.groups import CirclePoint, FgAbelianGroup
from ncdeform.twisted_algebra import (AlgebraElement, StarContext,
                                      coboundary_isomorphism,
                                      commutation_defect,
                                      deformation_composition_check,
                                      element_residual,
                                      glnz_paired_source_bicharacter,
                                      glnz_pullback_on_elements, involution,
                                      seminorm, star)

G2 = FgAbelianGroup(2)


def ctx_upper(theta, group=G2, convention="upper"):
    return StarContext(standard_bicharacter(
        group, [[0, theta] + [0] * (group.ngens - 2)] +
               [[0] * group.ngens for _ in range(group.ngens - 1)], convention))


def gen(coords, coeff=1, group=G2):
    return AlgebraElement.generator(group, coords, coeff)


def random_exact_element(rng, group=G2, terms=4, bound=3, dim=1):
    out = AlgebraElement.zero(group, dim)
    for _ in range(terms):
        c = ExactComplex.from_phase(Fraction(rng.randrange(12), 12),
                                    Fraction(rng.randint(-3, 3)),
                                    Fraction(rng.randint(-3, 3)))
        if dim == 1:
            out = out + AlgebraElement.generator(
                group, group.random_element(rng, bound).coords, c)
        else:
            block = [[c if (i + j) % 2 == 0 else ExactComplex.zero()
                      for j in range(dim)] for i in range(dim)]
            out = out + AlgebraElement(
                group, {group.random_element(rng, bound): block}, dim)
    return out


# --------------------------------------------------------------------------
# Pinned product values.


def test_generator_product_picks_up_the_angle():
    ctx = ctx_upper(Fraction(1, 3))
    lhs = star(gen((1, 0)), gen((0, 1)), ctx)
    want = gen((1, 1), ExactComplex.from_phase(Fraction(-1, 3)))
    assert element_residual(lhs, want) == 0.0
    # opposite order is untwisted for the upper convention
    rhs = star(gen((0, 1)), gen((1, 0)), ctx)
    assert element_residual(rhs, gen((1, 1))) == 0.0


def test_unit_is_neutral():
    ctx = ctx_upper(Fraction(2, 5))
    one = AlgebraElement.unit(G2)
    a = random_exact_element(random.Random(7))
    assert element_residual(star(one, a, ctx), a) == 0.0
    assert element_residual(star(a, one, ctx), a) == 0.0


def test_commutation_defect_pins_the_class():
    ctx = ctx_upper(Fraction(1, 3))
    cls = antisymmetrize(ctx.multiplier)
    a, b = gen((1, 0)), gen((0, 1))
    assert commutation_defect(a, b, ctx, cls) == 0.0
    doubled = CohomologyClass.from_upper_angles(G2, {(0, 1): Fraction(2, 3)})
    assert commutation_defect(a, b, ctx, doubled) > 0.5


def test_zero_angle_is_the_commutative_algebra():
    ctx = StarContext.zero(G2)
    rng = random.Random(1)
    a, b = random_exact_element(rng), random_exact_element(rng)
    assert element_residual(star(a, b, ctx), star(b, a, ctx)) == 0.0


# --------------------------------------------------------------------------
# Algebra laws, exact and float.


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4, 5, 6, 12]))
def test_associativity_exact(seed, den):
    rng = random.Random(seed)
    ctx = ctx_upper(Fraction(rng.randrange(1, den), den))
    a = random_exact_element(rng)
    b = random_exact_element(rng)
    c = random_exact_element(rng)
    lhs = star(star(a, b, ctx), c, ctx)
    rhs = star(a, star(b, c, ctx), ctx)
    assert element_residual(lhs, rhs) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_involution_is_an_antihomomorphism(seed):
    rng = random.Random(seed)
    ctx = ctx_upper(Fraction(rng.randrange(1, 12), 12))
    a = random_exact_element(rng)
    b = random_exact_element(rng)
    lhs = involution(star(a, b, ctx), ctx)
    rhs = star(involution(b, ctx), involution(a, ctx), ctx)
    assert element_residual(lhs, rhs) == 0.0
    assert element_residual(involution(involution(a, ctx), ctx), a) == 0.0


def test_float_angle_laws_within_tolerance():
    theta = CirclePoint.real(0.3782915)
    ctx = ctx_upper(theta)
    rng = random.Random(3)
    a, b, c = (random_exact_element(rng, terms=5) for _ in range(3))
    assert element_residual(star(star(a, b, ctx), c, ctx),
                            star(a, star(b, c, ctx), ctx)) <= 1e-12
    lhs = involution(star(a, b, ctx), ctx)
    rhs = star(involution(b, ctx), involution(a, ctx), ctx)
    assert element_residual(lhs, rhs) <= 1e-12


def test_alternating_cocycle_keeps_the_plain_involution():
    # with an alternating representative Theta(x,x)=0, so the adjoint is the
    # undeformed one
    ctx = ctx_upper(Fraction(1, 3), convention="half")
    a = random_exact_element(random.Random(9))
    plain = involution(a, StarContext.zero(G2))
    assert element_residual(involution(a, ctx), plain) == 0.0


def test_matrix_coefficients_respect_the_laws():
    ctx = ctx_upper(Fraction(1, 4))
    rng = random.Random(11)
    a = random_exact_element(rng, dim=2)
    b = random_exact_element(rng, dim=2)
    c = random_exact_element(rng, dim=2)
    assert element_residual(star(star(a, b, ctx), c, ctx),
                            star(a, star(b, c, ctx), ctx)) == 0.0
    lhs = involution(star(a, b, ctx), ctx)
    rhs = star(involution(b, ctx), involution(a, ctx), ctx)
    assert element_residual(lhs, rhs) == 0.0


def test_torsion_group_products():
    g = FgAbelianGroup(0, (3, 3))
    ctx = StarContext(standard_bicharacter(g, [[0, Fraction(1, 3)], [0, 0]]))
    u, v = gen((1, 0), group=g), gen((0, 1), group=g)
    # cube of each generator is the unit: support wraps around
    cube = star(star(u, u, ctx), u, ctx)
    assert element_residual(cube, AlgebraElement.unit(g)) == 0.0
    defect = star(u, v, ctx) - star(v, u, ctx).scale(
        ExactComplex.from_phase(Fraction(-1, 3)))
    assert defect.max_abs() == 0.0


# --------------------------------------------------------------------------
# Context composition, coboundary intertwiners, basis change.


def test_deformation_composition():
    rng = random.Random(5)
    a, b = random_exact_element(rng), random_exact_element(rng)
    ctx1 = ctx_upper(Fraction(1, 3))
    ctx2 = ctx_upper(Fraction(1, 5))
    assert deformation_composition_check(a, b, ctx1, ctx2) == 0.0


def test_coboundary_isomorphism_intertwines_conventions():
    theta = [[0, Fraction(1, 3)], [0, 0]]
    up = standard_bicharacter(G2, theta, "upper")
    half = standard_bicharacter(G2, theta, "half")
    T = cohomology_witness(Multiplier(up), half)
    ctx_up, ctx_half = StarContext(up), StarContext(half)
    rng = random.Random(13)
    a, b = random_exact_element(rng), random_exact_element(rng)
    # with up = half + dT, the reweighting V by e(T) maps the half product
    # onto the upper one: V(a ⋆ b) = V(a) ⋆' V(b)
    lhs = coboundary_isomorphism(star(a, b, ctx_half), T)
    rhs = star(coboundary_isomorphism(a, T), coboundary_isomorphism(b, T),
               ctx_up)
    assert element_residual(lhs, rhs) == 0.0
    # and V carries the half involution to the upper one
    lhs_i = coboundary_isomorphism(involution(a, ctx_half), T)
    rhs_i = involution(coboundary_isomorphism(a, T), ctx_up)
    assert element_residual(lhs_i, rhs_i) == 0.0
    # direction matters: the reversed pairing of contexts fails loudly
    bad = coboundary_isomorphism(star(a, b, ctx_up), T)
    assert element_residual(
        bad, star(coboundary_isomorphism(a, T),
                  coboundary_isomorphism(b, T), ctx_half)) > 1.0


def _random_unimodular(rng, n=2, bound=5):
    while True:
        R = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        det = R[0][0] * R[1][1] - R[0][1] * R[1][0]
        if det in (1, -1):
            return R


def test_basis_change_action_law_and_intertwining():
    rng = random.Random(17)
    target = standard_bicharacter(G2, [[0, Fraction(1, 3)], [0, 0]])
    for _ in range(10):
        R = _random_unimodular(rng)
        S = _random_unimodular(rng)
        a = random_exact_element(rng)
        b = random_exact_element(rng)
        # action law: acting by R then S equals acting by the product S·R
        SR = [[sum(S[i][k] * R[k][j] for k in range(2)) for j in range(2)]
              for i in range(2)]
        lhs = glnz_pullback_on_elements(glnz_pullback_on_elements(a, R), S)
        rhs = glnz_pullback_on_elements(a, SR)
        assert element_residual(lhs, rhs) == 0.0
        # intertwining: the map sends the paired source product to the target
        src = StarContext(glnz_paired_source_bicharacter(target, R))
        tgt = StarContext(target)
        moved = glnz_pullback_on_elements(star(a, b, src), R)
        direct = star(glnz_pullback_on_elements(a, R),
                      glnz_pullback_on_elements(b, R), tgt)
        assert element_residual(moved, direct) == 0.0


def test_basis_change_rejects_bad_input():
    with pytest.raises(ValueError):
        glnz_pullback_on_elements(gen((1, 0)), [[2, 0], [0, 1]])
    g = FgAbelianGroup(1, (3,))
    with pytest.raises(ValueError):
        glnz_pullback_on_elements(AlgebraElement.unit(g), [[1, 0], [0, 1]])


# --------------------------------------------------------------------------
# Seminorms, residuals, serialization.


def test_seminorm_values():
    a = gen((1, 0), 2) + gen((0, 0), ExactComplex.from_rational(0, 3))
    assert seminorm(a) == 3.0
    w = 1.0 + 4.0 * math.pi ** 2
    assert seminorm(a, j=1) == pytest.approx(2.0 * w)
    assert seminorm(a, j=2) == pytest.approx(2.0 * w * w)
    # k is a documented no-op for scalar coefficients
    assert seminorm(a, j=1, k=3) == seminorm(a, j=1)


def test_seminorm_submultiplicative_at_j0():
    rng = random.Random(23)
    ctx = ctx_upper(Fraction(1, 6))
    for _ in range(5):
        a, b = random_exact_element(rng), random_exact_element(rng)
        prod = star(a, b, ctx)
        # j=0 seminorm is the max coefficient norm; the twisted convolution
        # of supports can only sum coefficient products
        bound = sum(seminorm(AlgebraElement(G2, {x: v}, 1))
                    for x, v in a.coeffs.items()) * seminorm(b)
        assert seminorm(prod) <= bound + 1e-12


def test_element_json_round_trip_exact():
    rng = random.Random(29)
    a = random_exact_element(rng)
    back = AlgebraElement.from_json_dict(a.to_json_dict())
    assert element_residual(a, back) == 0.0
    assert back.is_exact
    m = random_exact_element(rng, dim=2)
    back_m = AlgebraElement.from_json_dict(m.to_json_dict())
    assert element_residual(m, back_m) == 0.0


def test_element_json_round_trip_float():
    a = gen((1, 2), 0.25 + 0.5j) + gen((0, 1), -1.5)
    back = AlgebraElement.from_json_dict(a.to_json_dict())
    assert element_residual(a, back) == 0.0


def test_support_and_radius():
    a = gen((3, 4)) + gen((0, 1))
    assert a.support_radius() == 5.0
    assert len(a.support()) == 2
    assert a.coefficient(G2.element((3, 4))) is not None
