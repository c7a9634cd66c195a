"""Cocycle identities, classes, kernels and descent."""
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.cohomology import (Bicharacter, CoboundaryData, CohomologyClass,
                                 Multiplier, antisymmetrize, class_order,
                                 cohomology_witness, is_coboundary,
                                 is_cohomologous, is_nondegenerate, kernel_of,
                                 nondegenerate_part, pullback,
                                 standard_bicharacter, verify_cocycle)
from ncdeform.groups import CirclePoint, FgAbelianGroup, Subgroup


def upper_class(group, angle, i=0, j=1):
    return CohomologyClass.from_upper_angles(group, {(i, j): angle})


def test_bicharacter_is_bilinear():
    g = FgAbelianGroup(2)
    b = Bicharacter.from_rationals(g, [[Fraction(1, 5), Fraction(1, 3)],
                                       [Fraction(2, 7), 0]])
    x, y, z = g.element((1, 2)), g.element((3, -1)), g.element((0, 4))
    assert (b.evaluate(x + y, z) - b.evaluate(x, z) - b.evaluate(y, z)).is_zero()
    assert (b.evaluate(x, y + z) - b.evaluate(x, y) - b.evaluate(x, z)).is_zero()


def test_bicharacter_torsion_compatibility_enforced():
    g = FgAbelianGroup(0, (3,))
    with pytest.raises(ValueError):
        Bicharacter.from_rationals(g, [[Fraction(1, 2)]])
    # 1/3 is fine on a Z_3 generator
    Bicharacter.from_rationals(g, [[Fraction(1, 3)]])


def test_cocycle_identity_exact_zero():
    g = FgAbelianGroup(2)
    b = standard_bicharacter(g, [[0, Fraction(1, 3)], [0, 0]])
    assert verify_cocycle(Multiplier(b)) == 0.0


def test_cocycle_identity_with_coboundary_part():
    g = FgAbelianGroup(1, (4,))
    b = Bicharacter.from_rationals(g, [[0, Fraction(1, 4)], [0, 0]])
    T = CoboundaryData(g, [[1, 1], [0, 1]],
                       [[CirclePoint.exact(1, 3), CirclePoint.exact(1, 5)],
                        [CirclePoint.zero(), CirclePoint.exact(1, 4)]],
                       [2, 1], [CirclePoint.exact(1, 7), CirclePoint.exact(1, 4)])
    assert verify_cocycle(Multiplier(b, T)) == 0.0


def test_cocycle_identity_float_angles():
    g = FgAbelianGroup(2)
    b = standard_bicharacter(g, [[0, CirclePoint.real(0.3782915)], [0, 0]])
    assert verify_cocycle(Multiplier(b), random.Random(1)) <= 1e-12


def test_antisymmetrisation_kills_coboundaries():
    g = FgAbelianGroup(2, (6,))
    sym = Bicharacter.from_rationals(
        g, [[Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)],
            [Fraction(1, 3), 0, Fraction(1, 2)],
            [Fraction(1, 6), Fraction(1, 2), Fraction(1, 3)]])
    assert is_coboundary(Multiplier(sym))
    T = CoboundaryData.for_symmetric(sym)
    # dT really equals the symmetric bicharacter, pointwise and exactly
    for x in (g.element((1, 2, 3)), g.element((-4, 7, 5)), g.element((0, 0, 1))):
        for y in (g.element((2, -1, 1)), g.element((5, 5, 5))):
            assert (T.coboundary(x, y) - sym.evaluate(x, y)).is_zero()


def test_conventions_are_cohomologous():
    g = FgAbelianGroup(2)
    theta = [[0, Fraction(1, 3)], [0, 0]]
    up = standard_bicharacter(g, theta, "upper")
    lo = standard_bicharacter(g, theta, "lower")
    ha = standard_bicharacter(g, theta, "half")
    assert is_cohomologous(Multiplier(up), Multiplier(lo))
    assert is_cohomologous(Multiplier(up), Multiplier(ha))
    assert not is_cohomologous(
        Multiplier(up),
        Multiplier(standard_bicharacter(g, [[0, Fraction(2, 3)], [0, 0]])))
    pairing = antisymmetrize(up)
    assert pairing.evaluate(g.element((1, 0)), g.element((0, 1))).value == Fraction(1, 3)


def test_half_convention_requires_exact_angles():
    g = FgAbelianGroup(2)
    with pytest.raises(ValueError):
        standard_bicharacter(g, [[0, CirclePoint.real(0.3)], [0, 0]], "half")


WITNESS_GROUPS = [
    FgAbelianGroup(2),
    FgAbelianGroup(3),
    FgAbelianGroup(1, (3,)),
    FgAbelianGroup(1, (4,)),
    FgAbelianGroup(0, (2, 2)),
    FgAbelianGroup(0, (4, 4)),
    FgAbelianGroup(0, (6, 6)),
    FgAbelianGroup(2, (2, 3)),
]


@pytest.mark.parametrize("g", WITNESS_GROUPS, ids=lambda g: repr(g))
def test_witness_identity_on_mixed_groups(g):
    rng = random.Random(hash(g.torsion) & 0xFFFF)
    n = g.ngens
    for _ in range(6):
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                # pick an angle compatible with both generator orders
                mi, mj = g.generator_order(i), g.generator_order(j)
                if mi and mj:
                    d = math.gcd(mi, mj)
                elif mi or mj:
                    d = mi or mj
                else:
                    d = rng.choice([2, 3, 4, 6])
                rows[i][j] = Fraction(rng.randrange(d), d)
        b1 = Bicharacter.from_rationals(g, rows)
        rep = antisymmetrize(b1)
        n2 = g.ngens
        upper = [[rep.pairing.matrix[i][j] if j > i else CirclePoint.zero()
                  for j in range(n2)] for i in range(n2)]
        rep_b = Bicharacter(g, upper)
        T = cohomology_witness(Multiplier(b1), rep_b)
        pts = [g.random_element(rng, 5) for _ in range(6)]
        for x in pts:
            for y in pts:
                lhs = b1.evaluate(x, y)
                rhs = rep_b.evaluate(x, y) + T.coboundary(x, y)
                assert (lhs - rhs).is_zero(), (g, x.coords, y.coords)


def test_witness_even_torsion_half_angle_regression():
    # the half-integral carry case: Z_2 x Z_2 with a symmetric 1/2 block
    g = FgAbelianGroup(0, (2, 2))
    sym = Bicharacter.from_rationals(g, [[Fraction(1, 2), Fraction(1, 2)],
                                         [Fraction(1, 2), Fraction(1, 2)]])
    T = CoboundaryData.for_symmetric(sym)
    for x in g.iter_elements():
        for y in g.iter_elements():
            assert (T.coboundary(x, y) - sym.evaluate(x, y)).is_zero()


def test_witness_rejects_non_cohomologous():
    g = FgAbelianGroup(2)
    b1 = standard_bicharacter(g, [[0, Fraction(1, 3)], [0, 0]])
    b2 = standard_bicharacter(g, [[0, Fraction(1, 5)], [0, 0]])
    with pytest.raises(ValueError):
        cohomology_witness(Multiplier(b1), b2)


def test_kernel_brute_force_oracle():
    g = FgAbelianGroup(3)
    cls = upper_class(g, Fraction(1, 2))
    ker = kernel_of(cls)
    # kernel should be <(2,0,0),(0,2,0),(0,0,1)>
    for c in itertools.product(range(-4, 5), repeat=3):
        x = g.element(c)
        in_ker = all(cls.evaluate(x, g.generator(i)).is_zero() for i in range(3))
        assert ker.contains(x) == in_ker
        assert in_ker == (c[0] % 2 == 0 and c[1] % 2 == 0)


def test_kernel_refuses_irrational():
    g = FgAbelianGroup(2)
    cls = upper_class(g, CirclePoint.real(0.3782915))
    with pytest.raises(ValueError):
        kernel_of(cls)
    with pytest.raises(ValueError):
        class_order(cls)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6, 7])
def test_nondegenerate_part_plane_rotation(q):
    g = FgAbelianGroup(2)
    split = nondegenerate_part(upper_class(g, Fraction(1, q)))
    assert split.quotient_group.torsion == (q, q)
    assert split.quotient_group.free_rank == 0
    gens = split.kernel.minimal_generators()
    # kernel is q·Z^2
    assert sorted(tuple(abs(c) for c in x.coords) for x in gens) \
        == sorted([(q, 0), (0, q)])
    # descended pairing is nondegenerate and has full order
    assert is_nondegenerate(split.descended)
    assert class_order(split.descended) == q
    # representative's antisymmetrisation recovers the descended pairing
    assert antisymmetrize(split.representative) == split.descended


def test_nondegenerate_part_rank_four_half():
    g = FgAbelianGroup(4)
    cls = CohomologyClass.from_upper_angles(
        g, {(0, 1): Fraction(1, 2), (2, 3): Fraction(1, 2)})
    split = nondegenerate_part(cls)
    assert split.quotient_group.torsion == (2, 2, 2, 2)
    assert is_nondegenerate(split.descended)


def test_nondegenerate_part_with_free_directions():
    # one deformed plane inside Z^3: the third direction is pure kernel
    g = FgAbelianGroup(3)
    split = nondegenerate_part(upper_class(g, Fraction(1, 3)))
    ker_gens = split.kernel.minimal_generators()
    assert split.quotient_group.torsion == (3, 3)
    assert split.quotient_group.free_rank == 0
    assert any(x.coords == (0, 0, 1) or x.coords == (0, 0, -1) for x in ker_gens)


def test_projection_section_property():
    g = FgAbelianGroup(2)
    split = nondegenerate_part(upper_class(g, Fraction(1, 5)))
    pr, Q = split.projection, split.quotient_group
    for e in Q.iter_elements():
        assert pr.apply(pr.lift(e)) == e


def test_class_order_matches_repeated_addition():
    g = FgAbelianGroup(2)
    for q in (2, 3, 5, 12):
        cls = upper_class(g, Fraction(1, q))
        assert class_order(cls) == q
        acc = cls
        for n in range(1, q):
            assert not acc.is_trivial()
            acc = acc + cls
        assert acc.is_trivial()
    mixed = CohomologyClass.from_upper_angles(
        FgAbelianGroup(3), {(0, 1): Fraction(1, 4), (0, 2): Fraction(1, 6)})
    assert class_order(mixed) == 12


def test_pullback_composition_and_rejection():
    g = FgAbelianGroup(2)
    cls = upper_class(g, Fraction(1, 7))
    R = [[1, 2], [0, 1]]
    S = [[1, 0], [3, 1]]
    RS = [[R[i][0] * S[0][j] + R[i][1] * S[1][j] for j in range(2)]
          for i in range(2)]
    lhs = pullback(pullback(cls, R), S)
    rhs = pullback(cls, RS)
    assert lhs == rhs
    # det preserved: pullback by unimodular R keeps the symplectic angle
    assert pullback(cls, R).evaluate(g.element((1, 0)), g.element((0, 1))).value \
        == Fraction(1, 7)
    with pytest.raises(ValueError):
        pullback(cls, [[2, 0], [0, 1]])


def test_class_validation_rejects_non_alternating():
    g = FgAbelianGroup(2)
    sym = Bicharacter.from_rationals(g, [[0, Fraction(1, 3)],
                                         [Fraction(1, 3), 0]])
    with pytest.raises(ValueError):
        CohomologyClass(sym)


def test_upper_angle_dict_index_validation():
    g = FgAbelianGroup(2)
    with pytest.raises(ValueError):
        CohomologyClass.from_upper_angles(g, {(1, 0): Fraction(1, 3)})
    with pytest.raises(ValueError):
        CohomologyClass.from_upper_angles(g, {(0, 2): Fraction(1, 3)})


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_random_free_multipliers_round_trip(rank, data):
    g = FgAbelianGroup(rank)
    n = g.ngens
    frac = st.fractions(min_value=-1, max_value=1, max_denominator=9)
    rows = [[data.draw(frac) for _ in range(n)] for _ in range(n)]
    b = Bicharacter.from_rationals(g, rows)
    mult = Multiplier(b)
    assert verify_cocycle(mult, random.Random(0), samples=12, bound=4) == 0.0
    split_rep = antisymmetrize(mult)
    # antisymmetrising an already-alternating pairing doubles it
    again = antisymmetrize(split_rep.pairing)
    assert again.pairing == split_rep.scale(2).pairing
    # JSON round trip of the class
    back = CohomologyClass.from_json_dict(split_rep.to_json_dict())
    assert back == split_rep
