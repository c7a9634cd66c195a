"""Lattice, circle-point and normal-form tests."""
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.groups import (CirclePoint, FgAbelianGroup, Subgroup,
                             dual_length, int_det, int_inverse,
                             is_unimodular, quotient, smith_normal_form)


# --------------------------------------------------------------------------
# Circle points.


def test_circle_point_reduction():
    assert CirclePoint.exact(5, 4).value == Fraction(1, 4)
    assert CirclePoint.exact(-1, 3).value == Fraction(2, 3)
    assert CirclePoint.real(1.25).as_float() == pytest.approx(0.25)


def test_circle_point_group_laws():
    a = CirclePoint.exact(1, 3)
    b = CirclePoint.exact(5, 6)
    assert (a + b).value == Fraction(1, 6)
    assert (a - a).is_zero()
    assert (-a).value == Fraction(2, 3)
    assert a.scale(3).is_zero()
    assert a.scale(-2).value == Fraction(1, 3)


def test_mixing_downgrades_explicitly():
    a = CirclePoint.exact(1, 4)
    r = CirclePoint.real(0.1)
    s = a + r
    assert not s.is_exact
    assert s.downgraded
    # downgrade flag is sticky through further arithmetic
    assert (s + s).downgraded
    assert (-s).downgraded
    # pure real arithmetic is not flagged
    assert not (r + r).downgraded


def test_circle_point_to_complex():
    i = CirclePoint.exact(1, 4).to_complex()
    assert abs(i - 1j) < 1e-15
    assert abs(CirclePoint.exact(1, 2).to_complex() + 1) < 1e-15


def test_circle_point_json_round_trip():
    for t in (CirclePoint.exact(3, 7), CirclePoint.real(0.125),
              CirclePoint.exact(1, 4) + CirclePoint.real(0.5)):
        back = CirclePoint.from_json_dict(t.to_json_dict())
        assert back == t
        assert back.is_exact == t.is_exact
        assert back.downgraded == t.downgraded


def test_is_zero_tolerance_for_reals():
    assert CirclePoint.real(1e-13).is_zero(1e-12)
    assert CirclePoint.real(1.0 - 1e-13).is_zero(1e-12)
    assert not CirclePoint.real(0.5).is_zero(1e-12)


# --------------------------------------------------------------------------
# Groups and elements.


def test_group_shapes():
    g = FgAbelianGroup(2, (3, 6))
    assert g.ngens == 4
    assert not g.is_finite
    assert g.generator_order(0) == 0
    assert g.generator_order(2) == 3
    f = FgAbelianGroup(0, (2, 5))
    assert f.is_finite and f.order() == 10
    assert len(list(f.iter_elements())) == 10


def test_reduce_coords_and_equality():
    g = FgAbelianGroup(1, (4,))
    x = g.element((3, 7))
    assert x.coords == (3, 3)
    assert x + x == g.element((6, 2))
    assert (x - x).is_zero()
    assert x.scale(4) == g.element((12, 12))
    assert hash(g.element((0, 5))) == hash(g.element((0, 1)))


def test_torsion_rejects_bad_orders():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (1,))
    with pytest.raises(ValueError):
        FgAbelianGroup(-1)


def test_dual_length_ignores_torsion():
    g = FgAbelianGroup(1, (3,))
    assert dual_length(g, g.element((2, 1))) == 2.0
    h = FgAbelianGroup(2)
    assert dual_length(h, h.element((3, 4))) == 5.0


def test_random_element_is_deterministic():
    g = FgAbelianGroup(2, (5,))
    a = g.random_element(random.Random(3), 4)
    b = g.random_element(random.Random(3), 4)
    assert a == b


# --------------------------------------------------------------------------
# Integer linear algebra.


def _brute_det(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        prod = sign
        for i in range(n):
            prod *= m[i][perm[i]]
        total += prod
    return total


@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=n, max_size=n)))
def test_int_det_matches_permanent_expansion(m):
    assert int_det(m) == _brute_det(m)


def test_int_inverse_round_trip():
    rng = random.Random(0)
    found = 0
    while found < 25:
        m = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        if abs(int_det(m)) != 1:
            continue
        found += 1
        inv = int_inverse(m)
        n = len(m)
        prod = [[sum(m[i][k] * inv[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]
        assert prod == [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    with pytest.raises(ValueError):
        int_inverse([[2, 0], [0, 1]])


def test_is_unimodular():
    assert is_unimodular([[1, 5], [0, 1]])
    assert is_unimodular([[0, 1], [-1, 0]])
    assert not is_unimodular([[2, 0], [0, 1]])


# --------------------------------------------------------------------------
# Smith normal form: the full property oracle.


def _check_snf(m):
    rows, cols = len(m), len(m[0])
    u, s, v = smith_normal_form(m)
    # U m V == S
    um = [[sum(u[i][k] * m[k][j] for k in range(rows)) for j in range(cols)]
          for i in range(rows)]
    umv = [[sum(um[i][k] * v[k][j] for k in range(cols)) for j in range(cols)]
           for i in range(rows)]
    assert umv == s
    assert abs(int_det(u)) == 1
    assert abs(int_det(v)) == 1
    diag = [s[i][i] for i in range(min(rows, cols))]
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert s[i][j] == 0
    for d in diag:
        assert d >= 0
    for a, b in zip(diag, diag[1:]):
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_smith_normal_form_properties(rows, cols, data):
    m = [[data.draw(st.integers(-20, 20)) for _ in range(cols)]
         for _ in range(rows)]
    _check_snf(m)


def test_smith_normal_form_known_values():
    _, s, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert [s[i][i] for i in range(3)] == [2, 2, 156]
    _, s2, _ = smith_normal_form([[0, 0], [0, 0]])
    assert s2 == [[0, 0], [0, 0]]


# --------------------------------------------------------------------------
# Subgroups and quotients.


def test_subgroup_membership_brute_force():
    g = FgAbelianGroup(2)
    h = Subgroup(g, [g.element((4, 0)), g.element((2, 1))])
    # brute-force span over a window of integer combinations
    span = set()
    for a in range(-8, 9):
        for b in range(-8, 9):
            span.add((4 * a + 2 * b, b))
    for x1 in range(-6, 7):
        for x2 in range(-6, 7):
            assert h.contains(g.element((x1, x2))) == ((x1, x2) in span)


def test_quotient_z2_by_index_four_lattice():
    g = FgAbelianGroup(2)
    h = Subgroup(g, [g.element((4, 0)), g.element((2, 1))])
    q, pr = quotient(g, h)
    assert q.free_rank == 0 and q.torsion == (4,)
    # projection kills exactly the subgroup
    for x1 in range(-6, 7):
        for x2 in range(-6, 7):
            x = g.element((x1, x2))
            assert pr.apply(x).is_zero() == h.contains(x)
    # lift is a section
    for k in range(4):
        e = q.element((k,))
        assert pr.apply(pr.lift(e)) == e


def test_quotient_by_scaled_lattice():
    g = FgAbelianGroup(2)
    h = Subgroup(g, [g.element((3, 0)), g.element((0, 3))])
    q, pr = quotient(g, h)
    assert q.torsion == (3, 3)
    assert pr.apply(g.element((4, 5))) == q.element((1, 2))


def test_quotient_with_free_part():
    g = FgAbelianGroup(3)
    h = Subgroup(g, [g.element((2, 0, 0))])
    q, _ = quotient(g, h)
    assert q.free_rank == 2 and q.torsion == (2,)


def test_quotient_of_torsion_group():
    g = FgAbelianGroup(0, (4, 4))
    h = Subgroup(g, [g.element((2, 0))])
    q, pr = quotient(g, h)
    assert q.is_finite and q.order() == 8
    assert pr.apply(g.element((2, 0))).is_zero()


def test_group_json_round_trip():
    g = FgAbelianGroup(2, (3,))
    assert FgAbelianGroup.from_json_dict(g.to_json_dict()) == g
