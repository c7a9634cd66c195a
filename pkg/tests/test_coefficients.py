"""Exact scalar ring: canonical form and ring laws."""
import cmath
import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from ncdeform.coefficients import (ExactComplex, scalar_abs, scalar_add,
                                   scalar_conj, scalar_is_exact,
                                   scalar_is_zero, scalar_mul,
                                   scalar_times_phase, scalar_to_complex)
from ncdeform.groups import CirclePoint


def test_quarter_turns_fold_to_units():
    # e(1/4) = i, e(1/2) = -1, e(3/4) = -i all live on the zero phase key
    assert ExactComplex.from_phase(Fraction(1, 4)) == ExactComplex.from_rational(0, 1)
    assert ExactComplex.from_phase(Fraction(1, 2)) == ExactComplex.from_rational(-1)
    assert ExactComplex.from_phase(Fraction(3, 4)) == ExactComplex.from_rational(0, -1)
    assert ExactComplex.from_phase(Fraction(7, 2)) == ExactComplex.from_rational(-1)


def test_phase_folding_is_canonical():
    # e(2/3) = i * e(2/3 - 1/4): stored key must sit in [0, 1/4)
    x = ExactComplex.from_phase(Fraction(2, 3))
    (key, amp), = x.terms().items()
    assert 0 <= key < Fraction(1, 4)
    assert key == Fraction(2, 3) - Fraction(1, 2)
    assert amp == (Fraction(-1), Fraction(0))
    assert abs(x.to_complex() - cmath.exp(2j * math.pi * 2 / 3)) < 1e-15


def test_structural_zero():
    x = ExactComplex.from_phase(Fraction(1, 7), 2, 3)
    assert (x - x).is_zero()
    assert (x - x).abs() == 0.0
    assert (x + (-x)).is_zero()


def test_roots_of_unity_multiply_out():
    w = ExactComplex.from_phase(Fraction(1, 3))
    assert w * w * w == ExactComplex.one()
    assert (w * w).conjugate() == w


phases = st.fractions(min_value=0, max_value=1, max_denominator=24)
amps = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def exacts(max_terms=3):
    term = st.tuples(phases, amps, amps)
    def build(ts):
        out = ExactComplex.zero()
        for t, re, im in ts:
            out = out + ExactComplex.from_phase(t, re, im)
        return out
    return st.lists(term, max_size=max_terms).map(build)


@settings(max_examples=150, deadline=None)
@given(exacts(), exacts(), exacts())
def test_ring_laws(a, b, c):
    assert (a + b) == (b + a)
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * ExactComplex.one() == a
    assert (a + ExactComplex.zero()) == a


@settings(max_examples=100, deadline=None)
@given(exacts(), exacts())
def test_conjugation_is_a_star_operation(a, b):
    assert (a * b).conjugate() == b.conjugate() * a.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.conjugate().conjugate() == a


@settings(max_examples=100, deadline=None)
@given(exacts(), phases)
def test_times_phase_agrees_with_multiplication(a, t):
    assert a.times_phase(t) == a * ExactComplex.from_phase(t)


@settings(max_examples=100, deadline=None)
@given(exacts(), exacts())
def test_to_complex_is_a_homomorphism(a, b):
    za, zb = a.to_complex(), b.to_complex()
    assert abs((a * b).to_complex() - za * zb) < 1e-10
    assert abs((a + b).to_complex() - (za + zb)) < 1e-12


def test_scalar_helpers_mixed_mode():
    e = ExactComplex.from_phase(Fraction(1, 8))
    z = 0.5 + 0.25j
    assert scalar_is_exact(e) and not scalar_is_exact(z)
    assert isinstance(scalar_add(e, z), complex)
    assert isinstance(scalar_mul(e, e), ExactComplex)
    assert abs(scalar_to_complex(scalar_mul(e, z)) -
               e.to_complex() * z) < 1e-15
    assert scalar_abs(e) == abs(e.to_complex())
    assert scalar_is_zero(ExactComplex.zero())
    assert scalar_is_zero(1e-14 + 0j, 1e-12)
    assert not scalar_is_zero(e)
    assert abs(scalar_to_complex(scalar_conj(z)) - z.conjugate()) == 0.0


def test_times_phase_downgrades_on_inexact_input():
    e = ExactComplex.one()
    out = scalar_times_phase(e, CirclePoint.real(0.3))
    assert isinstance(out, complex)
    exact = scalar_times_phase(e, CirclePoint.exact(1, 3))
    assert isinstance(exact, ExactComplex)


def test_abs_of_cancelling_pair_is_exactly_zero():
    # the acceptance-style certificate: residuals are structural zeros
    a = ExactComplex.from_phase(Fraction(1, 3), 2, -1)
    b = ExactComplex.from_phase(Fraction(5, 6), 1, 4)
    lhs = (a + b) * (a - b)
    rhs = a * a - b * b
    assert (lhs - rhs).is_zero()
    assert (lhs - rhs).abs() == 0.0
