"""Exact complex scalars: Gaussian-rational combinations of circle phases.

An ExactComplex is a formal sum  sum_j  a_j * e(t_j)  with Gaussian-rational
amplitudes a_j and exact phases t_j in R/Z.  The representation is canonical:
every phase is folded modulo the subgroup {0, 1/4, 1/2, 3/4} (whose phases are
the exact units 1, i, -1, -i) so keys live in [0, 1/4), and zero amplitudes
are pruned.  Two ExactComplex values are equal iff their term dicts match,
which makes termwise-cancelling residuals structurally exact zeros.

Sums of roots of unity that only vanish analytically (e.g. 1+e(1/3)+e(2/3))
keep their distinct keys; nothing in the package relies on recognising them.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .groups import CirclePoint

TWO_PI = 2.0 * math.pi

_QUARTER = Fraction(1, 4)

Amplitude = tuple  # (Fraction re, Fraction im)


def _rotate(re: Fraction, im: Fraction, c: int):
    # multiply by i^c
    c &= 3
    if c == 0:
        return re, im
    if c == 1:
        return -im, re
    if c == 2:
        return -re, -im
    return im, -re


class ExactComplex:
    """Canonical formal sum of exact phases with Gaussian-rational weights.

    >>> ExactComplex.from_phase(Fraction(1, 2))
    ExactComplex(-1)
    >>> x = ExactComplex.from_phase(Fraction(1, 3))
    >>> (x * x * x)
    ExactComplex(1)
    >>> (x - x).is_zero()
    True
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        # terms: dict {Fraction in [0,1/4) -> (Fraction, Fraction)}; trusted
        self._terms = terms or {}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "ExactComplex":
        return cls({})

    @classmethod
    def one(cls) -> "ExactComplex":
        return cls({Fraction(0): (Fraction(1), Fraction(0))})

    @classmethod
    def from_rational(cls, re, im=0) -> "ExactComplex":
        re, im = Fraction(re), Fraction(im)
        if re == 0 and im == 0:
            return cls.zero()
        return cls({Fraction(0): (re, im)})

    @classmethod
    def from_phase(cls, t, re=1, im=0) -> "ExactComplex":
        """a·e(t) for an exact phase t (Fraction or exact CirclePoint)."""
        if isinstance(t, CirclePoint):
            if not t.is_exact:
                raise ValueError("ExactComplex needs an exact phase")
            t = t.value
        out = cls.zero()
        out._add_term(Fraction(t), Fraction(re), Fraction(im))
        return out

    # -- internals -----------------------------------------------------------

    def _add_term(self, t: Fraction, re: Fraction, im: Fraction):
        if re == 0 and im == 0:
            return
        t = t - (t.numerator // t.denominator)  # mod 1
        c = (4 * t.numerator) // t.denominator   # which quarter
        t0 = t - Fraction(c, 4)
        re, im = _rotate(re, im, c)
        cur = self._terms.get(t0)
        if cur is None:
            self._terms[t0] = (re, im)
        else:
            nre, nim = cur[0] + re, cur[1] + im
            if nre == 0 and nim == 0:
                del self._terms[t0]
            else:
                self._terms[t0] = (nre, nim)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        out = ExactComplex(dict(self._terms))
        for t, (re, im) in other._terms.items():
            out._add_term(t, re, im)
        return out

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        out = ExactComplex(dict(self._terms))
        for t, (re, im) in other._terms.items():
            out._add_term(t, -re, -im)
        return out

    def __neg__(self) -> "ExactComplex":
        return ExactComplex({t: (-re, -im) for t, (re, im) in self._terms.items()})

    def __mul__(self, other: "ExactComplex") -> "ExactComplex":
        out = ExactComplex()
        for t1, (a, b) in self._terms.items():
            for t2, (c, d) in other._terms.items():
                out._add_term(t1 + t2, a * c - b * d, a * d + b * c)
        return out

    def conjugate(self) -> "ExactComplex":
        out = ExactComplex()
        for t, (re, im) in self._terms.items():
            out._add_term(-t, re, -im)
        return out

    def times_phase(self, t) -> "ExactComplex":
        """Multiply by e(t), t exact."""
        if isinstance(t, CirclePoint):
            if not t.is_exact:
                raise ValueError("exact phase required")
            t = t.value
        t = Fraction(t)
        out = ExactComplex()
        for t0, (re, im) in self._terms.items():
            out._add_term(t0 + t, re, im)
        return out

    def scale_rational(self, re, im=0) -> "ExactComplex":
        return self * ExactComplex.from_rational(re, im)

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def to_complex(self) -> complex:
        z = 0j
        for t, (re, im) in self._terms.items():
            ph = TWO_PI * float(t)
            z += complex(float(re), float(im)) * complex(math.cos(ph), math.sin(ph))
        return z

    def abs(self) -> float:
        if not self._terms:
            return 0.0
        return abs(self.to_complex())

    def terms(self):
        return self._terms

    def __eq__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "ExactComplex(0)"
        bits = []
        for t in sorted(self._terms):
            re, im = self._terms[t]
            amp = f"({re}+{im}i)" if im else f"{re}"
            bits.append(amp if t == 0 else f"{amp}*e({t})")
        return f"ExactComplex({' + '.join(bits)})"


Scalar = Union[ExactComplex, complex]


def scalar_is_exact(c: Scalar) -> bool:
    return isinstance(c, ExactComplex)


def scalar_to_complex(c: Scalar) -> complex:
    return c.to_complex() if isinstance(c, ExactComplex) else complex(c)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
        return a + b
    return scalar_to_complex(a) + scalar_to_complex(b)


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, ExactComplex) and isinstance(b, ExactComplex):
        return a * b
    return scalar_to_complex(a) * scalar_to_complex(b)


def scalar_conj(a: Scalar) -> Scalar:
    if isinstance(a, ExactComplex):
        return a.conjugate()
    return complex(a).conjugate()


def scalar_times_phase(a: Scalar, t: CirclePoint) -> Scalar:
    """a·e(t); exactness survives only if both sides are exact."""
    if isinstance(a, ExactComplex) and t.is_exact:
        return a.times_phase(t)
    return scalar_to_complex(a) * t.to_complex()


def scalar_abs(a: Scalar) -> float:
    if isinstance(a, ExactComplex):
        return a.abs()
    return abs(a)


def scalar_is_zero(a: Scalar, tol: float = 0.0) -> bool:
    if isinstance(a, ExactComplex):
        return a.is_zero()
    return abs(a) <= tol
