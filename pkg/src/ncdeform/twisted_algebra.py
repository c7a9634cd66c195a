"""Twisted Fourier-series algebras: elements, star products, involutions.

An AlgebraElement is a finitely supported map from a weight group into scalar
or matrix coefficients.  A StarContext carries the 2-cocycle; the deformed
product twists the convolution of two elements by  e(-Theta(u, v))  on each
support pair (u, v), the deformed involution twists coefficient conjugation
at -x by  e(-Theta(-x, -x)).

Scalar products on exact data run through the packed integer kernels
(compiled when available); matrix coefficients, explicit coboundary parts and
mixed exact/float data take the generic path.
"""
from __future__ import annotations

import math
from array import array
from fractions import Fraction
from typing import Dict, Optional, Sequence, Union

import numpy as np

from . import _kernel
from .coefficients import (ExactComplex, Scalar, scalar_abs, scalar_add,
                           scalar_conj, scalar_is_exact, scalar_is_zero,
                           scalar_mul, scalar_times_phase, scalar_to_complex)
from .cohomology import Bicharacter, CoboundaryData, CohomologyClass, Multiplier
from .groups import (CirclePoint, FgAbelianGroup, GroupElement, dual_length,
                     int_det, int_inverse)

Coefficient = Union[Scalar, tuple]

_INT64_AMP = 1 << 30       # amplitude numerator bound for the compiled kernel
_INT64_PHASE = 1 << 40     # phase denominator / bilinear bound
_INT64_COORD = 1 << 31     # support coordinate bound for the compiled kernel


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _normalize_scalar(v) -> Scalar:
    if isinstance(v, ExactComplex):
        return v
    if isinstance(v, (int, Fraction)):
        return ExactComplex.from_rational(v)
    if isinstance(v, float):
        return complex(v)
    if isinstance(v, complex):
        return v
    raise TypeError(f"cannot use {type(v).__name__} as a coefficient")


def _normalize_coefficient(v, dim: int) -> Coefficient:
    if dim == 1:
        return _normalize_scalar(v)
    rows = tuple(tuple(_normalize_scalar(x) for x in row) for row in v)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValueError(f"coefficient must be a {dim}x{dim} matrix")
    return rows


def _coeff_is_zero(v, dim: int) -> bool:
    if dim == 1:
        return scalar_is_zero(v)
    return all(scalar_is_zero(x) for row in v for x in row)


def _coeff_is_exact(v, dim: int) -> bool:
    if dim == 1:
        return scalar_is_exact(v)
    return all(scalar_is_exact(x) for row in v for x in row)


def _coeff_add(a, b, dim: int):
    if dim == 1:
        return scalar_add(a, b)
    return tuple(tuple(scalar_add(x, y) for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def _coeff_neg(a, dim: int):
    if dim == 1:
        return -a
    return tuple(tuple(-x for x in row) for row in a)


def _coeff_mul(a, b, dim: int):
    if dim == 1:
        return scalar_mul(a, b)
    return tuple(tuple(
        _sum_scalars([scalar_mul(a[i][k], b[k][j]) for k in range(dim)])
        for j in range(dim)) for i in range(dim))


def _sum_scalars(vals):
    acc = vals[0]
    for v in vals[1:]:
        acc = scalar_add(acc, v)
    return acc


def _coeff_times_phase(a, t: CirclePoint, dim: int):
    if dim == 1:
        return scalar_times_phase(a, t)
    return tuple(tuple(scalar_times_phase(x, t) for x in row) for row in a)


def _coeff_conj_transpose(a, dim: int):
    if dim == 1:
        return scalar_conj(a)
    return tuple(tuple(scalar_conj(a[j][i]) for j in range(dim))
                 for i in range(dim))


def _coeff_abs(a, dim: int) -> float:
    if dim == 1:
        return scalar_abs(a)
    return max(scalar_abs(x) for row in a for x in row)


def _coeff_opnorm(a, dim: int) -> float:
    if dim == 1:
        return scalar_abs(a)
    m = np.array([[scalar_to_complex(x) for x in row] for row in a])
    return float(np.linalg.norm(m, 2))


def _coeff_scale(a, s: Scalar, dim: int):
    if dim == 1:
        return scalar_mul(a, s)
    return tuple(tuple(scalar_mul(x, s) for x in row) for row in a)


class AlgebraElement:
    """Finitely supported coefficient map on a weight group.

    ``dim`` is the matrix size of the coefficients (1 = scalar).  Coefficients
    are exact formal sums or plain complex numbers; the element is exact iff
    every coefficient is.
    """

    __slots__ = ("group", "dim", "coeffs")

    def __init__(self, group: FgAbelianGroup, coeffs: Dict[GroupElement, Coefficient],
                 dim: int = 1, _trusted: bool = False):
        self.group = group
        self.dim = dim
        if _trusted:
            self.coeffs = coeffs
            return
        clean = {}
        for x, v in sorted(coeffs.items(), key=lambda kv: kv[0].coords):
            if x.group != group:
                raise ValueError("support outside the weight group")
            v = _normalize_coefficient(v, dim)
            if not _coeff_is_zero(v, dim):
                clean[x] = v
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, group: FgAbelianGroup, dim: int = 1) -> "AlgebraElement":
        return cls(group, {}, dim, _trusted=True)

    @classmethod
    def unit(cls, group: FgAbelianGroup, dim: int = 1) -> "AlgebraElement":
        if dim == 1:
            return cls(group, {group.zero(): ExactComplex.one()}, dim)
        ident = tuple(tuple(ExactComplex.one() if i == j else ExactComplex.zero()
                            for j in range(dim)) for i in range(dim))
        return cls(group, {group.zero(): ident}, dim)

    @classmethod
    def generator(cls, group: FgAbelianGroup, coords, coeff=1) -> "AlgebraElement":
        """The scalar monomial  coeff · U_x."""
        return cls(group, {group.element(coords): coeff})

    # -- linear structure ----------------------------------------------------

    def _like(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self.group, coeffs, self.dim,
                              _trusted=False)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for x, v in other.coeffs.items():
            out[x] = _coeff_add(out[x], v, self.dim) if x in out else v
        return self._like(out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return self._like({x: _coeff_neg(v, self.dim) for x, v in self.coeffs.items()})

    def scale(self, s) -> "AlgebraElement":
        s = _normalize_scalar(s)
        return self._like({x: _coeff_scale(v, s, self.dim)
                           for x, v in self.coeffs.items()})

    def _check_compatible(self, other: "AlgebraElement"):
        if self.group != other.group or self.dim != other.dim:
            raise ValueError("elements live in different algebras")

    # -- queries ---------------------------------------------------------------

    def support(self) -> list:
        return list(self.coeffs)

    def coefficient(self, x: GroupElement) -> Coefficient:
        v = self.coeffs.get(x)
        if v is not None:
            return v
        if self.dim == 1:
            return ExactComplex.zero() if self.is_exact else 0j
        z = ExactComplex.zero()
        return tuple(tuple(z for _ in range(self.dim)) for _ in range(self.dim))

    def coefficient_complex(self, x: GroupElement):
        v = self.coeffs.get(x)
        if v is None:
            return 0j if self.dim == 1 else np.zeros((self.dim, self.dim), complex)
        if self.dim == 1:
            return scalar_to_complex(v)
        return np.array([[scalar_to_complex(c) for c in row] for row in v])

    @property
    def is_exact(self) -> bool:
        return all(_coeff_is_exact(v, self.dim) for v in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs(self) -> float:
        """Largest coefficient magnitude; structural zero gives exactly 0.0."""
        if not self.coeffs:
            return 0.0
        return max(_coeff_abs(v, self.dim) for v in self.coeffs.values())

    def support_radius(self) -> float:
        if not self.coeffs:
            return 0.0
        return max(dual_length(self.group, x) for x in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self.group == other.group and self.dim == other.dim
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return (f"AlgebraElement(dim={self.dim}, "
                f"support={[x.coords for x in self.coeffs]})")

    # -- JSON ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        items = []
        for x in sorted(self.coeffs, key=lambda g: g.coords):
            v = self.coeffs[x]
            flat = [v] if self.dim == 1 else [c for row in v for c in row]
            items.append({"index": list(x.coords),
                          "value": [_scalar_to_json(c) for c in flat]})
        return {"group": self.group.to_json_dict(), "dim": self.dim,
                "coeffs": items}

    @classmethod
    def from_json_dict(cls, d: dict) -> "AlgebraElement":
        group = FgAbelianGroup.from_json_dict(d["group"])
        dim = int(d.get("dim", 1))
        coeffs = {}
        for item in d["coeffs"]:
            x = group.element(item["index"])
            flat = [_scalar_from_json(c) for c in item["value"]]
            if len(flat) != dim * dim:
                raise ValueError(f"value needs {dim * dim} entries, got {len(flat)}")
            if dim == 1:
                coeffs[x] = flat[0]
            else:
                coeffs[x] = tuple(tuple(flat[i * dim + j] for j in range(dim))
                                  for i in range(dim))
        return cls(group, coeffs, dim)


def _scalar_to_json(c: Scalar):
    if isinstance(c, ExactComplex):
        terms = c.terms()
        if not terms:
            return [0, 0]
        if set(terms) <= {Fraction(0)}:
            re, im = terms[Fraction(0)]
            return [_frac_json(re), _frac_json(im)]
        packed = []
        for t in sorted(terms):
            re, im = terms[t]
            packed.append([t.numerator, t.denominator,
                           re.numerator, re.denominator,
                           im.numerator, im.denominator])
        return {"terms": packed}
    z = complex(c)
    return [z.real, z.imag]


def _frac_json(f: Fraction):
    return f.numerator if f.denominator == 1 else [f.numerator, f.denominator]


def _scalar_from_json(v) -> Scalar:
    if isinstance(v, dict):
        out = ExactComplex.zero()
        for t in v["terms"]:
            tn, td, rn, rd, inum, iden = t
            out = out + ExactComplex.from_phase(Fraction(tn, td),
                                                Fraction(rn, rd),
                                                Fraction(inum, iden))
        return out
    re, im = v
    def part(p):
        if isinstance(p, bool):
            raise ValueError("boolean is not a coefficient")
        if isinstance(p, int):
            return Fraction(p)
        if isinstance(p, list):
            return Fraction(int(p[0]), int(p[1]))
        return None  # float
    pre, pim = part(re), part(im)
    if pre is not None and pim is not None:
        return ExactComplex.from_rational(pre, pim)
    fre = float(re if not isinstance(re, list) else Fraction(int(re[0]), int(re[1])))
    fim = float(im if not isinstance(im, list) else Fraction(int(im[0]), int(im[1])))
    return complex(fre, fim)


# ---------------------------------------------------------------------------
# Star contexts and products.


class StarContext:
    """A weight group together with the deforming 2-cocycle."""

    __slots__ = ("multiplier", "_exact_pack", "_float_flat")

    def __init__(self, multiplier):
        if isinstance(multiplier, Bicharacter):
            multiplier = Multiplier(multiplier)
        elif isinstance(multiplier, CohomologyClass):
            multiplier = Multiplier(multiplier.pairing)
        if not isinstance(multiplier, Multiplier):
            raise TypeError("need a Multiplier, Bicharacter or CohomologyClass")
        self.multiplier = multiplier
        self._exact_pack = None
        if multiplier.coboundary is None:
            self._exact_pack = multiplier.bicharacter.exact_matrix_over_common_den()
        n = self.group.ngens
        self._float_flat = array("d", [
            multiplier.bicharacter.matrix[i][j].as_float()
            for i in range(n) for j in range(n)])

    @property
    def group(self) -> FgAbelianGroup:
        return self.multiplier.group

    @property
    def is_pure_bicharacter(self) -> bool:
        return self.multiplier.coboundary is None

    @property
    def is_exact(self) -> bool:
        if not self.multiplier.bicharacter.is_exact:
            return False
        cb = self.multiplier.coboundary
        if cb is None:
            return True
        return (all(t.is_exact for row in cb.q_scales for t in row)
                and all(t.is_exact for t in cb.l_scales))

    def twist(self, x: GroupElement, y: GroupElement) -> CirclePoint:
        return self.multiplier.evaluate(x, y)

    @classmethod
    def zero(cls, group: FgAbelianGroup) -> "StarContext":
        return cls(Bicharacter.zero(group))


def _mods_array(group: FgAbelianGroup):
    return array("q", [0] * group.free_rank + list(group.torsion))


def _pack_exact_scalar(elem: AlgebraElement, D: int):
    """Flatten an exact scalar element; phases scaled to D, amps over a lcm.

    Plain lists, not machine arrays: amplitudes and coordinates may exceed
    int64, and the dispatcher only narrows to typed arrays after it has
    checked the bounds that make the compiled kernel safe.
    """
    aden = 1
    for v in elem.coeffs.values():
        for re, im in v.terms().values():
            aden = _lcm(aden, _lcm(re.denominator, im.denominator))
    coords = []
    off = [0]
    phases, res, ims = [], [], []
    maxamp = 0
    for x, v in elem.coeffs.items():
        coords.extend(x.coords)
        terms = v.terms()
        for t in sorted(terms):
            re, im = terms[t]
            p = (t.numerator * D) // t.denominator
            rn = re.numerator * (aden // re.denominator)
            inum = im.numerator * (aden // im.denominator)
            phases.append(p % D)
            res.append(rn)
            ims.append(inum)
            maxamp = max(maxamp, abs(rn), abs(inum))
        off.append(len(phases))
    return len(elem.coeffs), coords, off, phases, res, ims, aden, maxamp


def _phase_den_of(elem: AlgebraElement) -> int:
    d = 1
    for v in elem.coeffs.values():
        for t in v.terms():
            d = _lcm(d, t.denominator)
    return d


def _unpack_exact(group, dim, raw, D, amp_den) -> AlgebraElement:
    coeffs = {}
    for key in sorted(raw):
        bucket = raw[key]
        ec = ExactComplex()
        for p in sorted(bucket):
            re, im = bucket[p]
            if re or im:
                ec._add_term(Fraction(p, D), Fraction(re, amp_den),
                             Fraction(im, amp_den))
        if not ec.is_zero():
            coeffs[group.element(key)] = ec
    return AlgebraElement(group, coeffs, dim, _trusted=True)


def _star_exact_packed(a, b, ctx, shift: Optional[GroupElement]):
    nums, tden = ctx._exact_pack
    D = _lcm(_lcm(4, tden), _lcm(_phase_den_of(a), _phase_den_of(b)))
    rank = a.group.ngens
    scale = D // tden
    theta_scaled = [nums[i][j] * scale
                    for i in range(rank) for j in range(rank)]
    na, ac, aoff, aph, are, aim, aden, amax = _pack_exact_scalar(a, D)
    nb, bc, boff, bph, bre, bim, bden, bmax = _pack_exact_scalar(b, D)
    bextra = None
    if shift is not None and not shift.is_zero():
        bextra = []
        bich = ctx.multiplier.bicharacter
        for x in b.coeffs:
            t = bich.evaluate(shift, x).value  # exact Fraction
            bextra.append((-(t.numerator * D) // t.denominator) % D)

    use_c = _kernel.star_exact_c is not None
    if use_c:
        maxcoord = max((abs(v) for v in ac + bc), default=0)
        maxtheta = max(map(abs, theta_scaled), default=0)
        bilinear = rank * rank * maxcoord * maxcoord * maxtheta
        if (D > _INT64_PHASE or bilinear > (1 << 60)
                or maxcoord > _INT64_COORD
                or amax > _INT64_AMP or bmax > _INT64_AMP):
            use_c = False
    if use_c:
        # bounds certified above, so the narrowing cannot overflow
        ac, bc = array("q", ac), array("q", bc)
        aoff, boff = array("q", aoff), array("q", boff)
        aph, bph = array("q", aph), array("q", bph)
        are, aim = array("q", are), array("q", aim)
        bre, bim = array("q", bre), array("q", bim)
        theta_scaled = array("q", theta_scaled)
        if bextra is not None:
            bextra = array("q", bextra)
    fn = _kernel.star_exact_c if use_c else _kernel.star_exact_py
    raw = fn(rank, _mods_array(a.group),
             na, ac, aoff, aph, are, aim,
             nb, bc, boff, bph, bre, bim,
             theta_scaled, D, bextra)
    return _unpack_exact(a.group, 1, raw, D, aden * bden)


def _star_real_packed(a, b, ctx, shift: Optional[GroupElement]):
    rank = a.group.ngens
    na = len(a.coeffs)
    nb = len(b.coeffs)
    ac = array("q")
    bc = array("q")
    acoef = np.empty(na, complex)
    bcoef = np.empty(nb, complex)
    for i, (x, v) in enumerate(a.coeffs.items()):
        ac.extend(x.coords)
        acoef[i] = scalar_to_complex(v)
    for j, (y, v) in enumerate(b.coeffs.items()):
        bc.extend(y.coords)
        bcoef[j] = scalar_to_complex(v)
    bextra = None
    if shift is not None and not shift.is_zero():
        bextra = array("d", [
            -ctx.multiplier.bicharacter.evaluate(shift, y).as_float()
            for y in b.coeffs])
    fn = _kernel.star_real_c if _kernel.star_real_c is not None \
        else _kernel.star_real_py
    raw = fn(rank, _mods_array(a.group), na, ac, acoef, nb, bc, bcoef,
             ctx._float_flat, bextra)
    coeffs = {a.group.element(k): v for k, v in sorted(raw.items())}
    return AlgebraElement(a.group, coeffs, 1)


def _star_generic(a, b, ctx, shift: Optional[GroupElement],
                  extra_multiplier=None):
    dim = a.dim
    out: Dict[GroupElement, Coefficient] = {}
    for xa, ca in a.coeffs.items():
        xa_eff = xa if shift is None else xa + shift
        for xb, cb in b.coeffs.items():
            t = ctx.multiplier.evaluate(xa_eff, xb)
            if extra_multiplier is not None:
                t = t + extra_multiplier.evaluate(xa_eff, xb)
            val = _coeff_times_phase(_coeff_mul(ca, cb, dim), -t, dim)
            key = xa + xb
            out[key] = _coeff_add(out[key], val, dim) if key in out else val
    return AlgebraElement(a.group, out, dim)


def star(a: AlgebraElement, b: AlgebraElement, ctx: StarContext,
         shift: Optional[GroupElement] = None) -> AlgebraElement:
    """Deformed product: sum over support pairs of e(-Theta(u,v))·a_u·b_v.

    ``shift`` adds a constant weight to the left slot of the cocycle (used by
    module actions); the product's support is unaffected by it.
    """
    a._check_compatible(b)
    if ctx.group != a.group:
        raise ValueError("context group does not match the elements")
    if a.is_zero() or b.is_zero():
        return AlgebraElement.zero(a.group, a.dim)
    if a.dim == 1 and ctx.is_pure_bicharacter:
        if ctx._exact_pack is not None and a.is_exact and b.is_exact:
            return _star_exact_packed(a, b, ctx, shift)
        # anything not fully exact is a float computation anyway
        return _star_real_packed(a, b, ctx, shift)
    return _star_generic(a, b, ctx, shift)


def involution(a: AlgebraElement, ctx: StarContext) -> AlgebraElement:
    """Deformed adjoint:  a*(x) = e(-Theta(-x,-x)) · conj(a(-x))."""
    if ctx.group != a.group:
        raise ValueError("context group does not match the element")
    out = {}
    for x, v in a.coeffs.items():
        y = -x
        t = ctx.twist(y, y)
        out[y] = _coeff_times_phase(_coeff_conj_transpose(v, a.dim), -t, a.dim)
    return AlgebraElement(a.group, out, a.dim)


def seminorm(a: AlgebraElement, j: int = 0, k: int = 0) -> float:
    """Weighted sup-seminorm: max over support of (1+4 pi^2 |x|^2)^j ·||a(x)||.

    ``k`` indexes the coefficient-norm member of the seminorm family; for the
    finite-dimensional coefficient blocks used here every member equals the
    operator norm, so k does not change the value.
    """
    del k
    best = 0.0
    for x, v in a.coeffs.items():
        w = (1.0 + 4.0 * math.pi ** 2 * dual_length(a.group, x) ** 2) ** j
        best = max(best, w * _coeff_opnorm(v, a.dim))
    return best


def element_residual(a: AlgebraElement, b: AlgebraElement) -> float:
    """Max coefficient distance; exactly 0.0 when all terms cancel structurally."""
    return (a - b).max_abs()


# ---------------------------------------------------------------------------
# Structural checks and isomorphisms.


def deformation_composition_check(a: AlgebraElement, b: AlgebraElement,
                                  ctx1: StarContext, ctx2: StarContext) -> float:
    """Residual of (twist by ctx2 on top of ctx1-product) vs the summed context.

    Deforming an already deformed product by a second cocycle must equal the
    single deformation by the sum; returns the max coefficient residual.
    """
    if not (ctx1.is_pure_bicharacter and ctx2.is_pure_bicharacter):
        raise ValueError("composition check is defined for bicharacter contexts")
    twice = _star_generic(a, b, ctx1, None, extra_multiplier=ctx2.multiplier)
    summed = star(a, b, StarContext(ctx1.multiplier.bicharacter
                                    + ctx2.multiplier.bicharacter))
    return element_residual(twice, summed)


def commutation_defect(a: AlgebraElement, b: AlgebraElement, ctx: StarContext,
                       cls: CohomologyClass) -> float:
    """Max deviation from the twisted commutation rule on isotypic pieces.

    For each support pair (x, y) compares  b_y ⋆ a_x  against the pairing
    twist  e(pairing(x,y)) · (a_x ⋆ b_y); zero iff the context's class is cls
    on the spanned directions (coefficient noncommutativity included for
    matrix coefficients).
    """
    dim = a.dim
    worst = 0.0
    for x, ca in a.coeffs.items():
        for y, cb in b.coeffs.items():
            left = _coeff_times_phase(_coeff_mul(cb, ca, dim),
                                      -ctx.twist(y, x), dim)
            tw = cls.evaluate(x, y) - ctx.twist(x, y)
            right = _coeff_times_phase(_coeff_mul(ca, cb, dim), tw, dim)
            diff = _coeff_add(left, _coeff_neg(right, dim), dim)
            if not _coeff_is_zero(diff, dim):
                worst = max(worst, _coeff_abs(diff, dim))
    return worst


def coboundary_isomorphism(a: AlgebraElement, T: CoboundaryData) -> AlgebraElement:
    """Reweighting  a_x -> e(T(x)) a_x; intertwines products whose cocycles
    differ by the coboundary of T."""
    if T.group != a.group:
        raise ValueError("coboundary data on a different group")
    out = {x: _coeff_times_phase(v, T.evaluate(x), a.dim)
           for x, v in a.coeffs.items()}
    return AlgebraElement(a.group, out, a.dim)


def glnz_pullback_on_elements(a: AlgebraElement,
                              R: Sequence[Sequence[int]]) -> AlgebraElement:
    """Basis-change action: reindex coefficients by x -> R^{-T} x.

    Only defined on free weight groups, where a unimodular matrix is an
    automorphism.
    """
    if a.group.torsion:
        raise ValueError("matrix reindexing needs a free weight group")
    n = a.group.ngens
    d = int_det(R)
    if d not in (1, -1):
        raise ValueError(f"need a unimodular matrix (det = {d})")
    Rinv = int_inverse(R)
    out = {}
    for x, v in a.coeffs.items():
        newc = tuple(sum(Rinv[j][i] * x.coords[j] for j in range(n))
                     for i in range(n))
        out[a.group.element(newc)] = v
    return AlgebraElement(a.group, out, a.dim)


def glnz_paired_source_bicharacter(target: Bicharacter,
                                   R: Sequence[Sequence[int]]) -> Bicharacter:
    """The cocycle that the reindexing by R intertwines INTO ``target``.

    The element map x -> R^{-T}x sends the product twisted by this source
    cocycle to the product twisted by ``target``.
    """
    Rinv = int_inverse(R)
    n = len(Rinv)
    sigma = [[Rinv[j][i] for j in range(n)] for i in range(n)]
    return target.pullback(sigma)
