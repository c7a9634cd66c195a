"""Group 2-cocycles on f.g. abelian groups: bicharacters, coboundaries, classes.

Every 2-cocycle used here is normalised (M(x,0) = M(0,x) = 0).  A bicharacter
is a bilinear map to R/Z given by a matrix of CirclePoints on generators; a
multiplier adds an explicit coboundary part dT.  Antisymmetrisation
M(x,y) - M(y,x) kills coboundaries and classifies multipliers up to
equivalence, so cohomology classes are stored as alternating bicharacters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import (CirclePoint, FgAbelianGroup, GroupElement, QuotientMap,
                     Subgroup, int_det, quotient, smith_normal_form)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Bicharacter:
    """Bilinear map G x G -> R/Z determined by values on generator pairs.

    Entries must be compatible with the torsion: m_i·M(e_i, e_j) = 0 =
    m_j·M(e_i, e_j) whenever a generator has finite order m.
    """

    __slots__ = ("group", "matrix")

    def __init__(self, group: FgAbelianGroup, matrix: Sequence[Sequence[CirclePoint]],
                 check: bool = True):
        n = group.ngens
        rows = []
        for row in matrix:
            row = tuple(CirclePoint.from_value(t) for t in row)
            if len(row) != n:
                raise ValueError("matrix shape does not match the group")
            rows.append(row)
        if len(rows) != n:
            raise ValueError("matrix shape does not match the group")
        self.group = group
        self.matrix = tuple(rows)
        if check:
            self._check_torsion()

    def _check_torsion(self):
        g = self.group
        for i in range(g.ngens):
            mi = g.generator_order(i)
            if mi == 0:
                continue
            for j in range(g.ngens):
                for t in (self.matrix[i][j], self.matrix[j][i]):
                    if not t.scale(mi).is_zero(tol=1e-9 if not t.is_exact else 0.0):
                        raise ValueError(
                            f"entry {t!r} incompatible with generator order {mi}")

    @classmethod
    def zero(cls, group: FgAbelianGroup) -> "Bicharacter":
        z = CirclePoint.zero()
        return cls(group, [[z] * group.ngens for _ in range(group.ngens)], check=False)

    @classmethod
    def from_rationals(cls, group: FgAbelianGroup, rows) -> "Bicharacter":
        return cls(group, [[CirclePoint.from_value(Fraction(t)) for t in row]
                           for row in rows])

    @property
    def is_exact(self) -> bool:
        return all(t.is_exact for row in self.matrix for t in row)

    def evaluate(self, x: GroupElement, y: GroupElement) -> CirclePoint:
        """M(x,y) = sum_ij x_i y_j M_ij in R/Z."""
        if x.group != self.group or y.group != self.group:
            raise ValueError("elements outside the bicharacter's group")
        if self.is_exact:
            acc = Fraction(0)
            for i, xi in enumerate(x.coords):
                if not xi:
                    continue
                row = self.matrix[i]
                for j, yj in enumerate(y.coords):
                    if yj:
                        acc += xi * yj * row[j].value
            return CirclePoint(acc, exact=True)
        acc_f = 0.0
        downgraded = False
        for i, xi in enumerate(x.coords):
            if not xi:
                continue
            row = self.matrix[i]
            for j, yj in enumerate(y.coords):
                if yj:
                    t = row[j]
                    acc_f += xi * yj * t.as_float()
                    downgraded = downgraded or t.downgraded or t.is_exact
        return CirclePoint(acc_f, exact=False, downgraded=downgraded)

    def transpose(self) -> "Bicharacter":
        n = self.group.ngens
        return Bicharacter(self.group,
                           [[self.matrix[j][i] for j in range(n)] for i in range(n)],
                           check=False)

    def __add__(self, other: "Bicharacter") -> "Bicharacter":
        if self.group != other.group:
            raise ValueError("bicharacters on different groups")
        n = self.group.ngens
        return Bicharacter(self.group,
                           [[self.matrix[i][j] + other.matrix[i][j] for j in range(n)]
                            for i in range(n)], check=False)

    def __neg__(self) -> "Bicharacter":
        return Bicharacter(self.group,
                           [[-t for t in row] for row in self.matrix], check=False)

    def __sub__(self, other: "Bicharacter") -> "Bicharacter":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Bicharacter):
            return NotImplemented
        return self.group == other.group and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.group, self.matrix))

    def is_zero_matrix(self, tol: float = 0.0) -> bool:
        return all(t.is_zero(tol) for row in self.matrix for t in row)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return (self - self.transpose()).is_zero_matrix(tol)

    def is_alternating(self, tol: float = 0.0) -> bool:
        # M(x,x) = 0 for all x: zero diagonal and antisymmetric entries
        n = self.group.ngens
        if not all(self.matrix[i][i].is_zero(tol) for i in range(n)):
            return False
        return (self + self.transpose()).is_zero_matrix(tol)

    def exact_matrix_over_common_den(self):
        """(numerator matrix, D) with entries num/D, or None when not exact."""
        if not self.is_exact:
            return None
        den = 1
        for row in self.matrix:
            for t in row:
                den = _lcm(den, t.value.denominator)
        nums = [[int(t.value * den) for t in row] for row in self.matrix]
        return nums, den

    def pullback(self, R: Sequence[Sequence[int]]) -> "Bicharacter":
        """Bicharacter (x,y) -> M(Rx, Ry); matrix R^T·M·R."""
        n = self.group.ngens
        R = [list(map(int, row)) for row in R]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = CirclePoint.zero()
                for a in range(n):
                    ra = R[a][i]
                    if not ra:
                        continue
                    for b in range(n):
                        rb = R[b][j]
                        if rb:
                            acc = acc + self.matrix[a][b].scale(ra * rb)
                row.append(acc)
            out.append(row)
        return Bicharacter(self.group, out, check=False)

    def to_json_dict(self) -> dict:
        return {"group": self.group.to_json_dict(),
                "matrix": [[t.to_json_dict() for t in row] for row in self.matrix]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "Bicharacter":
        group = FgAbelianGroup.from_json_dict(d["group"])
        matrix = [[CirclePoint.from_json_dict(t) for t in row] for row in d["matrix"]]
        return cls(group, matrix)

    def __repr__(self):
        return f"Bicharacter({self.group!r}, {self.matrix!r})"


def standard_bicharacter(group: FgAbelianGroup, theta_rows,
                         convention: str = "upper") -> Bicharacter:
    """Cocycle representatives built from an angle matrix theta.

    Only the strictly upper entries of ``theta_rows`` are read.  Conventions:
    "upper" puts theta_ij at (i,j) for i<j; "lower" puts -theta_ij at (j,i);
    "half" splits +-theta_ij/2 across both triangles.  All three have the
    same antisymmetrisation.
    """
    n = group.ngens
    theta = [[CirclePoint.from_value(t) for t in row] for row in theta_rows]
    z = CirclePoint.zero()
    out = [[z] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            t = theta[i][j]
            if convention == "upper":
                out[i][j] = t
            elif convention == "lower":
                out[j][i] = -t
            elif convention == "half":
                if not t.is_exact:
                    raise ValueError("the half convention needs exact angles")
                half = CirclePoint(t.value / 2, exact=True)
                out[i][j] = half
                out[j][i] = -half
            else:
                raise ValueError(f"unknown convention {convention!r}")
    return Bicharacter(group, out)


class CoboundaryData:
    """Integral quadratic + linear circle-valued phase function T.

    T(x) = sum_{i<j} Q_ij x_i x_j s_ij
         + sum_i   Q_ii quad_i(x_i) s_ii
         + sum_i   L_i x_i l_i
    with integer Q (symmetric), integer L and CirclePoint scales s, l.
    The diagonal quadratic shape depends on the generator order: even-order
    generators use quad(c) = c^2 and the others quad(c) = c(c-1)/2.  T is
    evaluated on the stored (torsion-reduced) coordinates, so dT is a
    well-defined symmetric coboundary on any group; the shape rule is what
    keeps ``for_symmetric`` exact under reduction carries.
    """

    __slots__ = ("group", "Q", "q_scales", "L", "l_scales")

    def __init__(self, group: FgAbelianGroup, Q, q_scales, L, l_scales):
        n = group.ngens
        self.group = group
        self.Q = tuple(tuple(int(v) for v in row) for row in Q)
        self.q_scales = tuple(tuple(CirclePoint.from_value(t) for t in row)
                              for row in q_scales)
        self.L = tuple(int(v) for v in L)
        self.l_scales = tuple(CirclePoint.from_value(t) for t in l_scales)
        if len(self.Q) != n or len(self.L) != n:
            raise ValueError("shape mismatch with the group")

    @classmethod
    def zero(cls, group: FgAbelianGroup) -> "CoboundaryData":
        n = group.ngens
        z = CirclePoint.zero()
        return cls(group, [[0] * n for _ in range(n)], [[z] * n for _ in range(n)],
                   [0] * n, [z] * n)

    @classmethod
    def for_symmetric(cls, sym: Bicharacter) -> "CoboundaryData":
        """T with dT(x,y) = S(x,y) exactly, for a symmetric bicharacter S.

        Off the diagonal T carries -S_ij x_i x_j; on the diagonal it uses
        -S_ii x(x-1)/2 for free and odd-order generators and -S_ii x^2 / 2
        (the halved scale with the square shape) for even-order ones.  With
        the torsion compatibility of S, every carry correction from reduced
        coordinates is an integer, so the identity holds on any group.
        """
        g = sym.group
        n = g.ngens
        Q = [[1] * n for _ in range(n)]
        z = CirclePoint.zero()
        scales = [[z] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                s = sym.matrix[i][j]
                if i == j:
                    m = g.generator_order(i)
                    if m != 0 and m % 2 == 0:
                        s = (CirclePoint.exact(s.value / 2) if s.is_exact
                             else CirclePoint.real(s.as_float() / 2.0))
                scales[i][j] = -s
        return cls(g, Q, scales, [0] * n, [CirclePoint.zero()] * n)

    def evaluate(self, x: GroupElement) -> CirclePoint:
        if x.group != self.group:
            raise ValueError("element outside the group")
        acc = CirclePoint.zero()
        c = x.coords
        n = self.group.ngens
        for i in range(n):
            if self.Q[i][i] and c[i]:
                m = self.group.generator_order(i)
                quad = c[i] * c[i] if (m != 0 and m % 2 == 0) \
                    else c[i] * (c[i] - 1) // 2
                acc = acc + self.q_scales[i][i].scale(self.Q[i][i] * quad)
            for j in range(i + 1, n):
                if self.Q[i][j] and c[i] and c[j]:
                    acc = acc + self.q_scales[i][j].scale(self.Q[i][j] * c[i] * c[j])
            if self.L[i] and c[i]:
                acc = acc + self.l_scales[i].scale(self.L[i] * c[i])
        return acc

    def coboundary(self, x: GroupElement, y: GroupElement) -> CirclePoint:
        """dT(x,y) = T(x) + T(y) - T(x+y)."""
        return self.evaluate(x) + self.evaluate(y) - self.evaluate(x + y)

    def __call__(self, x: GroupElement) -> CirclePoint:
        return self.evaluate(x)


@dataclass(frozen=True)
class Multiplier:
    """Normalised 2-cocycle: a bicharacter plus an optional coboundary part."""

    bicharacter: Bicharacter
    coboundary: Optional[CoboundaryData] = None

    @property
    def group(self) -> FgAbelianGroup:
        return self.bicharacter.group

    def evaluate(self, x: GroupElement, y: GroupElement) -> CirclePoint:
        v = self.bicharacter.evaluate(x, y)
        if self.coboundary is not None:
            v = v + self.coboundary.coboundary(x, y)
        return v

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def __add__(self, other: "Multiplier") -> "Multiplier":
        if self.coboundary is not None or other.coboundary is not None:
            raise ValueError("can only add pure-bicharacter multipliers directly")
        return Multiplier(self.bicharacter + other.bicharacter)


def verify_cocycle(mult: Multiplier, rng=None, samples: int = 60,
                   bound: int = 6) -> float:
    """Max residual of the cocycle identity and the normalisation over a probe set.

    Finite groups up to order 12^3 are enumerated exhaustively; otherwise
    ``samples`` random triples with coordinates in [-bound, bound] are used.
    Exact arithmetic yields exactly 0.0.
    """
    g = mult.group
    triples = []
    if g.is_finite and g.order() <= 12 ** 3:
        els = list(g.iter_elements())
        if len(els) ** 3 <= 12 ** 3:
            triples = [(x, y, z) for x in els for y in els for z in els]
    if not triples:
        import random
        rng = rng or random.Random(0)
        triples = [(g.random_element(rng, bound), g.random_element(rng, bound),
                    g.random_element(rng, bound)) for _ in range(samples)]
    worst = 0.0
    zero = g.zero()
    for x, y, z in triples:
        lhs = mult(x, y + z) + mult(y, z)
        rhs = mult(x, y) + mult(x + y, z)
        d = lhs - rhs
        if d.is_exact:
            if d.value != 0:
                worst = max(worst, 1.0)
        else:
            t = d.as_float()
            worst = max(worst, min(t, 1.0 - t))
        for n in (mult(x, zero), mult(zero, x)):
            if n.is_exact:
                if n.value != 0:
                    worst = max(worst, 1.0)
            else:
                t = n.as_float()
                worst = max(worst, min(t, 1.0 - t))
    return worst


class CohomologyClass:
    """Equivalence class of multipliers: an alternating bicharacter.

    Two multipliers are equivalent iff their antisymmetrisations agree;
    symmetric multipliers are exactly the coboundaries.
    """

    __slots__ = ("pairing",)

    def __init__(self, pairing: Bicharacter, tol: float = 1e-9):
        if not pairing.is_alternating(tol if not pairing.is_exact else 0.0):
            raise ValueError("a cohomology class needs an alternating pairing")
        self.pairing = pairing

    @property
    def group(self) -> FgAbelianGroup:
        return self.pairing.group

    @property
    def is_exact(self) -> bool:
        return self.pairing.is_exact

    @classmethod
    def from_upper_angles(cls, group: FgAbelianGroup, theta_rows) -> "CohomologyClass":
        """Class with pairing theta_ij on (i,j), -theta_ij on (j,i), i<j.

        ``theta_rows`` is either a full square array (only the strict upper
        part is read) or a mapping {(i, j): angle} with i < j."""
        n = group.ngens
        z = CirclePoint.zero()
        mat = [[z] * n for _ in range(n)]
        if isinstance(theta_rows, dict):
            for (i, j), t in theta_rows.items():
                if not 0 <= i < j < n:
                    raise ValueError("upper angles need indices i < j")
                mat[i][j] = CirclePoint.from_value(t)
                mat[j][i] = -mat[i][j]
            return cls(Bicharacter(group, mat))
        theta = [[CirclePoint.from_value(t) for t in row] for row in theta_rows]
        for i in range(n):
            for j in range(i + 1, n):
                mat[i][j] = theta[i][j]
                mat[j][i] = -theta[i][j]
        return cls(Bicharacter(group, mat))

    def evaluate(self, x: GroupElement, y: GroupElement) -> CirclePoint:
        return self.pairing.evaluate(x, y)

    def __call__(self, x, y):
        return self.evaluate(x, y)

    def __eq__(self, other):
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return self.pairing == other.pairing

    def __hash__(self):
        return hash(self.pairing)

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return CohomologyClass(self.pairing + other.pairing)

    def __neg__(self) -> "CohomologyClass":
        return CohomologyClass(-self.pairing)

    def scale(self, n: int) -> "CohomologyClass":
        mat = [[t.scale(n) for t in row] for row in self.pairing.matrix]
        return CohomologyClass(Bicharacter(self.group, mat, check=False))

    def is_trivial(self, tol: float = 0.0) -> bool:
        return self.pairing.is_zero_matrix(tol)

    def to_json_dict(self) -> dict:
        d = self.pairing.to_json_dict()
        d["alternating"] = True
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CohomologyClass":
        return cls(Bicharacter.from_json_dict(d))

    def __repr__(self):
        return f"CohomologyClass({self.pairing.matrix!r})"


def antisymmetrize(mult) -> CohomologyClass:
    """The invariant pairing M(x,y) - M(y,x); coboundary parts drop out."""
    b = mult.bicharacter if isinstance(mult, Multiplier) else mult
    return CohomologyClass(b - b.transpose())


def is_coboundary(mult, tol: float = 0.0) -> bool:
    return antisymmetrize(mult).is_trivial(tol)


def is_cohomologous(m1, m2, tol: float = 0.0) -> bool:
    a1, a2 = antisymmetrize(m1), antisymmetrize(m2)
    return (a1.pairing - a2.pairing).is_zero_matrix(tol)


def cohomology_witness(mult: Multiplier, representative: Bicharacter) -> CoboundaryData:
    """Explicit T with  mult = representative + dT  on a free group.

    The difference multiplier - representative is symmetric whenever the two
    are cohomologous, and symmetric bicharacters on free groups are realised
    exactly by the closed-form quadratic T.
    """
    if mult.coboundary is not None:
        raise ValueError("strip the explicit coboundary part first")
    diff = mult.bicharacter - representative
    if not diff.is_symmetric(0.0 if diff.is_exact else 1e-9):
        raise ValueError("multipliers are not cohomologous")
    return CoboundaryData.for_symmetric(diff)


# ---------------------------------------------------------------------------
# Kernel, nondegenerate part, order.


def kernel_of(cls: CohomologyClass) -> Subgroup:
    """{x : pairing(x, ·) = 0}, computed by clearing denominators and SNF.

    Refuses non-exact pairings: membership is undecidable for irrational
    angles.
    """
    if not cls.is_exact:
        raise ValueError("kernel undecidable for irrational class")
    g = cls.group
    n = g.ngens
    nums, den = cls.pairing.exact_matrix_over_common_den()
    # x in kernel  <=>  (nums^T x) == 0 mod den
    AT = [[nums[j][i] for j in range(n)] for i in range(n)]
    U, S, V = smith_normal_form(AT)
    gens = []
    for i in range(n):
        s = S[i][i] if i < min(len(S), n) else 0
        c = den // math.gcd(s, den)
        col = [V[r][i] * c for r in range(n)]
        gens.append(g.element(col))
    return Subgroup(g, [x for x in gens if not x.is_zero()])


def is_nondegenerate(cls: CohomologyClass) -> bool:
    """True iff the pairing has trivial kernel."""
    ker = kernel_of(cls)
    return all(x.is_zero() for x in ker.minimal_generators())


@dataclass
class NondegenerateSplit:
    """Kernel + quotient data of a class: the nondegenerate descent."""

    kernel: Subgroup
    quotient_group: FgAbelianGroup
    projection: QuotientMap
    descended: CohomologyClass        # the pairing pushed to the quotient
    representative: Bicharacter       # upper-triangular multiplier with that class


def nondegenerate_part(cls: CohomologyClass) -> NondegenerateSplit:
    """Quotient by the kernel and descend the pairing.

    The descended pairing is nondegenerate; the returned representative is
    the upper-triangular multiplier on the quotient whose antisymmetrisation
    is the descended pairing.  Invariant factors of the quotient come out
    ascending from the SNF.
    """
    g = cls.group
    ker = kernel_of(cls)
    Q, pr = quotient(g, ker)
    lifts = [pr.lift(Q.generator(i)) for i in range(Q.ngens)]
    mat = [[cls.evaluate(lifts[i], lifts[j]) for j in range(Q.ngens)]
           for i in range(Q.ngens)]
    # descent is automatically torsion-compatible: m_i·lift_i lies in the
    # kernel, so m_i·omega_ij = pairing(m_i·lift_i, lift_j) = 0.  Checked
    # defensively anyway (constructor validates).
    descended = CohomologyClass(Bicharacter(Q, mat))
    n = Q.ngens
    z = CirclePoint.zero()
    rep = [[z] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rep[i][j] = mat[i][j]
    representative = Bicharacter(Q, rep)
    return NondegenerateSplit(ker, Q, pr, descended, representative)


def class_order(cls: CohomologyClass) -> int:
    """Smallest n >= 1 with n·class = 0: the lcm of entry denominators."""
    if not cls.is_exact:
        raise ValueError("class order undefined for irrational class")
    n = 1
    for row in cls.pairing.matrix:
        for t in row:
            n = _lcm(n, t.value.denominator)
    return n


def pullback(cls: CohomologyClass, R: Sequence[Sequence[int]]) -> CohomologyClass:
    """Pullback along an integer matrix: pairing'(x,y) = pairing(Rx, Ry).

    R must be unimodular so the result is again a class on the same group.
    """
    d = int_det(R)
    if d not in (1, -1):
        raise ValueError(f"pullback needs a unimodular matrix (det = {d})")
    return CohomologyClass(cls.pairing.pullback(R))
