"""Finite-dimensional splitting of rational deformations.

At a rational angle p/q the deformed two-torus algebra is a bundle of q x q
matrix algebras over a coarser torus.  This module carries the clock and
shift matrices exactly, the basis morphism onto words in them, the coset
decomposition of an element along the kernel lattice of the pairing, and a
finite-group simplicity cross-check through the regular representation.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .coefficients import ExactComplex, scalar_abs
from .cohomology import (Bicharacter, CohomologyClass, antisymmetrize,
                         kernel_of)
from .groups import CirclePoint, FgAbelianGroup, GroupElement, quotient
from .twisted_algebra import AlgebraElement, StarContext

ExactMatrix = Tuple[Tuple[ExactComplex, ...], ...]


def _exact_eye(n: int) -> ExactMatrix:
    one, zero = ExactComplex.one(), ExactComplex.zero()
    return tuple(tuple(one if i == j else zero for j in range(n))
                 for i in range(n))


def exact_mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ExactComplex.zero()
            for k in range(n):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def exact_mat_scale(m: ExactMatrix, c: ExactComplex) -> ExactMatrix:
    return tuple(tuple(c * x for x in row) for row in m)


def exact_mat_residual(a: ExactMatrix, b: ExactMatrix) -> float:
    return max(((x - y).abs() for ra, rb in zip(a, b)
                for x, y in zip(ra, rb)), default=0.0)


def exact_mat_to_complex(m: ExactMatrix) -> np.ndarray:
    return np.array([[x.to_complex() for x in row] for row in m])


class ClockShiftModel:
    """The q x q clock and shift pair at angle p/q, held exactly.

    clock = diag(e(p j / q)), shift maps basis vector j+1 to j cyclically;
    they satisfy  shift clock = e(p/q) clock shift,  both have order q.
    """

    def __init__(self, q: int, p: int = 1):
        if q < 1:
            raise ValueError("modulus must be positive")
        self.q = q
        self.p = p % q if q > 1 else 0
        self.angle = Fraction(p, q) if q > 1 else Fraction(0)
        zero = ExactComplex.zero()
        self.clock: ExactMatrix = tuple(
            tuple(ExactComplex.from_phase(CirclePoint.exact(Fraction(p * j, q)))
                  if i == j else zero for j in range(q)) for i in range(q))
        self.shift: ExactMatrix = tuple(
            tuple(ExactComplex.one() if j == (i + 1) % q else zero
                  for j in range(q)) for i in range(q))
        self._word_cache: Dict[Tuple[int, int], ExactMatrix] = {}

    def relation_residual(self) -> float:
        """|shift clock - e(p/q) clock shift|, entrywise max; zero exactly."""
        lhs = exact_mat_mul(self.shift, self.clock)
        rhs = exact_mat_scale(
            exact_mat_mul(self.clock, self.shift),
            ExactComplex.from_phase(CirclePoint.exact(Fraction(self.p, self.q))))
        return exact_mat_residual(lhs, rhs)

    def order_residual(self) -> float:
        """Both words of length q must close up to the identity."""
        cq = _exact_eye(self.q)
        sq = _exact_eye(self.q)
        for _ in range(self.q):
            cq = exact_mat_mul(cq, self.clock)
            sq = exact_mat_mul(sq, self.shift)
        eye = _exact_eye(self.q)
        return max(exact_mat_residual(cq, eye), exact_mat_residual(sq, eye))

    def word(self, x1: int, x2: int) -> ExactMatrix:
        """Image of the basis mode (x1, x2): e(theta x1 x2) clock^x1 shift^x2.

        Constant on residues mod q, so the inputs are reduced first.
        """
        r1, r2 = x1 % self.q, x2 % self.q
        cached = self._word_cache.get((r1, r2))
        if cached is not None:
            return cached
        phase = ExactComplex.from_phase(
            CirclePoint.exact(self.angle * r1 * r2))
        m = _exact_eye(self.q)
        for _ in range(r1):
            m = exact_mat_mul(m, self.clock)
        for _ in range(r2):
            m = exact_mat_mul(m, self.shift)
        m = exact_mat_scale(m, phase)
        self._word_cache[(r1, r2)] = m
        return m

    def image(self, a: AlgebraElement) -> ExactMatrix:
        """Fibre of the element at the base point zero: sum of coefficient
        times word over the support.  Exact for exact coefficients."""
        _require_rank_two_scalar(a)
        acc = [[ExactComplex.zero()] * self.q for _ in range(self.q)]
        if not a.is_exact:
            raise ValueError("exact image needs exact coefficients; "
                             "use evaluate() for numeric fibres")
        for x, v in a.coeffs.items():
            w = self.word(x.coords[0], x.coords[1])
            for i in range(self.q):
                for j in range(self.q):
                    if not w[i][j].is_zero():
                        acc[i][j] = acc[i][j] + v * w[i][j]
        return tuple(tuple(row) for row in acc)

    def evaluate(self, a: AlgebraElement, point: Sequence[float]) -> np.ndarray:
        """Numeric fibre over a base torus point: sum over frequencies of
        coefficient times e(x . t) times the word matrix."""
        _require_rank_two_scalar(a)
        t1, t2 = float(point[0]), float(point[1])
        out = np.zeros((self.q, self.q), complex)
        for x, _v in a.coeffs.items():
            c = a.coefficient_complex(x)
            ph = np.exp(2j * math.pi * (x.coords[0] * t1 + x.coords[1] * t2))
            out += (c * ph) * exact_mat_to_complex(
                self.word(x.coords[0], x.coords[1]))
        return out

    def star_context(self) -> StarContext:
        """The matching deformation on the rank-two lattice: the cocycle
        e(-theta x1 y2) whose basis images multiply through ``word``."""
        g = FgAbelianGroup(2)
        z = CirclePoint.zero()
        mat = [[z, CirclePoint.exact(self.angle)], [z, z]]
        return StarContext(Bicharacter(g, mat))

    def morphism_residual(self) -> float:
        """Exact multiplicativity over all q^2 x q^2 reduced basis pairs:
        word(x) word(y) must equal e(-theta x1 y2) word(x + y)."""
        worst = 0.0
        for x1 in range(self.q):
            for x2 in range(self.q):
                wx = self.word(x1, x2)
                for y1 in range(self.q):
                    for y2 in range(self.q):
                        lhs = exact_mat_mul(wx, self.word(y1, y2))
                        ph = ExactComplex.from_phase(
                            CirclePoint.exact(-self.angle * x1 * y2))
                        rhs = exact_mat_scale(self.word(x1 + y1, x2 + y2), ph)
                        worst = max(worst, exact_mat_residual(lhs, rhs))
        return worst


def _require_rank_two_scalar(a: AlgebraElement):
    if a.dim != 1:
        raise ValueError("splitting acts on scalar coefficients")
    if a.group.free_rank != 2 or a.group.torsion:
        raise ValueError("splitting needs the rank-two lattice")


# ---------------------------------------------------------------------------
# Coset decomposition along the kernel of the pairing.


class SplitElement:
    """Element decomposed into coset buckets along a kernel sublattice.

    ``projection`` is the quotient map that defined the labels; the audit
    re-projects every stored frequency against it.
    """

    __slots__ = ("group", "buckets", "labels_group", "projection")

    def __init__(self, group: FgAbelianGroup, labels_group: FgAbelianGroup,
                 projection, buckets: Dict[tuple, AlgebraElement]):
        self.group = group
        self.labels_group = labels_group
        self.projection = projection
        self.buckets = {k: v for k, v in buckets.items() if v.coeffs}

    def recombine(self) -> AlgebraElement:
        total = AlgebraElement.zero(self.group)
        for part in self.buckets.values():
            total = total + part
        return total

    @property
    def bucket_count(self) -> int:
        return len(self.buckets)

    def relabeled(self, mapping: Dict[tuple, tuple]) -> "SplitElement":
        """Copy with some bucket labels replaced; for audit negative controls."""
        moved: Dict[tuple, AlgebraElement] = {}
        for k, v in self.buckets.items():
            nk = mapping.get(k, k)
            moved[nk] = moved[nk] + v if nk in moved else v
        return SplitElement(self.group, self.labels_group, self.projection,
                            moved)


def refined_split(a: AlgebraElement, cls: CohomologyClass) -> SplitElement:
    """Group the coefficients by coset along the kernel lattice of the pairing.

    Requires the deforming cocycle to descend to the cosets: the pairing must
    take integer values whenever either argument is in the kernel (automatic),
    and the standard representative must be coset-constant, which is checked.
    """
    if a.group != cls.group:
        raise ValueError("element and class live on different groups")
    if a.dim != 1:
        raise ValueError("splitting acts on scalar coefficients")
    ker = kernel_of(cls)
    qgroup, pr = quotient(a.group, ker)
    if not qgroup.is_finite:
        raise ValueError("kernel has infinite index; no finite splitting")
    buckets: Dict[tuple, dict] = {}
    for x, v in a.coeffs.items():
        label = tuple(pr.apply(x).coords)
        buckets.setdefault(label, {})[x] = v
    made = {lab: AlgebraElement(a.group, cs) for lab, cs in buckets.items()}
    return SplitElement(a.group, qgroup, pr, made)


def coset_constancy_residual(theta: Bicharacter, cls: Optional[CohomologyClass] = None) -> float:
    """Largest defect of the cocycle against kernel translations.

    Checks e(theta(k, e_j)) = 1 = e(theta(e_i, k)) for the kernel generators;
    zero exactly when the cocycle is constant on cosets.
    """
    c = cls if cls is not None else antisymmetrize(theta)
    ker = kernel_of(c)
    g = theta.group
    worst = 0.0
    for k in ker.minimal_generators():
        for i in range(g.ngens):
            e = g.generator(i)
            for t in (theta.evaluate(k, e), theta.evaluate(e, k)):
                worst = max(worst, abs(t.to_complex() - 1.0))
    return worst


def equivariance_audit(split: SplitElement) -> dict:
    """Bookkeeping isotypy check of a coset decomposition.

    Every frequency in a bucket must project onto the bucket's label; the
    residual charges mislabeled coefficients by their magnitude.  A clean
    refined split reports exactly zero.
    """
    pr = split.projection
    worst = 0.0
    per_bucket = {}
    for label, part in split.buckets.items():
        bad = 0.0
        for x, v in part.coeffs.items():
            if tuple(pr.apply(x).coords) != label:
                bad = max(bad, scalar_abs(v))
        per_bucket[label] = bad
        worst = max(worst, bad)
    return {"max_residual": worst,
            "buckets": {",".join(map(str, k)): v for k, v in per_bucket.items()},
            "bucket_count": len(split.buckets),
            "label_group_order": (split.labels_group.order()
                                  if split.labels_group.is_finite else None)}


# ---------------------------------------------------------------------------
# Simplicity cross-check through the regular representation.


def simplicity_report(rep, max_order: int = 81) -> dict:
    """Center dimension of the twisted algebra of a finite group.

    ``rep`` is a bicharacter cocycle (or a class, in which case its standard
    upper-triangular representative is used).  The center is computed two
    independent ways: numerically, as the common nullspace of left-minus-right
    multiplication by the generators in the regular representation, and
    exactly, as the order of the kernel of the pairing.  Center dimension one
    means the twisted algebra is a full matrix algebra.
    """
    if isinstance(rep, CohomologyClass):
        cls = rep
        n = cls.group.ngens
        z = CirclePoint.zero()
        mat = [[cls.pairing.matrix[i][j] if j > i else z for j in range(n)]
               for i in range(n)]
        sigma = Bicharacter(cls.group, mat)
    elif isinstance(rep, Bicharacter):
        sigma = rep
        cls = antisymmetrize(sigma)
    else:
        raise TypeError("need a bicharacter or a class")
    g = sigma.group
    if not g.is_finite:
        raise ValueError("simplicity check needs a finite group; pass the "
                         "descended quotient data for a lattice class")
    order = g.order()
    if order > max_order:
        raise ValueError(f"group order {order} exceeds the bound {max_order}")
    if g.ngens == 0:
        return {"order": 1, "center_dimension": 1, "kernel_order": 1,
                "consistent": True, "nondegenerate": True}

    elements = list(g.iter_elements())
    index = {tuple(e.coords): i for i, e in enumerate(elements)}

    rows = []
    for gi in range(g.ngens):
        h = g.generator(gi)
        left = np.zeros((order, order), complex)
        right = np.zeros((order, order), complex)
        for j, x in enumerate(elements):
            tgt = index[tuple((h + x).coords)]
            left[tgt, j] = (-sigma.evaluate(h, x)).to_complex()
            right[tgt, j] = (-sigma.evaluate(x, h)).to_complex()
        rows.append(left - right)
    stacked = np.vstack(rows)
    svals = np.linalg.svd(stacked, compute_uv=False)
    tol = max(max(stacked.shape) * np.finfo(float).eps
              * (float(svals[0]) if len(svals) else 1.0), 1e-9)
    rank = int(sum(1 for s in svals if s > tol))
    center_dim = order - rank

    kernel_order = 0
    gens = [g.generator(i) for i in range(g.ngens)]
    pairing = cls.pairing
    for x in elements:
        if all(pairing.evaluate(x, h).is_zero() for h in gens):
            kernel_order += 1

    return {
        "order": order,
        "center_dimension": center_dim,
        "kernel_order": kernel_order,
        "consistent": center_dim == kernel_order,
        "nondegenerate": center_dim == 1,
    }
