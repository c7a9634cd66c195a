"""Deformation of invariant projections, module actions, metrics, endomorphisms.

A weighted frame fixes column weights x_1..x_N.  A projection matrix p over
the twisted algebra is *invariant* when entry (j,k) is supported on the single
weight x_k - x_j; such projections deform entrywise by a phase, and the
deformed matrix is again an idempotent for the deformed product:

    (p_Theta)_jk = e(-Theta(x_j, x_j - x_k)) · p_jk.

Vectors carry component weights v + x_k; the deformed right action and the
deformed hermitian pairing twist each support pair accordingly, and transport
of an endomorphism into the deformed picture is the entrywise phase map that
turns the weighted composition into plain matrix composition over the deformed
product.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

from .coefficients import (ExactComplex, scalar_abs, scalar_add, scalar_conj,
                           scalar_mul, scalar_times_phase)
from .groups import FgAbelianGroup, GroupElement
from .twisted_algebra import (AlgebraElement, StarContext, element_residual,
                              involution, star)


class WeightedFrame:
    """Column weights of a finitely generated projective module presentation."""

    __slots__ = ("group", "weights")

    def __init__(self, group: FgAbelianGroup, weights: Sequence[GroupElement]):
        for w in weights:
            if w.group != group:
                raise ValueError("frame weight outside the group")
        self.group = group
        self.weights = tuple(weights)

    @property
    def size(self) -> int:
        return len(self.weights)

    def __eq__(self, other):
        if not isinstance(other, WeightedFrame):
            return NotImplemented
        return self.group == other.group and self.weights == other.weights

    def __repr__(self):
        return f"WeightedFrame({[w.coords for w in self.weights]})"

    def to_json_dict(self) -> dict:
        return {"group": self.group.to_json_dict(),
                "weights": [list(w.coords) for w in self.weights]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "WeightedFrame":
        group = FgAbelianGroup.from_json_dict(d["group"])
        return cls(group, [group.element(c) for c in d["weights"]])


ElementMatrix = Tuple[Tuple[AlgebraElement, ...], ...]


def _check_matrix(frame: WeightedFrame, entries) -> ElementMatrix:
    n = frame.size
    rows = tuple(tuple(row) for row in entries)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"need a {n}x{n} matrix of elements")
    for row in rows:
        for e in row:
            if e.group != frame.group or e.dim != 1:
                raise ValueError("entries must be scalar elements on the frame group")
    return rows


class InvariantProjection:
    """A projection matrix over the algebra together with its frame."""

    __slots__ = ("frame", "entries")

    def __init__(self, frame: WeightedFrame, entries):
        self.frame = frame
        self.entries = _check_matrix(frame, entries)

    @property
    def group(self) -> FgAbelianGroup:
        return self.frame.group

    def entry(self, j: int, k: int) -> AlgebraElement:
        return self.entries[j][k]

    def to_json_dict(self) -> dict:
        return {"frame": self.frame.to_json_dict(),
                "entries": [[e.to_json_dict() for e in row] for row in self.entries]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "InvariantProjection":
        frame = WeightedFrame.from_json_dict(d["frame"])
        entries = [[AlgebraElement.from_json_dict(e) for e in row]
                   for row in d["entries"]]
        return cls(frame, entries)


class ModuleVector:
    """Column vector over the algebra, component k carrying frame weight x_k."""

    __slots__ = ("frame", "components")

    def __init__(self, frame: WeightedFrame, components: Sequence[AlgebraElement]):
        comps = tuple(components)
        if len(comps) != frame.size:
            raise ValueError("component count does not match the frame")
        for c in comps:
            if c.group != frame.group or c.dim != 1:
                raise ValueError("components must be scalar elements on the frame group")
        self.frame = frame
        self.components = comps

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if self.frame != other.frame:
            raise ValueError("vectors over different frames")
        return ModuleVector(self.frame, [a + b for a, b in
                                         zip(self.components, other.components)])

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        if self.frame != other.frame:
            raise ValueError("vectors over different frames")
        return ModuleVector(self.frame, [a - b for a, b in
                                         zip(self.components, other.components)])

    def max_abs(self) -> float:
        return max((c.max_abs() for c in self.components), default=0.0)


# ---------------------------------------------------------------------------
# Plain matrix algebra over a star context.


def mat_star(frame: WeightedFrame, S: ElementMatrix, T: ElementMatrix,
             ctx: StarContext) -> ElementMatrix:
    """Matrix composition with the deformed product on entries."""
    n = frame.size
    out = []
    for j in range(n):
        row = []
        for k in range(n):
            acc = AlgebraElement.zero(frame.group)
            for l in range(n):
                acc = acc + star(S[j][l], T[l][k], ctx)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_involution(frame: WeightedFrame, S: ElementMatrix,
                   ctx: StarContext) -> ElementMatrix:
    """Adjoint: transpose with the deformed involution on entries."""
    n = frame.size
    return tuple(tuple(involution(S[k][j], ctx) for k in range(n))
                 for j in range(n))


def mat_residual(S: ElementMatrix, T: ElementMatrix) -> float:
    return max(element_residual(a, b) for ra, rb in zip(S, T)
               for a, b in zip(ra, rb))


def mat_sub(S: ElementMatrix, T: ElementMatrix) -> ElementMatrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(S, T))


# ---------------------------------------------------------------------------
# Invariance report and deformation.


def check_invariant_projection(p: InvariantProjection,
                               tol: float = 1e-12) -> dict:
    """Report isotypy / idempotency / self-adjointness of p at the base point.

    Never raises: every failure shows up as a residual or a flag in the
    returned dict.
    """
    frame = p.frame
    n = frame.size
    iso = 0.0
    for j in range(n):
        for k in range(n):
            want = frame.weights[k] - frame.weights[j]
            for x, v in p.entries[j][k].coeffs.items():
                if x != want:
                    iso = max(iso, scalar_abs(v))
    ctx0 = StarContext.zero(frame.group)
    idem = mat_residual(mat_star(frame, p.entries, p.entries, ctx0), p.entries)
    sadj = mat_residual(mat_involution(frame, p.entries, ctx0), p.entries)
    return {
        "isotypy_residual": iso,
        "idempotency_residual": idem,
        "selfadjoint_residual": sadj,
        "ok": bool(iso <= tol and idem <= tol and sadj <= tol),
    }


def deform_projection(p: InvariantProjection, ctx: StarContext,
                      phase_sign: int = -1) -> InvariantProjection:
    """Entrywise phase deformation of an invariant projection.

    The default ``phase_sign=-1`` multiplies entry (j,k) by
    e(-Theta(x_j, x_j - x_k)), which keeps the matrix idempotent and
    self-adjoint for the deformed product; ``phase_sign=+1`` applies the
    opposite twist and is exposed so tests can certify that the sign matters.
    """
    if phase_sign not in (-1, 1):
        raise ValueError("phase_sign must be +1 or -1")
    frame = p.frame
    n = frame.size
    out = []
    for j in range(n):
        row = []
        for k in range(n):
            t = ctx.twist(frame.weights[j], frame.weights[j] - frame.weights[k])
            if phase_sign == 1:
                t = -t
            e = p.entries[j][k]
            row.append(AlgebraElement(
                e.group,
                {x: scalar_times_phase(v, -t) for x, v in e.coeffs.items()},
                e.dim))
        out.append(row)
    return InvariantProjection(frame, out)


# ---------------------------------------------------------------------------
# Deformed module structure.


def module_action(xi: ModuleVector, a: AlgebraElement,
                  ctx: StarContext) -> ModuleVector:
    """Deformed right action: component k is twisted by weight v + x_k."""
    if a.group != xi.frame.group or a.dim != 1:
        raise ValueError("need a scalar element on the frame group")
    comps = [star(c, a, ctx, shift=w)
             for c, w in zip(xi.components, xi.frame.weights)]
    return ModuleVector(xi.frame, comps)


def module_metric(xi: ModuleVector, eta: ModuleVector,
                  ctx: StarContext) -> AlgebraElement:
    """Deformed hermitian pairing, conjugate-linear in the first slot.

    The (v, w) support pair of component k contributes at mode w - v with
    phase e(Theta(v + x_k, w - v)).
    """
    if xi.frame != eta.frame:
        raise ValueError("vectors over different frames")
    g = xi.frame.group
    out: Dict[GroupElement, object] = {}
    for k, x_k in enumerate(xi.frame.weights):
        for v, cv in xi.components[k].coeffs.items():
            u = v + x_k
            cconj = scalar_conj(cv)
            for w, cw in eta.components[k].coeffs.items():
                z = w - v
                t = ctx.twist(u, z)
                val = scalar_times_phase(scalar_mul(cconj, cw), t)
                out[z] = scalar_add(out[z], val) if z in out else val
    return AlgebraElement(g, out, 1)


def apply_projection(p: InvariantProjection, xi: ModuleVector,
                     ctx: StarContext) -> ModuleVector:
    """Matrix-times-vector with the deformed product on entries."""
    n = p.frame.size
    comps = []
    for j in range(n):
        acc = AlgebraElement.zero(p.group)
        for k in range(n):
            acc = acc + star(p.entries[j][k], xi.components[k], ctx)
        comps.append(acc)
    return ModuleVector(p.frame, comps)


# ---------------------------------------------------------------------------
# Endomorphisms: weighted composition and transport.


def end_star(frame: WeightedFrame, S: ElementMatrix, T: ElementMatrix,
             ctx: StarContext) -> ElementMatrix:
    """Composition of undeformed endomorphisms inside the deformed algebra.

    Entry pieces carry the endomorphism weights w + x_row - x_col; each pair
    of pieces is twisted by e(-Theta(U1, U2)) of those weights.
    """
    n = frame.size
    g = frame.group
    out = [[dict() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for l in range(n):
            left = S[j][l]
            if left.is_zero():
                continue
            sh1 = frame.weights[j] - frame.weights[l]
            for k in range(n):
                right = T[l][k]
                if right.is_zero():
                    continue
                sh2 = frame.weights[l] - frame.weights[k]
                bucket = out[j][k]
                for w1, c1 in left.coeffs.items():
                    u1 = w1 + sh1
                    for w2, c2 in right.coeffs.items():
                        t = ctx.twist(u1, w2 + sh2)
                        val = scalar_times_phase(scalar_mul(c1, c2), -t)
                        key = w1 + w2
                        bucket[key] = scalar_add(bucket[key], val) \
                            if key in bucket else val
    return tuple(tuple(AlgebraElement(g, out[j][k], 1) for k in range(n))
                 for j in range(n))


def end_apply(frame: WeightedFrame, T: ElementMatrix, xi: ModuleVector,
              ctx: StarContext) -> ModuleVector:
    """Action of an undeformed endomorphism on the deformed module.

    Entry (j,k) piece at mode w acts on a component-k piece at mode v with
    phase e(-Theta(w + x_j - x_k, v + x_k)).
    """
    n = frame.size
    g = frame.group
    comps = []
    for j in range(n):
        bucket: Dict[GroupElement, object] = {}
        for k in range(n):
            entry = T[j][k]
            if entry.is_zero():
                continue
            sh = frame.weights[j] - frame.weights[k]
            xk = frame.weights[k]
            for w, cw in entry.coeffs.items():
                u = w + sh
                for v, cv in xi.components[k].coeffs.items():
                    t = ctx.twist(u, v + xk)
                    val = scalar_times_phase(scalar_mul(cw, cv), -t)
                    key = w + v
                    bucket[key] = scalar_add(bucket[key], val) \
                        if key in bucket else val
        comps.append(AlgebraElement(g, bucket, 1))
    return ModuleVector(frame, comps)


def deform_endomorphism(frame: WeightedFrame, T: ElementMatrix,
                        ctx: StarContext, inverse: bool = False) -> ElementMatrix:
    """Transport endomorphisms into the deformed matrix picture.

    Entry (j,k) at mode w is multiplied by
    e(Theta(x_j, w) - Theta(w + x_j - x_k, x_k)); with this twist the weighted
    composition turns into plain matrix composition over the deformed product,
    and the transported invariant projection equals its entrywise deformation.
    ``inverse=True`` applies the inverse transport (the phases negate).
    """
    n = frame.size
    out = []
    for j in range(n):
        row = []
        for k in range(n):
            e = T[j][k]
            sh = frame.weights[j] - frame.weights[k]
            xj, xk = frame.weights[j], frame.weights[k]
            newc = {}
            for w, c in e.coeffs.items():
                t = ctx.twist(xj, w) - ctx.twist(w + sh, xk)
                if inverse:
                    t = -t
                newc[w] = scalar_times_phase(c, t)
            row.append(AlgebraElement(e.group, newc, 1))
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------------------
# Corpus builders used by tests and the CLI examples.


def diagonal_projection(frame: WeightedFrame, pattern: Sequence[int]) -> InvariantProjection:
    """Diagonal 0/1 projection over the frame."""
    n = frame.size
    g = frame.group
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            if j == k and pattern[j]:
                row.append(AlgebraElement.unit(g))
            else:
                row.append(AlgebraElement.zero(g))
        rows.append(row)
    return InvariantProjection(frame, rows)


def line_bundle_projection(group: FgAbelianGroup, z) -> InvariantProjection:
    """Rank-one projection [[1/2, 1/2·U_z], [1/2·U_{-z}, 1/2]].

    The frame weights (0, z) make every entry isotypic of the required weight;
    ``z`` may be a group element or raw coordinates.
    """
    from fractions import Fraction
    half = Fraction(1, 2)
    if not isinstance(z, GroupElement):
        z = group.element(z)
    frame = WeightedFrame(group, [group.zero(), z])
    e = AlgebraElement
    rows = [
        [e.generator(group, group.zero().coords, half),
         e.generator(group, z.coords, half)],
        [e.generator(group, (-z).coords, half),
         e.generator(group, group.zero().coords, half)],
    ]
    return InvariantProjection(frame, rows)


def direct_sum(p1: InvariantProjection, p2: InvariantProjection) -> InvariantProjection:
    """Block direct sum; frames concatenate."""
    if p1.group != p2.group:
        raise ValueError("projections over different groups")
    g = p1.group
    frame = WeightedFrame(g, p1.frame.weights + p2.frame.weights)
    n1, n2 = p1.frame.size, p2.frame.size
    n = n1 + n2
    z = AlgebraElement.zero(g)
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            if j < n1 and k < n1:
                row.append(p1.entries[j][k])
            elif j >= n1 and k >= n1:
                row.append(p2.entries[j - n1][k - n1])
            else:
                row.append(z)
        rows.append(row)
    return InvariantProjection(frame, rows)
