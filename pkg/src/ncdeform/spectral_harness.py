"""Truncated spectral verification on the deformed torus algebras.

The harness truncates the Fourier modes of Z^N at a Euclidean cutoff, carries
the standard skew-adjoint gamma matrices on a 2^(N//2)-dimensional spinor
space, and builds the deformed left/right convolution operators block by
block.  All residuals are evaluated on interior basis vectors only: a mode is
interior for an expression when every shift appearing in the expression keeps
it inside the cutoff.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .coefficients import (ExactComplex, scalar_abs, scalar_add, scalar_is_zero,
                           scalar_mul, scalar_times_phase, scalar_to_complex)
from .cohomology import Bicharacter, CohomologyClass
from .groups import CirclePoint, FgAbelianGroup, GroupElement
from .twisted_algebra import AlgebraElement, StarContext, _coeff_neg

TWO_PI = 2.0 * math.pi


def gamma_matrices(n: int) -> List[np.ndarray]:
    """Skew-adjoint gammas: g* = -g, g^2 = -1, gi gj + gj gi = -2 delta_ij.

    Jordan-Wigner construction on 2^(n//2) spinor dimensions; relations are
    asserted at build time.
    """
    s1 = np.array([[0, 1], [1, 0]], complex)
    s2 = np.array([[0, -1j], [1j, 0]], complex)
    s3 = np.array([[1, 0], [0, -1]], complex)
    eye = np.eye(2, dtype=complex)
    m = n // 2

    def slot(mats):
        out = np.eye(1, dtype=complex)
        for a in mats:
            out = np.kron(out, a)
        return out

    gammas = []
    for k in range(m):
        pre = [s3] * k
        post = [eye] * (m - k - 1)
        gammas.append(slot(pre + [1j * s1] + post))
        gammas.append(slot(pre + [1j * s2] + post))
    if n % 2 == 1:
        gammas.append(1j * slot([s3] * m))
    s = 2 ** m
    for i, g in enumerate(gammas):
        assert np.allclose(g.conj().T, -g), "gamma must be skew-adjoint"
        assert np.allclose(g @ g, -np.eye(s)), "gamma must square to -1"
        for h in gammas[:i]:
            assert np.allclose(g @ h + h @ g, 0), "gammas must anticommute"
    return gammas


class TruncatedTriple:
    """Mode lattice |x| <= cutoff on Z^N with spinors and the Dirac blocks."""

    def __init__(self, n: int, cutoff: float):
        if n < 1:
            raise ValueError("need at least one torus dimension")
        self.n = n
        self.cutoff = float(cutoff)
        self.group = FgAbelianGroup(n)
        r = int(math.floor(self.cutoff))
        modes = []
        def rec(prefix):
            if len(prefix) == n:
                if sum(c * c for c in prefix) <= self.cutoff ** 2:
                    modes.append(tuple(prefix))
                return
            for c in range(-r, r + 1):
                rec(prefix + [c])
        rec([])
        modes.sort()
        self.modes = modes
        self.index = {m: i for i, m in enumerate(modes)}
        self.gammas = gamma_matrices(n)
        self.s = self.gammas[0].shape[0]
        self.dirac_blocks = [
            sum((TWO_PI * x[k]) * self.gammas[k] for k in range(n))
            if any(x) else np.zeros((self.s, self.s), complex)
            for x in modes
        ]

    @property
    def nmodes(self) -> int:
        return len(self.modes)

    def interior_indices(self, margin: float) -> List[int]:
        lim2 = (self.cutoff - margin) ** 2
        if self.cutoff < margin:
            return []
        return [i for i, x in enumerate(self.modes)
                if sum(c * c for c in x) <= lim2]

    def mode_element(self, coords) -> GroupElement:
        return self.group.element(coords)


class BlockOperator:
    """Sparse mode-block operator: {(target index, source index): s x s block}."""

    __slots__ = ("triple", "blocks")

    def __init__(self, triple: TruncatedTriple,
                 blocks: Optional[Dict[Tuple[int, int], np.ndarray]] = None):
        self.triple = triple
        self.blocks = blocks if blocks is not None else {}

    def add_block(self, tgt: int, src: int, blk: np.ndarray):
        key = (tgt, src)
        cur = self.blocks.get(key)
        self.blocks[key] = blk if cur is None else cur + blk

    def compose(self, other: "BlockOperator") -> "BlockOperator":
        """self after other."""
        by_tgt: Dict[int, list] = {}
        for (t, s), blk in other.blocks.items():
            by_tgt.setdefault(t, []).append((s, blk))
        out = BlockOperator(self.triple)
        for (t2, s2), blk2 in self.blocks.items():
            for s1, blk1 in by_tgt.get(s2, ()):
                out.add_block(t2, s1, blk2 @ blk1)
        return out

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        return self.compose(other)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        out = BlockOperator(self.triple, dict(self.blocks))
        for key, blk in other.blocks.items():
            cur = out.blocks.get(key)
            out.blocks[key] = blk if cur is None else cur + blk
        return out

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return self + other.scale(-1.0)

    def scale(self, c) -> "BlockOperator":
        return BlockOperator(self.triple,
                             {k: c * blk for k, blk in self.blocks.items()})

    def commutator(self, other: "BlockOperator") -> "BlockOperator":
        return self.compose(other) - other.compose(self)

    def anticommutator(self, other: "BlockOperator") -> "BlockOperator":
        return self.compose(other) + other.compose(self)

    def dagger(self) -> "BlockOperator":
        return BlockOperator(self.triple,
                             {(s, t): blk.conj().T
                              for (t, s), blk in self.blocks.items()})

    def max_column_norm(self, columns: Iterable[int]) -> float:
        """Max norm of the image of a basis vector with source in ``columns``."""
        cols = set(columns)
        acc: Dict[int, np.ndarray] = {}
        for (t, s), blk in self.blocks.items():
            if s in cols:
                v = np.sum(np.abs(blk) ** 2, axis=0)
                acc[s] = acc[s] + v if s in acc else v.copy()
        if not acc:
            return 0.0
        return math.sqrt(max(float(np.max(v)) for v in acc.values()))

    def dense_on_columns(self, columns: Sequence[int]) -> np.ndarray:
        s = self.triple.s
        colpos = {c: i for i, c in enumerate(columns)}
        out = np.zeros((self.triple.nmodes * s, len(columns) * s), complex)
        for (t, src), blk in self.blocks.items():
            j = colpos.get(src)
            if j is not None:
                out[t * s:(t + 1) * s, j * s:(j + 1) * s] += blk
        return out

    def operator_norm(self, columns: Sequence[int]) -> float:
        if not columns or not self.blocks:
            return 0.0
        return float(np.linalg.norm(self.dense_on_columns(columns), 2))

    def diagonal_block(self, i: int) -> np.ndarray:
        blk = self.blocks.get((i, i))
        if blk is None:
            return np.zeros((self.triple.s, self.triple.s), complex)
        return blk


def dirac_operator(triple: TruncatedTriple) -> BlockOperator:
    return BlockOperator(triple, {(i, i): triple.dirac_blocks[i].copy()
                                  for i in range(triple.nmodes)})


def dirac_squared(triple: TruncatedTriple) -> BlockOperator:
    return BlockOperator(triple, {
        (i, i): (TWO_PI ** 2) * sum(c * c for c in x) * np.eye(triple.s)
        for i, x in enumerate(triple.modes)})


def _mode_tuple(x: GroupElement) -> tuple:
    return tuple(x.coords)


def build_left(a: AlgebraElement, ctx: StarContext,
               triple: TruncatedTriple) -> BlockOperator:
    """Deformed left convolution: the mode-z piece maps P_y to e(-Theta(z,y))
    times the shift by z."""
    if a.group != triple.group:
        raise ValueError("element lives on the wrong lattice")
    if not ctx.is_pure_bicharacter:
        raise ValueError("spectral operators need a bicharacter cocycle")
    op = BlockOperator(triple)
    eye = np.eye(triple.s, dtype=complex)
    for z, _v in a.coeffs.items():
        c = a.coefficient_complex(z)
        zt = _mode_tuple(z)
        for src, y in enumerate(triple.modes):
            tgt = triple.index.get(tuple(zc + yc for zc, yc in zip(zt, y)))
            if tgt is None:
                continue
            ph = (-ctx.twist(z, triple.mode_element(y))).to_complex()
            op.add_block(tgt, src, (c * ph) * eye)
    return op


def build_right(b: AlgebraElement, theta_total: CohomologyClass,
                ctx: StarContext, triple: TruncatedTriple) -> BlockOperator:
    """Deformed right convolution: rho = Theta - pairing(theta_total); the
    mode-y piece maps P_m to e(-rho(y,m)) times the shift by y.

    With theta_total the class of the context's cocycle this commutes with the
    deformed left action (the opposite-algebra picture).
    """
    if b.group != triple.group:
        raise ValueError("element lives on the wrong lattice")
    if not ctx.is_pure_bicharacter:
        raise ValueError("spectral operators need a bicharacter cocycle")
    op = BlockOperator(triple)
    eye = np.eye(triple.s, dtype=complex)
    for y, _v in b.coeffs.items():
        c = b.coefficient_complex(y)
        yt = _mode_tuple(y)
        for src, m in enumerate(triple.modes):
            tgt = triple.index.get(tuple(yc + mc for yc, mc in zip(yt, m)))
            if tgt is None:
                continue
            me = triple.mode_element(m)
            rho = ctx.twist(y, me) - theta_total.evaluate(y, me)
            op.add_block(tgt, src, (c * (-rho).to_complex()) * eye)
    return op


def build_phase_diagonal(x: GroupElement, ctx: StarContext,
                         triple: TruncatedTriple) -> BlockOperator:
    """Diagonal unitary m -> e(-Theta(x, m)); commutes with the Dirac blocks."""
    op = BlockOperator(triple)
    eye = np.eye(triple.s, dtype=complex)
    for i, m in enumerate(triple.modes):
        ph = (-ctx.twist(x, triple.mode_element(m))).to_complex()
        op.add_block(i, i, ph * eye)
    return op


def _support_margin(*elements: AlgebraElement) -> float:
    return sum(e.support_radius() for e in elements)


def _interior_or_raise(triple: TruncatedTriple, margin: float) -> List[int]:
    cols = triple.interior_indices(margin)
    if not cols:
        raise ValueError(
            f"cutoff {triple.cutoff} too small for supports of radius {margin}")
    return cols


def order_zero_residual(a: AlgebraElement, b: AlgebraElement,
                        theta_total: CohomologyClass, ctx: StarContext,
                        triple: TruncatedTriple) -> float:
    """||[L(a), R(b)]|| on interior basis vectors: left and right actions
    must commute."""
    la = build_left(a, ctx, triple)
    rb = build_right(b, theta_total, ctx, triple)
    cols = _interior_or_raise(triple, _support_margin(a, b))
    return la.commutator(rb).max_column_norm(cols)


def order_one_residual(a: AlgebraElement, b: AlgebraElement,
                       theta_total: CohomologyClass, ctx: StarContext,
                       triple: TruncatedTriple,
                       dirac: Optional[BlockOperator] = None) -> float:
    """||[[D, L(a)], R(b)]|| on interior basis vectors."""
    d = dirac if dirac is not None else dirac_operator(triple)
    la = build_left(a, ctx, triple)
    rb = build_right(b, theta_total, ctx, triple)
    cols = _interior_or_raise(triple, _support_margin(a, b))
    return d.commutator(la).commutator(rb).max_column_norm(cols)


def dirac_commutator_norm(x_coords, ctx: StarContext,
                          triple: TruncatedTriple) -> float:
    """Operator norm of [D, L(U_x)] on interior columns; equals 2 pi |x|."""
    a = AlgebraElement.generator(triple.group, x_coords)
    la = build_left(a, ctx, triple)
    d = dirac_operator(triple)
    cols = _interior_or_raise(triple, _support_margin(a))
    return d.commutator(la).operator_norm(cols)


# ---------------------------------------------------------------------------
# Hochschild chains, antisymmetrisation, chirality.


class TensorChain:
    """Finite combination of (p+1)-fold elementary tensors of isotypic modes.

    Stored as {(x_0, ..., x_p) mode tuples: scalar coefficient}; coefficients
    are exact formal sums whenever possible so twist identities can be checked
    structurally.
    """

    __slots__ = ("group", "arity", "terms")

    def __init__(self, group: FgAbelianGroup, arity: int, terms: dict):
        self.group = group
        self.arity = arity  # p: number of legs after the zeroth
        clean = {}
        for key, c in terms.items():
            if len(key) != arity + 1:
                raise ValueError("tensor length mismatch")
            if not scalar_is_zero(c):
                clean[key] = c
        self.terms = clean

    def __sub__(self, other: "TensorChain") -> "TensorChain":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = scalar_add(out[key], _coeff_neg(c, 1)) if key in out \
                else _coeff_neg(c, 1)
        return TensorChain(self.group, self.arity, out)

    def max_abs(self) -> float:
        return max((scalar_abs(c) for c in self.terms.values()), default=0.0)


def epsilon_twist(chain: TensorChain, cls: CohomologyClass) -> TensorChain:
    """Twisted antisymmetrisation over the non-zeroth legs.

    Averages the leg permutations with parity sign and the inversion phase
    e(sum over inverted pairs of pairing(x_later, x_earlier)).
    """
    p = chain.arity
    g = chain.group
    out: dict = {}
    norm = ExactComplex.from_rational(Fraction(1, math.factorial(p)))
    for key, c in chain.terms.items():
        x0 = key[0]
        legs = key[1:]
        for perm in itertools.permutations(range(p)):
            sign = _perm_sign(perm)
            t = CirclePoint.zero()
            for i in range(p):
                for j in range(i + 1, p):
                    if perm[i] > perm[j]:
                        xi = g.element(legs[perm[i]])
                        xj = g.element(legs[perm[j]])
                        t = t + cls.evaluate(xi, xj)
            val = scalar_times_phase(c, t)
            val = scalar_mul(val, norm) if sign > 0 \
                else scalar_mul(val, ExactComplex.from_rational(-1) * norm)
            nkey = (x0,) + tuple(legs[perm[i]] for i in range(p))
            out[nkey] = scalar_add(out[nkey], val) if nkey in out else val
    return TensorChain(g, p, out)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        if ln % 2 == 0:
            sign = -sign
    return sign


def theta_push(chain: TensorChain, bichar: Bicharacter) -> TensorChain:
    """Scale each elementary tensor by e(sum_{i<j} Theta(x_i, x_j)), all legs
    including the zeroth."""
    g = chain.group
    out = {}
    for key, c in chain.terms.items():
        t = CirclePoint.zero()
        els = [g.element(k) for k in key]
        for i in range(len(els)):
            for j in range(i + 1, len(els)):
                t = t + bichar.evaluate(els[i], els[j])
        out[key] = scalar_times_phase(c, t)
    return TensorChain(g, chain.arity, out)


def chain_representation(chain: TensorChain, ctx: StarContext,
                         triple: TruncatedTriple,
                         dirac: Optional[BlockOperator] = None) -> BlockOperator:
    """pi(chain) = sum coeff · L(a_0) [D, L(a_1)] ... [D, L(a_p)] with the
    deformed left action of the context."""
    d = dirac if dirac is not None else dirac_operator(triple)
    total: Optional[BlockOperator] = None
    for key, c in chain.terms.items():
        op: Optional[BlockOperator] = None
        for leg, coords in enumerate(key):
            la = build_left(AlgebraElement.generator(triple.group, coords),
                            ctx, triple)
            factor = la if leg == 0 else d.commutator(la)
            op = factor if op is None else op.compose(factor)
        op = op.scale(scalar_to_complex(c))
        total = op if total is None else total + op
    if total is None:
        total = BlockOperator(triple)
    return total


def orientation_cycle_2d(group: FgAbelianGroup) -> TensorChain:
    """The two-torus volume chain at unit normalisation:
    U_{-e1-e2} (x) U_{e1} (x) U_{e2)  -  U_{-e1-e2} (x) U_{e2} (x) U_{e1}."""
    one = ExactComplex.one()
    terms = {
        ((-1, -1), (1, 0), (0, 1)): one,
        ((-1, -1), (0, 1), (1, 0)): -one,
    }
    return TensorChain(group, 2, terms)


def chirality_report(ctx: StarContext, theta_total: CohomologyClass,
                     triple: TruncatedTriple,
                     generator_coords: Sequence[tuple] = ((1, 0), (0, 1))) -> dict:
    """Fit the chirality normalisation and verify the grading identities.

    Builds the deformed representation of the pushed volume chain, normalises
    it into a self-adjoint unitary with a deterministic branch (first interior
    spinor diagonal entry >= 0), and reports the residuals:

    - self-adjointness and unitarity of the chirality
    - transport: the deformed representation of the pushed chain equals the
      undeformed representation of the chain
    - commutation with the deformed left action of the generators
    - anticommutation with the Dirac commutators of the generators
    - invariance of the pushed chain under the twisted antisymmetrisation
    """
    if triple.n != 2:
        raise ValueError("the chirality fit is implemented for two dimensions")
    g = triple.group
    cycle = orientation_cycle_2d(g)
    pushed = theta_push(cycle, ctx.multiplier.bicharacter)
    d = dirac_operator(triple)
    rep_deformed = chain_representation(pushed, ctx, triple, d)
    ctx0 = StarContext.zero(g)
    rep_plain = chain_representation(cycle, ctx0, triple, d)

    margin = 2.0 * math.sqrt(2.0)  # every leg shifts by at most |e1+e2|
    cols = _interior_or_raise(triple, margin)
    transport = (rep_deformed - rep_plain).max_column_norm(cols)

    blk = rep_deformed.diagonal_block(cols[0])
    z2 = (blk @ blk)[0, 0]
    lam = 1.0 / complex(np.sqrt(z2))
    chi0 = lam * blk
    if chi0[0, 0].real < 0:
        lam = -lam
    chi = rep_deformed.scale(lam)

    eye = BlockOperator(triple, {(i, i): np.eye(triple.s, dtype=complex)
                                 for i in range(triple.nmodes)})
    selfadj = (chi - chi.dagger()).max_column_norm(cols)
    unitary = (chi.compose(chi) - eye).max_column_norm(cols)

    commute = 0.0
    anticommute = 0.0
    for coords in generator_coords:
        a = AlgebraElement.generator(g, coords)
        la = build_left(a, ctx, triple)
        acols = _interior_or_raise(triple, margin + _support_margin(a))
        commute = max(commute, chi.commutator(la).max_column_norm(acols))
        dc = d.commutator(la)
        anticommute = max(anticommute,
                          chi.anticommutator(dc).max_column_norm(acols))

    eps = epsilon_twist(pushed, theta_total)
    eps_invariance = (eps - pushed).max_abs()

    return {
        "normalization": lam,
        "transport_residual": float(transport),
        "selfadjoint_residual": float(selfadj),
        "unitarity_residual": float(unitary),
        "commutation_residual": float(commute),
        "anticommutation_residual": float(anticommute),
        "antisymmetrisation_residual": float(eps_invariance),
    }


# ---------------------------------------------------------------------------
# Spectral counting diagnostics.


def weyl_counting(n: int, cutoff: float, fit_lo: float = 0.1,
                  fit_hi: float = 0.9) -> dict:
    """Log-log slope of the ordered eigenvalues of (D^2+1)^(-1/2).

    The eigenvalue at mode x is (4 pi^2 |x|^2 + 1)^(-1/2) with spinor
    multiplicity; the decay exponent estimates -1/n.
    """
    triple_s = 2 ** (n // 2)
    r = int(math.floor(cutoff))
    vals = []
    def rec(prefix):
        if len(prefix) == n:
            q = sum(c * c for c in prefix)
            if q <= cutoff ** 2:
                vals.extend([1.0 / math.sqrt(4.0 * math.pi ** 2 * q + 1.0)]
                            * triple_s)
            return
        for c in range(-r, r + 1):
            rec(prefix + [c])
    rec([])
    vals.sort(reverse=True)
    m = len(vals)
    lo = max(int(m * fit_lo), triple_s + 1)
    hi = max(int(m * fit_hi), lo + 2)
    ns = np.arange(lo, hi, dtype=float) + 1.0
    mu = np.array(vals[lo:hi])
    slope, intercept = np.polyfit(np.log(ns), np.log(mu), 1)
    return {"slope": float(slope), "expected": -1.0 / n,
            "eigenvalue_count": m, "window": [int(lo), int(hi)],
            "intercept": float(intercept)}


def averaged_trace_diagnostic(a: AlgebraElement, ctx: StarContext,
                              triple: TruncatedTriple,
                              power: Optional[int] = None) -> dict:
    """Logarithmically normalised partial traces of L(a)(D^2+1)^(-p/2).

    Returns the sub-cutoff table; the trace sees only the zero-mode
    coefficient, so pure shifts give exactly zero at every stage.
    """
    p = power if power is not None else triple.n
    la = build_left(a, ctx, triple)
    stages = []
    for lam in range(1, int(math.floor(triple.cutoff)) + 1):
        tr = 0.0 + 0.0j
        count = 0
        lim2 = lam * lam
        for i, x in enumerate(triple.modes):
            q = sum(c * c for c in x)
            if q <= lim2:
                count += triple.s
                blk = la.blocks.get((i, i))
                if blk is not None:
                    w = (4.0 * math.pi ** 2 * q + 1.0) ** (-p / 2.0)
                    tr += np.trace(blk) * w
        denom = math.log(count) if count > 1 else 1.0
        stages.append({"sub_cutoff": lam, "eigenvalue_count": count,
                       "partial_trace": [tr.real, tr.imag],
                       "normalized": [tr.real / denom, tr.imag / denom]})
    return {"power": p, "stages": stages}
