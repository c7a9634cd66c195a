"""Finitely generated abelian groups, circle-valued points, integer lattices.

The weight groups used everywhere else in the package are of the form
Z^r + Z_{m_1} + ... + Z_{m_k}.  Elements are coordinate tuples with the free
coordinates first; torsion coordinates are stored reduced into [0, m_i).

Circle points (elements of R/Z) come in two flavours: Exact (a Fraction,
reduced into [0,1)) and Real (a float in [0,1)).  Mixing the two downgrades
the result to Real and sets an explicit ``downgraded`` flag; exactness is
never lost silently.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

TWO_PI = 2.0 * math.pi


def _frac_mod1(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


class CirclePoint:
    """A point of the circle group R/Z.

    >>> CirclePoint.exact(5, 4)
    CirclePoint(1/4)
    >>> CirclePoint.exact(1, 3) + CirclePoint.exact(5, 6)
    CirclePoint(1/6)
    >>> (CirclePoint.exact(1, 3) + CirclePoint.real(0.25)).downgraded
    True
    """

    __slots__ = ("_value", "_exact", "downgraded")

    def __init__(self, value, exact: bool, downgraded: bool = False):
        if exact:
            self._value = _frac_mod1(Fraction(value))
        else:
            self._value = float(value) % 1.0
        self._exact = exact
        self.downgraded = downgraded

    @classmethod
    def exact(cls, num, den=1) -> "CirclePoint":
        return cls(Fraction(num, den), exact=True)

    @classmethod
    def real(cls, x: float) -> "CirclePoint":
        return cls(x, exact=False)

    @classmethod
    def zero(cls) -> "CirclePoint":
        return cls(Fraction(0), exact=True)

    @classmethod
    def from_value(cls, t) -> "CirclePoint":
        if isinstance(t, CirclePoint):
            return t
        if isinstance(t, (int, Fraction)):
            return cls(Fraction(t), exact=True)
        return cls(float(t), exact=False)

    @property
    def is_exact(self) -> bool:
        return self._exact

    @property
    def value(self):
        """Fraction (exact) or float (real), normalised into [0,1)."""
        return self._value

    def as_float(self) -> float:
        return float(self._value)

    def __add__(self, other: "CirclePoint") -> "CirclePoint":
        if self._exact and other._exact:
            return CirclePoint(self._value + other._value, exact=True,
                               downgraded=self.downgraded or other.downgraded)
        # mixed arithmetic downgrades explicitly
        return CirclePoint(self.as_float() + other.as_float(), exact=False,
                           downgraded=self._exact != other._exact
                           or self.downgraded or other.downgraded)

    def __neg__(self) -> "CirclePoint":
        if self._exact:
            return CirclePoint(-self._value, exact=True, downgraded=self.downgraded)
        return CirclePoint(-self._value, exact=False, downgraded=self.downgraded)

    def __sub__(self, other: "CirclePoint") -> "CirclePoint":
        return self + (-other)

    def scale(self, n: int) -> "CirclePoint":
        """Integer scaling n·t in R/Z."""
        if self._exact:
            return CirclePoint(self._value * n, exact=True, downgraded=self.downgraded)
        return CirclePoint(self._value * n, exact=False, downgraded=self.downgraded)

    def is_zero(self, tol: float = 0.0) -> bool:
        if self._exact:
            return self._value == 0
        d = min(self._value, 1.0 - self._value)
        return d <= tol

    def to_complex(self) -> complex:
        return complex(math.cos(TWO_PI * float(self._value)),
                       math.sin(TWO_PI * float(self._value)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CirclePoint):
            return NotImplemented
        if self._exact and other._exact:
            return self._value == other._value
        return self.as_float() == other.as_float()

    def __hash__(self):
        if self._exact:
            return hash(("circle", self._value))
        return hash(("circle", self.as_float()))

    def __repr__(self):
        if self._exact:
            return f"CirclePoint({self._value})"
        return f"CirclePoint({self._value!r})"

    def to_json_dict(self) -> dict:
        if self._exact:
            d = {"exact": [self._value.numerator, self._value.denominator]}
        else:
            d = {"real": self._value}
        if self.downgraded:
            d["downgraded"] = True
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "CirclePoint":
        if "exact" in d:
            num, den = d["exact"]
            pt = cls.exact(int(num), int(den))
        elif "real" in d:
            pt = cls.real(float(d["real"]))
        else:
            raise ValueError("circle point needs an 'exact' or 'real' field")
        pt.downgraded = bool(d.get("downgraded", False))
        return pt


def phase_to_complex(t) -> complex:
    """e(t) = exp(2 pi i t) for a CirclePoint, Fraction or float."""
    if isinstance(t, CirclePoint):
        return t.to_complex()
    x = float(t)
    return complex(math.cos(TWO_PI * x), math.sin(TWO_PI * x))


class FgAbelianGroup:
    """Z^r + Z_{m1} + ... + Z_{mk}, free coordinates first.

    >>> G = FgAbelianGroup(1, (3,))
    >>> G.element((2, 5)).coords
    (2, 2)
    >>> G.ngens
    2
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion: Sequence[int] = ()):
        if free_rank < 0:
            raise ValueError("free rank must be >= 0")
        torsion = tuple(int(m) for m in torsion)
        if any(m < 2 for m in torsion):
            raise ValueError("torsion orders must be >= 2")
        self.free_rank = free_rank
        self.torsion = torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group")
        n = 1
        for m in self.torsion:
            n *= m
        return n

    def generator_order(self, i: int) -> int:
        """Order of the i-th generator (0 = infinite)."""
        if i < self.free_rank:
            return 0
        return self.torsion[i - self.free_rank]

    def reduce_coords(self, coords: Sequence[int]) -> tuple:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        r = self.free_rank
        return coords[:r] + tuple(c % m for c, m in zip(coords[r:], self.torsion))

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce_coords(coords))

    def zero(self) -> "GroupElement":
        return self.element((0,) * self.ngens)

    def generator(self, i: int) -> "GroupElement":
        coords = [0] * self.ngens
        coords[i] = 1
        return self.element(coords)

    def generators(self) -> list:
        return [self.generator(i) for i in range(self.ngens)]

    def iter_elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        def rec(prefix, rest):
            if not rest:
                yield self.element(prefix)
                return
            for c in range(rest[0]):
                yield from rec(prefix + [c], rest[1:])
        yield from rec([], list(self.torsion))

    def random_element(self, rng, bound: int = 5) -> "GroupElement":
        coords = [rng.randint(-bound, bound) for _ in range(self.free_rank)]
        coords += [rng.randrange(m) for m in self.torsion]
        return self.element(coords)

    def __eq__(self, other):
        if not isinstance(other, FgAbelianGroup):
            return NotImplemented
        return self.free_rank == other.free_rank and self.torsion == other.torsion

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        return f"FgAbelianGroup({self.free_rank}, {self.torsion})"

    def to_json_dict(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FgAbelianGroup":
        return cls(int(d["rank"]), tuple(int(m) for m in d.get("torsion", ())))


class GroupElement:
    """An element of an FgAbelianGroup, stored as a reduced coordinate tuple."""

    __slots__ = ("group", "coords")

    def __init__(self, group: FgAbelianGroup, coords: tuple):
        self.group = group
        self.coords = coords

    def _check(self, other: "GroupElement"):
        if self.group != other.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return self.group.element(tuple(-a for a in self.coords))

    def scale(self, n: int) -> "GroupElement":
        return self.group.element(tuple(n * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.group == other.group and self.coords == other.coords

    def __hash__(self):
        return hash((self.group, self.coords))

    def __repr__(self):
        return f"GroupElement{self.coords}"

    def to_json_dict(self) -> dict:
        return {"coords": list(self.coords)}


def dual_length(group: FgAbelianGroup, x: GroupElement) -> float:
    """Euclidean length of the free part of a weight; torsion contributes 0.

    >>> G = FgAbelianGroup(1, (3,))
    >>> dual_length(G, G.element((2, 1)))
    2.0
    """
    r = group.free_rank
    return math.sqrt(sum(c * c for c in x.coords[:r]))


# ---------------------------------------------------------------------------
# Integer matrices: Smith normal form with transforms, determinants, inverses.


def _identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _ext_gcd(a: int, b: int):
    """Bezout pair (x, y) with x·a + y·b = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        return -old_x, -old_y
    return old_x, old_y


def _mat_mul(A: list, B: list) -> list:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Smith normal form with transforms: returns (U, S, V), U·mat·V = S.

    U and V are unimodular; S is diagonal with s_i >= 0 and s_i | s_{i+1}.

    >>> U, S, V = smith_normal_form([[2, 0], [0, 3]])
    >>> [S[0][0], S[1][1]]
    [1, 6]
    """
    A = [list(map(int, row)) for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row dst += c * row src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    def gcd_rows(t, i):
        # one unimodular 2x2 op putting gcd(A[t][t], A[i][t]) at (t, t);
        # single-step gcds keep the accumulated transforms from blowing up
        a, b = A[t][t], A[i][t]
        g = math.gcd(a, b)
        x, y = _ext_gcd(a, b)
        p, q = -(b // g), a // g         # det = x·a/g + y·b/g = 1
        A[t], A[i] = ([x * s + y * r for s, r in zip(A[t], A[i])],
                      [p * s + q * r for s, r in zip(A[t], A[i])])
        U[t], U[i] = ([x * s + y * r for s, r in zip(U[t], U[i])],
                      [p * s + q * r for s, r in zip(U[t], U[i])])

    def gcd_cols(t, j):
        a, b = A[t][t], A[t][j]
        g = math.gcd(a, b)
        x, y = _ext_gcd(a, b)
        p, q = -(b // g), a // g
        for M in (A, V):
            for row in M:
                s, r = row[t], row[j]
                row[t] = x * s + y * r
                row[j] = p * s + q * r

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of smallest magnitude in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a != 0 and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    if A[i][t] % A[t][t] == 0:
                        add_row(t, i, -(A[i][t] // A[t][t]))
                    else:
                        gcd_rows(t, i)
            redirtied = False
            for j in range(t + 1, n):
                if A[t][j]:
                    if A[t][j] % A[t][t] == 0:
                        add_col(t, j, -(A[t][j] // A[t][t]))
                    else:
                        gcd_cols(t, j)   # may reintroduce entries in column t
                        redirtied = True
            if not redirtied:
                break

        # divisibility: the pivot must divide the whole trailing block
        fixed = True
        for i in range(t + 1, m):
            if not fixed:
                break
            for j in range(t + 1, n):
                if A[i][j] % A[t][t]:
                    add_row(i, t, 1)
                    fixed = False
                    break
        if not fixed:
            continue
        if A[t][t] < 0:
            negate_row(t)
        t += 1

    return U, A, V


def int_det(mat: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss, fraction-free)."""
    A = [list(map(int, row)) for row in mat]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def int_inverse(mat: Sequence[Sequence[int]]) -> list:
    """Exact inverse of a unimodular integer matrix (det ±1 required)."""
    n = len(mat)
    d = int_det(mat)
    if d not in (1, -1):
        raise ValueError(f"matrix is not unimodular (det = {d})")
    # adjugate via cofactors; n stays small here
    A = [list(map(int, row)) for row in mat]
    def minor(i, j):
        return [row[:j] + row[j + 1:] for r, row in enumerate(A) if r != i]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = int_det(minor(i, j))
            adj[j][i] = (-1) ** (i + j) * c
    return [[x // d for x in row] for row in adj]


def is_unimodular(mat: Sequence[Sequence[int]]) -> bool:
    return len(mat) > 0 and len(mat) == len(mat[0]) and int_det(mat) in (1, -1)


# ---------------------------------------------------------------------------
# Subgroups and quotients.


class Subgroup:
    """A subgroup of an FgAbelianGroup, given by generating elements.

    Internally the subgroup is the image in the group of the integer column
    lattice spanned by the generators together with the torsion relations
    m_i·e_i, so membership and quotients reduce to Smith normal form.
    """

    __slots__ = ("parent", "gens", "_cols", "_U", "_S", "_ncols")

    def __init__(self, parent: FgAbelianGroup, gens: Iterable[GroupElement]):
        self.parent = parent
        self.gens = tuple(gens)
        for g in self.gens:
            if g.group != parent:
                raise ValueError("generator outside the parent group")
        n = parent.ngens
        cols = [list(g.coords) for g in self.gens]
        # torsion relations so that arithmetic happens in the actual group
        for i, m in enumerate(parent.torsion):
            rel = [0] * n
            rel[parent.free_rank + i] = m
            cols.append(rel)
        # lattice matrix: columns are generators
        if cols:
            mat = [[col[i] for col in cols] for i in range(n)]
        else:
            mat = [[0] * 0 for _ in range(n)]
        self._cols = mat
        U, S, _V = smith_normal_form(mat) if cols else (_identity(n), [[0] * 0 for _ in range(n)], [])
        self._U = U
        self._S = S
        self._ncols = len(cols)

    def _diag(self) -> list:
        k = min(len(self._S), self._ncols)
        return [self._S[i][i] for i in range(k)]

    def contains(self, x: GroupElement) -> bool:
        """Membership test: solve cols·z = x over Z."""
        if x.group != self.parent:
            raise ValueError("element outside the parent group")
        n = self.parent.ngens
        y = [sum(self._U[i][j] * x.coords[j] for j in range(n)) for i in range(n)]
        d = self._diag()
        for i in range(n):
            s = d[i] if i < len(d) else 0
            if s == 0:
                if y[i] != 0:
                    return False
            elif y[i] % s:
                return False
        return True

    def minimal_generators(self) -> list:
        """Generators in invariant position: columns of U^{-1}·S (nonzero)."""
        n = self.parent.ngens
        Uinv = int_inverse(self._U)
        out = []
        d = self._diag()
        for i, s in enumerate(d):
            if s != 0:
                col = [Uinv[r][i] * s for r in range(n)]
                out.append(self.parent.element(col))
        return out

    def __repr__(self):
        return f"Subgroup({self.parent!r}, {len(self.gens)} gens)"


class QuotientMap:
    """Projection G -> G/H with integer section for lifting.

    ``apply`` sends a parent element to quotient coordinates; ``lift`` picks
    the canonical integer preimage of a quotient generator combination.
    """

    __slots__ = ("source", "quotient", "_U", "_Uinv", "_rows", "_orders")

    def __init__(self, source, quotient, U, rows, orders):
        self.source = source
        self.quotient = quotient
        self._U = U
        self._Uinv = int_inverse(U)
        self._rows = rows        # row index in U·x for each quotient coordinate
        self._orders = orders    # 0 for free, m for torsion, aligned with rows

    def apply(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise ValueError("element outside the source group")
        n = self.source.ngens
        y = [sum(self._U[i][j] * x.coords[j] for j in range(n)) for i in range(n)]
        coords = []
        for row, m in zip(self._rows, self._orders):
            coords.append(y[row] if m == 0 else y[row] % m)
        return self.quotient.element(coords)

    def lift(self, q: GroupElement) -> GroupElement:
        """An integer preimage: apply(lift(q)) == q."""
        if q.group != self.quotient:
            raise ValueError("element outside the quotient group")
        n = self.source.ngens
        y = [0] * n
        for c, row in zip(q.coords, self._rows):
            y[row] = c
        x = [sum(self._Uinv[i][j] * y[j] for j in range(n)) for i in range(n)]
        return self.source.element(x)

    def __call__(self, x: GroupElement) -> GroupElement:
        return self.apply(x)


def quotient(group: FgAbelianGroup, sub: Subgroup):
    """Quotient in invariant-factor form; returns (group, QuotientMap).

    >>> G = FgAbelianGroup(2)
    >>> H = Subgroup(G, [G.element((4, 0)), G.element((2, 1))])
    >>> Q, pr = quotient(G, H)
    >>> (Q.free_rank, Q.torsion)
    (0, (4,))
    """
    if sub.parent != group:
        raise ValueError("subgroup of a different group")
    n = group.ngens
    U, S = sub._U, sub._S
    d = sub._diag()
    free_rows, tors_rows, tors_orders = [], [], []
    for i in range(n):
        s = d[i] if i < len(d) else 0
        if s == 0:
            free_rows.append(i)
        elif s >= 2:
            tors_rows.append(i)
            tors_orders.append(s)
        # s == 1 rows die in the quotient
    # invariant factors from SNF are already ascending
    Q = FgAbelianGroup(len(free_rows), tuple(tors_orders))
    rows = free_rows + tors_rows
    orders = [0] * len(free_rows) + tors_orders
    return Q, QuotientMap(group, Q, U, rows, orders)
