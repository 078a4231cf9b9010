"""Multi-indices, projective points, homogeneous forms, and Weil multipliers.

The single canonical monomial order everywhere is graded-lexicographic:
within one degree, exponent tuples are listed in descending lexicographic
order.  Weil multipliers are kept as exact positive rationals; their
logarithms are the classical local Weil functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from sympy import factorint

from .errors import CoordinateChangeRequiredError, PointOnHypersurfaceError
from .places import HeightKernel, Place, Rational, local_norm, sorted_places, support

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def enumerate_Td(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All multi-indices (i_0..i_n) of degree d, in descending lex order."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")

    def comps(k: int, total: int):
        if k == 1:
            yield (total,)
            return
        for i in range(total, -1, -1):
            for rest in comps(k - 1, total - i):
                yield (i,) + rest

    return tuple(comps(n + 1, d))


@dataclass(frozen=True)
class ProjectivePoint:
    """Canonical representative: coprime integer coordinates, first nonzero positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        if all(c == 0 for c in self.coords):
            raise ValueError("all coordinates are zero")

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def local_norm(self, v: Place) -> Fraction:
        return max(local_norm(v, c) for c in self.coords if c != 0)

    def height(self) -> HeightKernel:
        return HeightKernel(Fraction(max(abs(c) for c in self.coords)))


def normalize_point(raw) -> ProjectivePoint:
    """Clear denominators, divide by the gcd, and fix the sign convention."""
    entries = [Fraction(c) for c in raw]
    if all(c == 0 for c in entries):
        raise ValueError("all coordinates are zero")
    scale = math.lcm(*(c.denominator for c in entries))
    ints = [int(c * scale) for c in entries]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    first = next(c for c in ints if c != 0)
    if first < 0:
        ints = [-c for c in ints]
    return ProjectivePoint(tuple(ints))


def point_height(x: ProjectivePoint) -> HeightKernel:
    return x.height()


@dataclass(frozen=True)
class HomForm:
    """Homogeneous form of degree d in n+1 variables with exact rational coefficients.

    Coefficients are stored sorted in the canonical monomial order with zero
    entries dropped; instances are immutable and hashable.
    """

    n: int
    d: int
    coeffs: tuple[tuple[MultiIndex, Fraction], ...]

    @classmethod
    def make(cls, n: int, d: int, coeffs) -> "HomForm":
        if d < 1:
            raise ValueError("degree must be >= 1")
        cleaned: dict[MultiIndex, Fraction] = {}
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n + 1 or any(e < 0 for e in exps) or sum(exps) != d:
                raise ValueError(f"multi-index {exps} is not in T_{d} for n={n}")
            c = Fraction(c)
            if c != 0:
                cleaned[exps] = cleaned.get(exps, Fraction(0)) + c
        cleaned = {e: c for e, c in cleaned.items() if c != 0}
        if not cleaned:
            raise ValueError("form has no nonzero coefficient")
        order = {e: i for i, e in enumerate(enumerate_Td(n, d))}
        items = tuple(sorted(cleaned.items(), key=lambda kv: order[kv[0]]))
        return cls(n, d, items)

    @classmethod
    def monomial(cls, n: int, exps: MultiIndex, coeff: Rational = 1) -> "HomForm":
        return cls.make(n, sum(exps), {tuple(exps): coeff})

    @cached_property
    def coeff_map(self) -> dict[MultiIndex, Fraction]:
        return dict(self.coeffs)

    def coeff(self, exps: MultiIndex) -> Fraction:
        return self.coeff_map.get(tuple(exps), Fraction(0))

    def vector(self) -> list[Fraction]:
        """Coefficient vector over the canonical monomial basis of T_d."""
        return [self.coeff(e) for e in enumerate_Td(self.n, self.d)]

    def scale(self, c: Rational) -> "HomForm":
        c = Fraction(c)
        if c == 0:
            raise ValueError("scaling by zero")
        return HomForm.make(self.n, self.d, {e: a * c for e, a in self.coeffs})

    def __add__(self, other: "HomForm") -> "HomForm":
        if self.n != other.n or self.d != other.d:
            raise ValueError("dimension or degree mismatch")
        merged = dict(self.coeffs)
        for e, c in other.coeffs:
            merged[e] = merged.get(e, Fraction(0)) + c
        return HomForm.make(self.n, self.d, merged)

    def __mul__(self, other: "HomForm") -> "HomForm":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        out: dict[MultiIndex, Fraction] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return HomForm.make(self.n, self.d + other.d, out)

    def __pow__(self, k: int) -> "HomForm":
        if k < 1:
            raise ValueError("power must be >= 1")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out


def evaluate(Q: HomForm, x) -> Fraction:
    """Sum of a_I x^I, exactly.  Accepts a ProjectivePoint or a coordinate tuple."""
    coords = x.coords if isinstance(x, ProjectivePoint) else tuple(x)
    if len(coords) != Q.n + 1:
        raise ValueError("dimension mismatch")
    total = Fraction(0)
    for exps, c in Q.coeffs:
        term = c
        for base, e in zip(coords, exps):
            if e:
                term *= Fraction(base) ** e
        total += term
    return total


def form_local_norm(Q: HomForm, v: Place) -> Fraction:
    """Sup-norm of the coefficients at v."""
    return max(local_norm(v, c) for _, c in Q.coeffs)


def norms_and_height(Q: HomForm) -> tuple[dict[Place, Fraction], HeightKernel]:
    """Per-place coefficient sup-norms (where != 1) and the height kernel H(Q)."""
    places: set[Place] = {Place.archimedean()}
    for _, c in Q.coeffs:
        for part in (abs(c.numerator), c.denominator):
            for p in factorint(part):
                places.add(Place.finite(p))
    norms: dict[Place, Fraction] = {}
    H = Fraction(1)
    for v in sorted_places(places):
        nv = form_local_norm(Q, v)
        H *= nv
        if nv != 1:
            norms[v] = nv
    return norms, HeightKernel(H)


def form_height(Q: HomForm) -> HeightKernel:
    return norms_and_height(Q)[1]


def weil_multiplier(Q: HomForm, v: Place, x: ProjectivePoint) -> Fraction:
    """||x||_v^d * ||Q||_v / ||Q(x)||_v; its log is the local Weil function."""
    qx = evaluate(Q, x)
    if qx == 0:
        raise PointOnHypersurfaceError("point lies on the hypersurface")
    return x.local_norm(v) ** Q.d * form_local_norm(Q, v) / local_norm(v, qx)


def first_main_identity(Q: HomForm, x: ProjectivePoint) -> Fraction:
    """Product of Weil multipliers over all contributing places.

    By the product formula this equals H(x)^d * H(Q) exactly.
    """
    qx = evaluate(Q, x)
    if qx == 0:
        raise PointOnHypersurfaceError("point lies on the hypersurface")
    norms, _ = norms_and_height(Q)
    places = {Place.archimedean()} | support(qx) | set(norms)
    result = Fraction(1)
    for v in sorted_places(places):
        result *= weil_multiplier(Q, v, x)
    return result


def substitute(Q: HomForm, matrix) -> HomForm:
    """Linear change of variables x_i = sum_j M[i][j] y_j, expanded exactly."""
    n = Q.n
    rows = [[Fraction(c) for c in row] for row in matrix]
    if len(rows) != n + 1 or any(len(r) != n + 1 for r in rows):
        raise ValueError("matrix must be (n+1) x (n+1)")
    var_forms = []
    for i in range(n + 1):
        coeffs = {}
        for j in range(n + 1):
            if rows[i][j] != 0:
                e = tuple(1 if s == j else 0 for s in range(n + 1))
                coeffs[e] = rows[i][j]
        if not coeffs:
            raise ValueError("matrix has a zero row")
        var_forms.append(HomForm.make(n, 1, coeffs))
    out: dict[MultiIndex, Fraction] = {}
    for exps, c in Q.coeffs:
        term = None
        for i, e in enumerate(exps):
            if e == 0:
                continue
            piece = var_forms[i] ** e
            term = piece if term is None else term * piece
        for e2, c2 in term.coeffs:
            out[e2] = out.get(e2, Fraction(0)) + c * c2
    return HomForm.make(n, Q.d, out)


def leading_index(n: int, d: int) -> MultiIndex:
    return (d,) + (0,) * n


def tilde_normalize(forms: list[HomForm], leading: list[MultiIndex] | None = None) -> list[HomForm]:
    """Bring a family to common degree lcm(d_i) with leading coefficient 1.

    Each form is divided by its coefficient at the leading index (default
    (d_i, 0, ..., 0)) and raised to the power d/d_i.
    """
    if not forms:
        raise ValueError("empty family")
    n = forms[0].n
    if any(Q.n != n for Q in forms):
        raise ValueError("mixed dimensions")
    d = math.lcm(*(Q.d for Q in forms))
    out = []
    for i, Q in enumerate(forms):
        lead = tuple(leading[i]) if leading is not None else leading_index(n, Q.d)
        a = Q.coeff(lead)
        if a == 0:
            raise CoordinateChangeRequiredError(
                f"form {i} has zero coefficient at {lead}; coordinate change required"
            )
        out.append(Q.scale(Fraction(1) / a) ** (d // Q.d))
    return out


def to_common_degree(forms: list[HomForm]) -> list[HomForm]:
    """Forms at the common degree lcm(d_i); identity when degrees already agree.

    Falls back to a deterministic coordinate change when a leading
    coefficient vanishes.  Zero sets are unchanged up to the coordinate
    change, so position tests are unaffected.
    """
    if len({Q.d for Q in forms}) == 1:
        return list(forms)
    try:
        return tilde_normalize(forms)
    except CoordinateChangeRequiredError:
        _, moved = ensure_leading_nonzero(forms)
        return tilde_normalize(moved)


def ensure_leading_nonzero(forms: list[HomForm], max_radius: int = 6):
    """Deterministic unimodular coordinate change making all x_0^d coefficients nonzero.

    Tries the identity first, then shear matrices whose first column is
    (1, m_1, ..., m_n) enumerated radius-major then lexicographically.
    Returns (matrix, transformed forms); the matrix maps new to old variables.
    Certified by re-evaluation: the coefficient of x_0^{d_i} in the transformed
    form equals Q_i at the first matrix column.
    """
    n = forms[0].n

    def try_column(col):
        if any(evaluate(Q, col) == 0 for Q in forms):
            return None
        # identity except for the first column; det = col[0] = 1
        M = [[col[i] if j == 0 else (1 if i == j else 0) for j in range(n + 1)]
             for i in range(n + 1)]
        return M

    for r in range(max_radius + 1):
        for tail in product(range(-r, r + 1), repeat=n):
            if r > 0 and max((abs(t) for t in tail), default=0) != r:
                continue
            M = try_column((1,) + tail)
            if M is not None:
                return M, [substitute(Q, M) for Q in forms]
    raise CoordinateChangeRequiredError("no shear within the search radius works")
