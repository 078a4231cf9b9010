"""Position tests for form families and the reduction to general position.

Empty projective intersections are decided by an exact Macaulay rank test:
for forms of degrees d_1..d_m whose common zero set is empty, the
multiplication map into degree D = sum(d_i - 1) + 1 restricted to any n+1
generic members is surjective, so surjectivity of the full map certifies
emptiness and a rank deficit certifies a common zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import linalg
from .errors import PositionError, SearchExhaustedError
from .projgeom import HomForm, enumerate_Td, to_common_degree


def macaulay_map_rank(forms: list[HomForm], D: int) -> tuple[int, int]:
    """Rank and target dimension of (g_i) -> sum g_i F_i into degree D."""
    if not forms:
        raise ValueError("empty form list")
    n = forms[0].n
    if any(F.n != n for F in forms):
        raise ValueError("mixed dimensions")
    if D < max(F.d for F in forms):
        raise ValueError("D must be at least the largest degree")
    target = enumerate_Td(n, D)
    index = {e: i for i, e in enumerate(target)}
    rows = []
    for F in forms:
        for g in enumerate_Td(n, D - F.d):
            row = [Fraction(0)] * len(target)
            for exps, c in F.coeffs:
                e = tuple(a + b for a, b in zip(exps, g))
                row[index[e]] += c
            rows.append(row)
    return linalg.rank(rows), len(target)


def only_trivial_zero(forms: list[HomForm]) -> bool:
    """True iff the common projective zero set over the algebraic closure is empty.

    Requires at least n+1 forms of a common degree d; decided by surjectivity
    of the Macaulay map at D = (n+1)(d-1)+1.
    """
    if not forms:
        raise ValueError("empty form list")
    n = forms[0].n
    if len(forms) < n + 1:
        raise ValueError("fewer than n+1 forms always share a nontrivial zero")
    d = forms[0].d
    if any(F.d != d or F.n != n for F in forms):
        raise ValueError("forms must share dimension and degree")
    D = (n + 1) * (d - 1) + 1
    r, target = macaulay_map_rank(forms, D)
    return r == target


def sylvester_resultant(f: HomForm, g: HomForm) -> Fraction:
    """Determinant of the Sylvester matrix of two binary forms.

    Nonzero iff the forms have no common projective zero; serves as the
    independent oracle for the n = 1 Macaulay tests.
    """
    if f.n != 1 or g.n != 1:
        raise ValueError("binary forms only")
    df, dg = f.d, g.d
    a = [f.coeff((df - i, i)) for i in range(df + 1)]
    b = [g.coeff((dg - i, i)) for i in range(dg + 1)]
    size = df + dg
    rows = []
    for shift in range(dg):
        rows.append([Fraction(0)] * shift + a + [Fraction(0)] * (dg - 1 - shift))
    for shift in range(df):
        rows.append([Fraction(0)] * shift + b + [Fraction(0)] * (df - 1 - shift))
    return _det(rows, size)


def _det(rows: list[list[Fraction]], size: int) -> Fraction:
    m = [row[:] for row in rows]
    det = Fraction(1)
    for c in range(size):
        pivot = next((i for i in range(c, size) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, size):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _hyperplane_vectors(n: int) -> list[tuple[int, ...]]:
    """Deterministic candidate hyperplane coefficient vectors."""
    vecs = [tuple(1 if j == i else 0 for j in range(n + 1)) for i in range(n + 1)]
    vecs.append((1,) * (n + 1))
    for i in range(n + 1):
        for j in range(n + 1):
            if i < j:
                vecs.append(tuple(1 if s in (i, j) else 0 for s in range(n + 1)))
                vecs.append(tuple(1 if s == i else (-1 if s == j else 0) for s in range(n + 1)))
                vecs.append(tuple(1 if s == i else (2 if s == j else 0) for s in range(n + 1)))
    seen, out = set(), []
    for v in vecs:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def certify_dim_at_most(forms: list[HomForm], bound: int, max_sets: int = 200) -> bool:
    """Sound (possibly incomplete) certificate that the projective zero set
    of `forms` has dimension <= bound.

    For bound < 0 this is an emptiness test.  Otherwise bound+1 hyperplane
    sections from a deterministic list are added; an empty sectioned
    intersection forces the dimension bound.  A False return is inconclusive.
    """
    n = forms[0].n

    def empty(fs: list[HomForm]) -> bool:
        D = sum(F.d - 1 for F in fs) + 1
        r, target = macaulay_map_rank(fs, D)
        return r == target

    if bound < 0:
        return empty(forms)
    k = bound + 1
    tried = 0
    for vecs in combinations(_hyperplane_vectors(n), k):
        if linalg.rank(list(vecs)) < k:
            continue
        hyps = [HomForm.make(n, 1, {tuple(1 if j == s else 0 for j in range(n + 1)): c
                                    for s, c in enumerate(v) if c != 0})
                for v in vecs]
        if empty(forms + hyps):
            return True
        tried += 1
        if tried >= max_sets:
            break
    return False


@dataclass
class PositionVerdict:
    """Outcome of a sampled (weakly) N-subgeneral position check."""

    N: int
    mode: str  # "general" | "subgeneral" | "fails"
    certified_weakly: bool
    witness: tuple[tuple[int, ...], int] | None = None  # failing subset, sample alpha
    sampled_alphas: tuple[int, ...] = ()
    failed_samples: tuple[tuple[tuple[int, ...], int], ...] = ()


def _forms_at(family, alpha: int) -> list[HomForm]:
    if hasattr(family, "at"):
        return family.at(alpha)
    return list(family)


def check_position(family, N: int, samples) -> PositionVerdict:
    """Sampled certification of weakly N-subgeneral position.

    Each Macaulay minor is a rational function of the index, so one passing
    sample per (N+1)-subset certifies nonvanishing for all but finitely many
    indices, which is exactly the "weakly" requirement.  Uniform position is
    never certified, only sampled.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample index")
    probe = _forms_at(family, samples[0])
    n = probe[0].n
    q = len(probe)
    if q < N + 1:
        raise PositionError(f"q={q} < N+1={N + 1}")
    if N + 1 < n + 1:
        raise PositionError(f"N={N} < n={n}")
    cache = {alpha: _forms_at(family, alpha) for alpha in samples}
    failed: list[tuple[tuple[int, ...], int]] = []
    witness = None
    for subset in combinations(range(q), N + 1):
        ok = False
        last_alpha = samples[0]
        for alpha in samples:
            forms = [cache[alpha][i] for i in subset]
            last_alpha = alpha
            common = to_common_degree(forms)
            if only_trivial_zero(common):
                ok = True
                break
            failed.append((subset, alpha))
        if not ok and witness is None:
            witness = (subset, last_alpha)
    certified = witness is None
    mode = ("general" if N == n else "subgeneral") if certified else "fails"
    return PositionVerdict(
        N=N,
        mode=mode,
        certified_weakly=certified,
        witness=witness,
        sampled_alphas=tuple(samples),
        failed_samples=tuple(failed),
    )


@dataclass
class ReductionResult:
    """Output of the reduction to general position.

    coefficients[t-2] holds the integer vector (c_{t,2}, ..., c_{t,N-n+t});
    forms are P_1..P_{n+1} with P_1 = Q_1 and the triangular support shape.
    """

    coefficients: list[list[int]]
    forms: list[HomForm]


def reduce_to_general(Q: list[HomForm], n: int, N: int, max_radius: int = 5) -> ReductionResult:
    """Find P_1 = Q_1 and P_t = sum_{j=2}^{N-n+t} c_tj Q_j in general position.

    Integer vectors c are enumerated radius-major, then in ascending
    lexicographic order with components in {-r..r}; the first candidate whose
    partial intersection passes the dimension certificate is accepted, and
    the full set must pass only_trivial_zero.
    """
    if len(Q) != N + 1:
        raise PositionError(f"expected N+1={N + 1} forms, got {len(Q)}")
    d = Q[0].d
    if any(F.d != d or F.n != n for F in Q):
        raise PositionError("forms must share dimension n and a common degree")
    if not only_trivial_zero(Q):
        raise PositionError("family is not in subgeneral position at this index")

    P = [Q[0]]
    coeff_rows: list[list[int]] = []
    for t in range(2, n + 2):
        width = N - n + t - 1  # j runs over 2..N-n+t
        accepted = None
        for r in range(1, max_radius + 1):
            for c in product(range(-r, r + 1), repeat=width):
                if max(abs(x) for x in c) != r:
                    continue
                merged: dict = {}
                for cj, form in zip(c, Q[1:1 + width]):
                    if cj == 0:
                        continue
                    for exps, a in form.coeffs:
                        merged[exps] = merged.get(exps, Fraction(0)) + cj * a
                if all(v == 0 for v in merged.values()):
                    continue
                cand = HomForm.make(n, d, merged)
                trial = P + [cand]
                if t == n + 1:
                    ok = only_trivial_zero(trial)
                else:
                    ok = certify_dim_at_most(trial, n - t)
                if ok:
                    accepted = (list(c), cand)
                    break
            if accepted:
                break
        if accepted is None:
            raise SearchExhaustedError(f"no combination found for t={t} within radius {max_radius}")
        coeff_rows.append(accepted[0])
        P.append(accepted[1])
    if not only_trivial_zero(P):
        raise SearchExhaustedError("reduced family failed the final position test")
    return ReductionResult(coefficients=coeff_rows, forms=P)
