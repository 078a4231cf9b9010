"""Staircase filtrations of V_L, quotient dimensions, and the constants u, K, a.

The jump dimensions of the filtration are governed by a purely combinatorial
count (the number of bounded n-tuples), which the rank-based constructions
here cross-check; a disagreement signals a position failure upstream and is
raised as a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

from . import linalg
from .errors import ConsistencyError
from .position import macaulay_map_rank
from .projgeom import HomForm, MultiIndex, enumerate_Td


def lemma33_count(n: int, d: int, M: int) -> int:
    """Number of n-tuples (s_1..s_n) with sum <= M and 0 <= s_i <= d-1.

    Equals d^n once M >= n(d-1).
    """
    if n < 1 or d < 1 or M < 0:
        raise ValueError("need n >= 1, d >= 1, M >= 0")
    if M >= n * (d - 1):
        return d ** n
    return sum(1 for s in product(range(d), repeat=n) if sum(s) <= M)


def quotient_dim_rank(P: list[HomForm], L: int) -> int:
    """dim of V_L modulo the degree-L slice of the ideal (P_1..P_n), by exact rank."""
    n = P[0].n
    d = P[0].d
    if any(F.n != n or F.d != d for F in P):
        raise ValueError("forms must share dimension and degree")
    dim_VL = comb(L + n, n)
    if L < d:
        return dim_VL
    r, _ = macaulay_map_rank(P, L)
    return dim_VL - r


def staircase_tuples(n: int, d: int, L: int) -> list[tuple[int, ...]]:
    """All n-tuples (i) with d*||i|| <= L, in ascending lexicographic order."""
    if L % d != 0:
        raise ValueError("d must divide L")
    top = L // d
    tuples = [t for t in product(range(top + 1), repeat=n) if sum(t) <= top]
    tuples.sort()
    return tuples


@dataclass(frozen=True)
class BasisElement:
    """One staircase basis element: P_1^{i_1}...P_n^{i_n} * (monomial h)."""

    vector: tuple[Fraction, ...]  # over the canonical monomial basis of V_L
    powers: tuple[int, ...]  # the staircase tuple (i)_k
    monomial: MultiIndex  # h


@dataclass
class FiltrationData:
    """Staircase decomposition of V_L for the ideal generated by P_1..P_n."""

    n: int
    d: int
    L: int
    tuples: list[tuple[int, ...]]
    m: list[int]  # jump dimensions, one per tuple
    basis: list[BasisElement]  # grouped by tuple, ascending

    @property
    def u(self) -> int:
        return comb(self.L + self.n, self.n)

    @property
    def K(self) -> int:
        return len(self.tuples)


def build_filtration(P: list[HomForm], L: int) -> FiltrationData:
    """Construct the staircase basis of V_L, processing tuples from the last down.

    Each jump is realized by products P^{(i)_k} * monomial whose images extend
    the current span; the observed span growth must match the combinatorial
    count (and 1 for the final tuple), else a ConsistencyError is raised.
    """
    n = P[0].n
    d = P[0].d
    if len(P) != n:
        raise ValueError(f"expected n={n} forms, got {len(P)}")
    if any(F.n != n or F.d != d for F in P):
        raise ValueError("forms must share dimension and degree")
    if L % d != 0 or L < d:
        raise ValueError("L must be a positive multiple of d")

    tuples = staircase_tuples(n, d, L)
    K = len(tuples)
    mono_L = enumerate_Td(n, L)
    index = {e: i for i, e in enumerate(mono_L)}
    u = len(mono_L)

    power_cache: dict[tuple[int, ...], HomForm | None] = {}

    def power_product(i: tuple[int, ...]) -> HomForm | None:
        if i not in power_cache:
            out = None
            for F, e in zip(P, i):
                if e == 0:
                    continue
                piece = F ** e
                out = piece if out is None else out * piece
            power_cache[i] = out
        return power_cache[i]

    span = linalg.Spanner(u)
    m = [0] * K
    groups: list[list[BasisElement]] = [[] for _ in range(K)]
    for k in range(K - 1, -1, -1):
        i = tuples[k]
        residual = L - d * sum(i)
        pp = power_product(i)
        for h in enumerate_Td(n, residual):
            if pp is None:
                vec = [Fraction(0)] * u
                vec[index[h]] = Fraction(1)
            else:
                shifted = {}
                for exps, c in pp.coeffs:
                    e = tuple(a + b for a, b in zip(exps, h))
                    shifted[e] = shifted.get(e, Fraction(0)) + c
                vec = [Fraction(0)] * u
                for e, c in shifted.items():
                    vec[index[e]] = c
            if span.add(vec):
                m[k] += 1
                groups[k].append(BasisElement(tuple(vec), i, h))

    if sum(m) != u:
        raise ConsistencyError(f"jump dimensions sum to {sum(m)}, expected {u}")
    for k in range(K):
        expected = 1 if k == K - 1 else lemma33_count(n, d, L - d * sum(tuples[k]))
        if m[k] != expected:
            raise ConsistencyError(
                f"jump at tuple {tuples[k]} is {m[k]}, combinatorial count gives {expected}"
            )
    basis = [elem for group in groups for elem in group]
    return FiltrationData(n=n, d=d, L=L, tuples=tuples, m=m, basis=basis)


def filtration_stats(n: int, d: int, L: int) -> tuple[int, int, int]:
    """(u, K, a) by pure combinatorics; a is checked identical for every coordinate."""
    if L % d != 0 or L < d:
        raise ValueError("L must be a positive multiple of d")
    tuples = staircase_tuples(n, d, L)
    K = len(tuples)
    u = comb(L + n, n)
    a_per_s = []
    for s in range(n):
        total = 0
        for k, i in enumerate(tuples):
            mk = 1 if k == K - 1 else lemma33_count(n, d, L - d * sum(i))
            total += mk * i[s]
        a_per_s.append(total)
    if len(set(a_per_s)) != 1:
        raise ConsistencyError(f"a depends on the coordinate: {a_per_s}")
    return u, K, a_per_s[0]


def _ideal_slice_rows(P: list[HomForm], m_deg: int) -> list[list[Fraction]]:
    """Spanning rows of the degree-m_deg slice of the ideal (P_1..P_n)."""
    n = P[0].n
    d = P[0].d
    if m_deg < d:
        return []
    target = enumerate_Td(n, m_deg)
    index = {e: i for i, e in enumerate(target)}
    rows = []
    for F in P:
        for g in enumerate_Td(n, m_deg - d):
            row = [Fraction(0)] * len(target)
            for exps, c in F.coeffs:
                e = tuple(a + b for a, b in zip(exps, g))
                row[index[e]] += c
            rows.append(row)
    return rows


def kernel_claim_check(P: list[HomForm], i: tuple[int, ...], L: int) -> bool:
    """Check ker(V_{L-d||i||} -> W_(i)/W_(i')) equals the ideal slice, exactly.

    Both sides are computed independently (kernel extraction vs multiplication
    map image) and compared as canonical RREFs.
    """
    n = P[0].n
    d = P[0].d
    i = tuple(i)
    if d * sum(i) >= L:
        raise ValueError("need d*||i|| < L")
    tuples = staircase_tuples(n, d, L)
    k = tuples.index(i)
    i_prime = tuples[k + 1]

    mono_L = enumerate_Td(n, L)
    index_L = {e: j for j, e in enumerate(mono_L)}
    uL = len(mono_L)
    m_deg = L - d * sum(i)
    mono_m = enumerate_Td(n, m_deg)

    def power_product(j: tuple[int, ...]) -> HomForm | None:
        out = None
        for F, e in zip(P, j):
            if e == 0:
                continue
            piece = F ** e
            out = piece if out is None else out * piece
        return out

    def image_vec(pp: HomForm | None, h: MultiIndex) -> list[Fraction]:
        vec = [Fraction(0)] * uL
        if pp is None:
            vec[index_L[h]] = Fraction(1)
            return vec
        for exps, c in pp.coeffs:
            e = tuple(a + b for a, b in zip(exps, h))
            vec[index_L[e]] += c
        return vec

    # Columns spanning W_(i'), then the images of the monomial basis of V_{m_deg}.
    w_cols: list[list[Fraction]] = []
    for j in tuples[k + 1:]:
        pp = power_product(j)
        for h in enumerate_Td(n, L - d * sum(j)):
            w_cols.append(image_vec(pp, h))
    pp_i = power_product(i)
    map_cols = [image_vec(pp_i, h) for h in mono_m]

    all_cols = w_cols + map_cols
    # Rows of the matrix are monomials of V_L; columns as above.
    matrix = [[all_cols[c][r] for c in range(len(all_cols))] for r in range(uL)]
    kernel = linalg.nullspace(matrix)
    gamma_part = [vec[len(w_cols):] for vec in kernel]
    lhs = linalg.rref(gamma_part) if gamma_part else []

    rhs_rows = _ideal_slice_rows(P, m_deg)
    rhs = linalg.rref(rhs_rows) if rhs_rows else []
    return lhs == rhs


def choose_L(n: int, d: int, N: int, eps, eps_prime=1) -> tuple[int, Fraction]:
    """Smallest multiple L of d with (L*u + eps')/(d*a) strictly below
    (n+1) + eps/(2(N-n+1)); returns (L, achieved ratio).

    The strict inequality pins the documented small cases; the ratio tends to
    n+1, so the predicate is eventually satisfied.
    """
    eps = Fraction(eps)
    eps_prime = Fraction(eps_prime)
    if eps <= 0 or eps_prime <= 0:
        raise ValueError("eps and eps' must be positive")
    if N < n or n < 1 or d < 1:
        raise ValueError("need N >= n >= 1 and d >= 1")
    bound = Fraction(n + 1) + eps / (2 * (N - n + 1))
    L = d
    while True:
        u, _, a = filtration_stats(n, d, L)
        ratio = (L * u + eps_prime) / Fraction(d * a)
        if ratio < bound:
            return L, ratio
        L += d
