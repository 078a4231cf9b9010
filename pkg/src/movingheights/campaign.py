"""Per-index evaluation of the main inequality, diagnostics, and campaigns.

All multipliers and kernels are exact rationals; violations of the
inequality are decided by exact integer comparison, and logarithms appear
only when rows are formatted (round to nearest at the configured binary
precision, 12 significant digits in CSV).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from .family import CampaignConfig, PointSequence
from .places import Place, local_norm, log_exact
from .position import PositionVerdict, check_position
from .projgeom import (
    HomForm,
    ProjectivePoint,
    enumerate_Td,
    evaluate,
    form_height,
    tilde_normalize,
    weil_multiplier,
)
from . import linalg

CSV_COLUMNS = ("alpha", "h_x", "lhs", "rhs", "ratio", "smallness",
               "excluded", "lhs_kernel_num", "lhs_kernel_den")


def format_sig(x, digits: int = 12) -> str:
    """Decimal with a fixed number of significant digits, round to nearest."""
    return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False)


def bound_constant(config: CampaignConfig, hyperplane_mode: bool = False) -> Fraction:
    """(N-n+1)(n+1)+eps, or n+1+eps in hyperplane mode."""
    if hyperplane_mode:
        return Fraction(config.n + 1) + config.epsilon
    return Fraction((config.N - config.n + 1) * (config.n + 1)) + config.epsilon


@dataclass
class InstanceRecord:
    """Exact per-index evaluation of the inequality."""

    alpha: int
    point: ProjectivePoint | None
    excluded: bool
    reason: str = ""
    hx_kernel: Fraction = Fraction(1)
    hq_kernels: tuple[Fraction, ...] = ()
    multipliers: dict = field(default_factory=dict)  # (j, place) -> Fraction
    lhs_kernel: Fraction = Fraction(1)  # exp(lhs * degree_lcm), exactly
    degree_lcm: int = 1
    violation: bool = False  # lhs > rhs, decided exactly
    sort_perms: dict = field(default_factory=dict)  # place -> tuple of form indices
    boundedness: dict = field(default_factory=dict)  # place -> max_j ||Q_j(x)||_v/||x||_v^d_j
    tilde_arch_discrepancy: object = None  # mpf, mixed-degree families only
    # reporting-layer values (mpf at config precision)
    h_x: object = None
    lhs: object = None
    rhs: object = None
    ratio: object = None
    smallness: object = None


def evaluate_instance(config: CampaignConfig, alpha: int,
                      hyperplane_mode: bool = False) -> InstanceRecord:
    """Evaluate one index exactly; degenerate indices yield excluded records."""
    bits = config.precision_bits
    bound = bound_constant(config, hyperplane_mode)
    point = config.points.at(alpha)
    hx = point.height().H
    forms = config.family.at(alpha)
    degrees = [F.d for F in forms]
    D = math.lcm(*degrees)

    values = []
    for j, F in enumerate(forms):
        qx = evaluate(F, point)
        if qx == 0:
            return InstanceRecord(alpha=alpha, point=point, excluded=True,
                                  reason=f"form {j} vanishes at the point", hx_kernel=hx)
        values.append(qx)
    if hx == 1:
        return InstanceRecord(alpha=alpha, point=point, excluded=True,
                              reason="zero height point", hx_kernel=hx)

    multipliers = {}
    kernel = Fraction(1)
    sort_perms = {}
    boundedness = {}
    for v in config.places:
        local_values = []
        xv = point.local_norm(v)
        bmax = None
        for j, (F, qx) in enumerate(zip(forms, values)):
            mult = weil_multiplier(F, v, point)
            multipliers[(j, v)] = mult
            kernel *= mult ** (D // F.d)
            qv = local_norm(v, qx)
            local_values.append((qv, j))
            ratio_v = qv / xv ** F.d
            bmax = ratio_v if bmax is None or ratio_v > bmax else bmax
        sort_perms[v] = tuple(j for _, j in sorted(local_values, key=lambda t: (t[0], t[1])))
        boundedness[v] = bmax

    hq = tuple(form_height(F).H for F in forms)

    rec = InstanceRecord(
        alpha=alpha, point=point, excluded=False,
        hx_kernel=hx, hq_kernels=hq, multipliers=multipliers,
        lhs_kernel=kernel, degree_lcm=D,
        sort_perms=sort_perms, boundedness=boundedness,
    )
    # Exact violation test: lhs > rhs  iff  kernel^b > hx^(a*D) for bound = a/b.
    a, b = bound.numerator, bound.denominator
    rec.violation = kernel ** b > hx ** (a * D)

    with mpmath.workprec(bits):
        rec.h_x = log_exact(hx, bits)
        rec.lhs = log_exact(kernel, bits) / D
        rec.rhs = mpmath.mpf(a) / b * rec.h_x
        rec.ratio = rec.lhs / rec.h_x
        small = mpmath.mpf(0)
        for H in hq:
            if H != 1:
                s = log_exact(H, bits) / rec.h_x
                small = s if s > small else small
        rec.smallness = small
        if any(d != D for d in degrees):
            rec.tilde_arch_discrepancy = _tilde_discrepancy(forms, point, D, bits)
    return rec


def _tilde_discrepancy(forms, point, D, bits):
    """Max over forms of |(1/D) lambda_tilde - (1/d_j) lambda| at the archimedean place.

    Exact at finite places; at the archimedean place the sup norm of a power
    is not the power of the sup norm, so the gap is reported, not asserted.
    """
    inf = Place.archimedean()
    try:
        tilde = tilde_normalize(forms)
    except ValueError:
        return None
    worst = mpmath.mpf(0)
    for F, T in zip(forms, tilde):
        lam = log_exact(weil_multiplier(F, inf, point), bits) / F.d
        lam_t = log_exact(weil_multiplier(T, inf, point), bits) / D
        gap = abs(lam_t - lam)
        worst = gap if gap > worst else worst
    return worst


@dataclass
class CampaignSummary:
    records: list[InstanceRecord]
    bound: Fraction
    violations: int
    excluded: int
    max_ratio: object  # mpf or None
    smallness_last_quartile: object  # mpf or None
    position: PositionVerdict | None
    boundedness_range: dict  # place -> (min, max) Fractions

    def as_dict(self) -> dict:
        return {
            "instances": len(self.records),
            "bound": str(self.bound),
            "violations": self.violations,
            "excluded": self.excluded,
            "max_ratio": None if self.max_ratio is None else format_sig(self.max_ratio),
            "smallness_last_quartile": (None if self.smallness_last_quartile is None
                                        else format_sig(self.smallness_last_quartile)),
            "position": None if self.position is None else {
                "mode": self.position.mode,
                "N": self.position.N,
                "certified_weakly": self.position.certified_weakly,
                "witness": self.position.witness,
                "sampled_alphas": list(self.position.sampled_alphas),
                "failed_samples": [{"subset": list(s), "alpha": a}
                                   for s, a in self.position.failed_samples],
            },
            "boundedness_range": {
                str(v): [str(lo), str(hi)]
                for v, (lo, hi) in self.boundedness_range.items()
            },
        }


def position_samples(config: CampaignConfig) -> list[int]:
    lo, hi = config.alpha_range
    mid = (lo + hi) // 2
    out = []
    for a in (lo, mid, hi):
        if a not in out:
            out.append(a)
    return out


def run_campaign(config: CampaignConfig, out_path: str | Path | None = None,
                 fmt: str = "csv", hyperplane_mode: bool = False) -> CampaignSummary:
    """Evaluate every index in the range and emit one row per instance.

    Rows are serialized in ascending alpha; identical configurations give
    byte-identical output.
    """
    records = [evaluate_instance(config, alpha, hyperplane_mode)
               for alpha in config.alphas]
    bound = bound_constant(config, hyperplane_mode)

    active = [r for r in records if not r.excluded]
    violations = sum(1 for r in active if r.violation)
    max_ratio = None
    for r in active:
        if max_ratio is None or r.ratio > max_ratio:
            max_ratio = r.ratio
    tail = active[(3 * len(active)) // 4:]
    small_tail = None
    for r in tail:
        if small_tail is None or r.smallness > small_tail:
            small_tail = r.smallness

    verdict = check_position(config.family, config.N, position_samples(config))

    brange = {}
    for r in active:
        for v, val in r.boundedness.items():
            lo, hi = brange.get(v, (val, val))
            brange[v] = (min(lo, val), max(hi, val))

    summary = CampaignSummary(
        records=records, bound=bound, violations=violations,
        excluded=len(records) - len(active), max_ratio=max_ratio,
        smallness_last_quartile=small_tail, position=verdict,
        boundedness_range=brange,
    )
    if out_path is not None:
        text = render_csv(records) if fmt == "csv" else render_json(records, summary)
        Path(out_path).write_text(text, encoding="utf-8")
    return summary


def render_csv(records: list[InstanceRecord]) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        if r.excluded:
            row = [str(r.alpha), format_sig(log_exact(r.hx_kernel)) if r.hx_kernel > 0 else "",
                   "", "", "", "", "1", "", ""]
        else:
            row = [str(r.alpha), format_sig(r.h_x), format_sig(r.lhs), format_sig(r.rhs),
                   format_sig(r.ratio), format_sig(r.smallness), "0",
                   str(r.lhs_kernel.numerator), str(r.lhs_kernel.denominator)]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def render_json(records: list[InstanceRecord], summary: CampaignSummary) -> str:
    rows = []
    for r in records:
        if r.excluded:
            rows.append({"alpha": r.alpha, "excluded": True, "reason": r.reason})
            continue
        row = {
            "alpha": r.alpha,
            "h_x": format_sig(r.h_x),
            "lhs": format_sig(r.lhs),
            "rhs": format_sig(r.rhs),
            "ratio": format_sig(r.ratio),
            "smallness": format_sig(r.smallness),
            "excluded": False,
            "lhs_kernel_num": str(r.lhs_kernel.numerator),
            "lhs_kernel_den": str(r.lhs_kernel.denominator),
            "degree_lcm": r.degree_lcm,
            "point": list(r.point.coords),
            "sort_permutations": {str(v): list(p) for v, p in r.sort_perms.items()},
        }
        if r.tilde_arch_discrepancy is not None:
            row["tilde_arch_discrepancy"] = format_sig(r.tilde_arch_discrepancy)
        rows.append(row)
    return json.dumps({"rows": rows, "summary": summary.as_dict()}, indent=2) + "\n"


@dataclass
class ProbeVerdict:
    passed: bool
    rank: int
    expected_rank: int
    witness: HomForm | None = None
    note: str = ("detects constant-coefficient degeneracy only; degeneracy over the "
                 "moving coefficient field is out of reach of this probe")


def nondegeneracy_probe(points: PointSequence, n: int, e: int, alphas) -> ProbeVerdict:
    """Rank test of the degree-e Veronese images of sampled points.

    Full column rank means no constant-coefficient form of degree <= e
    vanishes along the samples; otherwise a kernel vector is returned as an
    explicit candidate vanishing form.
    """
    alphas = list(alphas)
    monomials = enumerate_Td(n, e)
    expected = len(monomials)
    if len(alphas) < expected + 2:
        raise ValueError(f"need at least {expected + 2} samples, got {len(alphas)}")
    rows = []
    for alpha in alphas:
        x = points.at(alpha).coords
        row = []
        for exps in monomials:
            term = Fraction(1)
            for base, k in zip(x, exps):
                if k:
                    term *= Fraction(base) ** k
            row.append(term)
        rows.append(row)
    r = linalg.rank(rows)
    if r == expected:
        return ProbeVerdict(passed=True, rank=r, expected_rank=expected)
    kernel = linalg.nullspace(rows)
    coeffs = {exps: c for exps, c in zip(monomials, kernel[0]) if c != 0}
    witness = HomForm.make(n, e, coeffs)
    return ProbeVerdict(passed=False, rank=r, expected_rank=expected, witness=witness)


def smallness_report(config: CampaignConfig, threshold: Fraction = Fraction(1, 20)):
    """Per-index max_j h(Q_j)/h(x) with a trailing-quartile envelope verdict."""
    rows = []
    bits = config.precision_bits
    for alpha in config.alphas:
        point = config.points.at(alpha)
        hx = point.height().H
        if hx == 1:
            continue  # ratio undefined; finitely many such indices
        hx_log = log_exact(hx, bits)
        with mpmath.workprec(bits):
            per_j = []
            for F in config.family.at(alpha):
                H = form_height(F).H
                per_j.append(mpmath.mpf(0) if H == 1 else log_exact(H, bits) / hx_log)
            rows.append((alpha, per_j, max(per_j)))
    tail = rows[(3 * len(rows)) // 4:]
    envelope = max((m for _, _, m in tail), default=mpmath.mpf(0))
    passed = envelope < mpmath.mpf(threshold.numerator) / threshold.denominator
    return rows, envelope, passed
