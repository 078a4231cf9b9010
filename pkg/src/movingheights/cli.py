"""Command line interface.

Exit codes: 0 success, 1 configuration error, 2 position-certification
failure, 3 internal consistency error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .campaign import (
    format_sig,
    nondegeneracy_probe,
    position_samples,
    run_campaign,
)
from .errors import ConfigError, ConsistencyError
from .family import load_config
from .filtration import build_filtration, choose_L, filtration_stats
from .position import check_position, reduce_to_general
from .projgeom import (
    HomForm,
    enumerate_Td,
    first_main_identity,
    form_height,
    normalize_point,
    to_common_degree,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="movingheights",
        description="Exact heights, Weil functions, position tests, and "
                    "inequality campaigns for moving hypersurface families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="campaign JSON document")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", help="run the inequality campaign")
    add_common(p)
    p.add_argument("--hyperplane-mode", action="store_true",
                   help="use the degree-1 bound n+1+eps")

    p = sub.add_parser("check-position", help="sampled subgeneral-position check")
    add_common(p)

    p = sub.add_parser("reduce", help="reduce the first N+1 forms to general position")
    add_common(p)
    p.add_argument("--alpha", type=int, default=None, help="index to evaluate at")

    p = sub.add_parser("filtration", help="build the staircase filtration and stats")
    add_common(p)
    p.add_argument("--alpha", type=int, default=None)
    p.add_argument("--l", type=int, default=None, help="filtration degree L (multiple of d)")

    p = sub.add_parser("choose-l", help="smallest L satisfying the ratio predicate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bign", type=int, required=True, dest="bigN")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--epsilon-prime", default="1")

    p = sub.add_parser("fmt-check", help="first-main-identity self-test on random pairs")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("probe", help="constant-coefficient nondegeneracy probe")
    add_common(p)
    return parser


def _cmd_verify(args) -> int:
    config = load_config(args.config)
    summary = run_campaign(config, out_path=args.out, fmt=args.format,
                           hyperplane_mode=args.hyperplane_mode)
    print(f"instances={len(summary.records)} excluded={summary.excluded} "
          f"violations={summary.violations} bound={summary.bound}")
    if summary.max_ratio is not None:
        print(f"max_ratio={format_sig(summary.max_ratio)}")
    if summary.smallness_last_quartile is not None:
        print(f"smallness_last_quartile={format_sig(summary.smallness_last_quartile)}")
    pos = summary.position
    print(f"position: mode={pos.mode} certified_weakly={pos.certified_weakly} "
          f"sampled_alphas={list(pos.sampled_alphas)} (sampled only, never uniform)")
    if pos.failed_samples:
        print(f"position rank-test failures at sampled indices: "
              f"{[(list(s), a) for s, a in pos.failed_samples]}")
    for v, (lo, hi) in summary.boundedness_range.items():
        print(f"local bound ratios at {v}: min={lo} max={hi}")
    return 0 if pos.certified_weakly else 2


def _cmd_check_position(args) -> int:
    config = load_config(args.config)
    verdict = check_position(config.family, config.N, position_samples(config))
    print(f"mode={verdict.mode} N={verdict.N} certified_weakly={verdict.certified_weakly}")
    if verdict.witness is not None:
        subset, alpha = verdict.witness
        print(f"witness: subset={list(subset)} alpha={alpha}")
    return 0 if verdict.certified_weakly else 2


def _cmd_reduce(args) -> int:
    config = load_config(args.config)
    alpha = args.alpha if args.alpha is not None else config.alpha_range[0]
    forms = to_common_degree(config.family.at(alpha)[: config.N + 1])
    result = reduce_to_general(forms, config.n, config.N)
    for t, row in enumerate(result.coefficients, start=2):
        print(f"c[{t}] = {row}")
    for i, P in enumerate(result.forms, start=1):
        print(f"P_{i}: {dict(P.coeffs)}")
    return 0


def _cmd_filtration(args) -> int:
    config = load_config(args.config)
    alpha = args.alpha if args.alpha is not None else config.alpha_range[0]
    forms = to_common_degree(config.family.at(alpha)[: config.N + 1])
    d = forms[0].d
    reduced = reduce_to_general(forms, config.n, config.N)
    P = reduced.forms[: config.n]
    if args.l is not None:
        L = args.l
    else:
        L, _ = choose_L(config.n, d, config.N, config.epsilon, config.epsilon_prime)
    data = build_filtration(P, L)
    u, K, a = filtration_stats(config.n, d, L)
    print(f"L={L} u={u} K={K} a={a}")
    print(f"jump dimensions m_k: {data.m}")
    return 0


def _cmd_choose_l(args) -> int:
    L, ratio = choose_L(args.n, args.d, args.bigN,
                        Fraction(args.epsilon), Fraction(args.epsilon_prime))
    print(f"L={L} ratio={ratio} (~{float(ratio):.6f})")
    return 0


def _cmd_fmt_check(args) -> int:
    rng = random.Random(args.seed)
    failures = 0
    for _ in range(args.count):
        n = rng.randint(1, 3)
        d = rng.randint(1, 4)
        Q = _random_form(rng, n, d)
        x = _random_point(rng, n)
        from .projgeom import evaluate

        if evaluate(Q, x) == 0:
            continue
        lhs = first_main_identity(Q, x)
        rhs = x.height().H ** d * form_height(Q).H
        if lhs != rhs:
            failures += 1
            print(f"FAIL n={n} d={d} x={x.coords}")
    print(f"first-main-identity self-test: {args.count} pairs, {failures} failures")
    return 0 if failures == 0 else 3


def _random_form(rng: random.Random, n: int, d: int, height: int = 20) -> HomForm:
    while True:
        coeffs = {e: rng.randint(-height, height) for e in enumerate_Td(n, d)}
        if any(c != 0 for c in coeffs.values()):
            return HomForm.make(n, d, coeffs)


def _random_point(rng: random.Random, n: int, height: int = 50):
    while True:
        coords = [rng.randint(-height, height) for _ in range(n + 1)]
        if any(c != 0 for c in coords):
            return normalize_point(coords)


def _cmd_probe(args) -> int:
    config = load_config(args.config)
    e = config.probe_degree
    needed = len(enumerate_Td(config.n, e)) + 2
    alphas = list(config.alphas)
    if len(alphas) < needed:
        if config.points.kind == "explicit":
            print(f"config error: probe needs {needed} samples but the explicit "
                  f"range has {len(alphas)}", file=sys.stderr)
            return 1
        lo = config.alpha_range[0]
        alphas = list(range(lo, lo + needed))
    verdict = nondegeneracy_probe(config.points, config.n, e, alphas)
    status = "pass" if verdict.passed else "degenerate"
    print(f"{status}: rank {verdict.rank}/{verdict.expected_rank} (degree {e})")
    if verdict.witness is not None:
        print(f"candidate vanishing form: {dict(verdict.witness.coeffs)}")
    print(f"note: {verdict.note}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "check-position": _cmd_check_position,
        "reduce": _cmd_reduce,
        "filtration": _cmd_filtration,
        "choose-l": _cmd_choose_l,
        "fmt-check": _cmd_fmt_check,
        "probe": _cmd_probe,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
