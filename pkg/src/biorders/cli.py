"""Command-line front end: reproducible experiments in exact arithmetic.

Every command prints a one-line header restating its configuration, so a
report can be replayed from its own first line; identical command lines
produce byte-identical output.  Exit status 0 means every requested check
passed, 1 reports a mathematical finding (a violation, a contradiction or
a failed construction), 2 a usage error.  All numbers are printed as
exact ``p/q`` strings, never floats.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .levels import (LevelOracle, Window, level_values, separation_evidence,
                     window_relations)
from .noniso import (ChainError, NoMovement, NonIsoInput, NotFound,
                     nonisolation_witness)
from .oracles import (MagnusOracle, RealizedOracle, check_biinvariance,
                      compare, cone_saturate, positive_cone_ball)
from .plmaps import format_plmap, parse_plmap
from .realization import (MergeFailed, check_merging,
                          free_product_realization, merge,
                          standard_merged_free_group, standard_z)
from .words import free_group


def _header(command: str, **config) -> str:
    parts = [command]
    for key in sorted(config):
        value = str(config[key])
        if " " in value:
            value = f'"{value}"'
        parts.append(f"{key}={value}")
    return "# biorders " + " ".join(parts)


def _make_order(spec: str):
    """An oracle from its command-line name.

    ``magnus`` is the lowest-terms order on the rank-two free group;
    ``realized`` (optionally ``realized:SEED``) the merged dynamical
    order; ``level:ALPHA`` the two-stage order with weight ``ALPHA``.
    """
    if spec == "magnus":
        return MagnusOracle(free_group("a", "b"))
    if spec == "realized":
        return RealizedOracle(standard_merged_free_group())
    if spec.startswith("realized:"):
        seed = int(spec.split(":", 1)[1])
        return RealizedOracle(standard_merged_free_group(seed=seed),
                              provenance=spec)
    if spec.startswith("level:"):
        return LevelOracle(free_group("a", "b"),
                           Fraction(spec.split(":", 1)[1]))
    raise ValueError(f"unknown order {spec!r}: "
                     "use magnus, realized[:SEED] or level:ALPHA")


def _parse_window(text: str) -> Window:
    fields = text.split(",")
    if len(fields) != 4:
        raise ValueError(f"window {text!r} must be four integers k,l,m,n")
    return Window(*(int(f) for f in fields))


# ----------------------------------------------------------------------
# commands


def cmd_compare(args) -> int:
    oracle = _make_order(args.order)
    fp = oracle.group
    print(_header("compare", order=args.order, w1=args.first,
                  w2=args.second))
    print(compare(oracle, fp.parse(args.first), fp.parse(args.second)))
    return 0


def cmd_cone(args) -> int:
    oracle = _make_order(args.order)
    fp = oracle.group
    print(_header("cone", order=args.order, radius=args.radius))
    for w in positive_cone_ball(oracle, args.radius):
        print(fp.format(w))
    return 0


def cmd_biinv(args) -> int:
    oracle = _make_order(args.order)
    fp = oracle.group
    print(_header("biinv", order=args.order, radius=args.radius))
    report = check_biinvariance(oracle, args.radius)
    print(f"{len(report.violations)} violations / {report.words} words")
    for w, c in report.violations:
        print(f"VIOLATION {fp.format(w)} by {fp.format(c)}")
    for f, g, h in report.left_failures:
        print(f"LEFT-FAILURE {fp.format(f)} {fp.format(g)} {fp.format(h)}")
    return 0 if report.ok else 1


def _write_realization(path, realization) -> None:
    lines = [f"{gen}: {format_plmap(m)}"
             for gen, m in sorted(realization.gen_maps.items())]
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_merge(args) -> int:
    eps = Fraction(args.eps)
    r_a, r_b = standard_z("a"), standard_z("b")
    print(_header("merge", eps=args.eps, radius=args.radius,
                  seed=args.seed, unperturbed=args.unperturbed))
    if args.unperturbed:
        report = check_merging(r_a, r_b, args.radius)
        print(f"{len(report.violations)} violations at radius "
              f"{report.checked_radius}")
        combined = free_product_realization(r_a, r_b)
        for word, x in report.violations:
            print(f"VIOLATION {combined.group.format(word)} @ {x}")
        if not report.ok:
            return 1
    else:
        try:
            combined, report = merge(r_a, r_b, eps, args.radius,
                                     seed=args.seed)
        except MergeFailed as exc:
            print(f"FAILED {exc}")
            return 1
        print(f"0 violations at radius {report.checked_radius}")
    for gen, m in sorted(combined.gen_maps.items()):
        print(f"{gen}: {format_plmap(m)}")
    if args.out:
        _write_realization(args.out, combined)
        print(f"wrote {args.out}")
    return 0


def cmd_noniso(args) -> int:
    realization = standard_merged_free_group()
    fp = realization.group
    chain = tuple(fp.parse(part) for part in args.chain.split(";"))
    print(_header("noniso", audit=args.audit, chain=args.chain,
                  search=args.search, seed=args.seed))
    task = NonIsoInput(realization=realization, chain=chain,
                       search_radius=args.search,
                       audit_radius=args.audit, seed=args.seed)
    try:
        witness = nonisolation_witness(task)
    except (NotFound, NoMovement, MergeFailed) as exc:
        print(f"FAILED {exc}")
        return 1
    w_plus, w_minus = witness.witness_pair
    print(f"f0 = {fp.format(witness.f0)}")
    print(f"conjugator = {fp.format(witness.conjugator)}")
    print(f"push = {fp.format(witness.fprime)}")
    print(f"probe = {fp.format(witness.probe)}")
    print(f"pair = {fp.format(w_plus)} | {fp.format(w_minus)}")
    print(f"verdict1 = {witness.verdicts[0]}")
    print(f"verdict2 = {witness.verdicts[1]}")
    print(f"tau1 = {format_plmap(witness.tau1)}")
    print(f"tau2 = {format_plmap(witness.tau2)}")
    for name, audit in zip(("audit1", "audit2"), witness.audits):
        state = "ok" if audit.ok else f"{len(audit.violations)} violations"
        print(f"{name} = {state} (radius {audit.radius}, "
              f"{audit.words} words, {audit.pairs_checked} pairs)")
    for name, oracle in (("cone1", witness.order1), ("cone2", witness.order2)):
        cone = positive_cone_ball(oracle, args.audit)
        print(f"{name} = " + ", ".join(fp.format(w) for w in cone))
    return 0


def cmd_type(args) -> int:
    alpha = Fraction(args.alpha)
    oracle = LevelOracle(free_group("a", "b"), alpha)
    fp = oracle.group
    print(_header("type", alpha=args.alpha,
                  window=";".join(args.window or []),
                  words=";".join(args.words or [])))
    failed = False
    for text in args.words or []:
        total, weight = level_values(fp.parse(text), alpha)
        shown = "undefined" if weight is None else str(weight)
        sign = oracle.sign(fp.parse(text))
        print(f"{text}: sum={total} weight={shown} sign={sign:+d}")
    for text in args.window or []:
        window = _parse_window(text)
        inside = window.contains_weight(alpha)
        checks = window_relations(oracle, window,
                                  printed_form=args.printed_form)
        print(f"window {text}: weight {alpha} in "
              f"({window.lower}, {window.upper}): "
              f"{'PASS' if inside else 'FAIL'}")
        for label, ok in checks:
            print(f"window {text}: {label}: {'PASS' if ok else 'FAIL'}")
        failed = failed or not inside or not all(ok for _, ok in checks)
    return 1 if failed else 0


def cmd_separate(args) -> int:
    fp = free_group("a", "b")
    report = separation_evidence(
        fp, Fraction(args.alpha), Fraction(args.beta),
        _parse_window(args.w1), _parse_window(args.w2),
        aut_len=args.aut_len, saturate_bound=args.saturate_bound)
    print(_header("separate", alpha=args.alpha, aut_len=args.aut_len,
                  beta=args.beta, saturate_bound=args.saturate_bound,
                  w1=args.w1, w2=args.w2))
    expected = {"alpha in first": True, "alpha in second": False,
                "beta in second": True, "beta in first": False}
    for label, value in report.memberships:
        verdict = "PASS" if value == expected[label] else "FAIL"
        print(f"{label}: {'yes' if value else 'no'}: {verdict}")
    escapes = "PASS" if not report.escapes else "FAIL"
    print(f"automorphisms: {report.automorphisms_checked} checked, "
          f"{len(report.escapes)} escapes: {escapes}")
    cert = report.certificate
    verdict = "PASS" if cert.contradictory else "FAIL"
    print(f"saturation: {cert.status} after {cert.rounds} rounds, "
          f"{cert.explored} words: {verdict}")
    if cert.witness is not None:
        print(f"witness: {fp.format(cert.witness)}")
        for line in cert.derivation:
            print(f"  {line}")
    return 0 if report.ok else 1


def cmd_saturate(args) -> int:
    fp = free_group("a", "b")
    seeds = tuple(fp.parse(text) for text in args.words)
    print(_header("saturate", bound=args.bound,
                  words=";".join(args.words)))
    cert = cone_saturate(fp, seeds, args.bound, max_rounds=args.max_rounds)
    print(f"status: {cert.status} (rounds {cert.rounds}, "
          f"explored {cert.explored}, complete {cert.complete})")
    if cert.witness is not None:
        print(f"witness: {fp.format(cert.witness)}")
    for line in cert.derivation:
        print(f"  {line}")
    return 1 if cert.contradictory else 0


def cmd_plot(args) -> int:
    from . import plotting

    m = parse_plmap(args.map)
    window = None
    if args.range:
        lo, _, hi = args.range.partition(":")
        window = (Fraction(lo), Fraction(hi))
    out = Path(args.out)
    print(_header("plot", map=args.map, out=args.out,
                  range=args.range or "auto"))
    plotting.plot_map(m, out, title=args.title, window=window)
    table = out.with_suffix(".csv")
    plotting.breakpoints_csv(m, table)
    print(f"wrote {out}")
    print(f"wrote {table}")
    return 0


# ----------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biorders",
        description="Exact experiments with bi-invariant orders on free "
                    "products: comparisons, cones, audits, and the "
                    "two-orders construction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="compare two words in an order")
    p.add_argument("--order", default="magnus")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("cone", help="positive words in a ball")
    p.add_argument("--order", default="magnus")
    p.add_argument("--radius", type=int, default=3)
    p.set_defaults(fn=cmd_cone)

    p = sub.add_parser("biinv", help="audit bi-invariance on a ball")
    p.add_argument("--order", default="magnus")
    p.add_argument("--radius", type=int, default=3)
    p.set_defaults(fn=cmd_biinv)

    p = sub.add_parser("merge", help="merge the two standard generators")
    p.add_argument("--eps", default="1/10")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--unperturbed", action="store_true",
                   help="audit the unperturbed pair instead of merging")
    p.add_argument("--out", help="write the merged generator maps here")
    p.set_defaults(fn=cmd_merge)

    p = sub.add_parser("noniso",
                       help="two orders agreeing on a chain, disagreeing "
                            "on a pair")
    p.add_argument("--chain", required=True,
                   help="semicolon-separated positive words, increasing")
    p.add_argument("--search", type=int, default=4)
    p.add_argument("--audit", type=int, default=2)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(fn=cmd_noniso)

    p = sub.add_parser("type",
                       help="level data of words and window membership")
    p.add_argument("--alpha", required=True)
    p.add_argument("--window", action="append",
                   help="window k,l,m,n (repeatable)")
    p.add_argument("--printed-form", action="store_true",
                   help="evaluate the lower condition with k and l "
                        "exchanged")
    p.add_argument("words", nargs="*")
    p.set_defaults(fn=cmd_type)

    p = sub.add_parser("separate",
                       help="window separation evidence for two weights")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--w1", required=True)
    p.add_argument("--w2", required=True)
    p.add_argument("--aut-len", type=int, default=3)
    p.add_argument("--saturate-bound", type=int, default=24)
    p.set_defaults(fn=cmd_separate)

    p = sub.add_parser("saturate",
                       help="close candidate positives, hunting a "
                            "contradiction")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--max-rounds", type=int)
    p.add_argument("words", nargs="+")
    p.set_defaults(fn=cmd_saturate)

    p = sub.add_parser("plot", help="render a PL map to figure and CSV")
    p.add_argument("map", help="map in PL text format, or 'id'")
    p.add_argument("--out", required=True,
                   help="figure path; the CSV lands beside it")
    p.add_argument("--range", help="view window lo:hi")
    p.add_argument("--title")
    p.set_defaults(fn=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
