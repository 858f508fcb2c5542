"""Command-line surface.

Every flag can also be supplied through an environment variable with the
``CAREV_`` prefix (dashes become underscores, e.g. ``CAREV_RULE_DIGITS``);
explicit flags win.  Machine output formats carry no timestamps, so a
fixed invocation is byte-stable; wall-clock notes go to stderr.

Exit codes: 0 completed, 1 usage or validation error, 2 budget or
capacity error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .amoroso import FULL, OPTIMIZED, decide_surjective, graph_to_text
from .core import (
    Alphabet,
    LocalRule,
    Neighborhood,
    rule_from_digits,
    rule_from_number,
)
from .errors import BudgetError, CapacityError, CarevError
from .evolution import (
    DEFAULT_ORACLE_BUDGET,
    brute_force_reversible,
    count_preimages,
    evolve_null,
)
from .nullboundary import (
    DEFAULT_MAX_BUCKETS,
    reversibility_function,
    strictly_reversible,
)
from .sweep import (
    CSV_HEADER,
    DEFAULT_NODE_COUNT_RULES,
    MODES,
    SweepSpec,
    record_to_csv_fields,
    render_report,
    sweep,
    table2_report,
    table5_report,
)

ENV_PREFIX = "CAREV_"

#: Ranges larger than this require --long-run.
LONG_RUN_THRESHOLD = 1 << 26

FORMATS = ("plain", "csv", "json")


def _env(name: str, fallback=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"),
                          fallback)


def _env_flag(name: str) -> bool:
    return str(_env(name, "")).lower() in ("1", "true", "yes", "on")


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_geometry(sp, defaults=(None, None, None)):
    d_p, d_l, d_r = defaults
    sp.add_argument("--p", type=int, default=_env("p", d_p),
                    required=_env("p", d_p) is None,
                    help="alphabet size (states 0..p-1)")
    sp.add_argument("--left", type=int, default=_env("left", d_l),
                    required=_env("left", d_l) is None,
                    help="left radius r_l")
    sp.add_argument("--right", type=int, default=_env("right", d_r),
                    required=_env("right", d_r) is None,
                    help="right radius r_r")


def _add_rule(sp):
    sp.add_argument("--rule", type=int, default=_env("rule"),
                    help="rule as a decimal Wolfram number")
    sp.add_argument("--rule-digits", default=_env("rule_digits"),
                    help="rule table as base-p digits, index p^k-1 down to 0")


def _add_format(sp):
    sp.add_argument("--format", choices=FORMATS,
                    default=_env("format", "plain"), help="output format")


def _digits(text: str, what: str) -> list[int]:
    text = text.strip()
    try:
        if "," in text:
            return [int(t) for t in text.split(",")]
        return [int(c) for c in text]
    except ValueError:
        raise CarevError(f"cannot parse {what} {text!r} as base-p digits")


def _format_states(states, p: int) -> str:
    sep = "" if p <= 10 else ","
    return sep.join(str(int(s)) for s in states)


def _build_rule(args) -> LocalRule:
    alphabet = Alphabet(args.p)
    nb = Neighborhood(args.left, args.right)
    if (args.rule is None) == (args.rule_digits is None):
        raise CarevError("give exactly one of --rule / --rule-digits")
    if args.rule is not None:
        return rule_from_number(args.rule, alphabet, nb)
    return rule_from_digits(_digits(args.rule_digits, "--rule-digits"),
                            alphabet, nb)


def _emit_kv(fmt: str, header: tuple, row: tuple) -> None:
    if fmt == "csv":
        print(",".join(header))
        print(",".join(str(f) for f in row))
    elif fmt == "json":
        print(json.dumps(dict(zip(header, row)), indent=2, sort_keys=True))
    else:
        raise AssertionError(fmt)


def _cmd_evolve(args) -> int:
    rule = _build_rule(args)
    config = _digits(args.config, "--config")
    image = evolve_null(rule, config)
    text = _format_states(image, rule.p)
    if args.format == "plain":
        print(text)
    else:
        _emit_kv(args.format, ("image",), (text,))
    return 0


def _cmd_strict(args) -> int:
    rule = _build_rule(args)
    verdict = strictly_reversible(rule)
    if args.format == "plain":
        if verdict.strictly_reversible:
            print("strictly reversible")
        else:
            w = verdict.witness
            print(f"not strictly reversible (witness depth {w.depth}, "
                  f"defect {w.defect})")
    else:
        w = verdict.witness
        _emit_kv(args.format,
                 ("verdict", "witness_depth", "witness_defect"),
                 ("strict" if verdict.strictly_reversible else "not-strict",
                  "" if w is None else w.depth,
                  "" if w is None else w.defect))
    return 0


def _cmd_revfun(args) -> int:
    rule = _build_rule(args)
    func = reversibility_function(rule, args.max_buckets)
    if args.format == "plain":
        print(func.serialize())
        print(func.describe())
    else:
        _emit_kv(args.format,
                 ("transient_bits", "cycle_bits", "bucket_count"),
                 ("".join("1" if v else "0" for v in func.transient),
                  "".join("1" if v else "0" for v in func.cycle),
                  func.distinct_buckets))
    return 0


def _cmd_oracle(args) -> int:
    rule = _build_rule(args)
    ok = brute_force_reversible(rule, args.n, args.budget)
    if args.preimages_of is not None:
        config = _digits(args.preimages_of, "--preimages-of")
        count = count_preimages(rule, config, args.budget)
        if args.format == "plain":
            print(f"preimages of {args.preimages_of}: {count}")
        else:
            _emit_kv(args.format, ("config", "preimages"),
                     (args.preimages_of, count))
        return 0
    if args.format == "plain":
        print("reversible" if ok else "not reversible")
    else:
        _emit_kv(args.format, ("n", "reversible"),
                 (args.n, "1" if ok else "0"))
    return 0


def _cmd_surjective(args) -> int:
    rule = _build_rule(args)
    variants = (FULL, OPTIMIZED) if args.compare else (args.variant,)
    if args.export_graph and args.compare:
        raise CarevError("--export-graph needs a single variant")
    rows = []
    for variant in variants:
        verdict, graph = decide_surjective(rule, variant, args.b,
                                           args.complete_graph)
        rows.append((variant, args.b,
                     "surjective" if verdict.surjective else "non-surjective",
                     verdict.reason, verdict.node_count))
        if args.export_graph:
            with open(args.export_graph, "w", encoding="utf-8") as fh:
                fh.write(graph_to_text(graph))
    header = ("variant", "b", "verdict", "reason", "node_count")
    if args.format == "plain":
        for row in rows:
            print(f"{row[0]}: {row[2]} ({row[3]}); nodes {row[4]}")
    elif args.format == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(str(f) for f in row))
    else:
        print(json.dumps([dict(zip(header, row)) for row in rows],
                         indent=2, sort_keys=True))
    return 0


def _sweep_spec(args) -> SweepSpec:
    return SweepSpec(
        p=args.p, r_l=args.left, r_r=args.right, mode=args.mode,
        lo=args.lo, hi=args.hi, sample_count=args.sample_count,
        sample_seed=args.seed, block_size=args.block_size,
        jobs=args.jobs, checkpoint_path=args.checkpoint,
        max_buckets=args.max_buckets,
    )


def _cmd_sweep(args) -> int:
    spec = _sweep_spec(args)
    spec.validate()
    if spec.sample_count is None:
        lo, hi = spec.resolved_range()
        if hi - lo > LONG_RUN_THRESHOLD and not args.long_run:
            raise CarevError(
                f"range of {hi - lo} rules needs --long-run "
                f"(threshold {LONG_RUN_THRESHOLD})"
            )
    started = time.perf_counter()
    if args.format == "csv":
        print(CSV_HEADER)

        def callback(_index, records):
            for rec in records:
                print(",".join(str(f) for f in
                               record_to_csv_fields(spec.mode, rec)))

        report = sweep(spec, callback)
    else:
        report = sweep(spec)
        sys.stdout.write(render_report(report, args.format))
    print(f"# wall {time.perf_counter() - started:.2f}s", file=sys.stderr)
    return 0


def _cmd_table2(args) -> int:
    rules = (tuple(int(t) for t in args.rules.split(","))
             if args.rules else DEFAULT_NODE_COUNT_RULES)
    rows = table2_report(rules, args.p, args.left, args.right)
    header = ("rule", "b", "verdict", "node_count_full", "node_count_opt")
    if args.format == "plain":
        print("rule  b  verdict          full  optimized")
        for r in rows:
            print(f"{r.rule:>4}  {r.b}  {r.verdict:<15}  {r.nodes_full:>4}"
                  f"  {r.nodes_opt:>9}")
    elif args.format == "csv":
        print(",".join(header))
        for r in rows:
            print(f"{r.rule},{r.b},{r.verdict},{r.nodes_full},{r.nodes_opt}")
    else:
        print(json.dumps([dict(zip(header, (r.rule, r.b, r.verdict,
                                            r.nodes_full, r.nodes_opt)))
                          for r in rows], indent=2, sort_keys=True))
    return 0


def _cmd_table5(args) -> int:
    groups = table5_report(args.p, args.left, args.right, args.max_buckets)
    if args.format == "plain":
        for g in groups:
            print(g.description)
            print("  rules: " + ", ".join(str(m) for m in g.members))
    elif args.format == "csv":
        import csv as _csv

        writer = _csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(("rule", "function"))
        for g in groups:
            for member in g.members:
                writer.writerow((member, g.description))
    else:
        print(json.dumps([{"function": g.description,
                           "rules": list(g.members)} for g in groups],
                         indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="carev",
                     description="Reversibility deciders for 1-D cellular "
                                 "automata under null boundary conditions")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("evolve", help="apply one null-boundary step")
    _add_geometry(sp)
    _add_rule(sp)
    sp.add_argument("--config", default=_env("config"),
                    required=_env("config") is None,
                    help="configuration, leftmost cell first")
    _add_format(sp)
    sp.set_defaults(func=_cmd_evolve)

    sp = sub.add_parser("surjective",
                        help="decide surjectivity of the infinite automaton")
    _add_geometry(sp)
    _add_rule(sp)
    sp.add_argument("--variant", choices=(FULL, OPTIMIZED), default=OPTIMIZED)
    sp.add_argument("--b", type=int, default=_env("b", 0),
                    help="seed state for the initial node")
    sp.add_argument("--compare", action="store_true",
                    default=_env_flag("compare"),
                    help="run both variants and report node counts")
    sp.add_argument("--complete-graph", action="store_true",
                    default=_env_flag("complete_graph"),
                    help="do not stop at the first empty node")
    sp.add_argument("--export-graph", default=_env("export_graph"),
                    metavar="PATH", help="write the graph in text form")
    _add_format(sp)
    sp.set_defaults(func=_cmd_surjective)

    sp = sub.add_parser("strict", help="decide strict reversibility")
    _add_geometry(sp)
    _add_rule(sp)
    _add_format(sp)
    sp.set_defaults(func=_cmd_strict)

    sp = sub.add_parser("revfun", help="compute the reversibility function")
    _add_geometry(sp)
    _add_rule(sp)
    sp.add_argument("--max-buckets", type=int,
                    default=_env("max_buckets", DEFAULT_MAX_BUCKETS))
    _add_format(sp)
    sp.set_defaults(func=_cmd_revfun)

    sp = sub.add_parser("oracle",
                        help="brute-force reversibility for one cell count")
    _add_geometry(sp)
    _add_rule(sp)
    sp.add_argument("--n", type=int, default=_env("n"),
                    required=_env("n") is None, help="cell count")
    sp.add_argument("--budget", type=int,
                    default=_env("budget", DEFAULT_ORACLE_BUDGET),
                    help="largest admitted p**n")
    sp.add_argument("--preimages-of", default=_env("preimages_of"),
                    metavar="CONFIG",
                    help="count preimages of this configuration instead")
    _add_format(sp)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("sweep", help="sweep a rule space")
    _add_geometry(sp)
    sp.add_argument("--mode", choices=MODES,
                    default=_env("mode"), required=_env("mode") is None)
    sp.add_argument("--lo", type=int, default=_env("lo"))
    sp.add_argument("--hi", type=int, default=_env("hi"))
    sp.add_argument("--sample-count", type=int, default=_env("sample_count"))
    sp.add_argument("--seed", type=int, default=_env("seed", 0))
    sp.add_argument("--block-size", type=int,
                    default=_env("block_size", 4096))
    sp.add_argument("--jobs", type=int, default=_env("jobs", 1))
    sp.add_argument("--checkpoint", default=_env("checkpoint"),
                    metavar="PATH", help="append-only resume journal")
    sp.add_argument("--long-run", action="store_true",
                    default=_env_flag("long_run"),
                    help="allow ranges beyond the long-run threshold")
    sp.add_argument("--max-buckets", type=int,
                    default=_env("max_buckets", DEFAULT_MAX_BUCKETS))
    _add_format(sp)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("table2",
                        help="full-vs-optimized node counts per rule and b")
    _add_geometry(sp, defaults=(2, 1, 1))
    sp.add_argument("--rules", default=_env("rules"),
                    help="comma-separated rule numbers")
    _add_format(sp)
    sp.set_defaults(func=_cmd_table2)

    sp = sub.add_parser("table5",
                        help="group rules by reversibility function")
    _add_geometry(sp, defaults=(2, 1, 1))
    sp.add_argument("--max-buckets", type=int,
                    default=_env("max_buckets", DEFAULT_MAX_BUCKETS))
    _add_format(sp)
    sp.set_defaults(func=_cmd_table5)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse usage/help paths
        return exc.code if isinstance(exc.code, int) else 1
    except (BudgetError, CapacityError) as exc:
        print(f"carev: {exc}", file=sys.stderr)
        return 2
    except CarevError as exc:
        print(f"carev: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
