"""Command-line entry point: `axial <command> <model> [options]`.

Commands: hind, cycles, classify, pressure, count, table, entropy1d,
sample, dump-graph. Models use the text syntax from `models.parse_model`
(hard_square, coloring:4, beach:3, rll:2,inf, plastic, full:3,
file:model.json). Output is deterministic JSON on stdout (CSV where
requested); diagnostics go to stderr.

Exit codes: 0 success, 2 validation error, 3 work cap exceeded,
4 verdict undecided within the configured bounds.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from .automaton import build_window_graph
from .core import (
    DEFAULT_CAPS,
    ExactScore,
    SpecError,
    WorkCaps,
    WorkCapExceeded,
)
from .counting import count_box, entropy_estimate_table, entropy_1d
from .measures import empirical_stats, sample_box
from .models import build_model
from .optimize import (
    classify_mme,
    enumerate_simple_maximizing_cycles,
    independence_entropy,
    independence_pressure,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_WORKCAP = 3
EXIT_UNKNOWN = 4


def _parse_caps(text: str) -> WorkCaps:
    fields = {}
    if text:
        for part in text.split(","):
            key, sep, value = part.partition("=")
            if not sep:
                raise SpecError(f"bad caps entry {part!r}; use key=value")
            key = key.strip()
            if key not in ("sites", "nodes", "vertices", "candidates", "transfer_n"):
                raise SpecError(f"unknown cap {key!r}")
            fields[key] = int(float(value))
    return WorkCaps(**fields)


def _parse_weights(text: str) -> dict:
    out = {}
    for part in text.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise SpecError(f"bad weight entry {part!r}; use letter=value")
        try:
            out[key.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"bad weight value {value!r}") from None
    return out


def _base_value(name: str) -> float:
    return {"e": math.e, "2": 2.0, "10": 10.0}[name]


def _score_doc(score, base: str) -> dict:
    doc = {"n": score.n, "nats": score.nats, "log_base": base,
           "value": score.nats / math.log(_base_value(base))}
    if isinstance(score, ExactScore):
        doc["p"] = str(score.p)
    else:  # rational pressure score
        mass = score.mass
        doc["p"] = str(mass.numerator) if mass.denominator == 1 else \
            f"{mass.numerator}/{mass.denominator}"
    return doc


def _emit(doc: dict, fmt: str):
    if fmt == "text":
        parts = [f"{k}={v}" for k, v in doc.items() if k != "schema_version"]
        print(" ".join(str(p) for p in parts))
    else:
        print(json.dumps(doc, separators=(",", ":")))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-base", choices=["e", "2", "10"], default="e")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--caps", default="", help="sites=24,nodes=1e9,vertices=1e6,...")
    quiet = common.add_mutually_exclusive_group()
    quiet.add_argument("--quiet", action="store_true", default=True)
    quiet.add_argument("--verbose", dest="quiet", action="store_false")

    parser = argparse.ArgumentParser(prog="axial",
                                     description="exact axial-power entropy toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.add_argument("model")
        return p

    cmd("hind", help="exact independence entropy (= limiting entropy)")
    cmd("cycles", help="simple maximizing cycles") \
        .add_argument("--max-cycles", type=int, default=None)
    p = cmd("classify", help="uniqueness of isotropic limiting measures")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--max-cycles", type=int, default=64)
    p.add_argument("--max-cycle-len", type=int, default=None)
    p.add_argument("--cond2-budget", type=int, default=500_000)
    p = cmd("pressure", help="exact limiting pressure for letter weights")
    p.add_argument("--weights", required=True)
    p = cmd("count", help="exact d-dimensional box count")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = cmd("table", help="entropy estimate table over (n, d) grids")
    p.add_argument("--n", required=True, help="comma list, e.g. 2,3,4")
    p.add_argument("--d", required=True, help="comma list, e.g. 1,2")
    p.add_argument("--csv", default=None, metavar="PATH")
    cmd("entropy1d", help="1D topological entropy (Perron eigenvalue)")
    p = cmd("sample", help="sample boxes from the limiting measure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", default=None, metavar="PATH")
    p = cmd("dump-graph", help="dump the trimmed window graph")
    p.add_argument("--universe", choices=["candidates", "exhaustive"],
                   default="candidates")
    p.add_argument("--dump-graph", dest="path", default=None, metavar="PATH")
    return parser


def _run(args, caps: WorkCaps) -> int:
    spec = build_model(args.model)
    base = args.log_base
    fmt = args.format

    if args.command == "hind":
        score, cycle = independence_entropy(spec, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "hind", "model": args.model,
               **_score_doc(score, base),
               "witness": [spec.alphabet.set_letter_str(m) for m in cycle.word]}
        _emit(doc, fmt)
        return EXIT_OK

    if args.command == "cycles":
        cycles, complete = enumerate_simple_maximizing_cycles(
            spec, max_count=args.max_cycles, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "cycles", "model": args.model,
               "count": len(cycles), "complete": complete,
               "cycles": [{"word": [spec.alphabet.set_letter_str(m) for m in c.word],
                           **_score_doc(c.score, base)} for c in cycles]}
        _emit(doc, fmt)
        return EXIT_OK

    if args.command == "classify":
        res = classify_mme(spec, cond2_bound=args.bound,
                           cycle_max_len=args.max_cycle_len,
                           cycle_max_count=args.max_cycles,
                           cond2_budget=args.cond2_budget, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "classify",
               "model": args.model, "verdict": res.verdict}
        if res.verdict == "exactly_k":
            doc["k"] = res.count
        doc["entropy"] = _score_doc(res.entropy, base)
        doc["cycles"] = [[spec.alphabet.set_letter_str(m) for m in c.word]
                         for c in res.cycles]
        doc["complete_enumeration"] = res.complete_enumeration
        doc["counterexample"] = None if res.counterexample is None else {
            "period": res.counterexample.period, "t": res.counterexample.t,
            "drift": res.counterexample.drift,
            "phases": list(res.counterexample.phases)}
        doc["bounds"] = res.bounds
        _emit(doc, fmt)
        return EXIT_UNKNOWN if res.verdict == "unknown_within_bounds" else EXIT_OK

    if args.command == "pressure":
        weights = _parse_weights(args.weights)
        score, cycle = independence_pressure(spec, weights, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "pressure",
               "model": args.model, **_score_doc(score, base),
               "witness": [spec.alphabet.set_letter_str(m) for m in cycle.word]}
        _emit(doc, fmt)
        return EXIT_OK

    if args.command == "count":
        box = count_box(spec, args.n, args.d, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "count", "model": args.model,
               "n": box.n, "d": box.d, "count": str(box.count),
               "estimate_nats": box.estimate}
        _emit(doc, fmt)
        return EXIT_OK

    if args.command == "table":
        n_list = [int(x) for x in args.n.split(",")]
        d_list = [int(x) for x in args.d.split(",")]
        table = entropy_estimate_table(spec, n_list, d_list, caps=caps)
        rows = [{"n": r.n, "d": r.d, "count": str(r.count),
                 "estimate_nats": r.estimate} for r in table.rows]
        if args.csv or fmt == "csv":
            buf = io.StringIO()
            writer = _csv.writer(buf)
            writer.writerow(["n", "d", "count", "estimate_nats", "h_ind_nats"])
            for r in table.rows:
                writer.writerow([r.n, r.d, r.count, repr(r.estimate),
                                 repr(table.hind.nats)])
            if args.csv:
                with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                    fh.write(buf.getvalue())
            else:
                sys.stdout.write(buf.getvalue())
        if fmt != "csv":
            doc = {"schema_version": SCHEMA_VERSION, "command": "table",
                   "model": args.model, "rows": rows,
                   "h_ind": _score_doc(table.hind, base), "checks": table.checks()}
            _emit(doc, fmt)
        return EXIT_OK

    if args.command == "entropy1d":
        value = entropy_1d(spec, caps=caps)
        doc = {"schema_version": SCHEMA_VERSION, "command": "entropy1d",
               "model": args.model, "nats": value, "log_base": base,
               "value": value / math.log(_base_value(base))}
        _emit(doc, fmt)
        return EXIT_OK

    if args.command == "sample":
        _, cycle = independence_entropy(spec, caps=caps)
        batch = sample_box(spec, cycle.word, args.n, args.d, args.seed, args.count)
        stats = empirical_stats(batch)
        if args.emit or fmt == "csv":
            buf = io.StringIO()
            writer = _csv.writer(buf)
            for cfg in batch.configurations:
                writer.writerow([spec.alphabet.symbols[a] for a in cfg])
            if args.emit:
                with open(args.emit, "w", encoding="utf-8", newline="") as fh:
                    fh.write(buf.getvalue())
            else:
                sys.stdout.write(buf.getvalue())
        if fmt != "csv":
            doc = {"schema_version": SCHEMA_VERSION, "command": "sample",
                   "model": args.model, "n": args.n, "d": args.d,
                   "count": batch.count, "seed": batch.seed,
                   "algorithm": batch.algorithm, "violations": batch.violations,
                   "word": [spec.alphabet.set_letter_str(m) for m in batch.word],
                   "mean_log_cell_size": _score_doc(stats.mean_log_cell_size, base),
                   "mean_site_entropy_nats": stats.mean_site_entropy,
                   "parity_constant_rate": stats.parity_constant_rate}
            _emit(doc, fmt)
        return EXIT_OK

    if args.command == "dump-graph":
        graph = build_window_graph(spec, universe=args.universe, caps=caps)
        lines = graph.dump_lines(spec.alphabet)
        text = "\n".join(lines) + "\n"
        if args.path:
            with open(args.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("AXIAL_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            print(f"axial: bad AXIAL_THREADS value {threads!r}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        caps = _parse_caps(args.caps)
        return _run(args, caps)
    except WorkCapExceeded as exc:
        print(f"axial: work cap exceeded: {exc}", file=sys.stderr)
        return EXIT_WORKCAP
    except SpecError as exc:
        print(f"axial: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"axial: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
