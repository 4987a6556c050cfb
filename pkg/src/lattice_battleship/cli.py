"""Command-line interface.

Exit codes: 0 success (all audits pass), 1 usage or I/O error, 2 audit failure.
Every command writes a run header capturing its full configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .evaluator import (
    LEMMAS,
    SCHEMA_VERSION,
    applicable_strategies,
    classify,
    evaluate_corpus,
    explore_small_convex_complexity,
    reports_to_csv,
    reports_to_json,
    verify_inequalities,
)
from .lattice_core import Shape, ShapeError
from .optimal_solver import (
    DEFAULT_MAX_N,
    Solver,
    SolverLimitError,
    tree_to_dot,
    tree_to_json,
    worst_misses,
)
from .shape_gen import (
    CLASSES,
    GenerationError,
    GenSpec,
    build_corpus,
    generate,
    load_shape,
    read_corpus,
    seed_sequence,
    serialize_ascii,
    serialize_json,
    write_corpus,
)
from .strategies import REGISTRY, NotApplicable

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_AUDIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _run_config(args: argparse.Namespace, **extra) -> dict:
    cfg = {"tool": "lattice-battleship", "version": __version__, "schema": SCHEMA_VERSION, "command": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "func"):
            continue
        cfg[k] = v
    cfg.update(extra)
    return cfg


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _header_line(cfg: dict) -> str:
    return "# run " + json.dumps(cfg, sort_keys=True, default=str) + "\n"


def _sizes(text: str) -> List[int]:
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return out


def _lemma(text: str) -> str:
    if text == "all":
        return text
    hits = [name for name in LEMMAS if name.startswith(text)]
    if len(hits) != 1:
        raise argparse.ArgumentTypeError(f"unknown lemma {text!r}; choose from all, {', '.join(LEMMAS)}")
    return hits[0]


def _specs(cls: str, sizes: Sequence[int], count: int, seed: int) -> List[GenSpec]:
    seeds = seed_sequence(seed, count * len(sizes))
    specs = []
    i = 0
    for n in sizes:
        for _ in range(count):
            if cls == "rectangle":
                specs.append(GenSpec(cls, n=n * n, seed=seeds[i], width=n, height=n))
            else:
                specs.append(GenSpec(cls, n=n, seed=seeds[i]))
            i += 1
    return specs


def _corpus_from_args(args) -> List[Tuple[str, Shape]]:
    if getattr(args, "corpus", None):
        return read_corpus(args.corpus)
    if getattr(args, "cls", None):
        entries = build_corpus(_specs(args.cls, args.sizes, args.count, args.seed), prefix=args.cls)
        return [(e.id, e.shape) for e in entries]
    raise UsageError("give --corpus PATH or --class with --sizes")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    shape = load_shape(args.shape)
    _emit(json.dumps(classify(shape)) + "\n", args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    shape = load_shape(args.shape)
    names = args.strategy or applicable_strategies(shape)
    cfg = _run_config(args, strategies=names)
    reports = evaluate_corpus([(Path(args.shape).stem, shape)], names, args.optimal, seed=args.seed, jobs=1)
    rep = reports[0]
    if args.format == "json":
        text = reports_to_json(reports, cfg)
    elif args.format == "csv":
        text = _header_line(cfg) + reports_to_csv(reports)
    else:
        lines = [_header_line(cfg).rstrip("\n")]
        for name, r in rep.strategies.items():
            mean = f"{r.mean_misses:.3f}"
            lines.append(f"{name}: max_misses={r.max_misses} mean_misses={mean} max_shots={r.max_shots} positions={r.positions}")
        if rep.optimal is not None:
            lines.append(f"optimal: {rep.optimal}")
        for c in rep.checks:
            lines.append(f"check {c.name}: observed {c.observed} bound {c.bound} {'pass' if c.passed else 'FAIL'}")
        for name, r in rep.strategies.items():
            for check, detail in r.violations:
                lines.append(f"audit {name} {check}: {detail}")
        if args.all:
            lines.append("position_x,position_y," + ",".join(rep.strategies))
            positions = sorted(next(iter(rep.strategies.values())).per_position)
            for p in positions:
                row = [str(rep.strategies[n].per_position.get(p, "")) for n in rep.strategies]
                lines.append(f"{p[0]},{p[1]}," + ",".join(row))
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK if rep.passed else EXIT_AUDIT


def cmd_optimal(args) -> int:
    shape = load_shape(args.shape)
    solver = Solver(shape, max_n=args.max_n)
    value = solver.value(solver.full)
    out = {"n": shape.n, "complexity": value, "states": len(solver.memo)}
    if args.export_tree:
        tree = solver.tree(solver.full)
        assert worst_misses(tree) == value
        path = Path(args.export_tree)
        if path.suffix.lower() == ".json":
            path.write_text(json.dumps(tree_to_json(tree)) + "\n")
        else:
            path.write_text(tree_to_dot(tree))
        out["tree"] = str(path)
    _emit(json.dumps(out) + "\n", args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    specs = _specs(args.cls, args.sizes, args.count, args.seed)
    if args.out:
        entries = build_corpus(specs, prefix=args.cls)
        path = write_corpus(entries, args.out)
        sys.stdout.write(_header_line(_run_config(args, manifest=str(path))))
        return EXIT_OK
    for spec in specs:
        shape = generate(spec)
        sys.stdout.write(serialize_ascii(shape) + "\n" if args.format == "ascii" else serialize_json(shape) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    corpus = _corpus_from_args(args)
    cfg = _run_config(args)
    reports = evaluate_corpus(corpus, args.strategy or None, args.optimal, seed=args.seed, jobs=args.jobs)
    if args.csv:
        Path(args.csv).write_text(reports_to_csv(reports))
    if args.json:
        Path(args.json).write_text(reports_to_json(reports, cfg))
    if not args.csv and not args.json:
        sys.stdout.write(_header_line(cfg) + reports_to_csv(reports))
    failed = [r for r in reports if not r.passed]
    for r in failed:
        bad = [c.name for c in r.checks if not c.passed] + [
            f"{n}:{c}" for n, s in r.strategies.items() for c, _ in s.violations
        ]
        sys.stderr.write(f"audit failure on {r.shape_id}: {', '.join(bad)}\n")
    return EXIT_AUDIT if failed else EXIT_OK


def cmd_verify(args) -> int:
    cfg = _run_config(args)
    if args.survey:
        survey = explore_small_convex_complexity(args.survey)
        out = {"run": cfg, "max_complexity": survey.maximum, "by_size": survey.by_size(), "shapes": len(survey.rows)}
        _emit(json.dumps(out, default=str) + "\n", args.output)
        return EXIT_OK
    corpus = _corpus_from_args(args)
    lemmas = LEMMAS if args.lemma == "all" else (args.lemma,)
    results = verify_inequalities(corpus, lemmas)
    lines = [_header_line(cfg).rstrip("\n")]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        detail = "; ".join(f"{c.name} observed={c.observed} bound={c.bound}" for c in r.checks if not c.passed)
        extra = f" ({r.note})" if r.note else ""
        wit = f" witness={json.dumps(r.witness)}" if (r.witness and not r.passed) else ""
        lines.append(f"{r.shape_id} n={r.n} d={r.diameter} w={r.width} {status}{extra}{(' ' + detail) if detail else ''}{wit}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_AUDIT


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_generated_corpus(p: argparse.ArgumentParser, default_class: Optional[str] = None) -> None:
    p.add_argument("--corpus", help="corpus directory (with manifest.json) or a single shape file")
    p.add_argument("--class", dest="cls", choices=CLASSES, default=default_class, help="generate a corpus of this class")
    p.add_argument("--sizes", type=_sizes, default=[50], help="comma separated target sizes")
    p.add_argument("--count", type=int, default=10, help="shapes per size")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lattice-battleship", description="Battleship on lattice shapes.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="master seed for every random choice")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")

    p = sub.add_parser("classify", help="class flags, lattice diameter and width of a shape")
    p.add_argument("shape")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="play strategies against every hidden position")
    p.add_argument("shape")
    p.add_argument("--strategy", action="append", choices=sorted(REGISTRY), help="repeatable; default all applicable")
    p.add_argument("--all", action="store_true", help="print the per-position miss table")
    p.add_argument("--optimal", action="store_true", help="also solve c(S) exactly")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimal", help="exact complexity c(S) by minimax")
    p.add_argument("shape")
    p.add_argument("--export-tree", help="write an optimal decision tree (.dot or .json)")
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N, help="solver size limit")
    common(p)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("gen", help="generate seeded shapes")
    p.add_argument("--class", dest="cls", choices=CLASSES, required=True)
    p.add_argument("--sizes", type=_sizes, default=[10], help="comma separated sizes (side length for rectangle)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", help="write a corpus directory with manifest.json")
    p.add_argument("--format", choices=("json", "ascii"), default="json")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="evaluate strategies over a corpus with bound audits")
    _add_generated_corpus(p)
    p.add_argument("--strategy", action="append", choices=sorted(REGISTRY), help="repeatable; default all applicable")
    p.add_argument("--optimal", action="store_true", help="also solve c(S) exactly")
    p.add_argument("--csv", help="CSV report path")
    p.add_argument("--json", help="JSON report path")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check width/diameter inequalities on digital convex shapes")
    _add_generated_corpus(p, default_class=None)
    p.add_argument("--lemma", type=_lemma, default="all", help=f"all or one of {', '.join(LEMMAS)} (prefixes accepted)")
    p.add_argument("--survey", type=int, metavar="MAX_N", help="exact c(S) of all small digital convex sets instead")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except (OSError, ShapeError, UsageError, GenerationError, SolverLimitError, NotApplicable, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
