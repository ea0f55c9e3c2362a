"""Command-line entry point: ``shsopt run|compare|solve|list``.

Exit status: 0 on success, 2 for configuration errors (unknown optimizer,
function or instance, bad parameter), 3 for file-system errors, 4 for
malformed input files, 5 when an objective misbehaves during a run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import harness
from .apps.instances import InstanceParseError
from .engine import ConfigurationError, ObjectiveError

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_OBJECTIVE = 5
OUT_ENV = "SHSOPT_OUT"


def _csv_list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _out_dir(args) -> str:
    if args.out is not None:
        return args.out
    return os.environ.get(OUT_ENV, "results")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shsopt", description="Scorpion hunting strategy optimizer toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a seeded benchmark experiment")
    run.add_argument("--optimizer", type=_csv_list, default=["shs"], help="comma-separated optimizer ids")
    run.add_argument("--function", type=_csv_list, default=["dejong"], help="comma-separated benchmark ids")
    run.add_argument("--dim", type=int, default=20)
    run.add_argument("--pop", type=int, default=25)
    run.add_argument("--iters", type=int, default=300)
    run.add_argument("--runs", type=int, default=30)
    run.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    run.add_argument("--bounds", choices=harness.BOUNDS_MODES, default="table3")
    run.add_argument("--canonical-ackley", action="store_true", help="use the textbook Ackley form")
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    run.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./results)")
    run.add_argument("--manifest", default=None, help="replay the experiment recorded in a manifest")

    cmp_ = sub.add_parser("compare", help="statistical comparison of trace files")
    cmp_.add_argument("trace_dir")
    cmp_.add_argument("--test", choices=harness.COMPARE_TESTS, default="wilcoxon")
    cmp_.add_argument("--out", default=None, help="report directory (default: the trace directory)")

    solve = sub.add_parser("solve", help="optimize an application instance")
    solve.add_argument("instance", help="built-in name, JSON descriptor or CSV file")
    solve.add_argument("--kind", choices=("mst", "hlp", "pms"), default=None, help="kind of a CSV instance")
    solve.add_argument("--optimizer", default="shs", help="optimizer id, or prim-oracle for MST")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--iters", type=int, default=300)
    solve.add_argument("--pop", type=int, default=25)
    solve.add_argument("--out", default=None)

    sub.add_parser("list", help="list optimizers, functions and built-in instances")
    return p


def _cmd_run(args) -> int:
    out = _out_dir(args)
    if args.manifest:
        spec = harness.ExperimentSpec.from_manifest(args.manifest, output_dir=out)
    else:
        spec = harness.ExperimentSpec(
            optimizers=args.optimizer,
            functions=args.function,
            dim=args.dim,
            runs=args.runs,
            iterations=args.iters,
            pop_size=args.pop,
            base_seed=args.seed,
            bounds_mode=args.bounds,
            canonical_ackley=args.canonical_ackley,
            output_dir=out,
            jobs=args.jobs,
        )
    for path in harness.run_experiment(spec):
        print(path)
    return 0


def _cmd_compare(args) -> int:
    for path in harness.compare(args.trace_dir, args.test, args.out):
        print(path)
    return 0


def _cmd_solve(args) -> int:
    res = harness.solve_app(
        args.instance, args.optimizer, args.seed, args.iters, args.pop, _out_dir(args), kind=args.kind
    )
    sys.stdout.write(res.report)
    print(f"wrote {res.report_path} and {res.csv_path}")
    return 0


def _cmd_list(args) -> int:
    print(json.dumps(harness.list_catalog(), indent=2))
    return 0


COMMANDS = {"run": _cmd_run, "compare": _cmd_compare, "solve": _cmd_solve, "list": _cmd_list}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InstanceParseError as exc:
        print(f"shsopt: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ConfigurationError as exc:
        print(f"shsopt: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ObjectiveError as exc:
        print(f"shsopt: objective error: {exc}", file=sys.stderr)
        return EXIT_OBJECTIVE
    except (OSError, json.JSONDecodeError) as exc:
        code = EXIT_PARSE if isinstance(exc, json.JSONDecodeError) else EXIT_IO
        print(f"shsopt: {'parse' if code == EXIT_PARSE else 'i/o'} error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    raise SystemExit(main())
