"""Seeded multi-run experiments, statistical comparisons and application runs.

Run ``r`` of every optimizer uses seed ``base_seed + r`` so results can be
paired across optimizers. Outputs are plain CSV plus a JSON manifest that
is enough to replay the experiment byte for byte. Wall-clock times are kept
out of every file for that reason.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import re
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import stats
from .apps import instances
from .apps.mst import prim_mst_oracle
from .benchmarks import TABLE3_BOUNDS, get_benchmark, make_benchmark
from .engine import ConfigurationError
from .registry import check_optimizer, make_params, params_dict, run_optimizer

BOUNDS_MODES = ("table3", "native")
COMPARE_TESTS = ("wilcoxon", "friedman", "correlation", "dispersion")
MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary.csv"
_TRACE_RE = re.compile(r"^trace_([^_]+)_(.+)\.csv$")


def fmt(x: float) -> str:
    """Shortest round-trip float text, stable across runs."""
    return repr(float(x))


@dataclass(frozen=True)
class ExperimentSpec:
    optimizers: tuple[str, ...]
    functions: tuple[str, ...]
    dim: int = 20
    runs: int = 30
    iterations: int = 300
    pop_size: int = 25
    base_seed: int = 0
    bounds_mode: str = "table3"
    canonical_ackley: bool = False
    output_dir: str = "results"
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "optimizers", tuple(self.optimizers))
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.optimizers or not self.functions:
            raise ConfigurationError("need at least one optimizer and one function")
        for name in self.optimizers:
            check_optimizer(name)
        for name in self.functions:
            get_benchmark(name)
        if self.bounds_mode not in BOUNDS_MODES:
            raise ConfigurationError(f"bounds mode must be one of {BOUNDS_MODES}, got {self.bounds_mode!r}")
        for key in ("dim", "runs", "iterations", "pop_size", "jobs"):
            if getattr(self, key) < 1:
                raise ConfigurationError(f"{key} must be >= 1")
        if self.base_seed < 0:
            raise ConfigurationError("base_seed must be non-negative")

    def seeds(self) -> list[int]:
        return [self.base_seed + r for r in range(self.runs)]

    def function_dim(self, name: str) -> int:
        entry = get_benchmark(name)
        dim = 2 if entry.dimension_rule == "fixed-2D" else self.dim
        entry.check_dim(dim)
        return dim

    def domain(self) -> Optional[tuple[float, float]]:
        return TABLE3_BOUNDS if self.bounds_mode == "table3" else None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["optimizers"] = list(self.optimizers)
        d["functions"] = list(self.functions)
        return d

    @classmethod
    def from_manifest(cls, path, output_dir: Optional[str] = None) -> "ExperimentSpec":
        data = json.loads(Path(path).read_text())
        try:
            d = dict(data["experiment"])
        except (KeyError, TypeError):
            raise ConfigurationError(f"{path}: not an experiment manifest") from None
        if output_dir is not None:
            d["output_dir"] = output_dir
        return cls(**d)


def _run_one(task) -> tuple[np.ndarray, float]:
    # module-level so worker processes can import it; rebuilds the spec by name
    opt, func, dim, domain, canonical, seed, pop, iters = task
    spec = make_benchmark(func, dim, domain, canonical_ackley=canonical)
    res = run_optimizer(opt, spec, seed, pop_size=pop, max_iterations=iters)
    return res.best_trace, res.final_cost


def _function_label(func: str, canonical: bool) -> str:
    return "ackley-canonical" if (func == "ackley" and canonical) else func


def run_experiment(spec: ExperimentSpec) -> list[Path]:
    """Run every optimizer on every function and write traces, summary and manifest."""
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = spec.seeds()
    domain = spec.domain()
    tasks = [
        (opt, func, spec.function_dim(func), domain, spec.canonical_ackley, seed, spec.pop_size, spec.iterations)
        for opt in spec.optimizers
        for func in spec.functions
        for seed in seeds
    ]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (4 * spec.jobs))))
    else:
        results = [_run_one(t) for t in tasks]

    written = []
    summary_rows = []
    it = iter(results)
    for opt in spec.optimizers:
        for func in spec.functions:
            label = _function_label(func, spec.canonical_ackley)
            path = out / f"trace_{opt}_{label}.csv"
            finals = []
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(["run", "iteration", "best_cost"])
                for r in range(spec.runs):
                    trace, final = next(it)
                    finals.append(final)
                    for t, c in enumerate(trace, start=1):
                        w.writerow([r, t, fmt(c)])
            written.append(path)
            s = stats.summarize(finals)
            summary_rows.append([opt, label] + [fmt(s[k]) for k in ("best", "median", "worst", "avg")])

    summary = out / SUMMARY_NAME
    with open(summary, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "function", "best", "median", "worst", "avg"])
        w.writerows(summary_rows)
    written.append(summary)

    manifest = out / MANIFEST_NAME
    record = {
        "experiment": spec.to_dict(),
        "seeds": seeds,
        "parameters": {
            opt: params_dict(make_params(opt, spec.pop_size, spec.iterations)) for opt in spec.optimizers
        },
        "functions": {
            _function_label(f, spec.canonical_ackley): {
                "dim": spec.function_dim(f),
                "bounds": list(domain or get_benchmark(f).default_domain),
            }
            for f in spec.functions
        },
    }
    manifest.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")
    written.append(manifest)
    return written


# ---------------------------------------------------------------- comparisons


def read_traces(trace_dir) -> dict[str, dict[str, dict[int, np.ndarray]]]:
    """``{function: {optimizer: {run: trace}}}`` from every trace file in a directory."""
    trace_dir = Path(trace_dir)
    if not trace_dir.is_dir():
        raise FileNotFoundError(f"trace directory not found: {trace_dir}")
    data: dict = defaultdict(dict)
    for path in sorted(trace_dir.glob("trace_*.csv")):
        m = _TRACE_RE.match(path.name)
        if not m:
            continue
        opt, func = m.groups()
        runs: dict[int, list[float]] = defaultdict(list)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["run", "iteration", "best_cost"]:
                raise instances.InstanceParseError(path, "expected header run,iteration,best_cost", 1)
            for line, row in enumerate(reader, start=2):
                if len(row) != 3:
                    raise instances.InstanceParseError(path, f"expected 3 fields, got {len(row)}", line)
                try:
                    runs[int(row[0])].append(float(row[2]))
                except ValueError:
                    raise instances.InstanceParseError(path, "malformed number", line) from None
        data[func][opt] = {r: np.array(v) for r, v in sorted(runs.items())}
    return dict(data)


def _final_costs(runs: dict[int, np.ndarray]) -> np.ndarray:
    return np.array([trace[-1] for _, trace in sorted(runs.items())])


def _write(path: Path, header, rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def compare(trace_dir, test: str, out_dir=None) -> list[Path]:
    """Write one ``compare_<test>_<function>.csv`` per function with >= 2 optimizers."""
    if test not in COMPARE_TESTS:
        raise ConfigurationError(f"unknown test {test!r}; choose from {', '.join(COMPARE_TESTS)}")
    data = read_traces(trace_dir)
    out = Path(out_dir) if out_dir is not None else Path(trace_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for func in sorted(data):
        by_opt = data[func]
        if len(by_opt) < 2:
            continue
        algs = sorted(by_opt)
        path = out / f"compare_{test}_{func}.csv"
        if test == "wilcoxon":
            finals = {a: _final_costs(by_opt[a]) for a in algs}
            rows = []
            for a in algs:
                row = [a]
                for b in algs:
                    p = 1.0 if a == b else stats.wilcoxon_rank_sum(finals[a], finals[b])[1]
                    row.append(fmt(p))
                rows.append(row)
            written.append(_write(path, ["algorithm"] + algs, rows))
        elif test == "friedman":
            run_ids = {a: tuple(sorted(by_opt[a])) for a in algs}
            if len(set(run_ids.values())) != 1:
                counts = ", ".join(f"{a}={len(run_ids[a])}" for a in algs)
                raise ConfigurationError(
                    f"{func}: Friedman test needs the same runs for every optimizer (run counts: {counts})"
                )
            blocks = np.column_stack([_final_costs(by_opt[a]) for a in algs])
            table = stats.friedman_ranks(blocks, algs)
            rows = [
                [a, fmt(r), fmt(table.chi_square), fmt(table.p_value)]
                for a, r in zip(table.algorithms, table.average_rank)
            ]
            written.append(_write(path, ["algorithm", "average_rank", "chi_square", "p_value"], rows))
        elif test == "correlation":
            means = {}
            for a in algs:
                lengths = {len(t) for t in by_opt[a].values()}
                if len(lengths) != 1:
                    raise ConfigurationError(f"{func}/{a}: traces have unequal lengths {sorted(lengths)}")
                means[a] = np.mean(np.vstack(list(by_opt[a].values())), axis=0)
            if len({m.size for m in means.values()}) != 1:
                raise ConfigurationError(f"{func}: optimizers ran different iteration counts")
            rows = [[a] + [fmt(stats.pearson_correlation(means[a], means[b])) for b in algs] for a in algs]
            written.append(_write(path, ["algorithm"] + algs, rows))
        else:
            finals = {a: _final_costs(by_opt[a]) for a in algs}
            pooled = np.concatenate([finals[a] for a in algs])
            norm = stats.minmax_normalize(pooled)
            rows, k = [], 0
            for a in algs:
                for r, c in zip(sorted(by_opt[a]), finals[a]):
                    rows.append([a, r, fmt(c), fmt(norm[k])])
                    k += 1
            written.append(_write(path, ["algorithm", "run", "final_cost", "normalized"], rows))
    if not written:
        raise ConfigurationError(f"no function in {trace_dir} has traces from two or more optimizers")
    return written


# --------------------------------------------------------------- applications


def solution_records(problem: instances.Problem, solution) -> list[tuple[str, str, str]]:
    """(field, key, value) rows describing a decoded solution."""
    kind = problem.kind
    if kind == "mst":
        W = {(a, b): w for a, b, w in _edge_weights(problem, solution)}
        rows = [("edge", f"{a + 1}-{b + 1}", str(W[(a, b)])) for a, b in solution.edges]
        return rows + [("weight", "", str(solution.weight))]
    if kind == "pms":
        rows = []
        for k, seq in enumerate(solution.sequences, start=1):
            rows.append(("sequence", f"machine{k}", " ".join(str(t + 1) for t in seq)))
            rows.append(("completion", f"machine{k}", fmt(solution.completion[k - 1])))
        return rows + [("cmax", "", fmt(solution.cmax))]
    if kind == "ed":
        rows = [("P", f"unit{i}", fmt(p)) for i, p in enumerate(solution.P, start=1)]
        return rows + [
            ("PT", "", fmt(solution.PT)),
            ("PL", "", fmt(solution.PL)),
            ("Error", "", fmt(solution.error)),
            ("Cost", "", fmt(solution.cost)),
        ]
    if kind == "clustering":
        rows = [
            ("centroid", f"cluster{c + 1}", " ".join(fmt(x) for x in cen))
            for c, cen in enumerate(solution.centroids)
        ]
        rows += [("size", f"cluster{c + 1}", str(int(s))) for c, s in enumerate(solution.sizes)]
        rows += [("assignment", f"point{i + 1}", str(int(a) + 1)) for i, a in enumerate(solution.assignments)]
        return rows + [("objective", "", fmt(solution.objective))]
    if kind == "hlp":
        rows = [("hub", f"hub{h + 1}", " ".join(fmt(x) for x in xy)) for h, xy in enumerate(solution.hubs)]
        rows += [("load", f"hub{h + 1}", str(int(n))) for h, n in enumerate(solution.loads)]
        rows += [("assignment", f"client{i + 1}", str(int(a) + 1)) for i, a in enumerate(solution.assignments)]
        return rows + [("objective", "", fmt(solution.objective))]
    raise ConfigurationError(f"no report format for kind {kind!r}")


def _edge_weights(problem, solution):
    from .apps.mst import weight_matrix

    W = weight_matrix(problem.instance)
    return [(a, b, int(W[a, b])) for a, b in solution.edges]


def render_report(problem: instances.Problem, solution, header: dict) -> str:
    lines = [f"{k}: {v}" for k, v in header.items()]
    lines.append("")
    kind = problem.kind
    if kind == "mst":
        lines.append("edges (node-node: weight):")
        lines += [f"  {a + 1}-{b + 1}: {w}" for a, b, w in _edge_weights(problem, solution)]
        lines.append(f"total weight: {solution.weight}")
    elif kind == "pms":
        for k, seq in enumerate(solution.sequences, start=1):
            tasks = " ".join(str(t + 1) for t in seq) or "(idle)"
            lines.append(f"machine {k}: {tasks}  [completion {solution.completion[k - 1]:g}]")
        lines.append(f"C-max: {solution.cmax:g}")
    elif kind == "ed":
        for i, p in enumerate(solution.P, start=1):
            lines.append(f"P{i}: {p:.6f} MW")
        lines += [
            f"PT: {solution.PT:.6f} MW",
            f"PL: {solution.PL:.6f} MW",
            f"Error=PT-PL-PD: {solution.error:.6g} MW",
            f"Cost: {solution.cost:.6f}",
        ]
    elif kind == "clustering":
        for c, (cen, n) in enumerate(zip(solution.centroids, solution.sizes), start=1):
            lines.append(f"cluster {c}: centroid {np.array2string(cen, precision=4)}  size {n}")
        lines.append(f"objective: {solution.objective:.6f}")
    elif kind == "hlp":
        for h, (xy, n) in enumerate(zip(solution.hubs, solution.loads), start=1):
            lines.append(f"hub {h}: {np.array2string(xy, precision=3)}  clients {n}")
        lines.append(f"objective: {solution.objective:.6f}")
    return "\n".join(lines) + "\n"


@dataclass
class SolveResult:
    problem: instances.Problem
    solution: object
    objective: float
    report_path: Path
    csv_path: Path
    report: str = field(repr=False, default="")


def solve_app(
    ref: str,
    optimizer: str = "shs",
    seed: int = 0,
    iterations: int = 300,
    pop_size: int = 25,
    out_dir="results",
    kind: Optional[str] = None,
) -> SolveResult:
    """Optimize one application instance and write ``solution_<name>.{txt,csv}``."""
    problem = instances.load_problem(ref, kind)
    if optimizer == "prim-oracle":
        if problem.kind != "mst":
            raise ConfigurationError("prim-oracle only solves MST instances")
        solution = prim_mst_oracle(problem.instance)
        objective = float(solution.weight)
    else:
        check_optimizer(optimizer)
        res = run_optimizer(optimizer, problem.spec, seed, pop_size=pop_size, max_iterations=iterations)
        solution = problem.decode(res.final_position)
        objective = res.final_cost

    header = {
        "instance": problem.name,
        "kind": problem.kind,
        "optimizer": optimizer,
        "seed": seed,
        "iterations": iterations if optimizer != "prim-oracle" else "-",
        "objective": fmt(objective),
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text = render_report(problem, solution, header)
    report_path = out / f"solution_{problem.name}.txt"
    report_path.write_text(text)
    csv_path = _write(out / f"solution_{problem.name}.csv", ["field", "key", "value"], solution_records(problem, solution))
    return SolveResult(problem, solution, objective, report_path, csv_path, text)


def list_catalog() -> dict[str, Sequence[str]]:
    from .benchmarks import BENCHMARKS
    from .registry import KNOWN_UNIMPLEMENTED, OPTIMIZERS

    return {
        "optimizers": list(OPTIMIZERS),
        "unimplemented": list(KNOWN_UNIMPLEMENTED),
        "functions": list(BENCHMARKS),
        "instances": list(instances.BUILTIN),
        "tests": list(COMPARE_TESTS),
    }
