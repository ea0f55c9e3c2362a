"""Instance files, built-in instances and a uniform problem wrapper.

Coordinates come from CSV files with an ``id,x,y`` header. Processing
matrices are CSV with a ``machine,...`` header and one row per machine.
Structured instances are JSON objects with a ``kind`` field; see
``load_descriptor`` for the accepted keys.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from ..engine import ConfigurationError, ObjectiveSpec
from . import clustering, dispatch, hlp, mst, pms


class InstanceParseError(ValueError):
    """Malformed instance file; carries the location of the problem."""

    def __init__(self, path, message, line: Optional[int] = None, column: Optional[int] = None):
        self.path, self.line, self.column = str(path), line, column
        where = str(path)
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


def _read_rows(path: Path) -> list[list[str]]:
    with open(path, newline="") as fh:
        return [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]


def _number(cell: str, path, line: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise InstanceParseError(path, f"expected a number, got {cell.strip()!r}", line, column) from None
    if not np.isfinite(value):
        raise InstanceParseError(path, f"non-finite value {cell.strip()!r}", line, column)
    return value


def read_coordinates(path) -> np.ndarray:
    """(N, 2) coordinates from an ``id,x,y`` CSV, in file order."""
    path = Path(path)
    rows = _read_rows(path)
    if not rows:
        raise InstanceParseError(path, "empty file")
    header = [c.strip().lower() for c in rows[0]]
    if header != ["id", "x", "y"]:
        raise InstanceParseError(path, f"expected header id,x,y, got {','.join(rows[0])}", 1)
    xy = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise InstanceParseError(path, f"expected 3 fields, got {len(row)}", line)
        xy.append([_number(row[1], path, line, 2), _number(row[2], path, line, 3)])
    if not xy:
        raise InstanceParseError(path, "no coordinate rows")
    return np.array(xy)


def read_processing(path) -> np.ndarray:
    """Machines x tasks matrix from a CSV whose first column is the machine id."""
    path = Path(path)
    rows = _read_rows(path)
    if not rows:
        raise InstanceParseError(path, "empty file")
    if rows[0][0].strip().lower() != "machine":
        raise InstanceParseError(path, "first header cell must be 'machine'", 1, 1)
    width = len(rows[0])
    if width < 2:
        raise InstanceParseError(path, "header names no tasks", 1)
    out = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise InstanceParseError(path, f"expected {width} fields, got {len(row)}", line)
        out.append([_number(c, path, line, col) for col, c in enumerate(row[1:], start=2)])
    if not out:
        raise InstanceParseError(path, "no machine rows")
    return np.array(out)


@dataclass(frozen=True)
class Problem:
    """An application instance together with its objective and reporting hooks."""

    kind: str
    name: str
    instance: Any
    spec: ObjectiveSpec
    decode: Callable[[np.ndarray], Any]


def build_problem(kind: str, instance) -> Problem:
    if kind == "mst":
        return Problem(kind, instance.name, instance, mst.mst_objective(instance), lambda v: mst.decode(instance, v))
    if kind == "pms":
        return Problem(kind, instance.name, instance, pms.pms_objective(instance), lambda v: pms.decode(instance, v))
    if kind == "ed":
        return Problem(
            kind, instance.name, instance, dispatch.ed_objective(instance),
            lambda v: dispatch.dispatch_report(instance, v),
        )
    if kind == "clustering":
        return Problem(
            kind, instance.name, instance, clustering.clustering_objective(instance),
            lambda v: clustering.decode(instance, v),
        )
    if kind == "hlp":
        return Problem(kind, instance.name, instance, hlp.hlp_objective(instance), lambda v: hlp.decode(instance, v))
    raise ConfigurationError(f"unknown problem kind {kind!r}; choose from {', '.join(KINDS)}")


KINDS = ("mst", "pms", "ed", "clustering", "hlp")

BUILTIN = {
    "paper-mst-22": lambda: ("mst", mst.GraphInstance(mst.NODES_22, "paper-mst-22")),
    "paper-pms-2x20": lambda: ("pms", pms.make_pms_instance(pms.PROCESSING_2x20, name="paper-pms-2x20")),
    "paper-ed-3gen": lambda: ("ed", dispatch.default_ed_instance()),
    "iris-k3": lambda: ("clustering", clustering.iris_instance(3)),
    "hlp-40": lambda: ("hlp", hlp.default_hlp_instance()),
}


def _field(desc: dict, key: str, path, default=None, required=True):
    if key in desc:
        return desc[key]
    if not required:
        return default
    raise InstanceParseError(path, f"descriptor of kind {desc['kind']!r} lacks required key {key!r}")


def _relative(path: Path, ref: str) -> Path:
    p = Path(ref)
    return p if p.is_absolute() else path.parent / p


def load_descriptor(path):
    """Instance from a JSON descriptor. Returns ``(kind, instance)``.

    Keys by kind (file references are relative to the descriptor):

    * ``ed``: p_min, p_max, demand, cost_coeffs, loss_matrix
    * ``hlp``: clients (list of [x, y]) or clients_csv; hub_count, balance_weight
    * ``pms``: processing (matrix) or processing_csv; optional setup, setup_range, setup_seed
    * ``mst``: nodes (list of [x, y]) or nodes_csv
    * ``clustering``: points or points_csv, or dataset "iris"; k, mode
    """
    path = Path(path)
    try:
        desc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceParseError(path, exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(desc, dict) or "kind" not in desc:
        raise InstanceParseError(path, "descriptor must be a JSON object with a 'kind' field")
    kind = desc["kind"]
    name = desc.get("name", path.stem)
    try:
        if kind == "ed":
            inst = dispatch.EdInstance(
                np.asarray(_field(desc, "p_min", path), dtype=float),
                np.asarray(_field(desc, "p_max", path), dtype=float),
                float(_field(desc, "demand", path)),
                np.asarray(_field(desc, "cost_coeffs", path), dtype=float),
                np.asarray(_field(desc, "loss_matrix", path), dtype=float),
                name=name,
            )
        elif kind == "hlp":
            clients = (
                read_coordinates(_relative(path, desc["clients_csv"]))
                if "clients_csv" in desc
                else np.asarray(_field(desc, "clients", path), dtype=float)
            )
            inst = hlp.HlpInstance(
                clients,
                int(desc.get("hub_count", hlp.DEFAULT_HUBS)),
                float(desc.get("balance_weight", hlp.DEFAULT_BALANCE_WEIGHT)),
                name=name,
            )
        elif kind == "pms":
            proc = (
                read_processing(_relative(path, desc["processing_csv"]))
                if "processing_csv" in desc
                else np.asarray(_field(desc, "processing", path), dtype=float)
            )
            inst = pms.make_pms_instance(
                proc,
                setup=desc.get("setup"),
                setup_range=tuple(desc.get("setup_range", pms.DEFAULT_SETUP_RANGE)),
                setup_seed=int(desc.get("setup_seed", pms.DEFAULT_SETUP_SEED)),
                name=name,
            )
        elif kind == "mst":
            nodes = (
                read_coordinates(_relative(path, desc["nodes_csv"]))
                if "nodes_csv" in desc
                else np.asarray(_field(desc, "nodes", path), dtype=float)
            )
            inst = mst.GraphInstance(nodes, name)
        elif kind == "clustering":
            if desc.get("dataset") == "iris":
                points, _ = clustering.load_iris()
            elif "points_csv" in desc:
                points = read_coordinates(_relative(path, desc["points_csv"]))
            else:
                points = np.asarray(_field(desc, "points", path), dtype=float)
            inst = clustering.ClusteringInstance(points, int(_field(desc, "k", path)), desc.get("mode", "within"), name)
        else:
            raise InstanceParseError(path, f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InstanceParseError, ConfigurationError)):
            raise
        raise InstanceParseError(path, f"bad value in {kind} descriptor: {exc}") from None
    return kind, inst


def load_problem(ref: str, kind: Optional[str] = None) -> Problem:
    """Resolve a built-in name, a JSON descriptor, or a CSV (needs ``kind``)."""
    if ref in BUILTIN:
        return build_problem(*BUILTIN[ref]())
    path = Path(ref)
    if not path.exists():
        if path.suffix:
            raise FileNotFoundError(f"instance file not found: {ref}")
        raise ConfigurationError(f"unknown instance {ref!r}; built-ins: {', '.join(BUILTIN)}")
    if path.suffix.lower() == ".json":
        return build_problem(*load_descriptor(path))
    if kind == "mst":
        return build_problem("mst", mst.GraphInstance(read_coordinates(path), path.stem))
    if kind == "hlp":
        return build_problem("hlp", hlp.HlpInstance(read_coordinates(path), name=path.stem))
    if kind == "pms":
        return build_problem("pms", pms.make_pms_instance(read_processing(path), name=path.stem))
    raise ConfigurationError(f"CSV instance {ref!r} needs a kind (mst, hlp or pms)")
