"""Run manifests and diagram serialization (CSV for plotting, JSON for full state)."""

import csv
import json
import math
import os
from dataclasses import asdict, dataclass, fields

import numpy as np

from .continuation import BifurcationDiagram, BornBy, Branch, ConfigurationError, ContinuationConfig
from .newton import NewtonConfig

__all__ = [
    "RunManifest",
    "PROBLEM_DEFAULTS",
    "write_diagram",
    "write_csv",
    "write_json",
    "read_json",
    "read_csv",
    "diagram_document",
]

CSV_HEADER = ("lambda", "branch_id", "functional", "born_by")

PROBLEM_DEFAULTS = {
    "unity": {"min": 2.0, "max": 9.0, "step": 0.1},
    "elastica": {"min": 0.0, "max": 4 * math.pi, "step": 0.1},
    "pendulum": {"min": 0.0, "max": 1.0, "step": 0.01},
    "mittelmann": {"min": 0.3678, "max": 0.05, "step": -0.001},
}


@dataclass
class RunManifest:
    """Everything needed to reproduce one run.

    Field names double as the keys of the flat ``key = value`` config file,
    with underscores written as dashes (``max_iter`` -> ``max-iter``).
    """

    problem: str
    min: float
    max: float
    step: float
    mu: float | None = None
    grid: int | None = None
    p: float = 2.0
    sigma: float = 1.0
    distinct: float = 1e-6
    max_iter: int = 100
    tol: float = 1e-10
    backward: bool = False
    retain: str = "none"
    out: str = "."

    def continuation_config(self):
        return ContinuationConfig(
            lambda_min=self.min,
            lambda_max=self.max,
            delta_lambda=self.step,
            newton=NewtonConfig(max_iterations=self.max_iter, residual_tolerance=self.tol),
            power=self.p,
            shift=self.sigma,
            distinctness=self.distinct,
            backward_pass=self.backward,
            retain=self.retain,
        )

    def to_text(self):
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            lines.append(f"{f.name.replace('_', '-')} = {_format_value(value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        return cls(**parse_config_text(text))


def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_bool(raw):
    lowered = raw.strip().lower()
    if lowered not in ("true", "false", "1", "0", "yes", "no"):
        raise ValueError(raw)
    return lowered in ("true", "1", "yes")


_CONVERTERS = {
    "min": float, "max": float, "step": float, "mu": float, "grid": int,
    "p": float, "sigma": float, "distinct": float, "max_iter": int, "tol": float,
    "backward": _parse_bool, "problem": str.strip, "retain": str.strip, "out": str.strip,
}


def _coerce(name, raw):
    try:
        return _CONVERTERS[name](raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {name}: {raw!r}") from exc


def parse_config_text(text):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    known = {f.name for f in fields(RunManifest)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        name = key.lstrip("-").replace("-", "_")
        if name not in known:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        values[name] = _coerce(name, raw)
    return values


def _f17(x):
    return format(float(x), ".17g")


def write_csv(diagram, path):
    """Plotting rows for every non-trivial branch point.

    The trivial branch is omitted (it is a flat line at a known value);
    ``diagram.json`` still carries it.
    """
    rows = []
    for b in diagram.branches:
        if b.trivial:
            continue
        for lam, value, origin in zip(b.lambdas, b.functionals, b.origins):
            rows.append((b.id, lam, value, origin.value))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for bid, lam, value, origin in rows:
            writer.writerow((_f17(lam), bid, _f17(value), origin))


def read_csv(path):
    """Rows of a diagram CSV as ``(lambda, branch_id, functional, born_by)`` tuples."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        return [(float(a), int(b), float(c), d) for a, b, c, d in reader]


def diagram_document(diagram, manifest=None, problem_info=None):
    branches = []
    for b in diagram.branches:
        solutions = [
            {"point": i, "values": [float(x) for x in u]}
            for i, u in enumerate(b.solutions)
            if u is not None
        ]
        branches.append(
            {
                "id": b.id,
                "born_by": b.born_by.value,
                "trivial": b.trivial,
                "end_status": b.end_status,
                "indices": [int(i) for i in b.indices],
                "points": [
                    [float(lam), float(f), o.value]
                    for lam, f, o in zip(b.lambdas, b.functionals, b.origins)
                ],
                "solutions": solutions,
            }
        )
    return {
        "manifest": None if manifest is None else asdict(manifest),
        "problem": problem_info,
        "lambda_grid": [float(x) for x in diagram.lambda_grid],
        "solution_counts": [int(c) for c in diagram.solution_counts],
        "branches": branches,
    }


def _dump(document):
    return json.dumps(document, sort_keys=True, indent=1) + "\n"


def write_json(diagram, path, manifest=None, problem_info=None):
    with open(path, "w") as fh:
        fh.write(_dump(diagram_document(diagram, manifest, problem_info)))


def read_json(path):
    """Load ``diagram.json``; returns ``(diagram, manifest, problem_info)``."""
    with open(path) as fh:
        doc = json.load(fh)
    branches = []
    for entry in doc["branches"]:
        b = Branch(entry["id"], BornBy(entry["born_by"]), trivial=entry["trivial"])
        b.end_status = entry["end_status"]
        stored = {s["point"]: np.array(s["values"]) for s in entry["solutions"]}
        for k, (index, (lam, value, origin)) in enumerate(zip(entry["indices"], entry["points"])):
            b.append(index, lam, value, origin, stored.get(k))
        branches.append(b)
    diagram = BifurcationDiagram(branches, doc["lambda_grid"], doc["solution_counts"])
    manifest = None if doc["manifest"] is None else RunManifest(**doc["manifest"])
    return diagram, manifest, doc["problem"]


def write_diagram(diagram, manifest, problem=None, out_dir=None):
    """Write ``diagram.csv`` and ``diagram.json`` into the manifest's output directory."""
    out_dir = manifest.out if out_dir is None else out_dir
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "diagram.csv")
    json_path = os.path.join(out_dir, "diagram.json")
    write_csv(diagram, csv_path)
    write_json(diagram, json_path, manifest, None if problem is None else problem.describe())
    return csv_path, json_path
