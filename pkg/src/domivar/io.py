"""JSON instance documents, canonical serialization and deterministic reports."""
from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .domination import StructureError, parse_structure
from .expr import ExpressionError
from .instance import Objective, ProblemInstance, SolverConfig
from .quasispace import GroundSet, ScaledMetric, Table, WeightedAsymmetric, validate_axioms

__all__ = [
    "SCHEMA_VERSION",
    "InstanceError",
    "parse_instance",
    "load_instance",
    "serialize_instance",
    "instance_digest",
    "bundled_path",
    "make_report",
    "dumps_report",
    "report_to_csv",
]

SCHEMA_VERSION = 1
_TOP_KEYS = {"schema", "name", "dimension", "ground", "objective", "structure", "quasimetric",
             "k", "epsilon", "x0", "config", "notes"}


class InstanceError(ValueError):
    """Raised with every problem found in a document, each prefixed by its field path."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _ground(doc, errors):
    g = doc.get("ground")
    if not isinstance(g, dict):
        errors.append("ground: expected an object with 'points', 'labels' or 'grid'")
        return None
    try:
        if "grid" in g:
            grid = g["grid"]
            return GroundSet.grid_of(grid["lower"], grid["upper"], grid["step"])
        if "points" in g:
            pts = g["points"]
            labels = [str(p["label"]) for p in pts]
            coords = [p.get("coords", [i]) for i, p in enumerate(pts)]
            return GroundSet(labels, coords, "finite")
        if "labels" in g:
            return GroundSet.finite([str(s) for s in g["labels"]])
        errors.append("ground: expected 'points', 'labels' or 'grid'")
    except (KeyError, ValueError, TypeError) as exc:
        errors.append(f"ground: {exc}")
    return None


def _objective(doc, m, errors):
    o = doc.get("objective")
    try:
        if isinstance(o, dict) and "table" in o:
            return Objective.from_table(o["table"], m)
        if isinstance(o, dict) and "rules" in o:
            return Objective.from_rules(o["rules"], m)
        errors.append("objective: expected 'table' or 'rules'")
    except (KeyError, ValueError, TypeError, ExpressionError) as exc:
        errors.append(f"objective: {exc}")
    return None


def _quasimetric(doc, ground, errors):
    qd = doc.get("quasimetric")
    if not isinstance(qd, dict) or "type" not in qd:
        errors.append("quasimetric: expected an object with a 'type'")
        return None
    kind = qd["type"]
    try:
        if kind == "weighted_asymmetric":
            return WeightedAsymmetric(qd["alpha"], qd["beta"])
        if kind == "scaled_metric":
            return ScaledMetric(qd.get("c", 1.0), qd.get("p", 2.0))
        if kind == "table":
            if "values" in qd:
                return Table(qd.get("labels", ground.labels if ground else []), qd["values"])
            labels = qd.get("labels", ground.labels if ground else [])
            return Table.from_entries(labels, qd.get("entries", []),
                                      qd.get("symmetric_fill", False), qd.get("default"))
        errors.append(f"quasimetric.type: unknown type {kind!r}")
    except (KeyError, ValueError, TypeError) as exc:
        errors.append(f"quasimetric: {exc}")
    return None


def parse_instance(doc, validate: bool = True) -> ProblemInstance:
    """Build a validated instance from JSON text or an already decoded object.

    Raises :class:`InstanceError` listing every problem found.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InstanceError([f"line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    if not isinstance(doc, dict):
        raise InstanceError(["document: expected a JSON object"])
    errors: list[str] = []
    extra = sorted(set(doc) - _TOP_KEYS)
    if extra:
        errors.append(f"document: unknown keys {extra}")
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        errors.append(f"schema: unsupported version {doc.get('schema')!r}")

    k = doc.get("k")
    m = doc.get("dimension", len(k) if isinstance(k, list) else None)
    if not isinstance(m, int) or m < 1:
        raise InstanceError(errors + ["dimension: expected a positive integer (or give k)"])
    if not isinstance(k, list) or len(k) != m:
        errors.append(f"k: expected a list of {m} numbers")
    elif not any(float(v) != 0 for v in k):
        errors.append("k: must be nonzero")

    eps = doc.get("epsilon")
    if not isinstance(eps, (int, float)) or isinstance(eps, bool) or eps < 0 or not math.isfinite(eps):
        errors.append("epsilon: expected a finite nonnegative number")

    ground = _ground(doc, errors)
    objective = _objective(doc, m, errors)
    try:
        structure = parse_structure(doc.get("structure", {}), m)
    except (StructureError, KeyError, TypeError) as exc:
        structure = None
        errors.append(f"structure: {exc}")
    quasi = _quasimetric(doc, ground, errors)

    try:
        config = SolverConfig(**doc.get("config", {}))
    except (TypeError, ValueError) as exc:
        config = None
        errors.append(f"config: {exc}")

    x0 = doc.get("x0")
    if ground is not None and (x0 is None or str(x0) not in ground):
        errors.append(f"x0: label {x0!r} is not in the ground set")
    if errors:
        raise InstanceError(errors)

    try:
        inst = ProblemInstance(ground, objective, structure, quasi, k, eps, str(x0), config,
                               doc.get("name", ""), doc.get("notes", ""))
    except (ValueError, KeyError) as exc:
        raise InstanceError([f"instance: {exc}"]) from None
    if validate:
        validate_instance(inst)
    return inst


def validate_instance(inst: ProblemInstance):
    """Load-time checks: objective and structure total, quasimetric axioms hold."""
    errors = []
    try:
        inst.payoffs()
    except (KeyError, ExpressionError, ValueError) as exc:
        raise InstanceError([f"objective: {exc}"]) from None
    try:
        inst.domination_sets
    except (StructureError, ExpressionError, ValueError) as exc:
        raise InstanceError([f"structure: {exc}"]) from None
    try:
        ax = validate_axioms(inst.quasimetric, inst.ground)
    except KeyError as exc:
        raise InstanceError([f"quasimetric: {exc.args[0]}"]) from None
    if ax["zero_diagonal_violations"]:
        errors.append(f"quasimetric: nonzero self-distance at {ax['zero_diagonal_violations'][:5]}")
    if ax["negative_entries"]:
        errors.append(f"quasimetric: negative distance for pairs {ax['negative_entries'][:5]}")
    for t in ax["triangle_violations"][:5]:
        errors.append(f"quasimetric: triangle inequality fails for triple ({t[0]}, {t[1]}, {t[2]})")
    if errors:
        raise InstanceError(errors)


def load_instance(path_or_name, validate: bool = True) -> ProblemInstance:
    path = bundled_path(path_or_name)
    return parse_instance(path.read_text(), validate=validate)


def bundled_path(name) -> Path:
    """A filesystem path, or the name of a bundled instance (with or without ``.json``)."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name if p.suffix == ".json" else p.name + ".json"
    data = resources.files("domivar") / "data" / stem
    if data.is_file():
        return Path(str(data))
    raise FileNotFoundError(f"no instance file or bundled instance named {str(name)!r}")


def bundled_names() -> list:
    return sorted(p.name[:-5] for p in (resources.files("domivar") / "data").iterdir()
                  if p.name.endswith(".json"))


def serialize_instance(inst: ProblemInstance) -> dict:
    """Canonical JSON-ready form; parse(serialize(i)) reproduces ``i``."""
    return {
        "schema": SCHEMA_VERSION,
        "name": inst.name,
        "dimension": inst.dim,
        "ground": inst.ground.to_json(),
        "objective": inst.objective.to_json(),
        "structure": inst.structure.to_json(),
        "quasimetric": inst.quasimetric.to_json(),
        "k": [float(v) for v in inst.k],
        "epsilon": inst.epsilon,
        "x0": inst.x0,
        "config": inst.config.to_json(),
        "notes": inst.notes,
    }


def canonical_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def instance_digest(inst: ProblemInstance) -> str:
    return hashlib.sha256(canonical_json(serialize_instance(inst)).encode()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v + 0.0
    if hasattr(obj, "to_json"):
        return _jsonable(obj.to_json())
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def make_report(command: str, inst: ProblemInstance | None, result, extra: dict | None = None) -> dict:
    rep = {"schema": SCHEMA_VERSION, "command": command, "result": result}
    if inst is not None:
        rep["instance"] = {"name": inst.name, "digest": instance_digest(inst), "points": inst.n,
                           "discretized": inst.ground.kind == "grid"}
        rep["tolerances"] = inst.config.to_json()
    if extra:
        rep.update(extra)
    return rep


def dumps_report(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


_ROW_KEYS = ("rows", "trace", "points", "W_x0", "fixed_points")


def _find_rows(obj):
    if isinstance(obj, dict):
        for key in _ROW_KEYS:
            if key in obj and isinstance(obj[key], list):
                return obj[key]
        for v in obj.values():
            found = _find_rows(v)
            if found is not None:
                return found
    return None


def report_to_csv(report: dict) -> str:
    """Flatten the row-like part of a report (classification rows, trace, ...) to CSV."""
    rows = _find_rows(report.get("result", report))
    if rows is None:
        raise ValueError("report has no row-like section to convert")
    rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
    cols = []
    for r in rows:
        for c in r:
            if c not in cols:
                cols.append(c)
    if "label" in cols:
        cols.insert(0, cols.pop(cols.index("label")))
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: json.dumps(v) if isinstance(v, (list, dict)) else v for c, v in r.items()})
    return buf.getvalue()
