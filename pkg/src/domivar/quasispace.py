"""Finite quasimetric ground spaces: labeled point sets, grids and distance specs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "GroundSet",
    "WeightedAsymmetric",
    "ScaledMetric",
    "Table",
    "q",
    "validate_axioms",
    "forward_hausdorff_check",
    "is_forward_cauchy",
]

EXHAUSTIVE_LIMIT = 200
TOL_Q = 1e-9


def _label_key(label: str):
    try:
        return (0, float(label), label)
    except ValueError:
        return (1, 0.0, label)


def format_coord(v: float) -> str:
    v = round(float(v), 12) + 0.0
    return f"{v:.12g}"


@dataclass(eq=False)
class GroundSet:
    """Finite set of labeled decision points.

    ``coords`` has one row per point; ``kind`` is ``"finite"`` or ``"grid"``.
    Points are kept in label order (numeric labels compare numerically).
    """

    labels: list
    coords: np.ndarray
    kind: str = "finite"
    grid: dict | None = None

    def __post_init__(self):
        self.labels = [str(s) for s in self.labels]
        self.coords = np.atleast_2d(np.asarray(self.coords, dtype=float))
        if self.coords.shape[0] != len(self.labels):
            self.coords = self.coords.reshape(len(self.labels), -1)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("ground-set labels must be distinct")
        if not self.labels:
            raise ValueError("ground set must be nonempty")
        if self.kind == "finite":
            order = sorted(range(len(self.labels)), key=lambda i: _label_key(self.labels[i]))
            self.labels = [self.labels[i] for i in order]
            self.coords = self.coords[order]
        self._index = {s: i for i, s in enumerate(self.labels)}

    @classmethod
    def finite(cls, labels: Sequence, coords=None) -> "GroundSet":
        if coords is None:
            # numeric labels double as coordinates, otherwise use positions
            try:
                coords = np.array([[float(s)] for s in labels])
            except ValueError:
                coords = np.arange(len(labels), dtype=float)[:, None]
        return cls(list(labels), coords, "finite")

    @classmethod
    def grid_of(cls, lower, upper, step) -> "GroundSet":
        lower, upper, step = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (lower, upper, step))
        if not (lower.shape == upper.shape == step.shape):
            raise ValueError("grid lower/upper/step must have equal lengths")
        if np.any(step <= 0) or np.any(upper < lower):
            raise ValueError("grid needs step > 0 and upper >= lower")
        axes = []
        for lo, hi, st in zip(lower, upper, step):
            count = int(np.floor((hi - lo) / st + 1e-9)) + 1
            axes.append(np.round(lo + st * np.arange(count), 12))
        total = int(np.prod([len(a) for a in axes]))
        if total > 10**6:
            raise ValueError(f"grid has {total} points; the cap is 10**6")
        pts = np.array(list(itertools.product(*axes)), dtype=float).reshape(total, len(axes))
        labels = [",".join(format_coord(v) for v in p) for p in pts]
        return cls(labels, pts, "grid", {"lower": lower.tolist(), "upper": upper.tolist(), "step": step.tolist()})

    def __len__(self):
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def index(self, label) -> int:
        key = str(label)
        if key not in self._index:
            try:
                key = format_coord(float(label)) if self.dim == 1 else key
            except (TypeError, ValueError):
                pass
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"unknown ground-set label {label!r}") from None

    def __contains__(self, label):
        try:
            self.index(label)
            return True
        except KeyError:
            return False

    def to_json(self):
        if self.kind == "grid":
            return {"grid": self.grid}
        return {"points": [{"label": s, "coords": c.tolist()} for s, c in zip(self.labels, self.coords)]}


class QuasimetricSpec:
    kind = "abstract"

    def matrix(self, ground: GroundSet) -> np.ndarray:
        return np.array([self.row(ground, i) for i in range(len(ground))])

    def row(self, ground: GroundSet, i: int) -> np.ndarray:
        raise NotImplementedError


@dataclass(eq=False)
class WeightedAsymmetric(QuasimetricSpec):
    """``q(x,u) = sum_i alpha_i (u_i - x_i)^+ + beta_i (x_i - u_i)^+``."""

    alpha: np.ndarray
    beta: np.ndarray
    kind = "weighted_asymmetric"

    def __post_init__(self):
        self.alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        self.beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        if self.alpha.shape != self.beta.shape:
            raise ValueError("alpha and beta need equal lengths")
        if np.any(self.alpha < 0) or np.any(self.beta < 0):
            raise ValueError("weights must be nonnegative")

    def between(self, x, u) -> float:
        d = np.asarray(u, dtype=float) - np.asarray(x, dtype=float)
        return float(self.alpha @ np.maximum(d, 0) + self.beta @ np.maximum(-d, 0))

    def row(self, ground, i):
        d = ground.coords - ground.coords[i]
        return np.maximum(d, 0) @ self.alpha + np.maximum(-d, 0) @ self.beta

    def to_json(self):
        return {"type": "weighted_asymmetric", "alpha": self.alpha.tolist(), "beta": self.beta.tolist()}


@dataclass(eq=False)
class ScaledMetric(QuasimetricSpec):
    """``q(x,u) = c * ||u - x||_p``."""

    c: float = 1.0
    p: float = 2.0
    kind = "scaled_metric"

    def __post_init__(self):
        self.c, self.p = float(self.c), float(self.p)
        if self.c < 0 or self.p < 1:
            raise ValueError("ScaledMetric needs c >= 0 and p >= 1")

    def between(self, x, u) -> float:
        d = np.asarray(u, dtype=float) - np.asarray(x, dtype=float)
        return float(self.c * np.linalg.norm(np.atleast_1d(d), ord=self.p))

    def row(self, ground, i):
        d = ground.coords - ground.coords[i]
        return self.c * np.linalg.norm(d, ord=self.p, axis=1)

    def to_json(self):
        return {"type": "scaled_metric", "c": self.c, "p": self.p}


@dataclass(eq=False)
class Table(QuasimetricSpec):
    """Explicit distances between labels; missing off-diagonal entries are errors."""

    labels: list
    values: np.ndarray
    kind = "table"

    def __post_init__(self):
        self.labels = [str(s) for s in self.labels]
        self.values = np.asarray(self.values, dtype=float)
        n = len(self.labels)
        if self.values.shape != (n, n):
            raise ValueError(f"table must be {n}x{n}")
        self._index = {s: i for i, s in enumerate(self.labels)}

    @classmethod
    def from_entries(cls, labels, entries, symmetric_fill: bool = False, default=None):
        labels = [str(s) for s in labels]
        idx = {s: i for i, s in enumerate(labels)}
        n = len(labels)
        V = np.full((n, n), np.nan)
        np.fill_diagonal(V, 0.0)
        for a, b, v in entries:
            V[idx[str(a)], idx[str(b)]] = float(v)
        if symmetric_fill:
            V = np.where(np.isnan(V), V.T, V)
        if default is not None:
            V = np.where(np.isnan(V), float(default), V)
        if np.isnan(V).any():
            i, j = np.argwhere(np.isnan(V))[0]
            raise ValueError(f"table entry missing for ({labels[i]}, {labels[j]})")
        return cls(labels, V)

    def between(self, x, u) -> float:
        try:
            return float(self.values[self._index[str(x)], self._index[str(u)]])
        except KeyError as exc:
            raise KeyError(f"unknown label {exc.args[0]!r} in table quasimetric") from None

    def _perm(self, ground):
        try:
            return np.array([self._index[s] for s in ground.labels])
        except KeyError as exc:
            raise KeyError(f"ground label {exc.args[0]!r} missing from table quasimetric") from None

    def row(self, ground, i):
        p = self._perm(ground)
        return self.values[p[i], p]

    def matrix(self, ground):
        p = self._perm(ground)
        return self.values[np.ix_(p, p)]

    def to_json(self):
        return {"type": "table", "labels": self.labels, "values": self.values.tolist()}


def q(spec: QuasimetricSpec, x, u) -> float:
    """Distance from ``x`` to ``u``; ``x`` and ``u`` are labels for tables, coordinates otherwise."""
    if isinstance(spec, Table):
        return 0.0 if str(x) == str(u) else spec.between(x, u)
    return spec.between(x, u)


def validate_axioms(spec: QuasimetricSpec, ground: GroundSet, budget: int = 200_000,
                    seed: int | None = 0, tol: float = TOL_Q) -> dict:
    """Check zero diagonal, nonnegativity and the triangle inequality.

    All triples are checked when ``|X| <= 200``; larger sets use ``budget``
    uniformly drawn triples.
    """
    n = len(ground)
    Q = spec.matrix(ground)
    labels = ground.labels
    warnings = []
    diag = [labels[i] for i in np.flatnonzero(np.abs(np.diag(Q)) > tol)]
    neg = [(labels[i], labels[j]) for i, j in np.argwhere(Q < -tol)]
    triangle = []
    exhaustive = n <= EXHAUSTIVE_LIMIT
    if exhaustive:
        # Q[i,j] <= Q[i,m] + Q[m,j] for all m, one row at a time
        for i in range(n):
            via = Q[i][:, None] + Q  # via[m, j] = Q[i,m] + Q[m,j]
            bad = np.argwhere(Q[i][None, :] > via + tol)
            for m, j in bad[:10]:
                triangle.append((labels[i], labels[m], labels[j]))
            if len(triangle) >= 50:
                break
    else:
        rng = np.random.default_rng(seed)
        T = rng.integers(0, n, size=(budget, 3))
        bad = Q[T[:, 0], T[:, 2]] > Q[T[:, 0], T[:, 1]] + Q[T[:, 1], T[:, 2]] + tol
        for i, m, j in T[bad][:50]:
            triangle.append((labels[i], labels[m], labels[j]))
    if n > 1 and np.all(np.abs(Q) <= tol):
        warnings.append("degenerate: all distances 0")
    return {
        "ok": not (diag or neg or triangle),
        "exhaustive": exhaustive,
        "zero_diagonal_violations": diag,
        "negative_entries": [list(p) for p in neg[:50]],
        "triangle_violations": [list(t) for t in triangle],
        "warnings": warnings,
    }


def forward_hausdorff_check(spec: QuasimetricSpec, ground: GroundSet,
                            tol: float = TOL_Q) -> tuple[bool, tuple | None]:
    """On a finite space: no point sits at distance 0 from two distinct points.

    The point itself counts, since ``q(p, p) = 0``.
    """
    Q = spec.matrix(ground)
    labels = ground.labels
    for p in range(len(ground)):
        zeros = np.flatnonzero(np.abs(Q[p]) <= tol)
        if zeros.size >= 2:
            a, b = zeros[:2]
            return False, (labels[p], labels[a], labels[b])
    return True, None


def is_forward_cauchy(seq: Sequence, spec: QuasimetricSpec, tol: float = 1e-6,
                      ground: GroundSet | None = None) -> bool:
    """Prefix diagnostic: some tail of ``seq`` has all forward distances below ``tol``.

    The tail examined starts at the midpoint of the prefix, so a prefix
    whose second half is forward-tight counts as Cauchy.
    """
    seq = list(seq)
    if len(seq) <= 1:
        return True

    def dist(a, b):
        if isinstance(spec, Table) or ground is not None and not isinstance(a, (list, tuple, np.ndarray)):
            if isinstance(spec, Table):
                return q(spec, a, b)
            return spec.between(ground.coords[ground.index(a)], ground.coords[ground.index(b)])
        return spec.between(a, b)

    start = len(seq) // 2
    tail = seq[start:]
    worst = 0.0
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            worst = max(worst, dist(tail[i], tail[j]))
            if worst >= tol:
                return False
    return True
