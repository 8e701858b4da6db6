"""Problem instances: ground set, objective, domination structure, quasimetric and solver knobs."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from functools import cached_property

import numpy as np

from .domination import DominationStructure
from .expr import Expression, Predicate, parse_expression, parse_predicate
from .geometry import GeneratorCone, PolyhedralSet, TOL_GEO, TOL_LP, as_vector, contains
from .quasispace import GroundSet, QuasimetricSpec
from .scalarization import ScalarizationSpec, gerstewitz_many

__all__ = ["SolverConfig", "Objective", "ProblemInstance"]

Q_MATRIX_LIMIT = 4000


@dataclass
class SolverConfig:
    """Tolerances and iteration controls.

    ``slack_base`` gives the schedule ``s_n = slack_base ** (n + 1)``;
    ``tie_break`` is ``"min_psi"`` (smallest psi, then label order) or
    ``"first_label"`` (label order inside the slack band).
    """

    tol_geo: float = TOL_GEO
    tol_lp: float = TOL_LP
    tol_eq: float = 1e-9
    max_iter: int = 10_000
    slack_base: float = 0.5
    tie_break: str = "min_psi"

    def __post_init__(self):
        if not (0 < self.slack_base < 1):
            raise ValueError("slack_base must lie in (0, 1) so the schedule is positive and summable")
        if self.tie_break not in ("min_psi", "first_label"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")
        if self.max_iter < 0:
            raise ValueError("max_iter must be nonnegative")

    def slack(self, n: int) -> float:
        return self.slack_base ** (n + 1)

    def slack_total(self) -> float:
        return self.slack_base / (1.0 - self.slack_base)

    def to_json(self):
        return asdict(self)


@dataclass(eq=False)
class Objective:
    """Either ordered piecewise rules over ``x`` or an explicit label table."""

    dim: int
    rules: list = field(default_factory=list)  # [(Predicate, [Expression])]
    table: dict | None = None

    @classmethod
    def from_rules(cls, rules, dim: int) -> "Objective":
        parsed = []
        for r in rules:
            when = parse_predicate(r.get("when", "true"), var="x")
            value = [parse_expression(e, var="x") for e in r["value"]]
            if len(value) != dim:
                raise ValueError(f"objective rule {r.get('when', 'true')!r} has {len(value)} components, expected {dim}")
            parsed.append((when, value))
        return cls(dim, parsed)

    @classmethod
    def from_table(cls, table: dict, dim: int) -> "Objective":
        tab = {str(k): as_vector(v, f"f({k})") for k, v in table.items()}
        for k, v in tab.items():
            if v.size != dim:
                raise ValueError(f"f({k}) has {v.size} components, expected {dim}")
        return cls(dim, [], tab)

    def __call__(self, coords, label: str) -> np.ndarray:
        if self.table is not None:
            if label not in self.table:
                raise KeyError(f"objective has no value for label {label!r}")
            return self.table[label]
        for when, value in self.rules:
            if when(coords):
                return np.array([e(coords) for e in value])
        raise KeyError(f"no objective rule matches x={list(coords)} (label {label!r})")

    def to_json(self):
        if self.table is not None:
            return {"table": {k: v.tolist() for k, v in self.table.items()}}
        return {"rules": [{"when": w.source, "value": [e.source for e in v]} for w, v in self.rules]}


@dataclass(eq=False)
class ProblemInstance:
    ground: GroundSet
    objective: Objective
    structure: DominationStructure
    quasimetric: QuasimetricSpec
    k: np.ndarray
    epsilon: float
    x0: str
    config: SolverConfig = field(default_factory=SolverConfig)
    name: str = ""
    notes: str = ""

    def __post_init__(self):
        self.k = as_vector(self.k, "k")
        self.epsilon = float(self.epsilon)
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not np.any(self.k != 0):
            raise ValueError("k must be nonzero")
        self.x0 = self.ground.labels[self.ground.index(self.x0)]

    # -- basic accessors
    @property
    def dim(self) -> int:
        return self.k.size

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def labels(self) -> list:
        return self.ground.labels

    @property
    def sqrt_eps(self) -> float:
        return math.sqrt(self.epsilon)

    def index(self, x) -> int:
        return self.ground.index(x)

    @property
    def x0_index(self) -> int:
        return self.ground.index(self.x0)

    # -- cached data
    def payoffs(self) -> np.ndarray:
        return self._payoffs

    @cached_property
    def _payoffs(self) -> np.ndarray:
        F = np.array([self.objective(c, s) for c, s in zip(self.ground.coords, self.ground.labels)], dtype=float)
        return F.reshape(self.n, self.dim)

    def f(self, x) -> np.ndarray:
        return self._payoffs[self.index(x)]

    def D(self, i: int):
        return self.structure.evaluate(self._payoffs[i])

    def D_of(self, x):
        return self.D(self.index(x))

    @cached_property
    def domination_sets(self) -> list:
        return [self.D(i) for i in range(self.n)]

    @property
    def theta(self):
        return self.domination_sets[self.x0_index]

    @cached_property
    def scalarization(self) -> ScalarizationSpec:
        return ScalarizationSpec(self.theta, self.k)

    def psi_values(self) -> np.ndarray:
        return self._psi

    @cached_property
    def _psi(self) -> np.ndarray:
        return gerstewitz_many(self.scalarization, self._payoffs - self._payoffs[self.x0_index], self.config.tol_geo)

    @cached_property
    def _qmatrix(self):
        if self.n <= Q_MATRIX_LIMIT:
            return self.quasimetric.matrix(self.ground)
        return None

    def q_row(self, i: int) -> np.ndarray:
        Q = self._qmatrix
        if Q is not None:
            return Q[i]
        return self.quasimetric.row(self.ground, i)

    def q_index(self, i: int, j: int) -> float:
        return float(self.q_row(i)[j])

    def q(self, x, u) -> float:
        return self.q_index(self.index(x), self.index(u))

    # -- vectorized membership of row r of V in D(f(x_r))
    @cached_property
    def _padded(self):
        sets = self.domination_sets
        if any(isinstance(S, GeneratorCone) for S in sets):
            return None
        R = max(S.A.shape[0] for S in sets)
        A = np.zeros((self.n, R, self.dim))
        b = np.zeros((self.n, R))
        for i, S in enumerate(sets):
            A[i, : S.A.shape[0]] = S.A
            b[i, : S.b.shape[0]] = S.b
        return A, b

    def contains_own(self, V, idx=None, tol: float | None = None) -> np.ndarray:
        """``V[r] in D(f(x_{idx[r]}))`` for each row ``r`` (``idx`` defaults to all points)."""
        tol = self.config.tol_geo if tol is None else tol
        V = np.atleast_2d(np.asarray(V, dtype=float))
        idx = np.arange(self.n) if idx is None else np.asarray(idx)
        pad = self._padded
        if pad is None:
            sets = self.domination_sets
            return np.array([contains(sets[j], v, tol) for j, v in zip(idx, V)], dtype=bool)
        A, b = pad
        slack = np.einsum("nrm,nm->nr", A[idx], V) - b[idx]
        return np.all(slack >= -tol, axis=1)

    def contains_in(self, j: int, V, tol: float | None = None) -> np.ndarray:
        """Rows of ``V`` tested against the single set ``D(f(x_j))``."""
        tol = self.config.tol_geo if tol is None else tol
        S = self.domination_sets[j]
        V = np.atleast_2d(np.asarray(V, dtype=float))
        if isinstance(S, GeneratorCone):
            return np.array([contains(S, v, tol) for v in V], dtype=bool)
        return np.all(V @ S.A.T - S.b >= -tol, axis=1)

    def with_changes(self, **kw) -> "ProblemInstance":
        """A copy with some fields replaced (caches are rebuilt)."""
        fields = dict(
            ground=self.ground, objective=self.objective, structure=self.structure,
            quasimetric=self.quasimetric, k=self.k, epsilon=self.epsilon, x0=self.x0,
            config=self.config, name=self.name, notes=self.notes,
        )
        fields.update(kw)
        return ProblemInstance(**fields)
