"""Variable domination structures ``y -> D(y)`` given as ordered piecewise rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expr import Expression, Predicate, parse_expression, parse_predicate, ExpressionError
from .geometry import (
    GeneratorCone,
    PolyhedralSet,
    TOL_GEO,
    as_vector,
    contains,
    generators_to_halfspaces_2d,
    subset_cone,
    zero_cone,
)
from .scalarization import ScalarizationSpec, check_scalarization_conditions

__all__ = [
    "SetTemplate",
    "Rule",
    "DominationStructure",
    "constant_structure",
    "leq_N",
    "leq_E",
    "check_F3",
]


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class SetTemplate:
    """Either generator expressions or halfspace expressions in ``y``.

    ``generators`` is a list of generators, each a list of ``m`` expressions;
    ``halfspaces`` a list of ``(normal expressions, offset expression)``.
    """

    kind: str
    generators: tuple = ()
    halfspaces: tuple = ()

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence]) -> "SetTemplate":
        return cls("generators", generators=tuple(tuple(parse_expression(e) for e in g) for g in gens))

    @classmethod
    def from_halfspaces(cls, hs: Sequence) -> "SetTemplate":
        rows = []
        for h in hs:
            if isinstance(h, dict):
                normal, offset = h["normal"], h.get("offset", 0)
            else:
                normal, offset = h
            rows.append((tuple(parse_expression(e) for e in normal), parse_expression(offset)))
        return cls("halfspaces", halfspaces=tuple(rows))

    @property
    def width(self) -> int:
        rows = self.generators if self.kind == "generators" else [n for n, _ in self.halfspaces]
        return len(rows[0]) if rows else 0

    def instantiate(self, y: np.ndarray):
        m = y.size
        if self.kind == "generators":
            G = np.array([[e(y) for e in g] for g in self.generators], dtype=float).reshape(-1, m)
            G = G[np.any(G != 0, axis=1)]
            if G.shape[0] == 0:
                return zero_cone(m)
            cone = GeneratorCone(G)
            if m == 2:
                return generators_to_halfspaces_2d(cone)
            return cone
        A = np.array([[e(y) for e in n] for n, _ in self.halfspaces], dtype=float).reshape(-1, m)
        b = np.array([o(y) for _, o in self.halfspaces], dtype=float)
        return PolyhedralSet(A, b)

    def to_json(self):
        if self.kind == "generators":
            return {"generators": [[e.source for e in g] for g in self.generators]}
        return {
            "halfspaces": [
                {"normal": [e.source for e in n], "offset": o.source} for n, o in self.halfspaces
            ]
        }


@dataclass(frozen=True)
class Rule:
    when: Predicate
    template: SetTemplate


@dataclass(eq=False)
class DominationStructure:
    """First matching rule wins; ``default`` applies when nothing matches."""

    dim: int
    rules: list = field(default_factory=list)
    default: SetTemplate | None = None

    def __post_init__(self):
        self._cache: dict = {}
        for tpl in [r.template for r in self.rules] + ([self.default] if self.default else []):
            if tpl.width != self.dim:
                raise StructureError(f"set template width {tpl.width} differs from dimension {self.dim}")

    def template_for(self, y) -> SetTemplate:
        for rule in self.rules:
            if rule.when(y):
                return rule.template
        if self.default is None:
            raise StructureError(f"no rule matches y={list(y)} and no default is given")
        return self.default

    def evaluate(self, y):
        y = as_vector(y, "y")
        if y.size != self.dim:
            raise StructureError(f"payoff of length {y.size} for a structure of dimension {self.dim}")
        key = tuple(y.tolist())
        hit = self._cache.get(key)
        if hit is None:
            hit = self.template_for(y).instantiate(y)
            self._cache[key] = hit
        return hit

    def to_json(self):
        out = {
            "rules": [{"when": r.when.source, **r.template.to_json()} for r in self.rules],
        }
        if self.default is not None:
            out["default"] = self.default.to_json()
        return out


def constant_structure(template: SetTemplate, dim: int) -> DominationStructure:
    return DominationStructure(dim, [], template)


def pareto_template(dim: int) -> SetTemplate:
    eye = np.eye(dim)
    return SetTemplate.from_generators([[repr(float(v)) for v in row] for row in eye])


def leq_N(structure: DominationStructure, v, y, tol: float = TOL_GEO) -> bool:
    """``v <=_N y``: ``y - v`` lies in ``D(v)``."""
    v, y = as_vector(v), as_vector(y)
    return contains(structure.evaluate(v), y - v, tol)


def leq_E(structure: DominationStructure, v, y, tol: float = TOL_GEO) -> bool:
    """``v <=_E y``: ``y - v`` lies in ``D(y)``."""
    v, y = as_vector(v), as_vector(y)
    return contains(structure.evaluate(y), y - v, tol)


def _pairs(n: int, budget: int, rng: np.random.Generator):
    if n * n <= budget:
        return [(i, j) for i in range(n) for j in range(n)], True
    idx = rng.integers(0, n, size=(budget, 2))
    return [tuple(map(int, p)) for p in idx], False


def check_F3(structure: DominationStructure, instance, sample_budget: int = 500,
             seed: int | None = None, tol: float = TOL_GEO, points=None) -> dict:
    """Structural clauses needed by the nondominated variant.

    ``a``: scalarization conditions on ``Theta = D(f(x0))``;
    ``b``: ``k in D(f(x))``;
    ``c``: whenever ``f(u) - f(w) in D(f(w))``, every generator of
    ``D(f(u))`` lies in ``D(f(w))``;
    ``d``: ``D(f(x)) ⊆ Theta``.
    Pairs are exhaustive when ``n**2 <= sample_budget`` and sampled otherwise.
    ``points`` restricts every clause to a subset of ground indices.
    """
    rng = np.random.default_rng(seed)
    F_all = instance.payoffs()
    labels_all = instance.ground.labels
    theta = structure.evaluate(F_all[instance.x0_index])
    sub = np.arange(F_all.shape[0]) if points is None else np.asarray(points, dtype=int)
    F = F_all[sub]
    labels = [labels_all[i] for i in sub]
    n = F.shape[0]
    k = instance.k

    try:
        a = check_scalarization_conditions(ScalarizationSpec(theta, k), tol)
    except ValueError as exc:
        a = {"ok": False, "clauses": {}, "error": str(exc)}

    if n <= sample_budget:
        picked, pts_exhaustive = list(range(n)), True
    else:
        picked, pts_exhaustive = sorted(set(rng.integers(0, n, size=sample_budget).tolist())), False

    b_fail = [labels[i] for i in picked if not contains(structure.evaluate(F[i]), k, tol)]

    d_fail = []
    for i in picked:
        ok, g = subset_cone(structure.evaluate(F[i]), theta, tol)
        if not ok:
            d_fail.append({"x": labels[i], "generator": g.tolist()})

    pairs, pairs_exhaustive = _pairs(n, sample_budget, rng)
    c_fail, c_active = [], 0
    for u, w in pairs:
        Dw = structure.evaluate(F[w])
        if not contains(Dw, F[u] - F[w], tol):
            continue
        c_active += 1
        ok, g = subset_cone(structure.evaluate(F[u]), Dw, tol)
        if not ok:
            c_fail.append({"u": labels[u], "w": labels[w], "generator": g.tolist()})

    return {
        "ok": a["ok"] and not b_fail and not c_fail and not d_fail,
        "F3-a": a,
        "F3-b": {"ok": not b_fail, "failures": b_fail[:20], "n_failures": len(b_fail)},
        "F3-c": {
            "ok": not c_fail,
            "pairs_checked": len(pairs),
            "pairs_related": c_active,
            "failures": c_fail[:20],
            "n_failures": len(c_fail),
        },
        "F3-d": {"ok": not d_fail, "failures": d_fail[:20], "n_failures": len(d_fail)},
        "exhaustive": pts_exhaustive and pairs_exhaustive,
    }


def parse_structure(doc: dict, dim: int) -> DominationStructure:
    """Build a structure from its JSON form (``rules`` list plus ``default``)."""
    def template(t, where):
        if "generators" in t:
            return SetTemplate.from_generators(t["generators"])
        if "halfspaces" in t:
            try:
                return SetTemplate.from_halfspaces(t["halfspaces"])
            except (KeyError, TypeError) as exc:
                raise StructureError(f"{where}: halfspaces need 'normal' (and optional 'offset'): {exc}") from None
        if t.get("pareto"):
            return pareto_template(dim)
        raise StructureError(f"{where}: a set template needs 'generators' or 'halfspaces'")

    rules = []
    for i, r in enumerate(doc.get("rules", [])):
        try:
            rules.append(Rule(parse_predicate(r.get("when", "true")), template(r, f"rules[{i}]")))
        except ExpressionError as exc:
            raise StructureError(f"rules[{i}]: {exc}") from None
    default = template(doc["default"], "default") if "default" in doc else None
    return DominationStructure(dim, rules, default)
