"""Exact and approximate solution classification on finite ground sets."""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .geometry import (
    GeneratorCone,
    PolyhedralSet,
    contains,
    contains_many,
    pointedness_pair,
)

__all__ = [
    "ClassificationRow",
    "ThetaUnion",
    "classify",
    "theta_sets",
    "check_pointedness_condition",
    "epsilon_efficient",
    "epsilon_nondominated",
    "verify_relationship_propositions",
]

GRID_CAP = 10**6


@dataclass
class ClassificationRow:
    label: str
    conventional_nondominated: bool
    nondominated: bool
    conventional_efficient: bool
    efficient: bool
    theta_i_minimal: bool
    theta_u_minimal: bool

    def to_json(self):
        return asdict(self)


FLAGS = [
    "conventional_nondominated",
    "nondominated",
    "conventional_efficient",
    "efficient",
    "theta_i_minimal",
    "theta_u_minimal",
]


class ThetaUnion:
    """Union of finitely many sets; membership means membership in any one."""

    def __init__(self, members):
        self.members = list(members)

    def contains(self, d, tol=1e-9) -> bool:
        return any(contains(S, d, tol) for S in self.members)

    def contains_many(self, D, tol=1e-9) -> np.ndarray:
        D = np.atleast_2d(D)
        out = np.zeros(D.shape[0], dtype=bool)
        for S in self.members:
            todo = ~out
            if not todo.any():
                break
            out[todo] = contains_many(S, D[todo], tol)
        return out

    def __len__(self):
        return len(self.members)


def _unique_sets(instance) -> list:
    seen, out = set(), []
    for S in instance.domination_sets:
        if isinstance(S, GeneratorCone):
            key = ("g", S.G.tobytes())
        else:
            key = ("h", S.A.tobytes(), S.b.tobytes())
        if key not in seen:
            seen.add(key)
            out.append(S)
    return out


def theta_sets(instance):
    """``(theta_i, theta_u)``: intersection as one halfspace system, union as a list.

    ``theta_i`` is ``None`` if some member set is only generator-represented.
    """
    members = _unique_sets(instance)
    theta_u = ThetaUnion(members)
    if any(isinstance(S, GeneratorCone) for S in members):
        return None, theta_u
    A = np.vstack([S.A for S in members])
    b = np.concatenate([S.b for S in members])
    # drop exact duplicate rows
    _, keep = np.unique(np.hstack([A, b[:, None]]), axis=0, return_index=True)
    keep = np.sort(keep)
    return PolyhedralSet(A[keep], b[keep]), theta_u


def _theta_i_contains(theta_i, members, D, tol):
    if theta_i is not None:
        return contains_many(theta_i, D, tol)
    out = np.ones(len(D), dtype=bool)
    for S in members:
        out &= contains_many(S, D, tol)
    return out


def classify(instance) -> list[ClassificationRow]:
    """Six solution flags per ground-set point, in label order.

    With ``d = f(xbar) - f(x)`` over all ``x`` with ``f(x) != f(xbar)``:
    nondominated iff ``d not in D(f(x))`` always; efficient iff
    ``d not in D(f(xbar))`` always.  The conventional flags require the
    reverse relation whenever the forward one holds, and the theta flags
    test ``d`` against the intersection / union of all domination sets.
    """
    n = instance.n
    if n > GRID_CAP:
        raise ValueError(f"ground set has {n} points; classify is limited to {GRID_CAP}")
    cfg = instance.config
    tol, tol_eq = cfg.tol_geo, cfg.tol_eq
    F = instance.payoffs()
    theta_i, theta_u = theta_sets(instance)
    rows = []
    for j in range(n):
        d = F[j] - F  # d[x] = f(xbar) - f(x)
        differ = np.abs(d).max(axis=1) > tol_eq
        x_leqN_xbar = instance.contains_own(d, tol=tol)  # f(x) <=_N f(xbar)
        xbar_leqN_x = instance.contains_in(j, -d, tol)  # f(xbar) <=_N f(x)
        x_leqE_xbar = instance.contains_in(j, d, tol)  # f(x) <=_E f(xbar)
        xbar_leqE_x = instance.contains_own(-d, tol=tol)  # f(xbar) <=_E f(x)
        in_i = _theta_i_contains(theta_i, theta_u.members, d, tol)
        in_u = theta_u.contains_many(d, tol)
        rows.append(
            ClassificationRow(
                label=instance.labels[j],
                conventional_nondominated=bool(np.all(~x_leqN_xbar | xbar_leqN_x)),
                nondominated=bool(not np.any(differ & x_leqN_xbar)),
                conventional_efficient=bool(np.all(~x_leqE_xbar | xbar_leqE_x)),
                efficient=bool(not np.any(differ & x_leqE_xbar)),
                theta_i_minimal=bool(not np.any(differ & in_i)),
                theta_u_minimal=bool(not np.any(differ & in_u)),
            )
        )
    return rows


def solution_sets(rows) -> dict:
    return {flag: [r.label for r in rows if getattr(r, flag)] for flag in FLAGS}


def check_pointedness_condition(instance, xbar) -> tuple[bool, str | None]:
    """``D(f(x)) ∩ -D(f(xbar)) = {0}`` for every ``x``; returns the first failing ``x``."""
    j = instance.index(xbar)
    sets = instance.domination_sets
    Dbar = sets[j]
    memo: dict = {}
    for i, S in enumerate(sets):
        key = id(S)
        if key not in memo:
            memo[key] = pointedness_pair(S, Dbar)[0]
        if not memo[key]:
            return False, instance.labels[i]
    return True, None


def epsilon_efficient(instance, x, eps: float, k=None) -> bool:
    """No ``u`` with ``f(x) - eps k - f(u) in D(f(x)) \\ {0}``."""
    k = instance.k if k is None else np.asarray(k, dtype=float)
    j = instance.index(x)
    F = instance.payoffs()
    V = F[j] - eps * k - F
    nonzero = np.abs(V).max(axis=1) > instance.config.tol_eq
    return not bool(np.any(nonzero & instance.contains_in(j, V)))


def epsilon_nondominated(instance, x, eps: float, k=None) -> bool:
    """For all ``u``: ``f(x) - eps k - f(u) not in D(f(u)) \\ {0}``."""
    k = instance.k if k is None else np.asarray(k, dtype=float)
    j = instance.index(x)
    F = instance.payoffs()
    V = F[j] - eps * k - F
    nonzero = np.abs(V).max(axis=1) > instance.config.tol_eq
    return not bool(np.any(nonzero & instance.contains_own(V)))


def _tilde_efficient(instance, j, theta_u) -> bool:
    """Efficiency for ``y -> D(f(xbar)) \\ (-theta_u)``, decided pointwise.

    Only the vectors ``d = f(xbar) - f(x)`` matter, so the set difference
    never has to be represented: ``d`` is in it iff ``d in D(f(xbar))`` and
    ``-d`` lies in no member of the union.
    """
    F = instance.payoffs()
    d = F[j] - F
    differ = np.abs(d).max(axis=1) > instance.config.tol_eq
    hit = instance.contains_in(j, d) & ~theta_u.contains_many(-d)
    return not bool(np.any(differ & hit))


def verify_relationship_propositions(instance, rows=None) -> dict:
    """Check the implications between solution notions point by point.

    Any counterexample indicates an implementation error.
    """
    rows = classify(instance) if rows is None else rows
    _, theta_u = theta_sets(instance)
    checks = {
        "strict_nd_implies_conventional": [],
        "strict_eff_implies_conventional": [],
        "conventional_eff_implies_tilde_eff": [],
        "eff_implies_own_theta_minimal": [],
        "nd_implies_theta_i_minimal": [],
        "theta_u_minimal_implies_nd": [],
        "pointed_conventional_nd_implies_nd": [],
        "pointed_conventional_eff_implies_eff": [],
    }
    F = instance.payoffs()
    tol_eq = instance.config.tol_eq
    pointed_count = 0
    for j, r in enumerate(rows):
        lab = r.label
        if r.nondominated and not r.conventional_nondominated:
            checks["strict_nd_implies_conventional"].append(lab)
        if r.efficient and not r.conventional_efficient:
            checks["strict_eff_implies_conventional"].append(lab)
        if r.conventional_efficient and not _tilde_efficient(instance, j, theta_u):
            checks["conventional_eff_implies_tilde_eff"].append(lab)
        if r.efficient:
            d = F[j] - F
            differ = np.abs(d).max(axis=1) > tol_eq
            if np.any(differ & instance.contains_in(j, d)):
                checks["eff_implies_own_theta_minimal"].append(lab)
        if r.nondominated and not r.theta_i_minimal:
            checks["nd_implies_theta_i_minimal"].append(lab)
        if r.theta_u_minimal and not r.nondominated:
            checks["theta_u_minimal_implies_nd"].append(lab)
        pointed, _ = check_pointedness_condition(instance, lab)
        if pointed:
            pointed_count += 1
            if r.conventional_nondominated and not r.nondominated:
                checks["pointed_conventional_nd_implies_nd"].append(lab)
            if r.conventional_efficient and not r.efficient:
                checks["pointed_conventional_eff_implies_eff"].append(lab)
    return {
        "ok": not any(checks.values()),
        "counterexamples": checks,
        "points": len(rows),
        "pointed_points": pointed_count,
    }
