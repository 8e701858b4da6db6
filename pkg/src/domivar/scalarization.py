"""Nonlinear scalarization ``phi_{A,k}(y) = inf{t : y in t k - A}`` over polyhedral ``A``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PolyhedralSet, as_polyhedral, as_vector, contains, TOL_GEO

__all__ = [
    "ScalarizationSpec",
    "gerstewitz",
    "gerstewitz_many",
    "gerstewitz_oracle",
    "psi",
    "check_scalarization_conditions",
]

BRACKET = 1e6


@dataclass(eq=False)
class ScalarizationSpec:
    theta: PolyhedralSet
    k: np.ndarray

    def __post_init__(self):
        self.theta = as_polyhedral(self.theta)
        self.k = as_vector(self.k, "k")
        if self.k.size != self.theta.dim:
            raise ValueError("k and theta disagree in dimension")
        if not np.any(self.k != 0):
            raise ValueError("scalarization direction k must be nonzero")


def gerstewitz(spec: ScalarizationSpec, y, tol: float = TOL_GEO) -> float:
    """Closed-form value; ``+inf`` for an empty feasible set, ``-inf`` if unbounded below."""
    y = as_vector(y, "y")
    return float(gerstewitz_many(spec, y[None, :], tol)[0])


def gerstewitz_many(spec: ScalarizationSpec, Y, tol: float = TOL_GEO) -> np.ndarray:
    """Vectorized closed form for a stack of points (rows of ``Y``).

    Each halfspace ``<a, d> >= b`` of ``A`` gives ``t <a,k> >= <a,y> + b``:
    positive ``<a,k>`` bounds ``t`` from below, negative from above, and
    zero either always holds or rules out every ``t``.
    """
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    A, b = spec.theta.A, spec.theta.b
    ak = A @ spec.k
    rhs = Y @ A.T + b  # (n, r)
    pos, neg, zero = ak > tol, ak < -tol, np.abs(ak) <= tol

    lower = np.full(Y.shape[0], -math.inf)
    if pos.any():
        lower = (rhs[:, pos] / ak[pos]).max(axis=1)
    upper = np.full(Y.shape[0], math.inf)
    if neg.any():
        upper = (rhs[:, neg] / ak[neg]).min(axis=1)
    blocked = (rhs[:, zero] > tol).any(axis=1) if zero.any() else np.zeros(Y.shape[0], bool)
    empty = blocked | (upper < lower - tol * (1.0 + np.abs(lower)))
    out = np.where(empty, math.inf, lower)
    return out


def gerstewitz_oracle(
    spec: ScalarizationSpec, y, tol: float = 1e-9, bracket: float = BRACKET
) -> tuple[float, bool]:
    """Bracketed search over ``t`` using only membership ``t k - y in A``.

    Returns ``(value, exhausted)``; ``exhausted`` is set when the answer is
    an infinity because the bracket ``[-T, T]`` was left without a finite
    boundary.
    """
    y = as_vector(y, "y")
    k = spec.k
    theta = spec.theta

    def violation(t: float) -> float:
        return float(np.max(-theta.slack(t * k - y)))

    def feasible(t: float) -> bool:
        return contains(theta, t * k - y, tol=0.0)

    if feasible(-bracket):
        return -math.inf, True
    # the feasible t-set is an interval; locate a point of least violation
    lo, hi = -bracket, bracket
    for _ in range(300):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if violation(m1) <= violation(m2):
            hi = m2
        else:
            lo = m1
        if hi - lo < 1e-12 * (1.0 + abs(lo)):
            break
    t_best = 0.5 * (lo + hi)
    v_best = violation(t_best)
    scale = 1.0 + float(np.abs(y).max())
    if v_best > 1e-9 * scale:
        return math.inf, True
    if v_best > 0:  # feasible set is (numerically) a single point
        return t_best, False
    left, right = -bracket, t_best
    while right - left > tol * 1e-3 * (1.0 + abs(right)):
        mid = 0.5 * (left + right)
        if mid in (left, right):
            break
        if feasible(mid):
            right = mid
        else:
            left = mid
    return right, False


def psi(instance, x) -> float:
    """``phi_{Theta,k}(f(x) - f(x0))`` with ``Theta = D(f(x0))``."""
    i = instance.index(x)
    return float(instance.psi_values()[i])


def check_scalarization_conditions(spec: ScalarizationSpec, tol: float = TOL_GEO) -> dict:
    """Report one boolean per structural clause required of ``Theta`` and ``k``.

    Closedness holds by construction for polyhedral sets.  ``Theta + Theta``
    is automatic for a convex cone, ``Theta + cone(k) ⊆ Theta`` reduces to
    ``k in Theta`` and the last clause to ``-k not in Theta``.
    """
    theta = spec.theta
    if not theta.is_cone:
        raise ValueError("scalarization conditions are stated for cones only")
    k = spec.k
    clauses = {
        "closed": {"ok": True, "detail": "polyhedral sets are closed along every direction"},
        "zero_in_theta": {"ok": contains(theta, np.zeros(theta.dim), tol), "detail": "0 in Theta"},
        "additive": {"ok": True, "detail": "an intersection of linear halfspaces is a convex cone"},
        "k_recession": {
            "ok": contains(theta, k, tol),
            "detail": "Theta + cone(k) ⊆ Theta iff k in Theta",
        },
        "no_negative_k": {
            "ok": not contains(theta, -k, tol),
            "detail": "Theta ∩ -cone(k) = {0} iff -k not in Theta",
        },
    }
    return {"ok": all(c["ok"] for c in clauses.values()), "clauses": clauses}
