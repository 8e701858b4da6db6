"""Constructive Picard iteration for approximate efficient / nondominated points.

Both variants share one loop: from ``x_n`` pick the next iterate among the
worthwhile moves ``W(x_n)`` whose ``psi`` value lies within ``s_n`` of the
infimum over ``W(x_n)``, and stop once every worthwhile move is at
quasidistance zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import epsilon_efficient, epsilon_nondominated
from .domination import check_F3
from .geometry import LinearConstraint, as_polyhedral, lp_maximize, subset_cone
from .instance import SolverConfig
from .quasispace import forward_hausdorff_check
from .scalarization import check_scalarization_conditions

__all__ = [
    "Variant",
    "SolverConfig",
    "SolverResult",
    "AssumptionError",
    "worthwhile_set",
    "solve",
    "verify_certificates",
    "validate_assumptions",
    "brute_force_fixed_points",
]

BRUTE_FORCE_CAP = 10**4


class AssumptionError(RuntimeError):
    """A solver precondition failed; ``clause`` names the violated assumption."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class Variant(str, enum.Enum):
    EFFICIENT = "efficient"  # membership in the fixed set D(f(x0))
    NONDOMINATED = "nondominated"  # membership in D(f(u)) at the candidate

    @classmethod
    def parse(cls, v) -> "Variant":
        if isinstance(v, cls):
            return v
        aliases = {"efficient": cls.EFFICIENT, "efficientfixedtheta": cls.EFFICIENT,
                   "nondominated": cls.NONDOMINATED, "nondominatedvariable": cls.NONDOMINATED}
        key = str(v).replace("-", "").replace("_", "").lower()
        if key not in aliases:
            raise ValueError(f"unknown variant {v!r}")
        return aliases[key]


def _balances(instance, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``f(x_i) - f(u) - sqrt(eps) q(x_i, u) k`` for all ``u`` and the q-row."""
    F = instance.payoffs()
    qrow = instance.q_row(i)
    B = F[i] - F - instance.sqrt_eps * qrow[:, None] * instance.k
    return B, qrow


def worthwhile_mask(instance, variant, i: int) -> np.ndarray:
    variant = Variant.parse(variant)
    B, _ = _balances(instance, i)
    if variant is Variant.EFFICIENT:
        return instance.contains_in(instance.x0_index, B)
    return instance.contains_own(B)


def worthwhile_set(instance, variant, x) -> list:
    """Labels ``u`` whose perturbed balance from ``x`` lies in the variant's set."""
    mask = worthwhile_mask(instance, variant, instance.index(x))
    return [instance.labels[j] for j in np.flatnonzero(mask)]


@dataclass
class Step:
    label: str
    psi: float
    q_step: float  # q(x_{n-1}, x_n); 0 for the start
    slack: float  # s_{n-1} used to pick this iterate; 0 for the start
    w_size: int  # |W(x_n)|
    w_inf_psi: float  # inf of psi over W(x_n)

    def to_json(self):
        return {
            "label": self.label,
            "psi": self.psi,
            "q_step": self.q_step,
            "slack": self.slack,
            "w_size": self.w_size,
            "w_inf_psi": self.w_inf_psi,
        }


@dataclass
class SolverResult:
    variant: Variant
    x0: str
    x_star: str
    status: str  # fixed_point | stalled | max_iter
    steps: list
    claimed: dict
    certificates: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def iterates(self) -> list:
        return [s.label for s in self.steps]

    @property
    def psi_trace(self) -> list:
        return [s.psi for s in self.steps]

    @property
    def n_iter(self) -> int:
        return len(self.steps) - 1

    def to_json(self):
        return {
            "variant": self.variant.value,
            "x0": self.x0,
            "x_star": self.x_star,
            "status": self.status,
            "iterations": self.n_iter,
            "trace": [s.to_json() for s in self.steps],
            "claimed": self.claimed,
            "certificates": self.certificates,
            "config": self.config,
        }


def solve(instance, variant="efficient", config: SolverConfig | None = None,
          verify: bool = True) -> SolverResult:
    """Run the Picard iteration from ``x0``.

    The next iterate is taken from ``W(x_n)`` restricted to the band
    ``psi <= inf psi + s_n``; inside the band ``tie_break`` decides
    (``min_psi``: smallest psi then label order).  Points with ``psi = +inf``
    are never candidates.  Stops at a fixed point ``W(x) ⊆ {q(x, .) = 0}``,
    when the iterate repeats (possible only with ``epsilon = 0``), or at
    ``max_iter``.
    """
    variant = Variant.parse(variant)
    cfg = config or instance.config
    psi = instance.psi_values()
    labels = instance.labels
    i = instance.x0_index

    w0 = worthwhile_mask(instance, variant, i)
    if np.any(np.isneginf(psi[w0])):
        bad = labels[int(np.flatnonzero(w0 & np.isneginf(psi))[0])]
        raise AssumptionError(f"E1/F1 violated: psi unbounded below on W(x0) (psi({bad}) = -inf)", "E1")

    steps = [Step(labels[i], float(psi[i]), 0.0, 0.0, int(w0.sum()), float(_finite_min(psi[w0])))]
    status = "max_iter"
    mask = w0
    for n in range(cfg.max_iter + 1):
        qrow = instance.q_row(i)
        if np.all(qrow[mask] <= cfg.tol_eq):
            status = "fixed_point"
            break
        if n == cfg.max_iter:
            break
        cand = mask & np.isfinite(psi)
        if not cand.any():
            raise AssumptionError(
                f"scalarization domain exhausted: W({labels[i]}) has no point with finite psi", "E3")
        inf_psi = psi[cand].min()
        s_n = cfg.slack(n)
        band = np.flatnonzero(cand & (psi <= inf_psi + s_n))
        if cfg.tie_break == "min_psi":
            best = psi[band].min()
            nxt = int(band[psi[band] <= best + cfg.tol_eq][0])
        else:
            nxt = int(band[0])
        if nxt == i:
            status = "stalled"
            break
        q_step = float(qrow[nxt])
        i = nxt
        mask = worthwhile_mask(instance, variant, i)
        steps.append(Step(labels[i], float(psi[i]), q_step, s_n, int(mask.sum()),
                          float(_finite_min(psi[mask]))))

    x_star = labels[i]
    claimed = {
        "i": bool(worthwhile_mask(instance, variant, instance.x0_index)[i]),
        "ii": status == "fixed_point",
    }
    result = SolverResult(variant, instance.x0, x_star, status, steps, claimed, {}, cfg.to_json())
    if verify:
        result.certificates = verify_certificates(instance, variant, result)
    return result


def _finite_min(v: np.ndarray) -> float:
    v = v[np.isfinite(v)]
    return float(v.min()) if v.size else math.inf


def _member(instance, j: int, v) -> bool:
    return bool(instance.contains_in(j, np.asarray(v)[None, :])[0])


def verify_certificates(instance, variant, result) -> dict:
    """Re-derive the conclusions at ``x_star`` from scratch.

    ``x != x_star`` is read as ``q(x_star, x) > tol_eq``; under the
    forward-Hausdorff property the two readings coincide.
    """
    variant = Variant.parse(variant)
    cfg = instance.config
    tol_eq = cfg.tol_eq
    F = instance.payoffs()
    k = instance.k
    se = instance.sqrt_eps
    i0 = instance.x0_index
    s = instance.index(result.x_star)
    q0s = instance.q_index(i0, s)

    # (i): the move x0 -> x_star is worthwhile
    b0 = F[i0] - F[s] - se * q0s * k
    ref_i = i0 if variant is Variant.EFFICIENT else s
    cert_i = {"ok": _member(instance, ref_i, b0), "balance": b0.tolist(),
              "set": "D(f(x0))" if variant is Variant.EFFICIENT else "D(f(x_star))"}

    # (ii): no move away from x_star is worthwhile
    witnesses = []
    for j in range(instance.n):
        qsj = instance.q_index(s, j)
        if qsj <= tol_eq:
            continue
        b = F[s] - F[j] - se * qsj * k
        ref = i0 if variant is Variant.EFFICIENT else j
        if _member(instance, ref, b):
            witnesses.append(instance.labels[j])
    cert_ii = {"ok": not witnesses, "witnesses": witnesses[:50], "n_witnesses": len(witnesses),
               "set": "D(f(x0))" if variant is Variant.EFFICIENT else "D(f(x))"}

    # (iii): localization, guaranteed only under the approximate-solution premise
    if variant is Variant.EFFICIENT:
        premise = epsilon_efficient(instance, instance.x0, instance.epsilon, k)
    else:
        premise = epsilon_nondominated(instance, instance.x0, instance.epsilon, k)
    holds = q0s <= se + tol_eq
    if holds:
        status = "holds"
    elif premise:
        status = "failed"
    else:
        status = "premise absent"
    cert_iii = {"ok": holds, "status": status, "q_x0_xstar": q0s, "bound": se, "premise": premise}
    if instance.epsilon == 0:
        cert_iii["note"] = "epsilon = 0: the bound reads q(x0, x_star) = 0"

    out = {"i": cert_i, "ii": cert_ii, "iii": cert_iii,
           "agrees_with_solver": cert_i["ok"] == result.claimed["i"] and cert_ii["ok"] == result.claimed["ii"]}

    if variant is Variant.EFFICIENT:
        e5, gen = subset_cone(instance.domination_sets[s], instance.theta, cfg.tol_geo)
        strong = None
        if e5:
            bad = []
            for j in range(instance.n):
                qsj = instance.q_index(s, j)
                if qsj > tol_eq and _member(instance, s, F[s] - F[j] - se * qsj * k):
                    bad.append(instance.labels[j])
            strong = {"ok": not bad, "witnesses": bad[:50]}
        out["E5"] = {"ok": e5, "failing_generator": None if gen is None else gen.tolist(),
                     "strong_ii": strong}
    return out


def _quasibound_radius(instance, idx) -> float:
    """Largest over ``idx`` of ``min ||m||_inf`` subject to ``f(x) - m in Theta``."""
    theta = as_polyhedral(instance.theta)
    F = instance.payoffs()
    m = instance.dim
    worst = 0.0
    cache = {}
    for i in idx:
        y = F[i]
        key = y.tobytes()
        if key in cache:
            r = cache[key]
        else:
            cons = []
            for a, b in zip(theta.A, theta.b):
                # <a, y - m> >= b  ->  <a, m> <= <a, y> - b
                cons.append(LinearConstraint(list(a) + [0.0], "<=", float(a @ y - b)))
            for d in range(m):
                e = np.zeros(m + 1)
                e[d], e[m] = 1.0, -1.0
                cons.append(LinearConstraint(e, "<=", 0.0))
                e = np.zeros(m + 1)
                e[d], e[m] = -1.0, -1.0
                cons.append(LinearConstraint(e, "<=", 0.0))
            obj = np.zeros(m + 1)
            obj[m] = -1.0
            res = lp_maximize(obj, cons)
            r = -res.value if res.status == "optimal" else math.inf
            cache[key] = r
        worst = max(worst, r)
    return worst


def quasiboundedness_probe(instance, growth_limit: float = 1.5) -> dict:
    """Compare the Theta-lower radius of ``f`` on the grid and on its inner half.

    If ``f(X) ⊆ M + Theta`` for a bounded ``M`` the radius saturates, so a
    radius that keeps growing with the grid (ratio above ``growth_limit``)
    indicates that no bounded ``M`` exists.  Finite sets are trivially
    quasibounded and are reported as such.
    """
    if instance.ground.kind != "grid":
        return {"ok": True, "applicable": False, "detail": "finite ground set"}
    C = instance.ground.coords
    lo, hi = C.min(axis=0), C.max(axis=0)
    centre, half = (lo + hi) / 2, (hi - lo) / 4
    inner = np.flatnonzero(np.all(np.abs(C - centre) <= half + 1e-12, axis=1))
    r_full = _quasibound_radius(instance, range(instance.n))
    r_inner = _quasibound_radius(instance, inner)
    if r_full <= instance.config.tol_geo:
        ratio = 1.0
    elif r_inner <= instance.config.tol_geo:
        ratio = math.inf
    else:
        ratio = r_full / r_inner
    return {
        "ok": bool(ratio <= growth_limit),
        "applicable": True,
        "radius_full": r_full,
        "radius_inner": r_inner,
        "growth_ratio": ratio,
        "growth_limit": growth_limit,
    }


def validate_assumptions(instance, variant="efficient", f3_budget: int = 500,
                         seed: int | None = 0, probe: bool = True) -> dict:
    """Diagnostics for the solver's assumptions.

    The limiting-monotonicity assumption is not decidable up front and is
    checked on the produced trace instead (``trace_membership``).
    """
    variant = Variant.parse(variant)
    psi = instance.psi_values()
    w0 = worthwhile_mask(instance, variant, instance.x0_index)
    inf_psi = float(psi[w0].min())
    report = {
        "variant": variant.value,
        "E1": {"ok": bool(np.isfinite(inf_psi)), "inf_psi": inf_psi,
               "W_x0": [instance.labels[j] for j in np.flatnonzero(w0)]},
    }
    try:
        report["E3"] = check_scalarization_conditions(instance.scalarization, instance.config.tol_geo)
    except ValueError as exc:
        report["E3"] = {"ok": False, "error": str(exc)}
    if variant is Variant.NONDOMINATED:
        report["F3"] = check_F3(instance.structure, instance, f3_budget, seed,
                                points=np.flatnonzero(w0))
    ok, wit = forward_hausdorff_check(instance.quasimetric, instance.ground)
    report["E4"] = {"ok": ok, "witness": None if wit is None else list(wit)}
    if probe:
        report["quasibounded"] = quasiboundedness_probe(instance)
    try:
        res = solve(instance, variant, verify=False)
        members = [bool(worthwhile_mask(instance, variant, instance.index(lab))[instance.index(res.x_star)])
                   for lab in res.iterates]
        report["E2"] = {"ok": all(members), "checked_on": "trace", "trace_length": len(members)}
    except AssumptionError as exc:
        report["E2"] = {"ok": False, "error": str(exc)}
    keys = ["E1", "E3", "E4", "E2"] + (["F3"] if variant is Variant.NONDOMINATED else [])
    report["ok"] = all(report[k]["ok"] for k in keys)
    return report


def brute_force_fixed_points(instance, variant="efficient") -> list:
    """All ``x`` with ``W(x) ⊆ {u : q(x, u) <= tol_eq}``, by exhaustive scan."""
    variant = Variant.parse(variant)
    if instance.n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_CAP} points, got {instance.n}")
    tol = instance.config.tol_eq
    out = []
    for i in range(instance.n):
        mask = worthwhile_mask(instance, variant, i)
        if np.all(instance.q_row(i)[mask] <= tol):
            out.append(instance.labels[i])
    return out
