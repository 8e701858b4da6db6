"""Moves, worthwhile balances and traps built on the Picard solver.

A move ``x -> u`` has advantage ``f(x) - f(u)`` and inconvenience
``sqrt(eps) q(x, u) k``; it is worthwhile when the balance (their
difference) lies in a domination set.  A trap is a point worth reaching
from ``x0`` that is not worth leaving.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .evp import Variant, solve

__all__ = ["TrapKind", "MoveEvaluation", "TrapCertificate", "evaluate_move", "find_trap", "verify_trap"]


class TrapKind(str, enum.Enum):
    EX_ANTE = "ex-ante"
    EX_POST = "ex-post"

    @classmethod
    def parse(cls, v) -> "TrapKind":
        if isinstance(v, cls):
            return v
        key = str(v).replace("_", "-").lower()
        for kind in cls:
            if kind.value == key or kind.value.replace("-", "") == key.replace("-", ""):
                return kind
        raise ValueError(f"unknown trap kind {v!r}")

    @property
    def variant(self) -> Variant:
        return Variant.EFFICIENT if self is TrapKind.EX_ANTE else Variant.NONDOMINATED


@dataclass
class MoveEvaluation:
    source: str
    target: str
    advantage: np.ndarray
    inconvenience: np.ndarray
    balance: np.ndarray
    ex_ante_worthwhile: bool
    ex_post_worthwhile: bool

    def to_json(self):
        return {
            "from": self.source,
            "to": self.target,
            "advantage": self.advantage.tolist(),
            "inconvenience": self.inconvenience.tolist(),
            "balance": self.balance.tolist(),
            "ex_ante_worthwhile": self.ex_ante_worthwhile,
            "ex_post_worthwhile": self.ex_post_worthwhile,
        }


def _in(instance, j, v) -> bool:
    return bool(instance.contains_in(j, v[None, :])[0])


def evaluate_move(instance, x, u) -> MoveEvaluation:
    """Advantage, inconvenience and balance of ``x -> u``.

    Ex ante: balance in ``D(f(x))`` (judged before moving);
    ex post: balance in ``D(f(u))`` (judged after moving).
    """
    i, j = instance.index(x), instance.index(u)
    F = instance.payoffs()
    adv = F[i] - F[j]
    inc = instance.sqrt_eps * instance.q_index(i, j) * instance.k
    bal = adv - inc
    return MoveEvaluation(instance.labels[i], instance.labels[j], adv, inc, bal,
                          _in(instance, i, bal), _in(instance, j, bal))


@dataclass
class TrapCertificate:
    kind: TrapKind
    x0: str
    x_star: str
    condition_i: bool
    condition_ii: bool
    witnesses_i: list = field(default_factory=list)
    witnesses_ii: list = field(default_factory=list)
    trace: list = field(default_factory=list)
    solver_status: str = ""

    @property
    def valid(self) -> bool:
        return self.condition_i and self.condition_ii

    def to_json(self):
        return {
            "kind": self.kind.value,
            "x0": self.x0,
            "x_star": self.x_star,
            "condition_i": self.condition_i,
            "condition_ii": self.condition_ii,
            "witnesses_i": self.witnesses_i,
            "witnesses_ii": self.witnesses_ii,
            "trace": self.trace,
            "solver_status": self.solver_status,
            "valid": self.valid,
        }


def _trap_conditions(instance, kind: TrapKind, x_star) -> tuple[bool, list, bool, list]:
    F = instance.payoffs()
    k, se, tol_eq = instance.k, instance.sqrt_eps, instance.config.tol_eq
    i0, s = instance.x0_index, instance.index(x_star)
    b0 = F[i0] - F[s] - se * instance.q_index(i0, s) * k
    ref = i0 if kind is TrapKind.EX_ANTE else s
    cond_i = _in(instance, ref, b0)
    wit_i = [] if cond_i else [{"from": instance.x0, "to": instance.labels[s], "balance": b0.tolist()}]
    wit_ii = []
    for j in range(instance.n):
        qsj = instance.q_index(s, j)
        if qsj <= tol_eq:
            continue
        b = F[s] - F[j] - se * qsj * k
        ref = i0 if kind is TrapKind.EX_ANTE else j
        if _in(instance, ref, b):
            wit_ii.append({"from": instance.labels[s], "to": instance.labels[j], "balance": b.tolist()})
    return cond_i, wit_i, not wit_ii, wit_ii


def find_trap(instance, kind="ex-ante") -> TrapCertificate:
    """Run the solver variant matching ``kind`` and certify its terminal point."""
    kind = TrapKind.parse(kind)
    res = solve(instance, kind.variant, verify=False)
    ci, wi, cii, wii = _trap_conditions(instance, kind, res.x_star)
    return TrapCertificate(kind, instance.x0, res.x_star, ci, cii, wi, wii[:50],
                           [s.to_json() for s in res.steps], res.status)


def verify_trap(instance, cert: TrapCertificate, explain: bool = False):
    """Recheck both trap conditions from the instance alone.

    Returns a boolean, or ``(ok, witnesses)`` with ``explain=True``.
    """
    kind = TrapKind.parse(cert.kind)
    if instance.labels[instance.index(cert.x0)] != instance.x0:
        ok, detail = False, {"x0": f"certificate starts at {cert.x0!r}, instance at {instance.x0!r}"}
    else:
        ci, wi, cii, wii = _trap_conditions(instance, kind, cert.x_star)
        ok, detail = ci and cii, {"i": wi, "ii": wii[:50]}
    return (ok, detail) if explain else ok
