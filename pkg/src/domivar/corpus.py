"""Seeded random instances for property suites.

The seed comes from ``DOMIVAR_SEED`` when set.  Payoffs are small integers so
that region predicates can use exact equality.
"""
from __future__ import annotations

import math
import os

import numpy as np

from .io import bundled_names, load_instance, parse_instance

DEFAULT_SEED = 20240531


def corpus_seed(default: int = DEFAULT_SEED) -> int:
    raw = os.environ.get("DOMIVAR_SEED")
    return int(raw) if raw not in (None, "") else default


def random_pointed_cone(rng: np.random.Generator, min_width=math.pi / 8, max_width=7 * math.pi / 8):
    """Two generators spanning a pointed planar cone, rounded to 3 decimals."""
    a = rng.uniform(0, 2 * math.pi)
    w = rng.uniform(min_width, max_width)
    g = np.array([[math.cos(a), math.sin(a)], [math.cos(a + w), math.sin(a + w)]])
    return np.round(g, 3)


def bisector(gens) -> np.ndarray:
    g = np.asarray(gens, dtype=float)
    k = (g / np.linalg.norm(g, axis=1, keepdims=True)).sum(axis=0)
    return np.round(k / np.abs(k).max(), 6)


def _rule(y, gens):
    return {"when": f"y[0] == {float(y[0])!r} and y[1] == {float(y[1])!r}",
            "generators": [[float(v) for v in g] for g in gens]}


def random_instance_doc(rng: np.random.Generator, n: int, variable: bool = True,
                        halfplane_prob: float = 0.0, name: str = "random") -> dict:
    """A 2-D payoff instance on ``n`` labeled points with an asymmetric quasimetric.

    Constant structures use a single random pointed cone; variable ones draw
    a cone per distinct payoff (optionally a halfplane).  ``k`` bisects the
    cone at ``f(x0)`` so the scalarization clauses hold there.
    """
    coords = rng.choice(np.arange(-20, 21), size=(n, 2), replace=True)
    while len({tuple(c) for c in coords}) < n:
        coords = rng.choice(np.arange(-20, 21), size=(n, 2), replace=True)
    F = rng.integers(-5, 6, size=(n, 2))
    labels = [str(i + 1) for i in range(n)]
    x0 = int(rng.integers(0, n))
    base = random_pointed_cone(rng)
    rules = []
    if variable:
        seen = {}
        for y in map(tuple, F):
            if y in seen:
                continue
            if halfplane_prob and rng.random() < halfplane_prob:
                g = random_pointed_cone(rng)[0]
                gens = np.vstack([g, -g, np.round([-g[1], g[0]], 3)])
            else:
                gens = random_pointed_cone(rng)
            seen[y] = gens
            rules.append(_rule(y, gens))
        theta_gens = seen[tuple(F[x0])]
        if len(theta_gens) > 2:  # halfplane at x0: pick a direction inside it
            theta_gens = theta_gens[[0, 2]]
    else:
        theta_gens = base
    k = bisector(theta_gens)
    return {
        "schema": 1,
        "name": name,
        "dimension": 2,
        "ground": {"points": [{"label": s, "coords": [float(v) for v in c]} for s, c in zip(labels, coords)]},
        "objective": {"table": {s: [float(v) for v in f] for s, f in zip(labels, F)}},
        "structure": {"rules": rules, "default": {"generators": [[float(v) for v in g] for g in base]}},
        "quasimetric": {
            "type": "weighted_asymmetric",
            "alpha": [float(v) for v in np.round(rng.uniform(0.05, 0.6, 2), 3)],
            "beta": [float(v) for v in np.round(rng.uniform(0.05, 0.6, 2), 3)],
        },
        "k": [float(v) for v in k],
        "epsilon": float(rng.choice([0.25, 1.0, 4.0])),
        "x0": labels[x0],
    }


def random_instances(count: int, n_range=(5, 50), seed: int | None = None, variable_share: float = 0.5,
                     halfplane_prob: float = 0.0):
    rng = np.random.default_rng(corpus_seed() if seed is None else seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        variable = bool(rng.random() < variable_share)
        doc = random_instance_doc(rng, n, variable, halfplane_prob, name=f"random-{i:03d}")
        out.append(parse_instance(doc))
    return out


def bundled_corpus(include_large: bool = False):
    """Bundled instances that load cleanly (files meant to fail validation are skipped)."""
    out = []
    for name in bundled_names():
        try:
            inst = load_instance(name)
        except ValueError:
            continue
        if include_large or inst.n <= 500:
            out.append(inst)
    return out
