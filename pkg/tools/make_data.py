"""Regenerate the bundled instance files under src/domivar/data."""
import json
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "domivar" / "data"
PARETO = {"generators": [["1", "0"], ["0", "1"]]}


def pts(labels):
    return {"points": [{"label": str(s), "coords": [float(i + 1)]} for i, s in enumerate(labels)]}


def diag_cone(var, sign):
    c = f"0.5 {sign} {var}/(2*abs({var})+1)"
    return {"generators": [["1", c], [c, "1"]]}


docs = {
    "example_2_5": {
        "name": "example_2_5",
        "dimension": 2,
        "ground": pts([1, 2, 3]),
        "objective": {"table": {"1": [0, 0], "2": [4, -2], "3": [-2, 1]}},
        "structure": {"rules": [
            {"when": "y[0] == 0 and y[1] == 0", "generators": [["1", "0"], ["0", "1"]]},
            {"when": "y[0] == 4 and y[1] == -2", "generators": [["1", "0"], ["1", "1"], ["-1", "-1"]]},
            {"when": "y[0] == -2 and y[1] == 1", "generators": [["0", "-1"], ["1", "1"]]},
        ]},
        "quasimetric": {"type": "table", "default": 1},
        "k": [1, 1], "epsilon": 1, "x0": "1",
        "notes": "Three-point instance with a different domination cone at each payoff.",
    },
    "chain": {
        "name": "chain",
        "dimension": 2,
        "ground": pts([1, 2, 3]),
        "objective": {"table": {"1": [4, 4], "2": [2, 2], "3": [0, 0]}},
        "structure": {"default": PARETO},
        "quasimetric": {"type": "weighted_asymmetric", "alpha": [1], "beta": [1]},
        "k": [1, 1], "epsilon": 1, "x0": "1",
        "notes": "Three collinear payoffs under the Pareto cone with q(i, j) = |i - j|.",
    },
    "bad_table": {
        "name": "bad_table",
        "dimension": 2,
        "ground": {"labels": ["a", "b", "c"]},
        "objective": {"table": {"a": [0, 0], "b": [1, 0], "c": [0, 1]}},
        "structure": {"default": PARETO},
        "quasimetric": {"type": "table", "symmetric_fill": True,
                        "entries": [["a", "b", 1], ["b", "c", 1], ["a", "c", 5]]},
        "k": [1, 1], "epsilon": 1, "x0": "a",
        "notes": "Distance table that breaks the triangle inequality; loading must fail.",
    },
    "example_4_3": {
        "name": "example_4_3",
        "dimension": 2,
        "ground": {"grid": {"lower": [-10], "upper": [10], "step": [0.01]}},
        "objective": {"rules": [
            {"when": "x[0] >= 0", "value": ["0", "-x[0]"]},
            {"when": "x[0] < 0", "value": ["x[0]", "0"]},
        ]},
        "structure": {"default": PARETO},
        "quasimetric": {"type": "scaled_metric", "c": 1, "p": 1},
        "k": [1, 1], "epsilon": 1, "x0": "0",
        "notes": ("Range is the cone spanned by (0,-1) and (-1,0): psi is bounded below "
                  "on W(x0) while no bounded set M gives f(X) inside M + Theta. "
                  "Discretized on a 2001-point grid."),
    },
    "example_4_4": {
        "name": "example_4_4",
        "dimension": 2,
        "ground": {"grid": {"lower": [-4], "upper": [0], "step": [0.01]}},
        "objective": {"rules": [
            {"when": "x[0] < 0", "value": ["x[0]", "pow2(x[0]) - 1"]},
            {"when": "true", "value": ["x[0]", "1"]},
        ]},
        "structure": {"rules": [
            {"when": "y[0] < 0 and y[1] < 0", "generators": [["1", "0"], ["abs(y[0])", "abs(y[1])"]]},
        ], "default": PARETO},
        "quasimetric": {"type": "weighted_asymmetric", "alpha": [0.5], "beta": [0.5]},
        "k": [1, 1], "epsilon": 1, "x0": "0",
        "notes": ("Stated reference value: W(0) = [-0.5, 0] and W(-0.5) = {-0.5}. "
                  "Direct evaluation of the worthwhile set with Theta = D(f(0)) = R^2_+ "
                  "gives a larger set: u in W(0) iff 2 - 2^u + u/2 >= 0 for u < 0, "
                  "i.e. u >= -3.87 approximately. The reference interval is not used as ground truth. "
                  "Discretized on a 401-point grid."),
    },
    "example_4_8": {
        "name": "example_4_8",
        "dimension": 2,
        "ground": {"grid": {"lower": [-2, -2], "upper": [2, 2], "step": [0.5, 0.5]}},
        "objective": {"rules": [{"when": "true", "value": ["x[0]", "x[1]"]}]},
        "structure": {"rules": [
            {"when": "y[0] < y[1]", **diag_cone("y[0]", "-")},
            {"when": "y[0] > y[1]", **diag_cone("y[1]", "-")},
            {"when": "y[0] == y[1]", **diag_cone("y[0]", "-")},
        ]},
        "quasimetric": {"type": "scaled_metric", "c": 1, "p": 2},
        "k": [1, 1], "epsilon": 1, "x0": "0,0",
        "notes": ("Diagonal cone family cone{(1, c), (c, 1)} with c = 1/2 - a/(2|a| + 1) "
                  "at a = min(y). As written, c decreases in a, so the cones widen as a grows."),
    },
    "example_4_8_sign_flipped": {
        "name": "example_4_8_sign_flipped",
        "dimension": 2,
        "ground": {"grid": {"lower": [-2, -2], "upper": [2, 2], "step": [0.5, 0.5]}},
        "objective": {"rules": [{"when": "true", "value": ["x[0]", "x[1]"]}]},
        "structure": {"rules": [
            {"when": "y[0] < y[1]", **diag_cone("y[0]", "+")},
            {"when": "y[0] > y[1]", **diag_cone("y[1]", "+")},
            {"when": "y[0] == y[1]", **diag_cone("y[0]", "+")},
        ]},
        "quasimetric": {"type": "scaled_metric", "c": 1, "p": 2},
        "k": [1, 1], "epsilon": 1, "x0": "0,0",
        "notes": ("Same family with c = 1/2 + a/(2|a| + 1): cones shrink as a grows, "
                  "so D(a,a) is contained in D(b,b) whenever a >= b."),
    },
}

for name, doc in docs.items():
    doc = {"schema": 1, **doc}
    (DATA / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
    print("wrote", name)
