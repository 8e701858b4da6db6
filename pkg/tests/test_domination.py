import numpy as np
import pytest

from domivar import check_F3, contains, leq_E, leq_N, load_instance
from domivar.domination import (
    DominationStructure,
    Rule,
    SetTemplate,
    StructureError,
    constant_structure,
    pareto_template,
    parse_structure,
)
from domivar.expr import parse_predicate
from domivar.geometry import GeneratorCone, cone_contains, subset_cone

A1, A2, A3 = np.array([0.0, 0.0]), np.array([4.0, -2.0]), np.array([-2.0, 1.0])


def _same_set(S, G, n=25):
    xs = np.linspace(-3, 3, n)
    return all(contains(S, (a, b)) == cone_contains(GeneratorCone(G), (a, b)) for a in xs for b in xs)


def test_evaluate_example_structure(ex25):
    D = ex25.structure
    assert _same_set(D.evaluate(A1), [[1, 0], [0, 1]])
    assert _same_set(D.evaluate(A2), [[1, 0], [1, 1], [-1, -1]])
    assert _same_set(D.evaluate(A3), [[0, -1], [1, 1]])


def test_evaluate_variable_cone_at_origin():
    inst = load_instance("example_4_8")
    assert _same_set(inst.structure.evaluate(np.zeros(2)), [[1, 0.5], [0.5, 1]])


def test_relations_examples(ex25):
    D = ex25.structure
    assert leq_N(D, A3, A1)
    assert not leq_N(D, A1, A3)
    assert leq_E(D, A1, A2)
    assert not leq_E(D, A1, A3)
    for y in (A1, A2, A3):
        assert leq_N(D, y, y) and leq_E(D, y, y)


def test_constant_structure_relations_coincide():
    D = constant_structure(SetTemplate.from_generators([[1, 0.2], [-0.3, 1]]), 2)
    rng = np.random.default_rng(0)
    for v, y in rng.uniform(-5, 5, (1000, 2, 2)):
        assert leq_N(D, v, y) == leq_E(D, v, y)


def test_first_match_and_default():
    rules = [Rule(parse_predicate("y[0] > 0"), SetTemplate.from_generators([[1, 0]])),
             Rule(parse_predicate("y[0] > -1"), SetTemplate.from_generators([[0, 1]]))]
    D = DominationStructure(2, rules, pareto_template(2))
    assert contains(D.evaluate([1, 0]), [2, 0]) and not contains(D.evaluate([1, 0]), [0, 2])
    assert contains(D.evaluate([-0.5, 0]), [0, 2])
    assert contains(D.evaluate([-5, 0]), [1, 1])


def test_expression_generators_depend_on_y():
    t = SetTemplate.from_generators([["1", "y[0]"], ["0", "1"]])
    D = constant_structure(t, 2)
    assert contains(D.evaluate([2, 0]), [1, 2]) and not contains(D.evaluate([2, 0]), [1, 0])
    assert contains(D.evaluate([0, 0]), [1, 0])


def test_all_zero_generators_give_zero_cone():
    D = constant_structure(SetTemplate.from_generators([["0*y[0]", "0"]]), 2)
    S = D.evaluate([1, 1])
    assert contains(S, [0, 0]) and not contains(S, [1e-3, 0])


def test_parse_structure_forms():
    D = parse_structure({"rules": [{"when": "y[0] < 0", "halfspaces": [{"normal": [1, -1], "offset": 0}]}],
                         "default": {"pareto": True}}, 2)
    assert contains(D.evaluate([-1, 0]), [5, 5]) and not contains(D.evaluate([-1, 0]), [0, 5])
    assert contains(D.evaluate([1, 0]), [0, 5])
    with pytest.raises(StructureError):
        parse_structure({"rules": [{"when": "true", "halfspaces": [{"a": [1, 0]}]}]}, 2)
    partial = parse_structure({"rules": [{"when": "y[0] > 0", "pareto": True}]}, 2)
    with pytest.raises(StructureError, match="no rule matches"):
        partial.evaluate([-1, 0])


def test_F3_example_cone_structure():
    inst = load_instance("example_4_8")
    rep = check_F3(inst.structure, inst, sample_budget=500, seed=1)
    assert rep["F3-a"]["ok"]


def test_F3_constant_pareto(chain):
    rep = check_F3(chain.structure, chain, 500, seed=0)
    assert rep["ok"] and rep["exhaustive"]
    for key in ("F3-a", "F3-b", "F3-c", "F3-d"):
        assert rep[key]["ok"]


def test_F3_d_fails_on_example_structure(ex25):
    rep = check_F3(ex25.structure, ex25, 500, seed=0)
    assert not rep["F3-d"]["ok"]
    gens = [tuple(f["generator"]) for f in rep["F3-d"]["failures"] if f["x"] == "3"]
    assert gens and np.allclose(gens[0], (0, -1))


def monotonicity_violations(inst, n_pairs=100, seed=0):
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(n_pairs):
        a, b = sorted(rng.uniform(-2, 2, 2), reverse=True)
        if not subset_cone(inst.structure.evaluate([a, a]), inst.structure.evaluate([b, b]))[0]:
            bad += 1
    return bad


def test_sign_flipped_cone_family_is_monotone():
    # the variant whose generators widen as min(y) grows satisfies F3-c and
    # the stated nesting; the literal family in example_4_8 does not
    inst = load_instance("example_4_8_sign_flipped")
    rep = check_F3(inst.structure, inst, 500, seed=0)
    assert rep["F3-a"]["ok"] and rep["F3-c"]["ok"]
    assert monotonicity_violations(inst) == 0


def test_literal_cone_family_nests_the_other_way():
    inst = load_instance("example_4_8")
    assert monotonicity_violations(inst) > 0
    # reverse nesting holds: a >= b  =>  D(b,b) ⊆ D(a,a)
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = sorted(rng.uniform(-2, 2, 2), reverse=True)
        assert subset_cone(inst.structure.evaluate([b, b]), inst.structure.evaluate([a, a]))[0]


def test_evaluate_deterministic(ex25):
    D = ex25.structure
    for y in ex25.payoffs():
        S1, S2 = D.evaluate(y), D.evaluate(np.array(y))
        assert np.array_equal(S1.A, S2.A) and np.array_equal(S1.b, S2.b)
