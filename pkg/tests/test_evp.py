import math

import numpy as np
import pytest

from domivar import (
    AssumptionError,
    GroundSet,
    ScaledMetric,
    SolverConfig,
    Variant,
    brute_force_fixed_points,
    classify,
    load_instance,
    parse_instance,
    solve,
    validate_assumptions,
    verify_certificates,
    worthwhile_set,
)
from domivar.corpus import random_instances
from domivar.domination import SetTemplate, constant_structure
from domivar.instance import Objective

from test_acceptance import trace_violations


def test_worthwhile_chain(chain):
    assert worthwhile_set(chain, "efficient", "1") == ["1", "2", "3"]
    assert worthwhile_set(chain, "efficient", "3") == ["3"]
    assert worthwhile_set(chain, "nondominated", "3") == ["3"]


def test_worthwhile_without_perturbation(chain):
    z = chain.with_changes(epsilon=0.0)
    F = z.payoffs()
    for x in z.labels:
        i = z.index(x)
        want = [u for j, u in enumerate(z.labels) if np.all(F[i] - F[j] >= 0)]
        assert worthwhile_set(z, "efficient", x) == want


def test_solve_chain(chain):
    res = solve(chain, "efficient")
    assert res.x_star == "3" and res.iterates == ["1", "3"] and res.status == "fixed_point"
    assert res.psi_trace == pytest.approx([0, -4])
    c = res.certificates
    assert c["i"]["ok"] and c["i"]["balance"] == pytest.approx([2, 2])
    assert c["ii"]["ok"] and c["agrees_with_solver"]
    assert not c["iii"]["ok"] and c["iii"]["status"] == "premise absent"
    assert c["E5"]["ok"] and c["E5"]["strong_ii"]["ok"]


def test_solve_unit_table_stays_put(ex25):
    assert worthwhile_set(ex25, "efficient", "1") == ["1"]
    res = solve(ex25, "efficient")
    assert res.x_star == "1" and res.n_iter == 0
    assert res.certificates["i"]["ok"]


def test_zero_iteration_certificate_i_trivial(chain):
    inst = chain.with_changes(x0="3")
    res = solve(inst, "efficient")
    assert res.n_iter == 0 and res.certificates["i"]["ok"] and res.certificates["iii"]["ok"]


def test_constant_structure_variants_agree():
    for inst in random_instances(15, seed=3, variable_share=0.0):
        a, b = solve(inst, "efficient"), solve(inst, "nondominated")
        assert a.iterates == b.iterates
        for key in ("i", "ii", "iii"):
            assert a.certificates[key]["ok"] == b.certificates[key]["ok"]


def test_trace_invariants_random():
    for inst in random_instances(25, seed=17):
        res = solve(inst, "efficient")
        assert trace_violations(inst, "efficient", res) == []


def test_brute_force_chain(chain):
    assert brute_force_fixed_points(chain) == ["3"]


def test_single_point():
    doc = {"schema": 1, "dimension": 2, "ground": {"points": [{"label": "a", "coords": [0]}]},
           "objective": {"table": {"a": [1, 2]}}, "structure": {"default": {"pareto": True}},
           "quasimetric": {"type": "scaled_metric", "c": 1, "p": 2}, "k": [1, 1], "epsilon": 1, "x0": "a"}
    inst = parse_instance(doc)
    assert brute_force_fixed_points(inst) == ["a"]
    assert solve(inst).x_star == "a"


def test_large_epsilon_freezes_every_point():
    # each step costs sqrt(eps) q k: for large eps nothing is worth leaving
    for inst in random_instances(10, seed=23):
        big = inst.with_changes(epsilon=1e8)
        assert brute_force_fixed_points(big) == big.labels


def test_zero_epsilon_fixed_points_are_theta_minimal():
    for inst in random_instances(10, seed=29, variable_share=0.0):
        z = inst.with_changes(epsilon=0.0)
        F = z.payoffs()
        unique = {x for i, x in enumerate(z.labels) if np.sum(np.all(F == F[i], axis=1)) == 1}
        eff = {r.label for r in classify(z) if r.efficient}
        assert set(brute_force_fixed_points(z)) == eff & unique


def test_brute_force_cap(monkeypatch, chain):
    import domivar.evp as evp
    monkeypatch.setattr(evp, "BRUTE_FORCE_CAP", 2)
    with pytest.raises(ValueError):
        evp.brute_force_fixed_points(chain)


def test_max_iter_is_reported(chain):
    res = solve(chain, config=SolverConfig(max_iter=0))
    assert res.status == "max_iter" and res.x_star == "1"
    assert res.certificates["agrees_with_solver"] and not res.certificates["ii"]["ok"]


def test_first_label_tie_break(chain):
    res = solve(chain, config=SolverConfig(tie_break="first_label"))
    # band after step 0 is psi <= -4 + 1/2, so only "3" qualifies either way
    assert res.x_star == "3"


def test_unbounded_scalarization_raises(chain):
    halfplane = constant_structure(SetTemplate.from_halfspaces([{"normal": [1, -1]}]), 2)
    inst = chain.with_changes(structure=halfplane)
    with pytest.raises(AssumptionError) as exc:
        solve(inst)
    assert exc.value.clause == "E1"


def test_validate_chain(chain):
    rep = validate_assumptions(chain, "efficient")
    assert rep["ok"] and rep["E1"]["inf_psi"] == pytest.approx(-4)
    assert rep["E3"]["ok"] and rep["E4"]["ok"] and rep["E2"]["ok"]
    rep = validate_assumptions(chain, "nondominated")
    assert rep["ok"] and rep["F3"]["ok"]


def test_validate_halfplane_theta_fails_E3(chain):
    halfplane = constant_structure(SetTemplate.from_halfspaces([{"normal": [1, -1]}]), 2)
    inst = chain.with_changes(structure=halfplane, k=np.array([1.0, 0.0]))
    rep = validate_assumptions(inst, "efficient")
    assert rep["E3"]["clauses"]["k_recession"]["ok"]
    inst = chain.with_changes(structure=halfplane)
    rep = validate_assumptions(inst, "efficient")
    assert not rep["E3"]["clauses"]["no_negative_k"]["ok"] and not rep["ok"]


def test_bounded_below_but_not_quasibounded():
    rep = validate_assumptions(load_instance("example_4_3"), "efficient")
    assert rep["E1"]["ok"] and rep["E1"]["inf_psi"] == pytest.approx(0)
    assert rep["E1"]["W_x0"] == ["0"]
    assert not rep["quasibounded"]["ok"]


def test_quasibounded_probe_passes_on_bounded_payoffs():
    inst = load_instance("example_4_3")
    bounded = inst.with_changes(objective=Objective.from_rules(
        [{"when": "true", "value": ["abs(x[0])", "abs(x[0])"]}], 2))
    from domivar.evp import quasiboundedness_probe
    assert quasiboundedness_probe(bounded)["ok"]


def test_epsilon_zero_localization(chain):
    z = chain.with_changes(epsilon=0.0)
    res = solve(z)
    c3 = res.certificates["iii"]
    assert c3["bound"] == 0.0 and "note" in c3
    assert c3["ok"] == (z.q(z.x0, res.x_star) == 0)


def test_verify_detects_tampering(chain):
    res = solve(chain)
    res.x_star = "2"
    cert = verify_certificates(chain, "efficient", res)
    assert not cert["ii"]["ok"] and not cert["agrees_with_solver"]


def test_discretized_example_worthwhile_set():
    inst = load_instance("example_4_4")
    W = [float(s) for s in worthwhile_set(inst, "efficient", "0")]
    # u in W(0) iff 2 - 2**u + u/2 >= 0 on the grid
    want = [u for u in inst.ground.coords[:, 0] if 2 - 2 ** u + u / 2 >= -1e-9 and u <= 0]
    assert W == pytest.approx(sorted(want))
    assert min(W) < -0.5


def test_variant_parse():
    assert Variant.parse("efficient") is Variant.EFFICIENT
    assert Variant.parse(Variant.NONDOMINATED) is Variant.NONDOMINATED
    with pytest.raises(ValueError):
        Variant.parse("pareto")


def test_slack_schedule():
    cfg = SolverConfig()
    assert cfg.slack(0) == 0.5 and cfg.slack(3) == 0.0625 and cfg.slack_total() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        SolverConfig(slack_base=1.5)
