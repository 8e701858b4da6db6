import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from domivar import GroundSet, ScaledMetric, Table, WeightedAsymmetric, q, validate_axioms
from domivar.quasispace import forward_hausdorff_check, is_forward_cauchy


def test_weighted_asymmetric_examples():
    w = WeightedAsymmetric([2], [1])
    assert q(w, [0], [3]) == 6
    assert q(w, [3], [0]) == 3
    assert q(w, [1.5], [1.5]) == 0


def test_scaled_metric():
    m = ScaledMetric(2.0, 1)
    assert q(m, [0, 0], [1, -2]) == pytest.approx(6)
    assert q(ScaledMetric(1.0, 2), [0, 0], [3, 4]) == pytest.approx(5)
    assert q(ScaledMetric(1.0, np.inf), [0, 0], [3, -4]) == pytest.approx(4)


def test_negative_weights_rejected():
    with pytest.raises(ValueError):
        WeightedAsymmetric([-1], [1])
    with pytest.raises(ValueError):
        ScaledMetric(-1.0, 2)


def test_table_triangle_violation_named():
    g = GroundSet.finite(["a", "b", "c"])
    t = Table.from_entries(g.labels, [("a", "b", 1), ("b", "c", 1), ("a", "c", 5)], symmetric_fill=True)
    rep = validate_axioms(t, g)
    assert not rep["ok"] and ["a", "b", "c"] in rep["triangle_violations"]


def test_table_missing_entry():
    with pytest.raises(ValueError, match="missing"):
        Table.from_entries(["a", "b"], [("a", "b", 1)])


def test_degenerate_warning():
    g = GroundSet.finite(["1", "2", "3"])
    rep = validate_axioms(ScaledMetric(0.0, 2), g)
    assert rep["ok"] and "degenerate: all distances 0" in rep["warnings"]


def test_sampled_triples_on_large_sets():
    g = GroundSet.grid_of([0], [3], [0.01])
    rep = validate_axioms(WeightedAsymmetric([1], [3]), g, budget=5000)
    assert rep["ok"] and not rep["exhaustive"]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 5), min_size=2, max_size=2), st.lists(st.floats(0, 5), min_size=2, max_size=2),
       st.integers(0, 2**31 - 1))
def test_weighted_asymmetric_satisfies_axioms(alpha, beta, seed):
    rng = np.random.default_rng(seed)
    g = GroundSet.finite([str(i) for i in range(12)], rng.uniform(-5, 5, (12, 2)))
    assert validate_axioms(WeightedAsymmetric(alpha, beta), g)["ok"]


def test_forward_hausdorff():
    g = GroundSet.finite(["p", "a", "b"])
    assert forward_hausdorff_check(WeightedAsymmetric([1], [1]), g) == (True, None)
    t = Table.from_entries(g.labels, [("p", "a", 0), ("p", "b", 0), ("a", "p", 1), ("b", "p", 1),
                                      ("a", "b", 1), ("b", "a", 1)])
    ok, wit = forward_hausdorff_check(t, g)
    assert not ok and wit[0] == "p" and set(wit[1:]) <= {"p", "a", "b"} and wit[1] != wit[2]
    assert forward_hausdorff_check(ScaledMetric(1.0, 2), GroundSet.finite(["x"]))[0]


def test_forward_cauchy():
    m = ScaledMetric(1.0, 2)
    assert is_forward_cauchy([[1.0]] * 10, m)
    g = GroundSet.finite(["a", "b"])
    t = Table.from_entries(g.labels, [("a", "b", 1)], symmetric_fill=True)
    assert not is_forward_cauchy(["a", "b"] * 10, t)
    assert is_forward_cauchy([[1 - 2.0 ** -n] for n in range(60)], m)


def test_grid_labels_and_lookup():
    g = GroundSet.grid_of([-1], [1], [0.5])
    assert g.labels == ["-1", "-0.5", "0", "0.5", "1"]
    assert g.index(0.5) == 3 and "0" in g and "7" not in g
    g2 = GroundSet.grid_of([0, 0], [1, 1], [1, 1])
    assert g2.labels == ["0,0", "0,1", "1,0", "1,1"]


def test_grid_cap():
    with pytest.raises(ValueError):
        GroundSet.grid_of([0, 0], [10, 10], [0.001, 0.001])


def test_finite_sorted_numerically():
    g = GroundSet.finite(["10", "2", "1"])
    assert g.labels == ["1", "2", "10"]
    assert np.array_equal(g.coords[:, 0], [1, 2, 10])


def test_asymmetry_present_in_corpus():
    from domivar.corpus import random_instances
    found = False
    for inst in random_instances(5, seed=0):
        Q = inst.quasimetric.matrix(inst.ground)
        found |= not np.allclose(Q, Q.T)
    assert found
