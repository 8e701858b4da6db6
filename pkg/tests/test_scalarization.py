import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from domivar import ScalarizationSpec, check_scalarization_conditions, gerstewitz, gerstewitz_oracle, psi
from domivar.geometry import PolyhedralSet, pareto_cone, zero_cone
from domivar.scalarization import gerstewitz_many

PARETO = ScalarizationSpec(pareto_cone(2), [1, 1])
THETA_I = ScalarizationSpec(PolyhedralSet([[0, 1], [1, -1]], [0, 0]), [1, 1])


def test_closed_form_examples():
    assert gerstewitz(PARETO, [3, -1]) == pytest.approx(3)
    assert gerstewitz(PARETO, [0, 0]) == pytest.approx(0)
    assert gerstewitz(PARETO, [5, 1]) == pytest.approx(5)


def test_oracle_examples():
    v, exhausted = gerstewitz_oracle(PARETO, [3, -1], tol=1e-6)
    assert abs(v - 3) <= 1e-6 and not exhausted
    # k lies on the boundary of this cone; the value is still finite
    assert gerstewitz(THETA_I, [0, 1]) == pytest.approx(1)
    assert gerstewitz_oracle(THETA_I, [0, 1])[0] == pytest.approx(1, abs=1e-6)


def test_zero_cone_gives_plus_infinity():
    spec = ScalarizationSpec(zero_cone(2), [1, 1])
    assert gerstewitz(spec, [1, 2]) == math.inf
    assert gerstewitz_oracle(spec, [1, 2])[0] == math.inf
    assert gerstewitz(spec, [2, 2]) == pytest.approx(2)


def test_minus_infinity_when_minus_k_in_theta():
    spec = ScalarizationSpec(PolyhedralSet([[1, -1]], [0]), [1, 1])
    assert gerstewitz(spec, [0, 3]) == -math.inf
    assert gerstewitz_oracle(spec, [0, 3])[0] == -math.inf
    # the opposite offset leaves no feasible t at all
    assert gerstewitz(spec, [3, 0]) == math.inf


def test_zero_direction_rejected():
    with pytest.raises(ValueError):
        ScalarizationSpec(pareto_cone(2), [0, 0])


def test_vectorized_matches_scalar():
    Y = np.random.default_rng(0).uniform(-5, 5, (50, 2))
    assert np.allclose(gerstewitz_many(THETA_I, Y), [gerstewitz(THETA_I, y) for y in Y])


def test_conditions_examples():
    assert check_scalarization_conditions(PARETO)["ok"]
    rep = check_scalarization_conditions(ScalarizationSpec(pareto_cone(2), [-1, 0]))
    assert not rep["clauses"]["no_negative_k"]["ok"]
    rep = check_scalarization_conditions(ScalarizationSpec(PolyhedralSet([[1, -1]], [0]), [1, 1]))
    assert not rep["ok"] and not rep["clauses"]["no_negative_k"]["ok"]


def test_conditions_require_a_cone():
    with pytest.raises(ValueError):
        check_scalarization_conditions(ScalarizationSpec(PolyhedralSet([[1, 0]], [-1]), [1, 1]))


coord = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.floats(-10, 10))
def test_translation_invariance(a, b, t):
    y = np.array([a, b])
    assert gerstewitz(THETA_I, y + t * THETA_I.k) == pytest.approx(gerstewitz(THETA_I, y) + t, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(coord, coord, st.floats(0, 20), st.floats(0, 20))
def test_monotone_along_theta(a, b, l1, l2):
    y = np.array([a, b])
    d = l1 * np.array([1.0, 0.0]) + l2 * np.array([1.0, 1.0])
    assert gerstewitz(THETA_I, y) <= gerstewitz(THETA_I, y + d) + 1e-9


@settings(max_examples=100, deadline=None)
@given(coord, coord, st.floats(-10, 10))
def test_sublevel_sets(a, b, t):
    # {phi <= t} = t k - Theta
    y = np.array([a, b])
    inside = PARETO.theta.slack(t * PARETO.k - y).min() >= -1e-9
    assert inside == (gerstewitz(PARETO, y) <= t + 1e-9)


def test_psi_on_chain(chain):
    assert psi(chain, "1") == pytest.approx(0)
    assert psi(chain, "3") == pytest.approx(-4)
