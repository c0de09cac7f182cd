import math

import numpy as np
import pytest

from malevich import bounds, qubit
from malevich.bounds import (
    APPENDIX_ARGMAX,
    PROBLEMS,
    get_problem,
    nelder_mead,
    reproduce_bound,
    separable_embed_3_reported_argmax,
    sobol_starts,
)
from malevich.exceptions import InfeasibleStart, NoProgress
from malevich.numerics import min_eigenvalue
from malevich.qubit import ProbabilityTriple as T
from malevich.qutrit import ComponentQubits, pure_qutrit, qutrit_area_sum, qutrit_from_probabilities

HI = (3 + math.sqrt(3)) / 6
LO = (3 - math.sqrt(3)) / 6
SEP3 = (57 + math.sqrt(17)) / 8


def bcd_area_oracle(pB, pC, pD12):
    """B, C, D area sum with D's population fixed by the B population."""
    D = T(*pD12, 1 - pB[2])
    return qutrit_area_sum(ComponentQubits(T(0.5, 0.5, 1), T(*pB), T(*pC), D))


def sep3_point_to_triples(y):
    pB1, pB2, pB3, pC3, pD1, pD2 = y
    return (pB1, pB2, pB3), (0.5, 0.5, pC3), (pD1, pD2)


def is_state(B, C, D12):
    """Positivity of the qutrit rebuilt from B, C and D's coherence."""
    A = (C[0], C[1], 1 - B[2] + C[2])
    rec = qutrit_from_probabilities(A, B, (*D12, 1 - B[2]))
    return min_eigenvalue(rec.matrix) >= -1e-9


# --- Nelder-Mead -----------------------------------------------------------


def test_nm_quadratic_on_box():
    f = lambda x: -((x[0] - 0.3) ** 2) - 2 * (x[1] - 0.7) ** 2 + 1.25
    res = nelder_mead(f, [0.5, 0.5], project=lambda x: np.clip(x, 0, 1))
    assert res.value == pytest.approx(1.25, abs=1e-8)
    np.testing.assert_allclose(res.point, [0.3, 0.7], atol=1e-4)


def test_nm_maximum_on_box_boundary():
    f = lambda x: -((x[0] - 1.4) ** 2) - (x[1] + 0.2) ** 2
    res = nelder_mead(f, [0.5, 0.5], project=lambda x: np.clip(x, 0, 1))
    assert res.value == pytest.approx(-(0.4**2) - 0.2**2, abs=1e-8)
    assert tuple(res.point) == pytest.approx((1, 0), abs=1e-8)


def test_nm_qubit_ball_from_center():
    prob = get_problem("qubit_area")
    hi = nelder_mead(prob.objective, [0.5] * 3, project=prob.project)
    assert hi.value == pytest.approx(3, abs=1e-6)
    assert prob.violation(hi.point) <= 1e-8
    lo = nelder_mead(prob.objective, [0.5] * 3, project=prob.project, maximize=False)
    assert lo.value == pytest.approx(1.5, abs=1e-9)


def test_nm_never_worse_than_start():
    prob = get_problem("qubit_area")
    for x0 in ([0.5, 0.5, 0.9], [0.2, 0.5, 0.5], [0.7, 0.7, 0.7]):
        assert nelder_mead(prob.objective, x0, project=prob.project).value >= prob.objective(np.array(x0))


def test_nm_infeasible_start():
    prob = get_problem("qubit_area")
    with pytest.raises(InfeasibleStart):
        nelder_mead(prob.objective, [1, 1, 1], project=prob.project)
    with pytest.raises(InfeasibleStart):
        nelder_mead(lambda x: 0.0, [2.0], violation=lambda x: x[0] - 1)


def test_nm_degenerate_simplex_reports_no_progress():
    with pytest.raises(NoProgress) as info:
        nelder_mead(lambda x: -x[0] ** 2 - x[1] ** 2, [0.5, 0.5], step=[0.1, 0.0])
    # the best point reached is still returned with the error
    assert info.value.result.value >= -0.5


# --- problem catalogue -----------------------------------------------------


def test_problem_catalogue():
    assert set(PROBLEMS) == {
        "qubit_area",
        "qutrit_area_free",
        "qutrit_area_pure_qubit_rep",
        "qutrit_area_ABD_pure",
        "separable_embed_12",
        "separable_embed_3",
        "appendix_pure",
    }
    with pytest.raises(ValueError):
        get_problem("nope")
    with pytest.raises(ValueError):
        reproduce_bound("qubit_area", sense="sideways")


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_sobol_starts_are_feasible_and_seeded(name):
    prob = get_problem(name)
    a = sobol_starts(prob, 16, seed=3)
    np.testing.assert_array_equal(a, sobol_starts(prob, 16, seed=3))
    assert not np.array_equal(a, sobol_starts(prob, 16, seed=4))
    if name != "qutrit_area_ABD_pure" and name != "qutrit_area_pure_qubit_rep":
        assert max(prob.violation(y) for y in a) <= 1e-8


def test_layout_objectives_match_pipeline(rng):
    """Coordinate objectives agree with the qutrit pipeline on feasible points."""
    prob = get_problem("qutrit_area_free")
    for y in sobol_starts(prob, 64, seed=7):
        B, C, D12 = tuple(y[0:3]), tuple(y[3:6]), tuple(y[6:8])
        assert prob.objective(y) == pytest.approx(bcd_area_oracle(B, C, D12), abs=1e-12)


def test_chart_objective_matches_pure_qutrit(rng):
    prob = get_problem("appendix_pure")
    from malevich.qutrit import component_qubits

    for y in sobol_starts(prob, 64, seed=11):
        want = qutrit_area_sum(component_qubits(pure_qutrit(tuple(y))))
        assert prob.objective(y) == pytest.approx(want, abs=1e-12)


# --- reported bounds -------------------------------------------------------


def test_qubit_area_bounds(bound):
    hi = bound("qubit_area")
    assert hi.extremum_value == pytest.approx(3, abs=1e-6)
    assert any(np.allclose(hi.argmax, m, atol=1e-5) for m in qubit.GLOBAL_MAXIMA)
    assert hi.best_constraint_violation <= 1e-8
    lo = bound("qubit_area", "min")
    assert lo.extremum_value == pytest.approx(1.5, abs=1e-9)


def test_determinism(bound):
    a = bound("qubit_area", "min")
    b = reproduce_bound("qubit_area", seed=42, sense="min")
    assert a == b


def test_separable_embed_12(bound):
    rep = bound("separable_embed_12")
    assert rep.extremum_value == pytest.approx(8, abs=1e-6)
    assert rep.best_constraint_violation <= 1e-8
    pB, pC = rep.argmax[:3], rep.argmax[3:]
    assert pB == pytest.approx((0.5, 0.5, 1), abs=1e-4)
    # either pure maximum of qubit C; they are exchanged by conjugation plus p3 -> 1 - p3
    assert any(pC == pytest.approx(m, abs=1e-4) for m in qubit.GLOBAL_MAXIMA)


def test_separable_embed_12_listed_point_is_exactly_eight():
    assert bcd_area_oracle((0.5, 0.5, 1), (HI, HI, HI), (0.5, 0.5)) == pytest.approx(8, abs=1e-12)


def test_separable_embed_3(bound):
    rep = bound("separable_embed_3")
    assert rep.extremum_value == pytest.approx(SEP3, abs=1e-5)
    assert rep.best_constraint_violation <= 1e-8
    B, C, D12 = sep3_point_to_triples(rep.argmax)
    assert is_state(B, C, D12)


@pytest.mark.parametrize("branch", [1, -1])
def test_separable_embed_3_listed_argmax(branch):
    y = separable_embed_3_reported_argmax(branch)
    B, C, D12 = sep3_point_to_triples(y)
    assert bcd_area_oracle(B, C, D12) == pytest.approx(SEP3, abs=1e-9)
    assert get_problem("separable_embed_3").objective(np.array(y)) == pytest.approx(SEP3, abs=1e-9)
    assert is_state(B, C, D12)


def test_qutrit_area_free(bound):
    hi = bound("qutrit_area_free")
    assert hi.extremum_value == pytest.approx(8.1565, abs=1e-3)
    assert hi.best_constraint_violation <= 1e-8
    # the four-digit listed point lies just outside the state space, so it is
    # compared after retraction onto it
    prob = get_problem("qutrit_area_free")
    listed = np.array((0.5733, 0.5207, 0.9716, 0.2379, 0.2031, 0.2044, 0.3760, 0.4200))
    assert prob.violation(listed) > 1e-8
    assert hi.extremum_value >= prob.objective(prob.project(listed)) - 1e-9


@pytest.mark.slow
def test_qutrit_area_free_minimum(bound):
    assert bound("qutrit_area_free", "min").extremum_value == pytest.approx(4.5, abs=1e-6)


def test_appendix_pure(bound):
    rep = bound("appendix_pure")
    assert rep.extremum_value == pytest.approx(8.1565, abs=1e-3)
    assert rep.extremum_value >= get_problem("appendix_pure").objective(np.array(APPENDIX_ARGMAX)) - 1e-9


def test_abd_pure(bound):
    rep = bound("qutrit_area_ABD_pure")
    assert rep.extremum_value == pytest.approx(8.095, abs=5e-3)
    assert rep.best_constraint_violation <= 1e-8


@pytest.mark.parametrize("sense,value", [("max", 8.0), ("min", 29 / 4)])
def test_pure_qubit_representation(bound, sense, value):
    rep = bound("qutrit_area_pure_qubit_rep", sense)
    assert rep.extremum_value == pytest.approx(value, abs=1e-5)
    assert rep.best_constraint_violation <= 1e-8
    assert bounds.chart_purity_deficits(np.array(rep.argmax)) == pytest.approx((0, 0, 0), abs=1e-8)


def test_report_tolerance_flag(bound):
    rep = bound("qubit_area")
    assert rep.target == 3.0 and rep.tolerance == 1e-6
    assert rep.within_tolerance
    assert rep.starts_used == 64 + 2
