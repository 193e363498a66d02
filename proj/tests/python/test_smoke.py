import json
import math

import pytest

import polydeq as pq


def test_enumeration_matches_counts():
    indices = pq.enumerate_multi_indices(2, 4)
    assert indices == [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)]
    for n, m in [(1, 5), (3, 3), (4, 2)]:
        assert len(pq.enumerate_multi_indices(n, m)) == pq.multi_index_count(n, m)


def test_exact_scalar_arithmetic():
    a = pq.Scalar.exact("1/2", "1/3")
    b = pq.Scalar.exact("1/2", "-1/3")
    s = a + b
    assert s.re == "1"
    assert s.im == "0"
    assert (a * b).re == "13/36"
    with pytest.raises(pq.RegimeError):
        a + pq.Scalar.floating(1.0)
    with pytest.raises(pq.DomainError):
        a / pq.Scalar.exact("0")


def test_geometric_exponent_is_a_python_int():
    assert pq.geometric_exponent(4, 2) == 5
    assert pq.geometric_exponent(2, 200) == 2**200 - 1


def test_generated_instance_verifies_exactly():
    inst = pq.random_solvable_instance(3, 3, seed=12)
    assert inst.certificate.max_residual == 0.0
    report = pq.verify_instance(inst, horizon=5, tol=0.0)
    assert report.verdict == pq.Verdict.EXACT_MATCH
    assert report.horizon_achieved == 5
    assert "ExactMatch" in report.format()


def test_iterate_agrees_with_closed_form():
    inst = pq.random_solvable_instance(2, 4, seed=3, mode=pq.SolveMode.Z_PIVOT)
    traj = pq.iterate(inst.system, inst.z0, horizon=3)
    assert traj.truncated_at is None
    for s, state in enumerate(traj.states):
        expected = pq.closed_form_state(inst.z0, inst.Z, inst.system.degree, s)
        assert state.z == expected.z
    csv = traj.to_csv(rational=True)
    assert csv.splitlines()[0] == "step,re_z1,im_z1,re_z2,im_z2"


def test_hand_checked_system():
    sys = pq.HomogeneousSystem(2, 2, pq.Regime.EXACT)
    sys.set_coefficient(0, (2, 0), pq.Scalar.exact("1"))
    sys.set_coefficient(0, (1, 1), pq.Scalar.exact("1"))
    sys.set_coefficient(0, (0, 2), pq.Scalar.exact("1"))
    sys.set_coefficient(1, (2, 0), pq.Scalar.exact("2"))
    sys.set_coefficient(1, (0, 2), pq.Scalar.exact("1"))
    assert sys.validate() == []
    z0 = pq.StateVector([pq.Scalar.exact("1"), pq.Scalar.exact("1")])
    traj = pq.iterate(sys, z0, horizon=2)
    assert [c.re for c in traj.states[2].z] == ["27", "27"]

    ratios = pq.ratios_from_init(z0)
    residuals = pq.constraint_residuals(sys, pq.Scalar.exact("3"), ratios)
    assert all(r.is_zero() for r in residuals)


def test_linear_solvers_zero_the_residuals():
    sys = pq.HomogeneousSystem(2, 3, pq.Regime.EXACT)
    sys.set_coefficient(0, (3, 0), pq.Scalar.exact("1/2"))
    sys.set_coefficient(1, (2, 1), pq.Scalar.exact("-2", "1/3"))
    ratios = pq.ratios_from_free([pq.Scalar.exact("3/4")], pq.Regime.EXACT)
    Z = pq.Scalar.exact("5", "-1")
    solved = pq.solve_designated_coefficients(
        sys, Z, ratios, {0: (0, 3), 1: (0, 3)}
    )
    residuals = pq.constraint_residuals(solved, Z, ratios)
    assert pq.max_residual_magnitude(residuals) == 0.0

    z, pivot_solved = pq.solve_z_pivot(sys, ratios, 1, {0: (0, 3)})
    residuals = pq.constraint_residuals(pivot_solved, z, ratios)
    assert pq.max_residual_magnitude(residuals) == 0.0


def test_newton_recovers_perturbed_instance():
    inst = pq.random_solvable_instance(
        3, 2, seed=8, regime=pq.Regime.FLOAT, density=0.8
    )
    truth = pq.ratios_from_init(inst.z0)
    result = pq.newton_solve(
        inst.system,
        inst.Z.complex + 1e-3,
        [r.complex + 1e-3j for r in truth.r[:-1]],
    )
    assert result.converged
    assert result.residual_norm <= 1e-12 * (1 + abs(result.Z.complex))
    assert abs(result.Z.complex - inst.Z.complex) < 1e-6


def test_json_round_trip_and_strictness():
    inst = pq.random_solvable_instance(2, 4, seed=5)
    text = inst.to_json()
    again = pq.SolvableInstance.from_json(text)
    assert again.to_json() == text

    doc = json.loads(text)
    doc["surprise"] = 1
    with pytest.raises(pq.ParseError):
        pq.SolvableInstance.from_json(json.dumps(doc))


def test_run_example():
    ex = pq.run_example()
    assert ex.coefficients_report.verdict == pq.Verdict.EXACT_MATCH
    assert ex.zpivot_report.verdict == pq.Verdict.EXACT_MATCH
    assert ex.coefficients_instance.system.term_count() == 10


def test_float_overflow_raises():
    big = pq.Scalar.floating(1e80)
    with pytest.raises(pq.FloatOverflowError):
        big * big
    assert math.isclose((big * pq.Scalar.floating(2.0)).complex.real, 2e80)
