"""Limit brackets: simultaneous, iterated, diagonal, orthant, ray, profiles."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from fekete_lab.domain import DomainError, GridSchedule, Orthant, Point
from fekete_lab.limits import (
    CONVERGED,
    DIVERGING_MINUS,
    DIVERGING_PLUS,
    INCONCLUSIVE,
    diagonal_limit,
    inner_limit_profile,
    iterated_limit,
    multiple_inf,
    orthant_limit,
    ray_limit,
    simultaneous_limit,
    verify_decomposition_bound,
)
from fekete_lab.registry import Domain, FunctionOracle, builtin
from fekete_lab.sampling import uniform_in

SQRT = builtin("sqrt_prod")
FULL = builtin("full_shift_count_log")
MIXED = builtin("x1sq_sqrt_x2")
CSA_BUILTINS = ("sqrt_prod", "full_shift_count_log", "abs", "ceiling", "nmod2")


def schedule2(levels=14):
    return GridSchedule(base=Point((1.0, 1.0)), levels=levels)


def test_sqrt_prod_simultaneous_converges_to_zero():
    bracket = simultaneous_limit(SQRT, schedule2(), delta=0.01)
    assert bracket.status == CONVERGED
    assert 0.0 <= bracket.best_upper <= 0.01
    assert bracket.evaluations == 15 * 15


def test_running_bound_is_nonincreasing():
    bracket = simultaneous_limit(SQRT, schedule2(), delta=0.01)
    bounds = [v for _, v in bracket.running_bound_by_shell()]
    assert all(a >= b for a, b in zip(bounds, bounds[1:]))


def test_best_upper_never_exceeds_tail_estimate():
    for name in CSA_BUILTINS:
        oracle = builtin(name)
        d = oracle.domain.dim
        bracket = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,) * d), levels=12))
        assert bracket.best_upper <= bracket.tail_estimate
        assert all(bracket.best_upper <= s.ratio for s in bracket.samples)


def test_full_shift_constant_ratio():
    bracket = simultaneous_limit(FULL, schedule2(), delta=0.01)
    assert bracket.status == CONVERGED
    assert bracket.best_upper == 1.0
    assert bracket.shell == 0
    assert bracket.threshold_point == (1.0, 1.0)


def test_best_upper_monotone_under_schedule_extension():
    for name in CSA_BUILTINS:
        oracle = builtin(name)
        d = oracle.domain.dim
        short = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,) * d), levels=10))
        long = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,) * d), levels=20))
        assert long.best_upper <= short.best_upper


def test_known_limits_are_bracketed_and_reached():
    for name in CSA_BUILTINS:
        oracle = builtin(name)
        assert oracle.known_limit is not None
        d = oracle.domain.dim
        bracket = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,) * d)))
        assert bracket.best_upper >= oracle.known_limit.value
        assert abs(bracket.best_upper - oracle.known_limit.value) <= 0.01


def test_crafted_divergence_flag():
    # ratio at x is -x: crosses any configured floor once the ladder is deep enough
    oracle = FunctionOracle(name="neg_square",
                            domain=Domain(dim=1, orthant=Orthant.main(1)),
                            fn=lambda p: -p[0] * p[0])
    bracket = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,)), levels=20),
                                 divergence_floor=-1e5)
    assert bracket.status == DIVERGING_MINUS
    deep = simultaneous_limit(oracle, GridSchedule(base=Point((1.0,)), levels=45))
    assert deep.status == DIVERGING_MINUS  # default floor -1e12 crossed at 2^45


def test_mixed_curvature_simultaneous_is_inconclusive():
    bracket = simultaneous_limit(MIXED, GridSchedule(base=Point((1.0, 1.0)), levels=40))
    assert bracket.status == INCONCLUSIVE


def test_mixed_curvature_iterated_orders_disagree():
    lo = iterated_limit(MIXED, (0, 1), delta=0.01)
    assert lo.status == CONVERGED
    assert abs(lo.value) <= 0.01
    hi = iterated_limit(MIXED, (1, 0), delta=0.01)
    assert hi.status == DIVERGING_PLUS
    assert hi.value == math.inf
    assert all(l.status == DIVERGING_PLUS for l in hi.levels)


def test_iterated_agrees_with_simultaneous_for_subadditive_oracles():
    for oracle in (SQRT, FULL):
        sim = simultaneous_limit(oracle, schedule2(40), delta=0.01)
        for order in ((0, 1), (1, 0)):
            it = iterated_limit(oracle, order, delta=0.01)
            assert it.status == CONVERGED
            assert abs(it.value - sim.best_upper) <= 0.02


def test_iterated_validates_order():
    with pytest.raises(DomainError):
        iterated_limit(SQRT, (0, 0))


def test_iterated_three_levels():
    volume = FunctionOracle(
        name="coordinate_product",
        domain=Domain(dim=3, orthant=Orthant.main(3)),
        fn=lambda p: p[0] * p[1] * p[2],
        claims_componentwise_subadditive=True)
    result = iterated_limit(volume, (2, 0, 1), delta=0.01)
    assert result.status == CONVERGED and result.value == 1.0
    assert [l.axis for l in result.levels] == [2, 0, 1]
    assert all(l.status == CONVERGED for l in result.levels)
    assert all(l.last_stabilized_at is not None for l in result.levels)
    tols = [l.tol for l in result.levels]
    assert tols == sorted(tols, reverse=True)  # deeper levels use tighter tolerances


def test_diagonal_identity_matches_simultaneous():
    diag = diagonal_limit(SQRT, [lambda t: t, lambda t: t], delta=0.01)
    sim = simultaneous_limit(SQRT, schedule2(40), delta=0.01)
    assert diag.status == CONVERGED
    assert abs(diag.best_upper - sim.best_upper) <= 0.02


def test_diagonal_constant_ratio_and_unit_start():
    bracket = diagonal_limit(FULL, [lambda t: t, lambda t: t * t], delta=0.01)
    assert bracket.status == CONVERGED and bracket.best_upper == 1.0
    first = bracket.samples[0]
    assert first.point == (1.0, 1.0) and first.ratio == 1.0


def test_diagonal_rejects_bounded_path():
    with pytest.raises(DomainError):
        diagonal_limit(SQRT, [lambda t: t, lambda t: 5.0])


def test_diagonal_first_sample_is_unit_for_sqrt_prod():
    bracket = diagonal_limit(SQRT, [lambda t: t, lambda t: t])
    assert bracket.samples[0].point == (1.0, 1.0)
    assert bracket.samples[0].ratio == 1.0  # f(1,1)/1


def test_three_dimensional_simultaneous_and_profile():
    volume = FunctionOracle(
        name="coordinate_product",
        domain=Domain(dim=3, orthant=Orthant.main(3)),
        fn=lambda p: p[0] * p[1] * p[2],
        claims_componentwise_subadditive=True)
    bracket = simultaneous_limit(volume, GridSchedule(base=Point((1.0,) * 3), levels=6))
    assert bracket.status == CONVERGED and bracket.best_upper == 1.0
    assert bracket.evaluations == 7 ** 3

    profile = inner_limit_profile(volume, {2: 5.0}, limit_axes=(1,), probe_axis=0,
                                  probe_values=[1.0, 2.0, 4.0])
    for v, h, status in profile.entries:
        assert status == CONVERGED
        assert h == 5.0 * v  # lim over x2 of (x1*x2*5)/x2


def test_multiple_inf_matches_flat_min():
    for trial in range(100):
        for d, shape in ((1, (7,)), (2, (3, 4)), (3, (3, 4, 2))):
            offset = trial * 1000
            values = np.array([uniform_in(13, offset + i, -10, 10)
                               for i in range(int(np.prod(shape)))]).reshape(shape)
            flat = float(values.min())
            for order in itertools.permutations(range(d)):
                assert multiple_inf(values, order) == flat


def test_multiple_inf_single_cell_and_duplicates():
    assert multiple_inf([[3.5]], (0, 1)) == 3.5
    grid = np.array([[1.0, 2.0], [1.0, 5.0]])
    assert multiple_inf(grid, (0, 1)) == multiple_inf(grid, (1, 0)) == 1.0
    with pytest.raises(DomainError):
        multiple_inf(np.empty((0, 2)), (0, 1))


def test_decomposition_bound_worked_example():
    result = verify_decomposition_bound(SQRT, (5, 7), (2, 3))
    direct = math.sqrt(12) + math.sqrt(9) + math.sqrt(8) + math.sqrt(6)
    assert result.holds
    assert result.lhs == math.sqrt(35)
    assert abs(result.rhs - direct) <= 1e-9
    assert len(result.terms) == 4
    assert sum(t.contribution for t in result.terms) == result.rhs


def test_decomposition_bound_equality_cases():
    full = verify_decomposition_bound(FULL, (4, 6), (2, 3))
    assert full.holds and full.lhs == 24.0 and full.rhs == 24.0
    ab = verify_decomposition_bound(builtin("abs"), (7,), (2,))
    assert ab.holds and ab.lhs == 7.0 and ab.rhs == 7.0


def test_decomposition_bound_precondition():
    with pytest.raises(DomainError):
        verify_decomposition_bound(SQRT, (3.9, 7), (2, 3))


def test_decomposition_bound_random_pairs_hold_for_csa_builtins():
    for name in CSA_BUILTINS:
        oracle = builtin(name)
        d = oracle.domain.dim
        integer = oracle.domain.integer
        for j in range(200):
            if integer:
                t = tuple(1 + int(uniform_in(3, (j * d + i) * 2, 0, 5))
                          for i in range(d))
                x = tuple(2 * t[i] + int(uniform_in(3, (j * d + i) * 2 + 1, 0, 20))
                          for i in range(d))
            else:
                t = tuple(uniform_in(3, (j * d + i) * 2, 0.5, 5.0) for i in range(d))
                x = tuple(2 * t[i] + uniform_in(3, (j * d + i) * 2 + 1, 0.0, 20.0)
                          for i in range(d))
            assert verify_decomposition_bound(oracle, x, t).holds, (name, x, t)


def test_orthant_limit_senses():
    identity = FunctionOracle(name="identity_negative_axis",
                              domain=Domain(dim=1, orthant=Orthant.from_string("1")),
                              fn=lambda p: p[0])
    bracket = orthant_limit(identity, schedule=GridSchedule(base=Point((1.0,)), levels=14))
    assert bracket.sense == "sup"
    assert bracket.best_lower == 1.0  # ratio x/x is identically 1 on the negatives

    ab = builtin("abs")
    even = orthant_limit(ab, Orthant.from_string("0"),
                         GridSchedule(base=Point((1.0,)), levels=14))
    odd = orthant_limit(ab, Orthant.from_string("1"),
                        GridSchedule(base=Point((1.0,)), levels=14))
    assert even.sense == "inf" and even.best_upper == 1.0
    assert odd.sense == "sup" and odd.best_lower == -1.0
    # moving to the adjacent orthant can only lower the limit
    assert odd.best_lower <= even.best_upper


def test_orthant_limit_integer_domain():
    neg_abs = FunctionOracle(
        name="abs_on_negative_integers",
        domain=Domain(dim=1, orthant=Orthant.from_string("1"), integer=True),
        fn=lambda p: abs(p[0]),
        claims_componentwise_subadditive=True)
    bracket = orthant_limit(neg_abs, schedule=GridSchedule(base=Point((1.0,)), levels=12))
    assert bracket.sense == "sup"
    assert bracket.best_lower == -1.0  # ratio |n|/n = -1 on the negatives
    assert all(s.point[0] < 0 and s.point[0] == int(s.point[0])
               for s in bracket.samples)


def test_orthant_limit_even_parity_reflection():
    both_negative = FunctionOracle(
        name="sqrt_prod_reflected",
        domain=Domain(dim=2, orthant=Orthant.from_string("11")),
        fn=lambda p: math.sqrt(p[0] * p[1]),
        claims_componentwise_subadditive=True)
    bracket = orthant_limit(both_negative, schedule=schedule2())
    assert bracket.sense == "inf"
    assert bracket.status == CONVERGED and bracket.best_upper <= 0.01
    assert all(c < 0 for c in bracket.samples[0].point)


def test_ray_limits():
    coord_sum = FunctionOracle(name="coordinate_sum",
                               domain=Domain(dim=2, orthant=None),
                               fn=lambda p: p[0] + p[1],
                               claims_joint_subadditive=True)
    bracket = ray_limit(coord_sum, (1.0, 1.0), delta=0.01)
    assert bracket.status == CONVERGED and bracket.best_upper == 2.0

    ab = builtin("abs")
    back = ray_limit(ab, (-1.0,), delta=0.01)
    assert back.status == CONVERGED and back.best_upper == 1.0

    ceil_ray = ray_limit(builtin("ceiling"), (1.0,), delta=0.01)
    assert ceil_ray.best_upper >= 1.0
    assert ceil_ray.best_upper == 1.0  # ladder points are integers


def test_ray_rejects_zero_direction():
    with pytest.raises(DomainError):
        ray_limit(builtin("abs"), (0.0,))


def test_inner_limit_profile_sqrt_prod_vanishes():
    profile = inner_limit_profile(SQRT, {}, limit_axes=(1,), probe_axis=0,
                                  probe_values=[1.0, 2.0, 3.0, 4.0])
    for _, h, status in profile.entries:
        assert status == CONVERGED
        assert abs(h) <= 0.01
    assert profile.check_subadditivity().clean


def test_inner_limit_profile_full_shift_is_linear():
    profile = inner_limit_profile(FULL, {}, limit_axes=(1,), probe_axis=0,
                                  probe_values=[1, 2, 3, 4, 5, 6])
    for v, h, status in profile.entries:
        assert status == CONVERGED and h == v
    assert profile.check_subadditivity().clean


def test_inner_limit_profile_single_point_has_no_pairs():
    profile = inner_limit_profile(SQRT, {}, limit_axes=(1,), probe_axis=0,
                                  probe_values=[1.0])
    report = profile.check_subadditivity()
    assert report.samples_checked == 0 and report.clean


def test_inner_limit_profile_validates_partition():
    with pytest.raises(DomainError):
        inner_limit_profile(SQRT, {0: 1.0}, limit_axes=(1,), probe_axis=0,
                            probe_values=[1.0])


def test_bracket_serialization_shapes():
    bracket = simultaneous_limit(SQRT, schedule2(6))
    payload = bracket.to_json_dict()
    assert set(payload) >= {"best_upper", "tail_estimate", "status", "delta",
                            "R", "evaluations"}
    rows = bracket.samples_csv_rows()
    assert rows[0] == ["shell", "x1", "x2", "ratio"]
    assert len(rows) == bracket.evaluations + 1
