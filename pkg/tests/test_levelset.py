"""Level-set measures, the 2^-d box-fraction inequality, boundedness scans."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from fekete_lab.domain import DomainError, Point
from fekete_lab.levelset import (
    LevelSetSpec,
    check_levelset_lemma,
    compact_bound_scan,
    levelset_measure,
    rubin_rational_box_scan,
    rubin_unboundedness_demo,
)
from fekete_lab.registry import Domain, FunctionOracle, builtin
from fekete_lab.sampling import uniform_in

SQRT = builtin("sqrt_prod")

# closed form for mu{(x, y) in (0,1)^2 : x*y >= c}: 1 - c(1 - ln c)
def _area_product_above(c: float) -> float:
    return 1.0 - c * (1.0 - math.log(c))


def test_grid_quadrature_matches_analytic_integral():
    spec = LevelSetSpec(t=Point((1.0, 1.0)), k=0.25)
    est = levelset_measure(SQRT, spec, "grid", cells=800)
    analytic = _area_product_above(1.0 / 16.0)
    assert abs(est.value - analytic) <= est.error_bound
    assert est.error_bound <= 0.01


def test_constant_oracle_edge_cases():
    const = FunctionOracle(name="one", domain=Domain(dim=2, orthant=None),
                           fn=lambda p: 1.0)
    full = levelset_measure(const, LevelSetSpec(t=Point((1.0, 1.0)), k=0.5),
                            "grid", cells=50)
    assert full.value == 1.0 and full.error_bound == 0.0
    empty = levelset_measure(const, LevelSetSpec(t=Point((1.0, 1.0)), k=2.0),
                             "grid", cells=50)
    assert empty.value == 0.0 and empty.error_bound == 0.0


def test_monte_carlo_agrees_with_quadrature():
    spec = LevelSetSpec(t=Point((1.0, 1.0)), k=0.25)
    grid = levelset_measure(SQRT, spec, "grid", cells=400)
    mc = levelset_measure(SQRT, spec, "mc", samples=20_000, seed=11)
    assert abs(grid.value - mc.value) <= grid.error_bound + mc.error_bound
    assert 0.0 <= mc.value <= spec.box_volume


def test_measure_is_monotone_in_threshold():
    ks = [0.05, 0.1, 0.25, 0.5, 0.9]
    estimates = [levelset_measure(SQRT, LevelSetSpec(t=Point((1.0, 1.0)), k=k),
                                  "grid", cells=300) for k in ks]
    for lo, hi in zip(estimates, estimates[1:]):
        assert lo.value + lo.error_bound >= hi.value - hi.error_bound


def test_lemma_margin_at_unit_anchor():
    rows = check_levelset_lemma(SQRT, [(1.0, 1.0)], cells=800)
    row = rows[0]
    assert row.k == 0.25 and row.bound == 0.25
    expected_margin = _area_product_above(1.0 / 16.0) - 0.25
    assert abs(row.margin - expected_margin) <= row.estimate.error_bound
    assert row.holds and row.margin > 0


def test_lemma_holds_at_random_anchors_for_real_csa_builtins():
    for name, dim in (("sqrt_prod", 2), ("abs", 1), ("ceiling", 1)):
        oracle = builtin(name)
        anchors = [
            tuple(uniform_in(23, j * dim + i, 0.5, 4.0) for i in range(dim))
            for j in range(10)
        ]
        rows = check_levelset_lemma(oracle, anchors, cells=400)
        for row in rows:
            assert row.holds, (name, row.anchor, row.margin)
            # |x| attains the bound with equality; the others clear it strictly
            if name != "abs":
                assert row.margin + row.estimate.error_bound > 0


def test_lemma_rejects_integer_domains():
    with pytest.raises(DomainError):
        check_levelset_lemma(builtin("full_shift_count_log"), [(1, 1)])


def test_compact_scan_examples():
    scan = compact_bound_scan(SQRT, [(1.0, 2.0), (1.0, 2.0)], resolution=81)
    assert scan.minimum == 1.0 and scan.argmin == (1.0, 1.0)
    assert scan.maximum == 2.0 and scan.argmax == (2.0, 2.0)

    scan_abs = compact_bound_scan(builtin("abs"), [(-1.0, 1.0)], resolution=81)
    assert scan_abs.minimum == 0.0 and scan_abs.maximum == 1.0

    scan_mixed = compact_bound_scan(builtin("x1sq_sqrt_x2"), [(1.0, 2.0), (1.0, 2.0)],
                                    resolution=81)
    assert scan_mixed.minimum == 1.0
    assert abs(scan_mixed.maximum - 4.0 * math.sqrt(2.0)) <= 1e-12
    assert "not proof" in scan_mixed.note


def test_scan_extrema_stable_under_resolution_doubling():
    for name, box in (("sqrt_prod", [(1.0, 2.0), (1.0, 2.0)]),
                      ("abs", [(0.5, 2.0)]),
                      ("ceiling", [(0.5, 2.0)])):
        oracle = builtin(name)
        coarse = compact_bound_scan(oracle, box, resolution=100)
        fine = compact_bound_scan(oracle, box, resolution=200)
        scale = max(1.0, abs(coarse.maximum))
        assert abs(coarse.maximum - fine.maximum) / scale < 0.01
        assert abs(coarse.minimum - fine.minimum) / max(1.0, abs(coarse.minimum)) < 0.01


def test_unboundedness_demo_diagonal_values():
    demo = rubin_unboundedness_demo(50)
    for n, (point, value) in enumerate(demo.diagonal, start=1):
        assert point == (1 + Fraction(1, n), 1 + Fraction(1, n))
        assert value == n
    assert demo.diagonal[0][1] == 1  # the point (2, 2)
    assert demo.ok


def test_unboundedness_demo_lines_stay_bounded():
    demo = rubin_unboundedness_demo(10, line_points=20, line_grid_q=30)
    assert len(demo.line_scans) == 20
    for scan in demo.line_scans:
        assert scan.max_value <= scan.denominator_bound
        assert scan.ok
    fixed = next(s for s in demo.line_scans if s.x == Fraction(3, 2))
    assert fixed.denominator_bound == 2


def test_rational_box_scan_grows_without_bound():
    small = rubin_rational_box_scan(10)
    big = rubin_rational_box_scan(20)
    assert small.maximum >= 10
    assert big.maximum >= 20
    assert big.maximum > small.maximum
    assert small.minimum >= 1
    x, y = small.argmax
    assert min(x.denominator, y.denominator) == small.maximum
