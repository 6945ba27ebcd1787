"""Core geometry: product orders, reflections, step decomposition, schedules."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fekete_lab.domain import (
    DomainError,
    EvaluationError,
    GridSchedule,
    IndeterminateFormError,
    Orthant,
    Point,
    as_extended,
    directed_upper_bound,
    ext_add,
    orthant_reflect,
    product_leq,
    qr_decompose,
)
from fekete_lab.sampling import uniform_in

W00 = Orthant.from_string("00")
W10 = Orthant.from_string("10")


def test_product_leq_plain():
    assert product_leq((1, 2), (1, 3), W00)


def test_product_leq_reversed_axis():
    # order reverses on the negative axis: -1 >= -3 and 2 <= 5
    assert product_leq((-1, 2), (-3, 5), W10)


def test_product_leq_incomparable():
    assert not product_leq((1, 2), (2, 1), W00)
    assert not product_leq((2, 1), (1, 2), W00)


def test_product_leq_rejects_outside_orthant():
    with pytest.raises(DomainError):
        product_leq((1, 2), (1, 3), W10)


def test_product_leq_dimension_mismatch():
    with pytest.raises(Exception):
        product_leq((1, 2, 3), (1, 2), W00)


def _orthant_points(w: Orthant):
    coords = st.floats(min_value=0.1, max_value=100.0, allow_nan=False)
    return st.tuples(*[coords for _ in range(w.dim)]).map(
        lambda t: tuple(c * w.sign(i) for i, c in enumerate(t)))


@settings(max_examples=300)
@given(data=st.data(), word=st.sampled_from(["00", "10", "01", "11"]))
def test_order_axioms(data, word):
    w = Orthant.from_string(word)
    pts = _orthant_points(w)
    x, y, z = data.draw(pts), data.draw(pts), data.draw(pts)
    assert product_leq(x, x, w)  # reflexive
    if product_leq(x, y, w) and product_leq(y, x, w):
        assert tuple(Point(x)) == tuple(Point(y))  # antisymmetric
    if product_leq(x, y, w) and product_leq(y, z, w):
        assert product_leq(x, z, w)  # transitive


@settings(max_examples=200)
@given(data=st.data(), word=st.sampled_from(["00", "10", "01", "11"]))
def test_upper_bound_dominates_both(data, word):
    w = Orthant.from_string(word)
    pts = _orthant_points(w)
    x, y = data.draw(pts), data.draw(pts)
    z = directed_upper_bound(x, y, w)
    assert product_leq(x, z, w)
    assert product_leq(y, z, w)


def test_upper_bound_examples():
    assert tuple(directed_upper_bound((1, 5), (3, 2), W00)) == (3.0, 5.0)
    assert tuple(directed_upper_bound((-1, 5), (-3, 2), W10)) == (-3.0, 5.0)
    assert tuple(directed_upper_bound((2, 2), (2, 2), W00)) == (2.0, 2.0)


def test_upper_bound_brute_force_check():
    # the returned point must be the least one that dominates both
    x, y = (-1.0, 5.0), (-3.0, 2.0)
    z = directed_upper_bound(x, y, W10)
    for cand in [(-1.0, 5.0), (-3.0, 5.0), (-1.0, 2.0), (-3.0, 2.0)]:
        dominates = product_leq(x, cand, W10) and product_leq(y, cand, W10)
        assert dominates == (cand == tuple(z)) or product_leq(z, cand, W10)


def test_reflect_examples():
    assert tuple(orthant_reflect((-2, 3), W10)) == (2.0, 3.0)
    assert tuple(orthant_reflect((4, 7), W00)) == (4.0, 7.0)


def test_reflect_is_involution_and_lands_in_main_orthant():
    w = Orthant.from_string("101")
    for j in range(100):
        x = tuple(w.sign(i) * uniform_in(17, 3 * j + i, 0.1, 50.0) for i in range(3))
        y = orthant_reflect(x, w)
        assert Orthant.main(3).contains(y)
        back = Point(tuple(c * w.sign(i) for i, c in enumerate(y)))
        assert tuple(back) == tuple(Point(x))


def test_qr_examples():
    assert (qr_decompose(7, 2).q, qr_decompose(7, 2).r) == (2, 3.0)
    assert (qr_decompose(4, 2).q, qr_decompose(4, 2).r) == (1, 2.0)
    assert (qr_decompose(5, 2).q, qr_decompose(5, 2).r) == (1, 3.0)


def test_qr_rejects_small_x():
    with pytest.raises(DomainError):
        qr_decompose(3.9, 2.0)
    with pytest.raises(DomainError):
        qr_decompose(5.0, 0.0)


@settings(max_examples=500)
@given(t=st.floats(min_value=1e-3, max_value=1e3),
       mult=st.floats(min_value=2.0, max_value=1e6))
def test_qr_invariants_random(t, mult):
    x = t * mult
    d = qr_decompose(x, t)
    ulp = math.ulp(max(abs(x), 1.0))
    assert d.q >= 1
    assert t - ulp <= d.r < 2 * t
    assert abs(d.reconstruct() - x) <= ulp
    # the step count tracks x/t: |q/x - 1/t| < 2/x always
    assert abs(d.q / x - 1.0 / t) < 2.0 / x + 1e-12


@given(k=st.integers(min_value=1, max_value=40),
       t=st.floats(min_value=0.5, max_value=100.0))
def test_qr_ratio_bound_on_doubling_ladder(k, t):
    x = (2.0 ** k) * t
    d = qr_decompose(x, t)
    assert abs(d.q / x - 1.0 / t) <= 2.0 * t / x + 1e-15


def test_qr_bulk_stream():
    for j in range(10_000):
        t = uniform_in(5, 2 * j, 1e-2, 10.0)
        x = 2 * t + uniform_in(5, 2 * j + 1, 0.0, 1e4)
        d = qr_decompose(x, t)
        assert d.q >= 1 and t - math.ulp(x) <= d.r < 2 * t
        assert abs(d.reconstruct() - x) <= math.ulp(max(x, 1.0))


def test_schedule_values_increase_and_defaults():
    s = GridSchedule(base=Point((1.0, 3.0)))
    assert s.growth == 2.0 and s.levels == 40
    for axis in range(2):
        vals = s.axis_values(axis)
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert len(vals) == 41


def test_schedule_integer_mode():
    s = GridSchedule(base=Point((1.0,)), growth=2.0, levels=10)
    assert s.axis_values(0, integer=True) == [2 ** k for k in range(11)]
    with pytest.raises(DomainError):
        GridSchedule(base=Point((1.5,)), levels=4).axis_values(0, integer=True)


def test_schedule_rejects_bad_parameters():
    with pytest.raises(DomainError):
        GridSchedule(base=Point((0.0,)))
    with pytest.raises(DomainError):
        GridSchedule(base=Point((1.0,)), growth=1.0)


def test_extended_reals():
    assert as_extended(math.inf) == math.inf
    with pytest.raises(EvaluationError):
        as_extended(float("nan"))
    assert ext_add(math.inf, 5.0) == math.inf
    with pytest.raises(IndeterminateFormError):
        ext_add(math.inf, -math.inf)


def test_point_validation():
    with pytest.raises(DomainError):
        Point(())
    with pytest.raises(DomainError):
        Point((1.0, math.inf))
