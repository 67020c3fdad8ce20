import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from tphardy.functions import (
    INF,
    TreeFunction,
    check_p,
    decay_verdict,
    format_p,
    growth_bound_check,
    little_tp_decay,
    mp_level,
    mp_level_power,
    norm,
    norm_limit_check,
    parse_p,
    radial_decay,
    random_function,
    rule_level_mean,
    tp_norm,
)
from tphardy.tree import ROOT, TreeError, enumerate_level, level_size

exps = st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0, INF])
finite_exps = st.sampled_from([1.0, 1.5, 2.0, 3.0, 7.0])


@st.composite
def functions(draw, depth=4):
    q = draw(st.integers(min_value=1, max_value=3))
    seed = draw(st.integers(min_value=0, max_value=10**6))
    return random_function(q, depth, random.Random(seed))


def brute_level_mean(f, n, p):
    vals = [abs(f(v)) for v in enumerate_level(f.q, n)]
    if p == INF:
        return max(vals)
    return (sum(x**p for x in vals) / len(vals)) ** (1 / p)


def test_parse_p():
    assert parse_p("inf") == INF and parse_p(" Infinity ") == INF
    assert parse_p("1.5") == 1.5 and parse_p(2) == 2.0
    assert format_p(INF) == "inf" and format_p(2.0) == "2"
    for bad in ("0", "-1", "abc", "nan"):
        with pytest.raises(ValueError):
            parse_p(bad)
    with pytest.raises(ValueError):
        check_p(True)


def test_zero_values_are_dropped():
    f = TreeFunction(2, {ROOT: 0, (1,): 2.0})
    assert f.support == [(1,)] and f.max_level == 1
    assert TreeFunction.zero(2).max_level == -1 and TreeFunction.zero(2).is_zero()


def test_invalid_vertex_rejected():
    with pytest.raises(TreeError):
        TreeFunction(2, {(3,): 1.0})


def test_arithmetic():
    f = TreeFunction(2, {ROOT: 1.0, (0,): 2.0})
    g = TreeFunction(2, {(0,): 2.0})
    assert f - g == TreeFunction.indicator(2, ROOT)
    assert (f + g)((0,)) == 4 and (-f)(ROOT) == -1
    assert (2 * f)((0,)) == 4 and (f / 2)((0,)) == 1 and f * 1 == f
    with pytest.raises(ValueError):
        f + TreeFunction(1, {ROOT: 1.0})


def test_triples_roundtrip():
    f = TreeFunction(2, {(2, 0, 1): 1 + 2j, ROOT: -0.5})
    rows = f.to_triples()
    assert rows[0] == ["o", -0.5, 0.0] and rows[1] == ["2.0.1", 1.0, 2.0]
    assert TreeFunction.from_triples(2, rows) == f
    with pytest.raises(ValueError):
        TreeFunction.from_triples(2, [["o"]])


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_indicator_norm(q, p):
    v = (0,) * 3
    assert tp_norm(TreeFunction.indicator(q, v), p).value == pytest.approx(level_size(q, 3) ** (-1 / p), rel=1e-14)
    assert tp_norm(TreeFunction.indicator(q, v), INF).value == 1.0


@given(functions(), exps)
def test_level_means_match_enumeration(f, p):
    for n in range(5):
        assert mp_level(f, n, p) == pytest.approx(brute_level_mean(f, n, p), rel=1e-12, abs=1e-300)
        if p != INF:
            assert mp_level_power(f, n, p) == pytest.approx(brute_level_mean(f, n, p) ** p, rel=1e-12, abs=1e-300)


@given(functions(), exps)
def test_norm_is_sup_of_level_means(f, p):
    r = tp_norm(f, p)
    assert r.value == pytest.approx(max(brute_level_mean(f, n, p) for n in range(5)), rel=1e-12)
    assert norm(f, p) == r.value and float(r) == r.value and not r.truncated


@given(functions(), functions(), finite_exps)
def test_triangle_inequality(f, g, p):
    if f.q != g.q:
        return
    assert tp_norm(f + g, p).value <= tp_norm(f, p).value + tp_norm(g, p).value + 1e-12


# magnitudes bounded away from 0 so |a x|^p does not underflow
@given(functions(), exps, st.complex_numbers(min_magnitude=1e-6, max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_homogeneity(f, p, a):
    assert tp_norm(a * f, p).value == pytest.approx(abs(a) * tp_norm(f, p).value, rel=1e-12, abs=1e-300)


@given(functions())
def test_norm_nondecreasing_in_p(f):
    vals = [tp_norm(f, p).value for p in (0.5, 1, 2, 4, INF)]
    assert all(a <= b * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


def test_truncated_norm_is_flagged():
    f = TreeFunction(2, {(0, 0, 0): 1.0})
    r = tp_norm(f, 2, depth=1)
    assert r.truncated and r.value == 0.0


@given(functions(), st.sampled_from([1.0, 2.0, 3.0]))
def test_growth_estimate(f, p):
    assert growth_bound_check(f, p).holds


def test_growth_estimate_is_tight_for_indicators():
    g = growth_bound_check(TreeFunction.indicator(3, (1, 2), 5.0), 2)
    assert g.max_ratio == pytest.approx(1.0, rel=1e-14) and g.worst_vertex == (1, 2)
    assert growth_bound_check(TreeFunction.zero(2), 1).holds
    with pytest.raises(ValueError):
        growth_bound_check(TreeFunction.zero(2), INF)


@settings(max_examples=30)
@given(functions())
def test_norm_limit(f):
    r = norm_limit_check(f, [1, 2, 4, 8, 16, 32])
    assert r.ok, r.violations


def test_norm_limit_rejects_bad_grid():
    f = TreeFunction.indicator(2, ROOT)
    for grid in ([], [2, 1], [1, INF]):
        with pytest.raises(ValueError):
            norm_limit_check(f, grid)


@pytest.mark.parametrize("scale", [1, 5, 10])
def test_radial_decay_means(scale):
    g = radial_decay(scale)
    for q in (1, 2):
        for m in range(6):
            assert rule_level_mean(g, q, m, 2) == pytest.approx(scale / (scale + m), abs=1e-12)


def test_radial_decay_rejects_zero():
    with pytest.raises(ValueError):
        radial_decay(0)


def test_decay_verdicts():
    assert decay_verdict([1, 0.5, 0.1, 1e-9], 1e-6).verdict == "decaying"
    assert decay_verdict([1, 1, 1, 1], 1e-6).verdict == "non-decaying"
    assert decay_verdict([1, 0.9, 0.3, 0.2], 1e-6).verdict == "inconclusive"
    rep = little_tp_decay(lambda n: 1 / (1 + n), 2, 2, 40, tol=0.05, radial=True)
    assert rep.verdict == "decaying" and rep.means[3] == pytest.approx(0.25)
    assert little_tp_decay(lambda v: 1.0, 1, 2, 12).verdict == "non-decaying"
    assert little_tp_decay(radial_decay(3), 1, 2, 12).verdict == "inconclusive"
    with pytest.raises(ValueError):
        little_tp_decay(radial_decay(3), 1, 2, 12, tol=0)


def test_random_function_respects_bounds():
    rng = random.Random(0)
    for _ in range(50):
        f = random_function(2, 3, rng, max_support=5, complex_values=False)
        assert 1 <= len(f.support) <= 5 and f.max_level <= 3
        assert all(x.imag == 0 for _, x in f.items())
    assert math.isfinite(tp_norm(f, 2).value)
