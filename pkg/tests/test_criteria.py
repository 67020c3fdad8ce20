from fractions import Fraction

import pytest

from tphardy.analysis.criteria import (
    FAILS,
    HOLDS,
    bounded_necessary_check,
    compact_sufficient_check,
    invertibility_check,
    tp0_boundedness_checks,
)
from tphardy.analysis.operator import alpha_sequence
from tphardy.functions import INF
from tphardy.symbols import Symbol, automorphism_table, builtin, invert
from tphardy.tree import ROOT, iter_ball, level_size, truncate


def test_bounded_necessary():
    assert bounded_necessary_check(builtin("identity", 2), 8).status == HOLDS
    v = bounded_necessary_check(builtin("example-unbounded-bijection", 2), 10)
    assert v.status == FAILS and v.profile["trend"] == "increasing-unbounded-suspected"
    assert v.witness["level"] == 9 and v.witness["lower_bound_pth"] == Fraction(level_size(2, 18), level_size(2, 9))
    phi = builtin("example-bounded-bij-unbounded-inverse", 2)
    assert bounded_necessary_check(phi, 8).status == HOLDS
    inv = invert(phi, 8, radius=4)
    v = bounded_necessary_check(inv, 4)
    assert v.status == FAILS and v.profile["d"] == [0, 1, 2, 3, 4]


def test_bounded_necessary_notes_q1():
    v = bounded_necessary_check(builtin("level-split", 1), 6)
    assert any("q = 1" in note for note in v.notes)


def test_invertibility():
    assert invertibility_check(builtin("identity", 2), 2, 6).status == HOLDS
    v = invertibility_check(builtin("child-permutation", 2), 1, 6)
    assert v.status == HOLDS and v.profile["displacement"] == [0] * 7
    v = invertibility_check(builtin("constant", 2), 2, 4)
    assert v.status == FAILS and v.reason == "not injective" and v.witness["pair"] == ["o", "0"]
    v = invertibility_check(builtin("example-bounded-bij-unbounded-inverse", 2), 2, 8)
    assert v.status == FAILS and v.witness["displacement"] == 4
    v = invertibility_check(Symbol.from_rule(2, lambda u: u + (0,)), 2, 4)
    assert v.status == FAILS and "surjective" in v.reason and v.witness["missed"] == "o"


def test_invertibility_bijective_only_cases():
    # the swap displacement grows, but for q = 1 and p = inf bijectivity decides
    phi = builtin("example-unbounded-bijection", 1)
    assert invertibility_check(phi, 2, 12).status == HOLDS
    assert invertibility_check(builtin("example-unbounded-bijection", 2), INF, 12).status == HOLDS
    assert invertibility_check(builtin("example-unbounded-bijection", 2), 2, 12).status == FAILS
    with pytest.raises(ValueError):
        invertibility_check(builtin("identity", 2), 0.5, 3)


def test_automorphism_moving_root_is_invertible():
    assert invertibility_check(automorphism_table(2, (1,), 8), 2, 8).status == HOLDS


def test_compactness_identity_and_constant():
    c = compact_sufficient_check(builtin("identity", 2), 8)
    assert c["sufficient"].status == FAILS and c["necessary"].status == FAILS
    c = compact_sufficient_check(builtin("constant", 2), 8)
    assert c["sufficient"].status == FAILS and c["sufficient"].profile["a"] == [1] * 9
    assert c["necessary"].status == "plausible" and c["t_inf"].status == "plausible"
    assert compact_sufficient_check(builtin("identity", 2), 8)["t_inf"].status == FAILS


def test_halving_truncation_does_not_decay():
    # root on the inner half, truncation to half the level beyond: every a_n is still >= 1
    D = 8
    table = {v: ROOT if len(v) <= D // 2 else truncate(v, len(v) // 2) for v in iter_ball(2, D)}
    phi = Symbol(2, table=table, depth=D)
    a = alpha_sequence(phi, D).values()
    assert min(a) >= 1
    c = compact_sufficient_check(phi, D)
    assert c["sufficient"].status == FAILS and "a_n >= 1" in c["sufficient"].reason
    assert c["necessary"].profile["gap"] == [0, 1, 2, 3, 4, 3, 3, 4, 4]


def test_tp0_identity():
    c = tp0_boundedness_checks(builtin("identity", 2), 2, 8)
    assert c["min_level"].status == HOLDS and c["vertex_decay"].status == HOLDS
    assert c["alpha_decay"].status == FAILS
    rows = c["vertex_decay"].profile["vertices"]
    assert len(rows) == 5 and all(r["peak"] == 1 for r in rows)


def test_tp0_bounded_image_witness():
    c = tp0_boundedness_checks(builtin("constant", 2, target="2.1"), INF, 7)
    v = c["min_level"]
    assert v.status == FAILS and v.witness["image_bound"] == 2
    assert set(v.witness["composed_level_sup"]) == {3, 4, 5, 6, 7}
    assert all(x == 1.0 for x in v.witness["composed_level_sup"].values())
    assert v.witness["function_level_sup"][5] == pytest.approx(0.2)


def test_tp0_level_constant_divergence():
    c = tp0_boundedness_checks(builtin("level-constant", 3), 2, 8)
    prof = c["vertex_decay"].profile
    assert [r["peak"] for r in prof["vertices"]] == [level_size(3, n) for n in range(5)]
    assert prof["peak_trend"] == "increasing-unbounded-suspected"
    assert any("unbounded" in note for note in c["vertex_decay"].notes)


def test_tp0_custom_witnesses():
    c = tp0_boundedness_checks(builtin("identity", 2), 2, 6, witness_vertices=[(1,), (2, 1)])
    assert [r["vertex"] for r in c["vertex_decay"].profile["vertices"]] == ["1", "2.1"]
