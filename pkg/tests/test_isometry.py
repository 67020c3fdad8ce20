import random

import pytest
from hypothesis import given, settings, strategies as st

from tphardy.analysis.isometry import (
    INCONCLUSIVE,
    ISOMETRY,
    VIOLATED,
    isometry_check_inf,
    isometry_check_q1,
    isometry_check_qge2,
    isometry_level_permutation_check,
)
from tphardy.analysis.operator import compose_function
from tphardy.functions import TreeFunction, random_function, tp_norm
from tphardy.symbols import Symbol, automorphism_table, builtin
from tphardy.tree import ROOT, iter_ball


def table_from(q, depth, overrides):
    return Symbol(q, table={v: overrides.get(v, v) for v in iter_ball(q, depth)}, depth=depth)


def test_q1_level_bijection_is_isometry():
    rep = isometry_check_q1(builtin("child-permutation", 1), 8)
    assert rep.overall == ISOMETRY and all(c.holds for c in rep.conditions.values())


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_q1_root_moved(p):
    rep = isometry_check_q1(builtin("root-displace", 1), 6, p)
    assert rep.overall == VIOLATED and rep.violated == "1"
    assert rep.witness["function"] == TreeFunction(1, {ROOT: 1.0, (0,): 2 ** (1 / p)})
    assert rep.witness["norm_pth"] == pytest.approx(1.0) and rep.witness["composed_norm_pth"] == pytest.approx(2.0)


def test_q1_level_incoherent():
    phi = table_from(1, 6, {(1,): (1, 0), (1, 0): (1, 0, 0), (1, 0, 0): (1, 0, 0, 0)})
    rep = isometry_check_q1(phi, 6, 2)
    c = rep.conditions["3"]
    assert c.holds is False and c.witness["level"] == 1
    assert c.witness["norm_pth"] == pytest.approx(1.0) and c.witness["composed_norm_pth"] >= 1.5


def test_q1_collapse_not_injective():
    phi = table_from(1, 4, {(1,): (0,)})
    rep = isometry_check_q1(phi, 4)
    assert rep.conditions["4"].holds is False and rep.conditions["4"].witness["composed_norm_pth"] == pytest.approx(2.0)
    assert rep.conditions["2"].holds is False


def test_q1_rejects_other_q():
    with pytest.raises(ValueError):
        isometry_check_q1(builtin("identity", 2), 3)
    with pytest.raises(ValueError):
        isometry_check_qge2(builtin("identity", 1), 3)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_parent_collapse_passes(k):
    rep = isometry_check_qge2(builtin("parent-collapse", 2, k=k), 8)
    assert rep.overall == ISOMETRY
    assert all(rep.conditions[c].holds for c in "123")
    assert 0 <= min(rep.lam.values()) and max(rep.lam.values()) <= 1
    assert rep.conditions["4"].witness["resolved_radius"] == 7


def test_parent_collapse_breaks_two_branch_conditions():
    # the q = 1 pointwise conditions 3 and 4 fail for this isometry
    phi = builtin("parent-collapse", 2, k=2)
    images = {phi(v) for v in [(0, 0), (0, 1)]}
    assert images == {(0,), ROOT}


def test_child_permutation_passes():
    rep = isometry_check_qge2(builtin("child-permutation", 3), 6)
    assert rep.is_isometry and rep.conditions["4"].holds is True


def test_root_displacing_automorphism_violates_first_condition():
    rep = isometry_check_qge2(automorphism_table(2, (2, 1), 8), 8, p=2)
    assert rep.violated == "1"
    assert rep.witness["function"] == TreeFunction(2, {(2, 1): 6 ** 0.5})
    assert rep.witness["composed_norm_pth"] == pytest.approx(6.0)


def test_weight_sum_violation():
    phi = table_from(2, 4, {(2,): (1,)})
    rep = isometry_check_qge2(phi, 4)
    assert rep.violated == "2" and rep.witness["level"] == 1
    assert rep.witness["composed_norm_pth"] == pytest.approx(float(rep.witness["weight_sum"]))


def test_uniformity_violation():
    # level 2: two vertices to 0, one to each of 1.0 .. 2.1 except 0.0 and 0.1
    phi = table_from(2, 3, {(0, 0): (0,), (0, 1): (0,), (1, 0): (0, 0), (1, 1): (0, 1)})
    rep = isometry_check_qge2(phi, 3)
    assert rep.conditions["3"].holds is False


def test_short_depth_is_inconclusive():
    rep = isometry_check_qge2(builtin("parent-collapse", 2, k=2), 1)
    assert rep.overall in (ISOMETRY, INCONCLUSIVE)
    # sending every vertex to its parent (below level 1) preserves all level means
    phi = Symbol.from_rule(2, lambda v: v[:-1] if len(v) > 1 else v)
    assert isometry_check_qge2(phi, 6).overall == ISOMETRY
    rep = isometry_check_qge2(Symbol.from_rule(2, lambda v: v + (0,)), 6)
    assert rep.violated == "1"


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.sampled_from([1.0, 2.0, 3.0]), st.sampled_from([2, 3]))
def test_certified_isometries_preserve_norms(seed, p, k):
    phi = builtin("parent-collapse", 2, k=k)
    assert isometry_check_qge2(phi, 8).is_isometry
    rng = random.Random(seed)
    for _ in range(5):
        f = random_function(2, 6, rng)
        assert abs(compose_function(phi, f, 8).norm(p).value - tp_norm(f, p).value) <= 1e-9


def test_level_permutation():
    rep = isometry_level_permutation_check(builtin("child-permutation", 2), 4)
    assert rep.ok and rep.permutation_levels() == [1, 2, 3, 4]
    assert rep.levels[1]["permutation"] == [1, 2, 0]
    rep = isometry_level_permutation_check(builtin("parent-collapse", 2, k=3), 6)
    assert rep.permutation_levels() == [1, 2]
    assert all(rep.levels[n]["status"] == "not-applicable" for n in range(3, 7))


def test_level_permutation_reports_collision():
    phi = table_from(2, 3, {(2,): (1,)})
    assert isometry_check_qge2(phi, 3).overall == VIOLATED
    rep = isometry_level_permutation_check(phi, 3)
    assert not rep.ok and rep.levels[1] == {"status": "violated", "reason": "collision", "pair": ["1", "2"]}
    phi = table_from(2, 3, {(2,): ROOT})
    assert isometry_level_permutation_check(phi, 3).levels[1]["reason"] == "level not mapped into itself"


def test_sup_norm_isometry_is_surjectivity():
    assert isometry_check_inf(builtin("parent-collapse", 2, k=2), 6).holds
    assert not isometry_check_inf(builtin("constant", 2), 6).holds
