import itertools

import pytest
from hypothesis import given, strategies as st

from tphardy.tree import (
    ROOT,
    LevelSet,
    TreeError,
    TreeParams,
    ball_size,
    children,
    distance,
    enumerate_level,
    format_vertex,
    group_by_level,
    is_neighbor,
    is_valid,
    iter_ball,
    level_size,
    neighbors,
    parent,
    parse_vertex,
    truncate,
    vertex_from_rank,
    vertex_rank,
)

qs = st.integers(min_value=1, max_value=4)


@st.composite
def vertices(draw, max_level=7):
    q = draw(qs)
    n = draw(st.integers(min_value=0, max_value=max_level))
    if n == 0:
        return q, ROOT
    head = draw(st.integers(min_value=0, max_value=q))
    tail = draw(st.lists(st.integers(min_value=0, max_value=q - 1), min_size=n - 1, max_size=n - 1))
    return q, (head, *tail)


@pytest.mark.parametrize("q,sizes", [(1, [1, 2, 2, 2]), (2, [1, 3, 6, 12, 24]), (3, [1, 4, 12, 36])])
def test_level_sizes(q, sizes):
    assert [level_size(q, n) for n in range(len(sizes))] == sizes


def test_level_size_is_exact_for_deep_levels():
    assert level_size(3, 60) == 4 * 3**59


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_bad_q_rejected(bad):
    with pytest.raises(TreeError):
        level_size(bad, 1)


def test_negative_level_rejected():
    with pytest.raises(TreeError):
        level_size(2, -1)


@given(qs, st.integers(min_value=0, max_value=6))
def test_enumeration_matches_size_and_is_sorted(q, n):
    level = list(enumerate_level(q, n))
    assert len(level) == level_size(q, n) == len(set(level))
    assert level == sorted(level)
    assert all(is_valid(v, q) and len(v) == n for v in level)


def test_enumeration_is_lazy():
    gen = enumerate_level(3, 40)
    assert next(gen) == (0,) * 40


def test_first_level_examples():
    assert list(enumerate_level(2, 1)) == [(0,), (1,), (2,)]
    assert children((0,), 2) == [(0, 0), (0, 1)]
    assert children(ROOT, 2) == [(0,), (1,), (2,)]


@given(vertices())
def test_rank_roundtrip(qv):
    q, v = qv
    assert vertex_from_rank(q, len(v), vertex_rank(v, q)) == v


@given(qs, st.integers(min_value=0, max_value=5))
def test_ranks_follow_enumeration(q, n):
    assert [vertex_rank(v, q) for v in enumerate_level(q, n)] == list(range(level_size(q, n)))


def test_rank_out_of_range():
    with pytest.raises(TreeError):
        vertex_from_rank(2, 1, 3)


@given(vertices())
def test_neighbors(qv):
    q, v = qv
    nb = neighbors(v, q)
    assert len(nb) == q + 1
    assert all(is_neighbor(v, u) and distance(u, v) == 1 for u in nb)
    if v:
        assert nb[0] == parent(v)
        assert v in children(parent(v), q)


def test_parent_of_root_fails():
    with pytest.raises(TreeError):
        parent(ROOT)


@given(vertices(), st.integers(min_value=0, max_value=8))
def test_truncate_is_ancestor(qv, m):
    q, v = qv
    t = truncate(v, m)
    assert len(t) == min(m, len(v))
    assert distance(t, v) == len(v) - len(t)


@given(vertices())
def test_format_parse_roundtrip(qv):
    q, v = qv
    assert parse_vertex(format_vertex(v), q) == v


def test_root_text_forms():
    assert format_vertex(ROOT) == "o"
    assert parse_vertex("", 2) == ROOT == parse_vertex("o", 2)
    assert parse_vertex("2.0.1", 2) == (2, 0, 1)


@pytest.mark.parametrize("text,q", [("3", 2), ("0.2", 2), ("a.b", 2), ("1..2", 2), ("-1", None)])
def test_parse_rejects(text, q):
    with pytest.raises(TreeError):
        parse_vertex(text, q)


def test_validity():
    assert is_valid((2, 1), 2) and not is_valid((2, 2), 2) and not is_valid([0], 2)


def test_ball_and_grouping():
    ball = list(iter_ball(2, 3))
    assert len(ball) == ball_size(2, 3) == 1 + 3 + 6 + 12
    groups = group_by_level(ball)
    assert {n: len(vs) for n, vs in groups.items()} == {0: 1, 1: 3, 2: 6, 3: 12}


def test_params_and_level_set():
    t = TreeParams(2)
    lv = t.level(2)
    assert len(lv) == 6 and (1, 1) in lv and (1, 2) not in lv and (0,) not in lv
    assert list(lv) == list(enumerate_level(2, 2))
    assert list(t.ball(1)) == [ROOT, (0,), (1,), (2,)]
    with pytest.raises(TreeError):
        TreeParams(0)
    assert isinstance(LevelSet(1, 3), LevelSet)


def test_distance_between_cousins():
    assert distance((0, 1), (1, 0)) == 4
    assert distance((0, 1), (0, 1)) == 0
    assert list(itertools.islice(enumerate_level(1, 3), 2)) == [(0, 0, 0), (1, 0, 0)]
