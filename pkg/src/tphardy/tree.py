"""Vertex addressing and level enumeration on the (q+1)-homogeneous rooted tree.

A vertex is a tuple of branch indices read from the root.  The first index
ranges over ``0..q`` (the root has ``q+1`` children), every later index over
``0..q-1`` (other vertices have ``q`` children).  The root is the empty tuple.
Nothing here stores the tree; every finite view takes an explicit depth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

Vertex = tuple[int, ...]

ROOT: Vertex = ()


class TreeError(ValueError):
    """Raised for invalid tree parameters or malformed vertex addresses."""


def check_q(q: int) -> int:
    if isinstance(q, bool) or not isinstance(q, int):
        raise TreeError(f"q must be an integer, got {q!r}")
    if q < 1:
        raise TreeError(f"q must be >= 1, got {q}")
    return q


def check_level(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise TreeError(f"level must be a nonnegative integer, got {n!r}")
    return n


def level_size(q: int, n: int) -> int:
    """Number of vertices at distance ``n`` from the root: 1, then (q+1)q^(n-1).

    >>> level_size(2, 3)
    12
    """
    check_q(q)
    check_level(n)
    if n == 0:
        return 1
    return (q + 1) * q ** (n - 1)


def ball_size(q: int, depth: int) -> int:
    return sum(level_size(q, n) for n in range(depth + 1))


def level(v: Vertex) -> int:
    return len(v)


def is_valid(v: Vertex, q: int) -> bool:
    if not isinstance(v, tuple):
        return False
    for i, b in enumerate(v):
        if isinstance(b, bool) or not isinstance(b, int):
            return False
        if b < 0 or b > (q if i == 0 else q - 1):
            return False
    return True


def check_vertex(v: Vertex, q: int) -> Vertex:
    if not is_valid(v, q):
        raise TreeError(f"{v!r} is not a valid vertex address for q={q}")
    return v


def parent(v: Vertex) -> Vertex:
    if not v:
        raise TreeError("the root has no parent")
    return v[:-1]


def children(v: Vertex, q: int) -> list[Vertex]:
    """Children of ``v`` in ascending branch-index order."""
    width = q + 1 if not v else q
    return [v + (i,) for i in range(width)]


def neighbors(v: Vertex, q: int) -> list[Vertex]:
    """All ``q+1`` neighbours: the parent first (if any), then the children."""
    out = [] if not v else [v[:-1]]
    out.extend(children(v, q))
    return out


def is_neighbor(u: Vertex, v: Vertex) -> bool:
    if len(u) == len(v) + 1:
        return u[:-1] == v
    if len(v) == len(u) + 1:
        return v[:-1] == u
    return False


def truncate(v: Vertex, m: int) -> Vertex:
    """Ancestor of ``v`` at level ``min(m, |v|)``."""
    return v[:m]


def distance(u: Vertex, v: Vertex) -> int:
    common = 0
    for a, b in zip(u, v):
        if a != b:
            break
        common += 1
    return len(u) + len(v) - 2 * common


def enumerate_level(q: int, n: int) -> Iterator[Vertex]:
    """Lazily yield the ``level_size(q, n)`` addresses of level ``n``, lexicographically."""
    check_q(q)
    check_level(n)
    if n == 0:
        yield ROOT
        return
    yield from itertools.product(range(q + 1), *([range(q)] * (n - 1)))


def iter_ball(q: int, depth: int) -> Iterator[Vertex]:
    """Vertices of levels ``0..depth``, level by level."""
    for n in range(depth + 1):
        yield from enumerate_level(q, n)


def vertex_rank(v: Vertex, q: int) -> int:
    """Position of ``v`` in the lexicographic order of its level."""
    rank = 0
    for i, b in enumerate(v):
        rank = rank * (q + 1 if i == 0 else q) + b
    return rank


def vertex_from_rank(q: int, n: int, rank: int) -> Vertex:
    size = level_size(q, n)
    if not 0 <= rank < size:
        raise TreeError(f"rank {rank} out of range for level {n} (size {size})")
    digits = []
    for _ in range(n - 1):
        rank, d = divmod(rank, q)
        digits.append(d)
    if n:
        digits.append(rank)
    return tuple(reversed(digits))


def format_vertex(v: Vertex) -> str:
    """Dot-separated address; the root prints as ``"o"``."""
    return ".".join(map(str, v)) if v else "o"


def parse_vertex(text: str, q: int | None = None) -> Vertex:
    """Parse ``"2.0.1"``; ``""`` and ``"o"`` denote the root."""
    s = str(text).strip()
    if s in ("", "o"):
        return ROOT
    try:
        v = tuple(int(part) for part in s.split("."))
    except ValueError:
        raise TreeError(f"malformed vertex address {text!r}") from None
    if q is not None:
        check_vertex(v, q)
    elif any(b < 0 for b in v):
        raise TreeError(f"malformed vertex address {text!r}")
    return v


@dataclass(frozen=True)
class TreeParams:
    """Branching parameter of the (q+1)-homogeneous rooted tree."""

    q: int

    def __post_init__(self):
        check_q(self.q)

    def level_size(self, n: int) -> int:
        return level_size(self.q, n)

    def children(self, v: Vertex) -> list[Vertex]:
        return children(v, self.q)

    def level(self, n: int) -> "LevelSet":
        return LevelSet(self.q, n)

    def ball(self, depth: int) -> Iterator[Vertex]:
        return iter_ball(self.q, depth)

    def check(self, v: Vertex) -> Vertex:
        return check_vertex(v, self.q)


class LevelSet:
    """The vertex set of one level, iterated lazily in lexicographic order."""

    def __init__(self, q: int, n: int):
        self.q = check_q(q)
        self.n = check_level(n)

    def __len__(self) -> int:
        return level_size(self.q, self.n)

    def __iter__(self) -> Iterator[Vertex]:
        return enumerate_level(self.q, self.n)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, tuple) and len(v) == self.n and is_valid(v, self.q)

    def __repr__(self) -> str:
        return f"LevelSet(q={self.q}, n={self.n})"


def group_by_level(vertices: Iterable[Vertex]) -> dict[int, list[Vertex]]:
    out: dict[int, list[Vertex]] = {}
    for v in vertices:
        out.setdefault(len(v), []).append(v)
    return out
