"""Self-maps of the tree: representation, pre-image counting, classification.

A :class:`Symbol` is either a finite table, total on the ball of radius
``depth``, or a rule (a pure function of the vertex) with an optional
declared evaluable depth.  Whenever a named construction leaves a vertex
choice open, the lexicographically smallest addresses are used.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable

from .tree import (
    ROOT,
    Vertex,
    check_level,
    check_q,
    check_vertex,
    enumerate_level,
    format_vertex,
    is_neighbor,
    is_valid,
    iter_ball,
    level_size,
    neighbors,
    parse_vertex,
    vertex_from_rank,
    vertex_rank,
)


class SymbolError(ValueError):
    """Raised for malformed symbols and unknown builtins."""


class DomainError(SymbolError):
    """Raised when a symbol is evaluated beyond its domain depth."""


class NotInjectiveError(SymbolError):
    def __init__(self, first: Vertex, second: Vertex, image: Vertex):
        super().__init__(
            f"not injective: {format_vertex(first)} and {format_vertex(second)} "
            f"both map to {format_vertex(image)}"
        )
        self.pair = (first, second)
        self.image = image


class NotSurjectiveError(SymbolError):
    def __init__(self, missed: Vertex, radius: int):
        super().__init__(
            f"not surjective onto requested ball: {format_vertex(missed)} has no pre-image "
            f"(covered radius {radius})"
        )
        self.missed = missed
        self.covered_radius = radius


class Symbol:
    """A self-map of the (q+1)-homogeneous tree, evaluable up to a depth."""

    def __init__(
        self,
        q: int,
        *,
        table: dict[Vertex, Vertex] | None = None,
        rule: Callable[[Vertex], Vertex] | None = None,
        depth: int | None = None,
        name: str | None = None,
        params: dict | None = None,
    ):
        self.q = check_q(q)
        if (table is None) == (rule is None):
            raise SymbolError("exactly one of table or rule must be given")
        self.name = name or ("table" if table is not None else "rule")
        self.params = dict(params or {})
        if table is not None:
            if depth is None:
                depth = max(map(len, table), default=0)
            check_level(depth)
            self._table = _validated_table(q, table, depth)
            self._rule = None
        else:
            if depth is not None:
                check_level(depth)
            self._table = None
            self._rule = rule
        self.depth = depth

    @classmethod
    def from_table(cls, q: int, table: dict[Vertex, Vertex], depth: int | None = None, name: str = "table"):
        return cls(q, table=table, depth=depth, name=name)

    @classmethod
    def from_rule(cls, q: int, rule: Callable[[Vertex], Vertex], depth: int | None = None, name: str = "rule", params=None):
        return cls(q, rule=rule, depth=depth, name=name, params=params)

    @property
    def kind(self) -> str:
        return "table" if self._table is not None else "rule"

    def clamp(self, depth: int) -> int:
        """``min(depth, declared depth)``."""
        return depth if self.depth is None else min(depth, self.depth)

    def apply(self, v: Vertex) -> Vertex:
        if self.depth is not None and len(v) > self.depth:
            raise DomainError(
                f"{self.name}: {format_vertex(v)} is beyond the domain depth {self.depth}"
            )
        if self._table is not None:
            try:
                return self._table[v]
            except KeyError:
                raise DomainError(f"{self.name}: {v!r} is not a vertex of the domain") from None
        w = self._rule(v)
        if not is_valid(w, self.q):
            raise SymbolError(f"{self.name}: image {w!r} of {format_vertex(v)} is not a valid vertex")
        return w

    __call__ = apply

    def table_items(self):
        if self._table is None:
            raise SymbolError("rule symbols have no table")
        return self._table.items()

    def to_table(self, depth: int) -> "Symbol":
        depth = self.clamp(depth)
        return Symbol(self.q, table={v: self.apply(v) for v in iter_ball(self.q, depth)},
                      depth=depth, name=self.name, params=self.params)

    def __repr__(self):
        d = "inf" if self.depth is None else self.depth
        return f"Symbol({self.name!r}, q={self.q}, kind={self.kind}, depth={d})"


def _validated_table(q: int, table: dict[Vertex, Vertex], depth: int) -> dict[Vertex, Vertex]:
    for v, w in table.items():
        if not is_valid(v, q):
            raise SymbolError(f"table key {v!r} is not a valid vertex for q={q}")
        if len(v) > depth:
            raise SymbolError(f"table key {format_vertex(v)} lies beyond the declared depth {depth}")
        if not is_valid(w, q):
            raise SymbolError(f"image {w!r} of {format_vertex(v)} is not a valid vertex for q={q}")
    for v in iter_ball(q, depth):
        if v not in table:
            raise SymbolError(f"table is not total: {format_vertex(v)} has no image")
    return dict(table)


# -- pre-image counts --------------------------------------------------------------

@dataclass
class PreimageHistogram:
    """Pre-image counts of level-``n`` vertices.

    ``counts[w]`` is the number of ``v`` with ``|v| = n`` and ``phi(v) = w``
    (only positive counts are stored).  ``per_level_max[m]`` is the largest
    count over image vertices at level ``m`` and ``maximizers[m]`` the
    lexicographically smallest vertex achieving it.
    """

    q: int
    n: int
    counts: dict[Vertex, int]
    per_level_max: dict[int, int]
    maximizers: dict[int, Vertex]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def weighted_sum(self) -> int:
        """Sum over image levels of ``N_{m,n} c_m`` (an exact integer)."""
        return sum(top * level_size(self.q, m) for m, top in self.per_level_max.items())

    def distinct_at(self, m: int) -> int:
        return sum(1 for w in self.counts if len(w) == m)


def preimage_histogram(phi: Symbol, n: int) -> PreimageHistogram:
    check_level(n)
    counts = Counter(phi.apply(v) for v in enumerate_level(phi.q, n))
    per_level_max: dict[int, int] = {}
    maximizers: dict[int, Vertex] = {}
    for w in sorted(counts):
        m, c = len(w), counts[w]
        if c > per_level_max.get(m, 0):
            per_level_max[m] = c
            maximizers[m] = w
    return PreimageHistogram(phi.q, n, dict(counts), dict(sorted(per_level_max.items())),
                             dict(sorted(maximizers.items())))


# -- classification ----------------------------------------------------------------

@dataclass
class Classification:
    """Structural facts about a symbol on the ball of radius ``depth``.

    Every flag holds "up to depth" only.  ``max_up``/``max_down`` are the
    per-level maxima of ``|phi(v)| - |v|`` and ``|v| - |phi(v)|``;
    ``covered_radius`` is the largest ``r`` such that every vertex of level
    ``<= r`` has a pre-image in the ball (``-1`` if the root is missed).
    """

    depth: int
    is_injective: bool
    first_collision: tuple[Vertex, Vertex] | None
    sup_image_level: int
    max_valence: int
    max_up: list[int]
    max_down: list[int]
    min_image_level: list[int]
    max_image_level: list[int]
    covered_radius: int
    is_level_preserving: bool
    is_automorphism_up_to: bool
    root_image: Vertex

    @property
    def displacement_up(self) -> int:
        return max(self.max_up)

    @property
    def displacement_down(self) -> int:
        return max(self.max_down)


def classify(phi: Symbol, depth: int) -> Classification:
    depth = phi.clamp(check_level(depth))
    q = phi.q
    first_pre: dict[Vertex, Vertex] = {}
    image: dict[Vertex, Vertex] = {}
    valence: Counter = Counter()
    collision = None
    max_up, max_down, min_img, max_img = [], [], [], []
    level_preserving = True
    edges_ok = True
    for n in range(depth + 1):
        up = down = -(10**9)
        lo, hi = 10**9, -1
        for v in enumerate_level(q, n):
            w = image[v] = phi.apply(v)
            valence[w] += 1
            if w in first_pre:
                if collision is None:
                    collision = (first_pre[w], v)
            else:
                first_pre[w] = v
            k = len(w)
            up, down = max(up, k - n), max(down, n - k)
            lo, hi = min(lo, k), max(hi, k)
            if k != n:
                level_preserving = False
            if n and edges_ok and not is_neighbor(w, image[v[:-1]]):
                edges_ok = False
        max_up.append(up)
        max_down.append(down)
        min_img.append(lo)
        max_img.append(hi)

    covered = _covered_radius(q, first_pre.keys(), depth + max(max_up) if max_up else depth)
    injective = collision is None
    root_image = image[ROOT]
    auto = False
    if injective and edges_ok and covered >= depth - len(root_image):
        auto = _reflects_adjacency(q, first_pre)
    return Classification(
        depth=depth,
        is_injective=injective,
        first_collision=collision,
        sup_image_level=max(max_img),
        max_valence=max(valence.values()),
        max_up=max_up,
        max_down=max_down,
        min_image_level=min_img,
        max_image_level=max_img,
        covered_radius=covered,
        is_level_preserving=level_preserving,
        is_automorphism_up_to=auto,
        root_image=root_image,
    )


def _covered_radius(q: int, images: Iterable[Vertex], limit: int) -> int:
    per_level = Counter(len(w) for w in images)
    r = -1
    for m in range(limit + 1):
        if per_level.get(m, 0) != level_size(q, m):
            break
        r = m
    return r


def _reflects_adjacency(q: int, preimage: dict[Vertex, Vertex]) -> bool:
    # phi(u) ~ phi(v) with both u, v in the ball must imply u ~ v
    for w, v in preimage.items():
        for y in neighbors(w, q):
            u = preimage.get(y)
            if u is not None and not is_neighbor(u, v):
                return False
    return True


def invert(phi: Symbol, depth: int, radius: int | None = None) -> Symbol:
    """Invert ``phi`` from its values on the ball of radius ``depth``.

    The result is a table on the ball of radius ``radius`` (default: the
    largest ball fully covered by the images).  Raises
    :class:`NotInjectiveError` with the first colliding pair in enumeration
    order, or :class:`NotSurjectiveError` naming a vertex of the requested
    ball without pre-image.
    """
    depth = phi.clamp(check_level(depth))
    inverse: dict[Vertex, Vertex] = {}
    for v in iter_ball(phi.q, depth):
        w = phi.apply(v)
        if w in inverse:
            raise NotInjectiveError(inverse[w], v, w)
        inverse[w] = v
    covered = _covered_radius(phi.q, inverse.keys(), max(map(len, inverse)))
    target = covered if radius is None else radius
    if target > covered or target < 0:
        missed = next(u for u in enumerate_level(phi.q, covered + 1) if u not in inverse)
        raise NotSurjectiveError(missed, covered)
    table = {w: inverse[w] for w in iter_ball(phi.q, target)}
    return Symbol(phi.q, table=table, depth=target, name=f"inverse({phi.name})")


# -- builtin maps ---------------------------------------------------------------------

def _vertex_param(value, q: int) -> Vertex:
    if isinstance(value, (list, tuple)):
        return check_vertex(tuple(value), q)
    return parse_vertex(value, q)


def _identity(q):
    return Symbol.from_rule(q, lambda v: v, name="identity")


def _constant(q, target="o"):
    w = _vertex_param(target, q)
    return Symbol.from_rule(q, lambda v: w, name="constant", params={"target": format_vertex(w)})


def _root_displace(q, target="0"):
    """Moves only the root: ``o -> target``, identity elsewhere."""
    w = _vertex_param(target, q)
    return Symbol.from_rule(q, lambda v: w if not v else v, name="root-displace",
                            params={"target": format_vertex(w)})


def _lex_first(n: int) -> Vertex:
    return (0,) * n


def _unbounded_bijection(q):
    # involution swapping the chosen vertices of levels 2k+1 and 4k+2, k >= 0
    def rule(v):
        n = len(v)
        if n == 0 or any(v):
            return v
        if n % 2 == 1:
            return _lex_first(2 * n)
        if n % 4 == 2:
            return _lex_first(n // 2)
        return v

    return Symbol.from_rule(q, rule, name="example-unbounded-bijection")


def _chosen_count(n: int) -> int:
    # |A_{2k-1}| = k, |A_{2k}| = k + 1
    return (n + 1) // 2 if n % 2 else n // 2 + 1


def _bounded_bij_unbounded_inverse(q):
    if q < 2:
        raise SymbolError("example-bounded-bij-unbounded-inverse needs q >= 2")

    def rule(v):
        n = len(v)
        if n == 0:
            return v
        i = vertex_rank(v, q) + 1
        if i > _chosen_count(n):
            return v
        if n % 2:
            # A_{2k-1} -> A_{2k} minus its first element
            return vertex_from_rank(q, n + 1, i)
        if i == 1:
            return vertex_from_rank(q, n // 2, 0)
        # A_{2k} minus first -> A_{2k+1} minus first
        return vertex_from_rank(q, n + 1, i - 1)

    return Symbol.from_rule(q, rule, name="example-bounded-bij-unbounded-inverse")


def _parent_collapse(q, k=2):
    k = int(k)
    if k < 2:
        raise SymbolError("parent-collapse needs k >= 2")

    def rule(v):
        n = len(v)
        if n < k:
            return v
        if n == k and v[-1] != 0:
            return ROOT
        return v[:-1]

    return Symbol.from_rule(q, rule, name="parent-collapse", params={"k": k})


def _check_perm(perm, size: int, label: str) -> tuple[int, ...]:
    perm = tuple(int(x) for x in perm)
    if sorted(perm) != list(range(size)):
        raise SymbolError(f"{label} must be a permutation of 0..{size - 1}, got {perm}")
    return perm


def _child_permutation(q, root_perm=None, child_perm=None):
    """Root-fixing automorphism permuting branch indices position by position."""
    root_perm = _check_perm(root_perm if root_perm is not None else [(i + 1) % (q + 1) for i in range(q + 1)],
                            q + 1, "root_perm")
    child_perm = _check_perm(child_perm if child_perm is not None else [(i + 1) % q for i in range(q)],
                             q, "child_perm")

    def rule(v):
        if not v:
            return v
        return (root_perm[v[0]],) + tuple(child_perm[b] for b in v[1:])

    return Symbol.from_rule(q, rule, name="child-permutation",
                            params={"root_perm": list(root_perm), "child_perm": list(child_perm)})


def _level_constant(q):
    return Symbol.from_rule(q, lambda v: _lex_first(len(v)), name="level-constant")


def _one_to_root(q):
    """The first vertex of each nonzero level goes to the root; identity elsewhere."""
    return Symbol.from_rule(q, lambda v: ROOT if v and not any(v) else v, name="one-to-root")


def _level_split(q):
    """The last vertex of each nonzero level moves to its first child; identity elsewhere."""

    def rule(v):
        if v and v[0] == q and all(b == q - 1 for b in v[1:]):
            return v + (0,)
        return v

    return Symbol.from_rule(q, rule, name="level-split")


def automorphism_table(q: int, target, depth: int) -> Symbol:
    """Table of an automorphism sending the root to ``target``, on the ball of radius ``depth``.

    Built outward from the root: each vertex's children are sent, in order,
    to the neighbours of its image other than the image of its parent
    (parent first, then children ascending).
    """
    w = _vertex_param(target, q)
    check_level(depth)
    table = {ROOT: w}
    frontier = [ROOT]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            y = table[x]
            back = table[x[:-1]] if x else None
            free = [z for z in neighbors(y, q) if z != back]
            for child, z in zip(_children_of(x, q), free):
                table[child] = z
                nxt.append(child)
        frontier = nxt
    return Symbol(q, table=table, depth=depth, name="root-displacing-automorphism",
                  params={"target": format_vertex(w), "depth": depth})


def _children_of(x: Vertex, q: int) -> list[Vertex]:
    return [x + (i,) for i in range(q + 1 if not x else q)]


def random_table(q: int, depth: int, rng: random.Random, image_depth: int | None = None) -> Symbol:
    """A uniformly random table map of the ball into the ball of radius ``image_depth``."""
    image_depth = depth if image_depth is None else image_depth
    targets = list(iter_ball(q, image_depth))
    table = {v: rng.choice(targets) for v in iter_ball(q, depth)}
    return Symbol(q, table=table, depth=depth, name="random-table")


BUILTINS: dict[str, Callable[..., Symbol]] = {
    "identity": _identity,
    "constant": _constant,
    "root-displace": _root_displace,
    "example-unbounded-bijection": _unbounded_bijection,
    "example-bounded-bij-unbounded-inverse": _bounded_bij_unbounded_inverse,
    "parent-collapse": _parent_collapse,
    "child-permutation": _child_permutation,
    "level-constant": _level_constant,
    "one-to-root": _one_to_root,
    "level-split": _level_split,
    "root-displacing-automorphism": automorphism_table,
}


def builtin(name: str, q: int, **params) -> Symbol:
    """Construct a named map.

    >>> builtin("parent-collapse", 2, k=2)((0, 0))
    (0,)
    """
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise SymbolError(f"unknown builtin {name!r}; known: {', '.join(sorted(BUILTINS))}") from None
    check_q(q)
    try:
        return factory(q, **params)
    except TypeError as exc:
        raise SymbolError(f"bad parameters for builtin {name!r}: {exc}") from None


def chosen_vertices(q: int, n: int) -> list[Vertex]:
    """The vertices labelled ``v_{n,1}, v_{n,2}, ...`` by the bounded-bijection builtin."""
    return [vertex_from_rank(q, n, r) for r in range(_chosen_count(n))]
