"""Finitely supported functions on the tree, level means and T_p norms.

``M_p(n, f)`` is the p-mean of ``|f|`` over level ``n`` (the max when
``p = inf``) and ``||f||_p`` is its supremum over levels.  Power sums are
accumulated with :func:`math.fsum` in the p-th power domain and a single root
is taken at the end.
"""

from __future__ import annotations

import math
import numbers
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .tree import (
    ROOT,
    Vertex,
    check_level,
    check_q,
    check_vertex,
    enumerate_level,
    format_vertex,
    level_size,
    parse_vertex,
)

INF = math.inf

# relative slack for "equal up to rounding" comparisons
REL_TOL = 1e-9


def check_p(p) -> float:
    """Validate an exponent: a positive real or ``math.inf``."""
    if isinstance(p, bool) or not isinstance(p, numbers.Real):
        raise ValueError(f"p must be a positive real or inf, got {p!r}")
    p = float(p)
    if math.isnan(p) or p <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    return p


def parse_p(text) -> float:
    """Parse ``"2"``, ``"1.5"`` or ``"inf"``."""
    if isinstance(text, str):
        s = text.strip().lower()
        if s in ("inf", "infinity", "∞"):
            return INF
        try:
            return check_p(float(s))
        except ValueError:
            raise ValueError(f"cannot parse exponent {text!r}") from None
    return check_p(text)


def format_p(p: float) -> str:
    return "inf" if p == INF else f"{p:g}"


class TreeFunction:
    """A finitely supported complex function on the tree.

    Vertices missing from the support have value 0; zero values are dropped
    on construction so ``support`` is exact.
    """

    __slots__ = ("q", "_values")

    def __init__(self, q: int, values: dict[Vertex, complex] | Iterable[tuple[Vertex, complex]] | None = None):
        self.q = check_q(q)
        items = values.items() if isinstance(values, dict) else (values or ())
        vals: dict[Vertex, complex] = {}
        for v, x in items:
            check_vertex(v, q)
            x = complex(x)
            if x != 0:
                vals[v] = x
        self._values = vals

    @classmethod
    def indicator(cls, q: int, v: Vertex, scale: complex = 1.0) -> "TreeFunction":
        return cls(q, {v: scale})

    @classmethod
    def zero(cls, q: int) -> "TreeFunction":
        return cls(q)

    def __call__(self, v: Vertex) -> complex:
        return self._values.get(v, 0j)

    def items(self):
        return self._values.items()

    @property
    def support(self) -> list[Vertex]:
        return sorted(self._values, key=lambda v: (len(v), v))

    @property
    def max_level(self) -> int:
        """Deepest support level; -1 for the zero function."""
        return max(map(len, self._values), default=-1)

    def is_zero(self) -> bool:
        return not self._values

    def by_level(self) -> dict[int, list[complex]]:
        out: dict[int, list[complex]] = {}
        for v, x in self._values.items():
            out.setdefault(len(v), []).append(x)
        return out

    def _combine(self, other: "TreeFunction", sign: int) -> "TreeFunction":
        if not isinstance(other, TreeFunction):
            return NotImplemented
        if other.q != self.q:
            raise ValueError(f"cannot combine functions on trees with q={self.q} and q={other.q}")
        vals = dict(self._values)
        for v, x in other._values.items():
            vals[v] = vals.get(v, 0j) + sign * x
        return TreeFunction(self.q, vals)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return TreeFunction(self.q, {v: -x for v, x in self._values.items()})

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return TreeFunction(self.q, {v: scalar * x for v, x in self._values.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return TreeFunction(self.q, {v: x / scalar for v, x in self._values.items()})

    def __eq__(self, other):
        if not isinstance(other, TreeFunction):
            return NotImplemented
        return self.q == other.q and self._values == other._values

    def __repr__(self):
        body = ", ".join(f"{format_vertex(v)}: {self._values[v]:g}" for v in self.support[:6])
        more = ", ..." if len(self._values) > 6 else ""
        return f"TreeFunction(q={self.q}, {{{body}{more}}})"

    def to_triples(self) -> list[list]:
        """``[address, real, imag]`` rows, ordered by level then address."""
        return [[format_vertex(v), self._values[v].real, self._values[v].imag] for v in self.support]

    @classmethod
    def from_triples(cls, q: int, rows: Iterable[Sequence]) -> "TreeFunction":
        vals: dict[Vertex, complex] = {}
        for i, row in enumerate(rows):
            if not 2 <= len(row) <= 3:
                raise ValueError(f"function entry {i}: expected (address, real[, imag]), got {row!r}")
            v = parse_vertex(row[0], q)
            x = complex(float(row[1]), float(row[2]) if len(row) == 3 else 0.0)
            vals[v] = vals.get(v, 0j) + x
        return cls(q, vals)


def indicator(q: int, v: Vertex) -> TreeFunction:
    """The characteristic function of ``{v}``."""
    return TreeFunction.indicator(q, v)


def mean_from_abs(abs_values: Iterable[float], count: int, p: float) -> float:
    """p-mean of ``count`` numbers of which only the nonzero ones are listed."""
    if p == INF:
        return max(abs_values, default=0.0)
    return (math.fsum(a**p for a in abs_values) / count) ** (1.0 / p)


def power_mean_from_abs(abs_values: Iterable[float], count: int, p: float) -> float:
    """``M_p^p``: the mean of ``|x|^p`` (finite ``p`` only)."""
    return math.fsum(a**p for a in abs_values) / count


def mp_level(f: TreeFunction, n: int, p: float) -> float:
    """``M_p(n, f)``; vertices outside the support contribute 0."""
    check_level(n)
    p = check_p(p)
    vals = [abs(x) for v, x in f.items() if len(v) == n]
    return mean_from_abs(vals, level_size(f.q, n), p)


def mp_level_power(f: TreeFunction, n: int, p: float) -> float:
    """``M_p(n, f)^p`` without the final root (finite ``p``)."""
    p = check_p(p)
    if p == INF:
        raise ValueError("M_p^p is only defined for finite p")
    vals = [abs(x) for v, x in f.items() if len(v) == n]
    return power_mean_from_abs(vals, level_size(f.q, n), p)


@dataclass(frozen=True)
class NormResult:
    """A T_p norm evaluated over levels ``0..depth``.

    ``truncated`` is set when the support reaches below ``depth``, in which
    case ``value`` is only a lower bound.
    """

    value: float
    p: float
    depth: int
    level: int
    truncated: bool

    def __float__(self):
        return self.value


def tp_norm(f: TreeFunction, p: float, depth: int | None = None) -> NormResult:
    p = check_p(p)
    top = max(f.max_level, 0)
    if depth is None:
        depth = top
    check_level(depth)
    grouped = f.by_level()
    best, best_level = 0.0, 0
    for n in range(depth + 1):
        vals = grouped.get(n)
        if not vals:
            continue
        m = mean_from_abs((abs(x) for x in vals), level_size(f.q, n), p)
        if m > best:
            best, best_level = m, n
    return NormResult(best, p, depth, best_level, truncated=depth < f.max_level)


def norm(f: TreeFunction, p: float) -> float:
    """Exact ``||f||_p`` of a finitely supported function."""
    return tp_norm(f, p).value


@dataclass(frozen=True)
class GrowthCheck:
    holds: bool
    max_ratio: float
    worst_vertex: Vertex | None
    norm: float


def growth_bound_check(f: TreeFunction, p: float, depth: int | None = None) -> GrowthCheck:
    """Check ``|f(v)| <= c_|v|^(1/p) ||f||_p`` at every support vertex.

    The zero function passes trivially with ratio 0.
    """
    p = check_p(p)
    if p == INF:
        raise ValueError("the growth estimate is stated for finite p")
    nrm = tp_norm(f, p, depth)
    if f.is_zero():
        return GrowthCheck(True, 0.0, None, 0.0)
    worst, worst_v = -1.0, None
    for v in f.support:
        ratio = abs(f(v)) / (level_size(f.q, len(v)) ** (1.0 / p) * nrm.value)
        if ratio > worst:
            worst, worst_v = ratio, v
    return GrowthCheck(worst <= 1.0 + REL_TOL, worst, worst_v, nrm.value)


@dataclass
class NormLimitReport:
    """Monotonicity of ``s -> ||f||_s`` and a bracket for ``||f||_inf``.

    ``bracket`` is ``[||f||_s, c^(1/s) ||f||_s]`` for the largest ``s`` in the
    grid, ``c`` being the size of the deepest support level; it follows from
    ``c_n^(-1/s) M_inf(n, f) <= M_s(n, f) <= ||f||_s``.
    """

    norms: dict[float, float]
    sup_norm: float
    monotone: bool
    level_bounds_hold: bool
    approximant: float
    bracket: tuple[float, float]
    violations: list[str] = field(default_factory=list)

    @property
    def bracket_contains_sup(self) -> bool:
        lo, hi = self.bracket
        return lo * (1 - REL_TOL) <= self.sup_norm <= hi * (1 + REL_TOL)

    @property
    def ok(self) -> bool:
        return self.monotone and self.level_bounds_hold and self.bracket_contains_sup


def norm_limit_check(f: TreeFunction, s_grid: Sequence[float], depth: int | None = None) -> NormLimitReport:
    grid = [check_p(s) for s in s_grid]
    if not grid:
        raise ValueError("s_grid must be nonempty")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise ValueError("s_grid must be strictly increasing")
    if grid[-1] == INF:
        raise ValueError("s_grid holds finite exponents only")
    if depth is None:
        depth = max(f.max_level, 0)
    norms = {s: tp_norm(f, s, depth).value for s in grid}
    sup = tp_norm(f, INF, depth).value
    violations = []
    monotone = True
    for a, b in zip(grid, grid[1:]):
        if norms[a] > norms[b] * (1 + REL_TOL):
            monotone = False
            violations.append(f"||f||_{a:g} > ||f||_{b:g}")
    level_ok = True
    for n in sorted(f.by_level()):
        if n > depth:
            continue
        c = level_size(f.q, n)
        m_inf = mp_level(f, n, INF)
        for s in grid:
            m_s = mp_level(f, n, s)
            if c ** (-1.0 / s) * m_inf > m_s * (1 + REL_TOL) or m_s > norms[s] * (1 + REL_TOL):
                level_ok = False
                violations.append(f"level bound fails at n={n}, s={s:g}")
    s_max = grid[-1]
    c_max = level_size(f.q, max(min(f.max_level, depth), 0))
    approx = norms[s_max]
    return NormLimitReport(
        norms=norms,
        sup_norm=sup,
        monotone=monotone,
        level_bounds_hold=level_ok,
        approximant=approx,
        bracket=(approx, approx * c_max ** (1.0 / s_max)),
        violations=violations,
    )


# -- rule functions (possibly infinite support) ---------------------------------

def rule_level_mean(rule: Callable[[Vertex], complex], q: int, n: int, p: float) -> float:
    """``M_p(n, f)`` for a function given by a rule, by enumerating level ``n``."""
    p = check_p(p)
    vals = (abs(rule(v)) for v in enumerate_level(q, n))
    return mean_from_abs(vals, level_size(q, n), p)


def rule_level_means(
    rule: Callable, q: int, p: float, depth: int, *, radial: bool = False
) -> list[float]:
    """Level means for ``n = 0..depth``.

    With ``radial=True`` the rule takes a level ``n`` instead of a vertex and
    the function is constant on each level, so ``M_p(n, f) = |rule(n)|``.
    """
    check_q(q)
    if radial:
        return [abs(complex(rule(n))) for n in range(depth + 1)]
    return [rule_level_mean(rule, q, n, p) for n in range(depth + 1)]


@dataclass
class DecayReport:
    """Truncation heuristic for membership in T_{p,0}; never a proof."""

    means: list[float]
    head_max: float
    tail_max: float
    verdict: str  # "decaying" | "non-decaying" | "inconclusive"


def decay_verdict(means: Sequence[float], tol: float) -> DecayReport:
    """Classify level means by their last quarter.

    "decaying" if the tail max is below ``tol``, "non-decaying" if it exceeds
    half of the head max, "inconclusive" otherwise.
    """
    k = max(1, len(means) // 4)
    head, tail = list(means[:-k]), list(means[-k:])
    head_max = max(head, default=0.0)
    tail_max = max(tail)
    if tail_max < tol:
        verdict = "decaying"
    elif tail_max > 0.5 * head_max:
        verdict = "non-decaying"
    else:
        verdict = "inconclusive"
    return DecayReport(list(means), head_max, tail_max, verdict)


def little_tp_decay(
    rule: Callable, q: int, p: float, depth: int, tol: float = 1e-6, *, radial: bool = False
) -> DecayReport:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return decay_verdict(rule_level_means(rule, q, p, depth, radial=radial), tol)


def radial_decay(scale: int) -> Callable[[Vertex], float]:
    """``v -> scale / (scale + |v|)``: unit norm, level means ``scale/(scale+m)``, pointwise limit 1."""
    if scale < 1:
        raise ValueError("scale must be >= 1")
    return lambda v: scale / (scale + len(v))


# -- random functions for property checks ----------------------------------------

def random_vertex(q: int, n: int, rng: random.Random) -> Vertex:
    if n == 0:
        return ROOT
    return (rng.randint(0, q),) + tuple(rng.randint(0, q - 1) for _ in range(n - 1))


def random_function(
    q: int,
    depth: int,
    rng: random.Random,
    max_support: int = 12,
    *,
    complex_values: bool = True,
) -> TreeFunction:
    """A nonzero function with at most ``max_support`` vertices on levels ``0..depth``."""
    size = rng.randint(1, max_support)
    vals: dict[Vertex, complex] = {}
    while not vals:
        for _ in range(size):
            v = random_vertex(q, rng.randint(0, depth), rng)
            re = rng.uniform(-2.0, 2.0)
            im = rng.uniform(-2.0, 2.0) if complex_values else 0.0
            vals[v] = complex(re, im)
        vals = {v: x for v, x in vals.items() if x != 0}
    return TreeFunction(q, vals)

