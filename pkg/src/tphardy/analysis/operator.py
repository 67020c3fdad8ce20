"""The composition operator ``f -> f o phi``: alpha functional and norm.

For ``1 <= p < inf`` the p-th power of the operator norm equals the
supremum over levels ``n`` of

    a_n = (1 / c_n) * sum_m N_{m,n} c_m

where ``N_{m,n}`` is the largest number of level-``n`` pre-images of a
level-``m`` vertex.  Each ``a_n`` is computed as an exact fraction of
integers.  On T_inf every composition operator has norm 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import random

from ..functions import INF, NormResult, TreeFunction, check_p, mean_from_abs, power_mean_from_abs, random_function
from ..symbols import PreimageHistogram, Symbol, classify, preimage_histogram
from ..tree import ROOT, check_level, enumerate_level, level_size
from .trends import DEFAULT_THRESHOLDS, TrendThresholds, classify_growth


def check_operator_p(p) -> float:
    p = check_p(p)
    if p == INF:
        raise ValueError("p = inf has its own norm theorem; use norm_infinity")
    if p < 1:
        raise ValueError(f"operator results need p >= 1, got {p:g}")
    return p


@dataclass
class AlphaSequence:
    """Per-level values ``a_n`` for ``n = 0..depth``.

    ``alpha_lower`` (their max) is a certified lower bound for the operator
    norm to the p-th power.  ``exact`` is set only when the symbol is a table
    whose whole domain was scanned.
    """

    per_level: dict[int, Fraction]
    depth: int
    trend: str
    exact: bool
    histograms: dict[int, PreimageHistogram] = field(default_factory=dict, repr=False)

    @property
    def alpha_lower(self) -> Fraction:
        return max(self.per_level.values())

    @property
    def argmax_level(self) -> int:
        best = self.alpha_lower
        return min(n for n, a in self.per_level.items() if a == best)

    def values(self) -> list[Fraction]:
        return [self.per_level[n] for n in range(self.depth + 1)]


def alpha_sequence(phi: Symbol, depth: int, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> AlphaSequence:
    depth = phi.clamp(check_level(depth))
    per_level: dict[int, Fraction] = {}
    hists: dict[int, PreimageHistogram] = {}
    for n in range(depth + 1):
        h = hists[n] = preimage_histogram(phi, n)
        per_level[n] = Fraction(h.weighted_sum(), level_size(phi.q, n))
    exact = phi.kind == "table" and depth == phi.depth
    return AlphaSequence(per_level, depth, classify_growth(list(per_level.values()), thresholds), exact, hists)


def level_witness(phi: Symbol, n: int, p: float, histogram: PreimageHistogram | None = None) -> TreeFunction:
    """``sum_m c_m^(1/p) chi_{v_m}`` with ``v_m`` the smallest maximiser of the level-``n`` counts at level ``m``.

    It has unit norm and ``M_p^p(n, f o phi) = a_n``.
    """
    h = histogram or preimage_histogram(phi, n)
    return TreeFunction(phi.q, {w: level_size(phi.q, m) ** (1.0 / p) for m, w in h.maximizers.items()})


@dataclass
class NormEstimate:
    p: float
    alpha: AlphaSequence
    value: float  # alpha_lower ** (1/p)
    witness: TreeFunction
    witness_level: int

    @property
    def value_pth(self) -> Fraction:
        return self.alpha.alpha_lower


def operator_norm(phi: Symbol, p: float, depth: int, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> NormEstimate:
    p = check_operator_p(p)
    alpha = alpha_sequence(phi, depth, thresholds)
    n = alpha.argmax_level
    witness = level_witness(phi, n, p, alpha.histograms[n])
    return NormEstimate(p, alpha, float(alpha.alpha_lower) ** (1.0 / p), witness, n)


class ComposedFunction:
    """Evaluator for ``f o phi`` on the ball of radius ``depth``.

    The composition is generally not finitely supported, so it is only ever
    evaluated level by level.
    """

    def __init__(self, phi: Symbol, f: TreeFunction, depth: int):
        if f.q != phi.q:
            raise ValueError("function and symbol live on different trees")
        self.phi = phi
        self.f = f
        self.depth = phi.clamp(check_level(depth))

    def __call__(self, v):
        return self.f(self.phi.apply(v))

    def level_abs(self, n: int) -> list[float]:
        f, phi = self.f, self.phi
        return [abs(f(phi.apply(v))) for v in enumerate_level(phi.q, n)]

    def level_mean(self, n: int, p: float) -> float:
        return mean_from_abs(self.level_abs(n), level_size(self.phi.q, n), check_p(p))

    def level_power(self, n: int, p: float) -> float:
        return power_mean_from_abs(self.level_abs(n), level_size(self.phi.q, n), check_operator_p(p))

    def norm(self, p: float) -> NormResult:
        p = check_p(p)
        best, where = 0.0, 0
        for n in range(self.depth + 1):
            m = self.level_mean(n, p)
            if m > best:
                best, where = m, n
        exhausted = self.phi.kind == "table" and self.depth == self.phi.depth
        return NormResult(best, p, self.depth, where, truncated=not exhausted)


def compose_function(phi: Symbol, f: TreeFunction, depth: int) -> ComposedFunction:
    return ComposedFunction(phi, f, depth)


def norm_infinity(phi: Symbol) -> float:
    """Every composition operator on T_inf has norm exactly 1."""
    return 1.0


@dataclass
class InfinityNormCheck:
    value: float
    max_ratio: float
    trials: int
    equality_witness: TreeFunction
    equality_ratio: float

    @property
    def ok(self) -> bool:
        return self.max_ratio <= 1 + 1e-12 and abs(self.equality_ratio - 1) <= 1e-12


def verify_norm_infinity(phi: Symbol, depth: int, trials: int = 50, seed: int = 42) -> InfinityNormCheck:
    """Spot-check ``||f o phi||_inf <= ||f||_inf`` and equality at ``chi_{phi(o)}``."""
    rng = random.Random(seed)
    depth = phi.clamp(depth)
    worst = 0.0
    for _ in range(trials):
        f = random_function(phi.q, depth, rng)
        ratio = compose_function(phi, f, depth).norm(INF).value / f_norm_inf(f)
        worst = max(worst, ratio)
    g = TreeFunction.indicator(phi.q, phi.apply(ROOT))
    eq = compose_function(phi, g, depth).norm(INF).value / f_norm_inf(g)
    return InfinityNormCheck(norm_infinity(phi), worst, trials, g, eq)


def f_norm_inf(f: TreeFunction) -> float:
    return max((abs(x) for _, x in f.items()), default=0.0)


@dataclass
class BoundedSymbolReport:
    """For a symbol with image levels at most ``top_level``: the bound (that level's size) and the
    per-level valence ratios whose supremum decides equality."""

    sup_image_level: int
    bound: int
    ratios: dict[int, Fraction]
    equality_achieved: bool

    @property
    def sup_ratio(self) -> Fraction:
        return max(self.ratios.values())


def bounded_symbol_check(phi: Symbol, depth: int) -> BoundedSymbolReport:
    """Ratios up to depth; equality is certified only when some ratio is exactly 1.

    A supremum approached but never attained is not decidable from a finite
    truncation and is reported as not achieved.
    """
    depth = phi.clamp(depth)
    top_level = classify(phi, depth).sup_image_level
    ratios = {}
    for n in range(depth + 1):
        h = preimage_histogram(phi, n)
        ratios[n] = Fraction(h.per_level_max.get(top_level, 0), level_size(phi.q, n))
    return BoundedSymbolReport(top_level, level_size(phi.q, top_level), ratios, any(r == 1 for r in ratios.values()))
