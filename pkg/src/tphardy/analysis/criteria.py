"""Checkers for boundedness, invertibility, compactness and T_{p,0} criteria.

Each criterion quantifies over all levels, so every verdict here is "up to
depth": a finite profile plus a trend label from :mod:`.trends`.  Whenever a
criterion fails, the verdict carries the explicit test function that shows
it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..functions import INF, TreeFunction, check_p, mean_from_abs
from ..symbols import NotSurjectiveError, Symbol, classify, invert
from ..tree import enumerate_level, format_vertex, iter_ball, level_size, ball_size
from .operator import alpha_sequence, check_operator_p
from .trends import DEFAULT_THRESHOLDS, HEURISTIC_NOTE, TrendThresholds, classify_growth, grows_without_bound, split_tail, tends_to_zero

HOLDS = "holds-up-to-depth"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

# ball size above which explicit witness functions are not materialised
WITNESS_BALL_LIMIT = 200_000


@dataclass
class Verdict:
    status: str
    reason: str
    profile: dict = field(default_factory=dict)
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def bounded_necessary_check(phi: Symbol, depth: int, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> Verdict:
    """Profile of ``d_n = max_{|v|=n} |phi(v)| - n``; a bounded operator needs it bounded.

    For injective or finite-valent symbols (q >= 2) boundedness of ``d_n`` is
    also sufficient.
    """
    cls = classify(phi, depth)
    d = cls.max_up
    trend = classify_growth(d, thresholds)
    notes = [HEURISTIC_NOTE]
    if phi.q == 1:
        notes.append("q = 1: every symbol induces a bounded operator (norm^p <= 2)")
    n = max(range(len(d)), key=lambda i: (d[i], -i))
    v = next(u for u in enumerate_level(phi.q, n) if len(phi.apply(u)) - n == d[n])
    w = phi.apply(v)
    witness = {
        "level": n,
        "vertex": format_vertex(v),
        "image": format_vertex(w),
        # f = c_|w|^(1/p) chi_w has unit norm and M_p^p(n, f o phi) >= c_|w| / c_n
        "lower_bound_pth": Fraction(level_size(phi.q, len(w)), level_size(phi.q, n)),
    }
    if trend == "increasing-unbounded-suspected":
        return Verdict(FAILS, "displacement |phi(v)| - |v| keeps growing", {"d": d, "trend": trend}, witness, notes)
    return Verdict(HOLDS, "displacement |phi(v)| - |v| stays bounded", {"d": d, "trend": trend}, witness, notes)


def invertibility_check(phi: Symbol, p: float, depth: int, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> Verdict:
    """Bijective with bounded two-sided displacement (q >= 2, finite p); bijective alone otherwise."""
    p = check_p(p)
    if p != INF:
        check_operator_p(p)
    cls = classify(phi, depth)
    disp = [max(a, b) for a, b in zip(cls.max_up, cls.max_down)]
    profile = {"displacement": disp, "covered_radius": cls.covered_radius}
    notes = [HEURISTIC_NOTE]
    if not cls.is_injective:
        a, b = cls.first_collision
        return Verdict(FAILS, "not injective", profile,
                       {"pair": [format_vertex(a), format_vertex(b)], "image": format_vertex(phi.apply(a))}, notes)
    try:
        invert(phi, cls.depth, radius=cls.depth // 2)
    except NotSurjectiveError as exc:
        return Verdict(FAILS, "not surjective onto the requested ball", profile,
                       {"missed": format_vertex(exc.missed), "covered_radius": exc.covered_radius}, notes)
    if phi.q == 1 or p == INF:
        notes.append("q = 1 or p = inf: bijectivity alone decides invertibility")
        return Verdict(HOLDS, "bijective", profile, None, notes)
    trend = classify_growth(disp, thresholds)
    profile["trend"] = trend
    if trend == "increasing-unbounded-suspected":
        n = max(range(len(disp)), key=lambda i: (disp[i], -i))
        v = next(u for u in enumerate_level(phi.q, n) if abs(len(phi.apply(u)) - n) == disp[n])
        return Verdict(FAILS, "two-sided displacement ||phi(v)| - |v|| keeps growing", profile,
                       {"vertex": format_vertex(v), "image": format_vertex(phi.apply(v)), "displacement": disp[n]},
                       notes)
    return Verdict(HOLDS, "bijective with bounded two-sided displacement", profile, None, notes)


def compact_sufficient_check(phi: Symbol, depth: int, thresholds: TrendThresholds = DEFAULT_THRESHOLDS) -> dict[str, Verdict]:
    """Sufficient (``a_n -> 0``) and necessary (``|v| - |phi(v)| -> inf``) compactness conditions on T_p,
    plus the T_inf criterion (compact iff the symbol is bounded).

    Every level of D_n maps somewhere, so ``sum_m N_{m,n} c_m >= c_n`` and
    ``a_n >= 1``; the sufficient condition therefore never holds, and the
    checker reports that bound as the reason.
    """
    alpha = alpha_sequence(phi, depth, thresholds)
    a = alpha.values()
    _, tail = split_tail(a, thresholds.plateau_window)
    if min(tail) >= 1:
        suff = Verdict(FAILS, "a_n >= 1 on every level (counting bound), so a_n does not tend to 0",
                       {"a": a}, None, [HEURISTIC_NOTE])
    else:
        status = {"plausible": "plausible", "fails": FAILS}.get(tends_to_zero(a, thresholds), INCONCLUSIVE)
        suff = Verdict(status, "tail trend of a_n", {"a": a}, None, [HEURISTIC_NOTE])
    if phi.q == 1:
        suff.notes.append("the a_n criterion is stated for q >= 2")

    cls = classify(phi, depth)
    gap = [n - hi for n, hi in enumerate(cls.max_image_level)]  # min over D_n of |v| - |phi(v)|
    if grows_without_bound(gap, thresholds):
        nec = Verdict("plausible", "|v| - |phi(v)| grows along the computed levels", {"gap": gap}, None, [HEURISTIC_NOTE])
    else:
        nec = Verdict(FAILS, "|v| - |phi(v)| does not grow: C_phi is not compact on T_p", {"gap": gap}, None,
                      [HEURISTIC_NOTE])

    top = classify_growth(cls.max_image_level, thresholds)
    if top == "increasing-unbounded-suspected":
        tinf = Verdict(FAILS, "image levels keep growing: not compact on T_inf", {"max_image_level": cls.max_image_level})
    else:
        tinf = Verdict("plausible", "image levels stay bounded: compact on T_inf if this persists",
                       {"max_image_level": cls.max_image_level}, None, [HEURISTIC_NOTE])
    return {"sufficient": suff, "necessary": nec, "t_inf": tinf}


def tp0_boundedness_checks(
    phi: Symbol,
    p: float,
    depth: int,
    witness_vertices=None,
    thresholds: TrendThresholds = DEFAULT_THRESHOLDS,
) -> dict[str, Verdict]:
    """Criteria for boundedness on the little space T_{p,0}.

    ``min_level``: ``min_{|v|=n} |phi(v)| -> inf`` (iff on T_{inf,0}, and on
    T_{p,0} for q = 1).  ``alpha_decay``: ``a_n -> 0`` (sufficient, q >= 2).
    ``vertex_decay``: ``(c_|v| / c_n) N_phi(n, v) -> 0`` for each witness
    vertex (necessary); the default witnesses are the first vertex of each
    level.
    """
    p = check_p(p)
    cls = classify(phi, depth)
    depth = cls.depth
    out: dict[str, Verdict] = {}

    mu = cls.min_image_level
    if grows_without_bound(mu, thresholds):
        out["min_level"] = Verdict(HOLDS, "min image level grows", {"min_image_level": mu}, None, [HEURISTIC_NOTE])
    else:
        out["min_level"] = Verdict(FAILS, "min image level stays bounded: f o phi leaves T_{inf,0} for some f",
                                   {"min_image_level": mu}, _bounded_image_witness(phi, depth, mu, thresholds),
                                   [HEURISTIC_NOTE])

    alpha = alpha_sequence(phi, depth, thresholds)
    a = alpha.values()
    out["alpha_decay"] = Verdict(
        FAILS if min(a) >= 1 else INCONCLUSIVE,
        "a_n >= 1 on every level (counting bound)" if min(a) >= 1 else "tail trend of a_n",
        {"a": a}, None, [HEURISTIC_NOTE])

    if witness_vertices is None:
        witness_vertices = [(0,) * n for n in range(depth // 2 + 1)]
    rows = []
    decays = True
    for v in witness_vertices:
        k = len(v)
        seq = []
        for n in range(depth + 1):
            cnt = alpha.histograms[n].counts.get(v, 0)
            seq.append(Fraction(level_size(phi.q, k) * cnt, level_size(phi.q, n)))
        trend = tends_to_zero(seq, thresholds)
        decays &= trend == "plausible"
        rows.append({"vertex": format_vertex(v), "sequence": seq, "peak": max(seq), "trend": trend})
    peaks = [r["peak"] for r in rows]
    family = classify_growth(peaks, thresholds) if peaks else "plateau"
    out["vertex_decay"] = Verdict(
        HOLDS if decays else INCONCLUSIVE,
        "per-vertex sequences (c_|v|/c_n) N_phi(n, v)",
        {"vertices": rows, "peak_trend": family},
        None,
        [HEURISTIC_NOTE] + (["peaks grow with the vertex level: the operator is unbounded"]
                            if family == "increasing-unbounded-suspected" else []),
    )
    return out


def _bounded_image_witness(phi: Symbol, depth: int, mu: list[int], thresholds: TrendThresholds) -> dict | None:
    """The test function ``f = 1`` on levels ``<= bound``, ``1/|v_k|`` at chosen deep ``v_k`` with ``|phi(v_k)| <= bound``.

    ``f`` lies in T_{inf,0} (its level sups are ``1/n`` past ``bound``) while
    ``f o phi`` has level sup 1 at every ``|v_k|``.
    """
    _, tail = split_tail(mu, thresholds.plateau_window)
    bound = max(tail)
    if ball_size(phi.q, bound) > WITNESS_BALL_LIMIT:
        return None
    vals = {v: 1.0 for v in iter_ball(phi.q, bound)}
    chosen = {}
    for n in range(bound + 1, depth + 1):
        v = next((u for u in enumerate_level(phi.q, n) if len(phi.apply(u)) <= bound), None)
        if v is not None:
            chosen[n] = v
            vals[v] = 1.0 / n
    f = TreeFunction(phi.q, vals)
    composed, own = {}, {}
    for n in chosen:
        composed[n] = mean_from_abs([abs(f(phi.apply(u))) for u in enumerate_level(phi.q, n)],
                                    level_size(phi.q, n), INF)
        own[n] = mean_from_abs([abs(x) for u, x in f.items() if len(u) == n], level_size(phi.q, n), INF)
    return {"image_bound": bound, "vertices": {n: format_vertex(v) for n, v in chosen.items()},
            "composed_level_sup": composed, "function_level_sup": own, "function": f}
