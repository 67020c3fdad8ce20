"""Isometry criteria for composition operators on T_p.

For q = 1 an isometry is characterised by four pointwise properties (root
fixed, onto, level-coherent, injective on non-collapsed levels).  For q >= 2
it is characterised through the normalised pre-image weights

    lambda_{k,n} = c_k N_{k,n} / c_n

(no level is pushed outward, the weights of each level sum to 1, pre-image
counts are uniform on each image level, and every level ``k`` eventually has
weight 1).  The last property quantifies over all ``n`` and can only be
confirmed where a weight of exactly 1 has been observed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..functions import TreeFunction, check_p, tp_norm
from ..symbols import Symbol, classify, preimage_histogram
from ..tree import ROOT, enumerate_level, format_vertex, level_size, vertex_rank
from .operator import compose_function, level_witness

ISOMETRY = "isometry-up-to-depth"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass
class Condition:
    holds: bool | None  # None: not decidable from the computed levels
    detail: str
    witness: dict | None = None


@dataclass
class IsometryReport:
    depth: int
    conditions: dict[str, Condition]
    overall: str
    violated: str | None = None
    lam: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    qualifiers: list[str] = field(default_factory=list)

    @property
    def is_isometry(self) -> bool:
        return self.overall == ISOMETRY

    @property
    def witness(self) -> dict | None:
        return self.conditions[self.violated].witness if self.violated else None


def witness_record(phi: Symbol, f: TreeFunction, p: float, depth: int) -> dict:
    """A test function with ``||f||^p`` and ``||f o phi||^p`` (the latter up to ``depth``)."""
    return {
        "function": f,
        "norm_pth": tp_norm(f, p).value ** p,
        "composed_norm_pth": compose_function(phi, f, depth).norm(p).value ** p,
    }


def _finish(depth, conds, lam=None, qualifiers=None, inconclusive=False) -> IsometryReport:
    violated = next((cid for cid, c in conds.items() if c.holds is False), None)
    if violated:
        overall = VIOLATED
    elif inconclusive:
        overall = INCONCLUSIVE
    else:
        overall = ISOMETRY
    return IsometryReport(depth, conds, overall, violated, lam or {}, qualifiers or [])


def isometry_check_q1(phi: Symbol, depth: int, p: float = 2.0) -> IsometryReport:
    if phi.q != 1:
        raise ValueError("isometry_check_q1 needs q = 1")
    p = check_p(p)
    cls = classify(phi, depth)
    depth = cls.depth
    conds: dict[str, Condition] = {}

    w = phi.apply(ROOT)
    if w == ROOT:
        conds["1"] = Condition(True, "root is fixed")
    else:
        f = TreeFunction(1, {ROOT: 1.0, w: 2 ** (1 / p)})
        conds["1"] = Condition(False, f"root maps to {format_vertex(w)}", witness_record(phi, f, p, depth))

    need = depth // 2
    if cls.covered_radius >= need:
        conds["2"] = Condition(True, f"every vertex of level <= {cls.covered_radius} has a pre-image")
    else:
        missed = next(u for u in enumerate_level(1, cls.covered_radius + 1)
                      if all(phi.apply(v) != u for v in _ball(phi, depth)))
        conds["2"] = Condition(False, f"{format_vertex(missed)} has no pre-image in the ball",
                               witness_record(phi, TreeFunction.indicator(1, missed), p, depth))

    conds["3"] = Condition(True, "image level is constant on every level")
    conds["4"] = Condition(True, "injective on every level not collapsed to the root")
    for n in range(1, depth + 1):
        a, b = enumerate_level(1, n)
        wa, wb = phi.apply(a), phi.apply(b)
        if len(wa) != len(wb) and conds["3"].holds:
            f = TreeFunction(1, {wa: level_size(1, len(wa)) ** (1 / p)}) + TreeFunction(
                1, {wb: level_size(1, len(wb)) ** (1 / p)})
            rec = witness_record(phi, f, p, depth)
            rec["level"] = n
            conds["3"] = Condition(False, f"{format_vertex(a)} and {format_vertex(b)} land on levels "
                                          f"{len(wa)} and {len(wb)}", rec)
        if wa == wb != ROOT and conds["4"].holds:
            rec = witness_record(phi, TreeFunction(1, {wa: 2 ** (1 / p)}), p, depth)
            rec["level"] = n
            conds["4"] = Condition(False, f"both vertices of level {n} map to {format_vertex(wa)}", rec)
    return _finish(depth, conds, qualifiers=[f"onto checked for levels <= {need}"])


def _ball(phi, depth):
    for n in range(depth + 1):
        yield from enumerate_level(phi.q, n)


def isometry_check_qge2(phi: Symbol, depth: int, p: float = 2.0) -> IsometryReport:
    if phi.q < 2:
        raise ValueError("isometry_check_qge2 needs q >= 2")
    p = check_p(p)
    q = phi.q
    depth = phi.clamp(depth)
    hists = [preimage_histogram(phi, n) for n in range(depth + 1)]
    lam: dict[tuple[int, int], Fraction] = {}
    for n, h in enumerate(hists):
        for k, top in h.per_level_max.items():
            lam[(k, n)] = Fraction(level_size(q, k) * top, level_size(q, n))
    conds: dict[str, Condition] = {}

    out = next(((v, phi.apply(v)) for v in _ball(phi, depth) if len(phi.apply(v)) > len(v)), None)
    if out is None:
        conds["1"] = Condition(True, "|phi(v)| <= |v| on the ball")
    else:
        v, w = out
        f = TreeFunction(q, {w: level_size(q, len(w)) ** (1 / p)})
        rec = witness_record(phi, f, p, depth)
        rec["vertex"] = format_vertex(v)
        conds["1"] = Condition(False, f"|phi({format_vertex(v)})| = {len(w)} > {len(v)}", rec)

    conds["2"] = Condition(True, "sum_k lambda_{k,n} = 1 on every level")
    for n, h in enumerate(hists):
        total = sum(lam[(k, n)] for k in h.per_level_max)
        if total != 1:
            f = level_witness(phi, n, p, h)
            rec = witness_record(phi, f, p, depth)
            rec.update(level=n, weight_sum=total)
            conds["2"] = Condition(False, f"sum_k lambda_(k,{n}) = {total}", rec)
            break

    conds["3"] = Condition(True, "pre-image counts are uniform on each image level")
    for n, h in enumerate(hists):
        bad = None
        for k, top in h.per_level_max.items():
            if h.distinct_at(k) == level_size(q, k) and all(c == top for w, c in h.counts.items() if len(w) == k):
                continue
            bad = next(u for u in enumerate_level(q, k) if h.counts.get(u, 0) < top)
            break
        if bad is not None:
            conds["3"] = Condition(False, f"N_phi({n}, {format_vertex(bad)}) = {h.counts.get(bad, 0)} "
                                          f"< N_({len(bad)},{n}) = {h.per_level_max[len(bad)]}",
                                   {"level": n, "vertex": format_vertex(bad)})
            break

    achieved: dict[int, int] = {}
    best: dict[int, Fraction] = {}
    for k in range(depth + 1):
        row = [(n, lam.get((k, n), Fraction(0))) for n in range(depth + 1)]
        best[k] = max(x for _, x in row)
        hit = next((n for n, x in row if x == 1), None)
        if hit is not None:
            achieved[k] = hit
    radius = -1
    while radius + 1 in achieved:
        radius += 1
    unresolved = [k for k in range(depth + 1) if k not in achieved]
    detail = {"achieved_at": achieved, "best": best, "resolved_radius": radius}
    if not unresolved:
        conds["4"] = Condition(True, "every level reaches weight 1", detail)
    else:
        conds["4"] = Condition(None, f"weight 1 not observed for levels {unresolved} up to depth {depth}", detail)
    qualifiers = ["condition 4 quantifies over all n: only observed weights of exactly 1 certify it"]
    if unresolved:
        qualifiers.append(f"condition 4 unresolved for levels {unresolved}")
    return _finish(depth, conds, lam, qualifiers, inconclusive=radius < depth // 2)


@dataclass
class LevelPermutationReport:
    levels: dict[int, dict]

    @property
    def ok(self) -> bool:
        return all(r["status"] != "violated" for r in self.levels.values())

    def permutation_levels(self) -> list[int]:
        return [n for n, r in self.levels.items() if r["status"] == "permutation"]


def isometry_level_permutation_check(phi: Symbol, depth: int) -> LevelPermutationReport:
    """On each level with a level-preserving vertex, ``phi`` must permute the level.

    A confirmed permutation is returned as the list of image ranks in the
    lexicographic order of the level.
    """
    depth = phi.clamp(depth)
    q = phi.q
    levels: dict[int, dict] = {}
    for n in range(1, depth + 1):
        pairs = [(v, phi.apply(v)) for v in enumerate_level(q, n)]
        keep = next((v for v, w in pairs if len(w) == n), None)
        if keep is None:
            levels[n] = {"status": "not-applicable"}
            continue
        moved = next((v for v, w in pairs if len(w) != n), None)
        if moved is not None:
            levels[n] = {"status": "violated", "reason": "level not mapped into itself",
                         "pair": [format_vertex(keep), format_vertex(moved)]}
            continue
        seen: dict = {}
        collision = None
        for v, w in pairs:
            if w in seen:
                collision = (seen[w], v)
                break
            seen[w] = v
        if collision:
            levels[n] = {"status": "violated", "reason": "collision",
                         "pair": [format_vertex(collision[0]), format_vertex(collision[1])]}
        else:
            levels[n] = {"status": "permutation", "permutation": [vertex_rank(w, q) for _, w in pairs]}
    return LevelPermutationReport(levels)


def isometry_check_inf(phi: Symbol, depth: int) -> Condition:
    """On T_inf the operator is an isometry iff the symbol is onto."""
    cls = classify(phi, depth)
    if cls.covered_radius >= cls.depth // 2:
        return Condition(True, f"onto up to radius {cls.covered_radius}")
    return Condition(False, f"some vertex of level {cls.covered_radius + 1} has no pre-image in the ball")
