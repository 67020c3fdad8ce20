"""Reference checks over every builtin map and every checker.

Used by the ``verify-paper`` command.  Each check yields a name, a pass flag
and a short detail; the suite for ``q = 1`` always runs, the ``q >= 2``
suite runs at ``max(q, 2)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .analysis.criteria import (
    FAILS,
    HOLDS,
    bounded_necessary_check,
    compact_sufficient_check,
    invertibility_check,
    tp0_boundedness_checks,
)
from .analysis.isometry import (
    isometry_check_inf,
    isometry_check_q1,
    isometry_check_qge2,
    isometry_level_permutation_check,
)
from .analysis.operator import alpha_sequence, bounded_symbol_check, compose_function, operator_norm, verify_norm_infinity
from .analysis.oracle import brute_force_norm_lower_bound
from .functions import INF, TreeFunction, growth_bound_check, norm_limit_check, radial_decay, random_function, rule_level_means, tp_norm
from .symbols import automorphism_table, builtin, chosen_vertices, classify, invert, random_table
from .tree import ROOT, level_size

REL = 1e-9


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def _close(a, b, tol=REL) -> bool:
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


# norm^p of the q = 1 reference maps, one per case of the two-branch norm theorem
Q1_CASES = [
    ("root-displace", {}, Fraction(2)),
    ("constant", {}, Fraction(1)),
    ("child-permutation", {}, Fraction(1)),
    ("one-to-root", {}, Fraction(3, 2)),
    ("level-constant", {}, Fraction(2)),
    ("level-split", {}, Fraction(2)),
]


def q1_checks(depth: int, seed: int, trials: int) -> list[Check]:
    out = []
    for name, params, expected in Q1_CASES:
        phi = builtin(name, 1, **params)
        for p in (1.0, 2.0):
            est = operator_norm(phi, p, depth)
            orc = brute_force_norm_lower_bound(phi, p, depth, trials=trials, seed=seed)
            ok = est.value_pth == expected and _close(orc.value, expected)
            out.append(Check(f"q1-norm[{name},p={p:g}]", ok,
                             f"alpha={est.value_pth} oracle={orc.value:.12g} expected={expected}"))
    w = builtin("root-displace", 1).apply(ROOT)
    for p in (1.0, 2.0):
        f = TreeFunction(1, {ROOT: 1.0, w: 2 ** (1 / p)})
        rep = isometry_check_q1(builtin("root-displace", 1), depth, p)
        out.append(Check(f"q1-isometry-root-moved[p={p:g}]", rep.violated == "1",
                         f"violated={rep.violated} composed^p={rep.witness['composed_norm_pth']:.12g} "
                         f"norm^p={tp_norm(f, p).value ** p:.12g}"))
    rep = isometry_check_q1(builtin("child-permutation", 1), depth)
    out.append(Check("q1-isometry-level-bijection", rep.is_isometry, rep.overall))
    rep = isometry_check_q1(builtin("level-split", 1), depth)
    out.append(Check("q1-isometry-level-split", rep.violated == "2" and rep.conditions["3"].holds is False,
                     f"violated={rep.violated}"))
    bij = invertibility_check(builtin("child-permutation", 1), 2, depth)
    out.append(Check("q1-invertible-bijection", bij.status == HOLDS, bij.reason))
    return out


def qge2_checks(q: int, depth: int, seed: int, trials: int) -> list[Check]:
    out = []
    ident = builtin("identity", q)
    a = alpha_sequence(ident, depth)
    out.append(Check("identity-alpha", a.alpha_lower == 1 and classify(ident, depth).is_automorphism_up_to,
                     f"alpha={a.alpha_lower}"))

    for m_level in range(1, min(3, depth) + 1):
        phi = builtin("constant", q, target=".".join("0" * m_level))
        est = operator_norm(phi, 1, depth)
        rep = bounded_symbol_check(phi, depth)
        out.append(Check(f"bounded-symbol-equality[m_level={m_level}]",
                         est.value_pth == level_size(q, m_level) and rep.equality_achieved,
                         f"alpha={est.value_pth} c_m={level_size(q, m_level)}"))

    for m in (1, 2):
        phi = automorphism_table(q, (0,) * m, depth)
        want = (q + 1) * q ** (m - 1)
        for p in (1.0, 2.0):
            got = operator_norm(phi, p, depth).value_pth
            out.append(Check(f"automorphism-norm[|phi(o)|={m},p={p:g}]", got == want, f"alpha={got} expected={want}"))
        rep = isometry_check_qge2(phi, depth)
        out.append(Check(f"automorphism-not-isometry[|phi(o)|={m}]", rep.violated == "1",
                         f"violated={rep.violated}"))

    phi = builtin("example-unbounded-bijection", q)
    seq = alpha_sequence(phi, depth)
    odd = [n for n in range(3, depth + 1, 2)]
    ok = all(seq.per_level[n] >= q ** n for n in odd) and seq.trend == "increasing-unbounded-suspected"
    ok &= bounded_necessary_check(phi, depth).status == FAILS
    out.append(Check("unbounded-bijection", ok, f"a_odd={[str(seq.per_level[n]) for n in odd]} trend={seq.trend}"))

    phi = builtin("example-bounded-bij-unbounded-inverse", q)
    seq = alpha_sequence(phi, depth)
    inv = invert(phi, depth, radius=depth // 2)
    inv_seq = alpha_sequence(inv, inv.depth)
    levels = list(range(1, inv.depth + 1))
    ok = seq.alpha_lower <= 2 + q and all(inv_seq.per_level[n] >= q ** n for n in levels)
    ok &= all(inv.apply(v) == chosen_vertices(q, 2 * n)[0]
              for n in levels for v in chosen_vertices(q, n)[:1])
    ok &= invertibility_check(phi, 2, depth).status == FAILS
    ok &= bounded_necessary_check(inv, inv.depth).status == FAILS
    out.append(Check("bounded-bijection-unbounded-inverse", ok,
                     f"alpha_lower={seq.alpha_lower} inverse a_n={[str(inv_seq.per_level[n]) for n in levels]}"))

    rng = random.Random(seed)
    for k in (2, 3):
        phi = builtin("parent-collapse", q, k=k)
        rep = isometry_check_qge2(phi, depth)
        worst = 0.0
        for _ in range(min(trials, 50)):
            f = random_function(q, depth - 1, rng)
            worst = max(worst, abs(compose_function(phi, f, depth).norm(2).value - tp_norm(f, 2).value))
        out.append(Check(f"parent-collapse-isometry[k={k}]", rep.is_isometry and worst <= 1e-9,
                         f"overall={rep.overall} max|diff|={worst:.3g}"))
        perm = isometry_level_permutation_check(phi, depth)
        out.append(Check(f"parent-collapse-permutation[k={k}]",
                         perm.ok and perm.permutation_levels() == list(range(1, k)),
                         f"permutation levels={perm.permutation_levels()}"))

    phi = builtin("child-permutation", q)
    rep = isometry_check_qge2(phi, depth)
    perm = isometry_level_permutation_check(phi, depth)
    inv = invertibility_check(phi, 2, depth)
    out.append(Check("child-permutation", rep.is_isometry and perm.permutation_levels() == list(range(1, depth + 1))
                     and inv.status == HOLDS and isometry_check_inf(phi, depth).holds,
                     f"isometry={rep.overall} invertible={inv.status}"))

    comp = compact_sufficient_check(builtin("constant", q), depth)
    out.append(Check("compactness-constant-root", comp["sufficient"].status == FAILS
                     and comp["t_inf"].status == "plausible", comp["sufficient"].reason))
    comp = compact_sufficient_check(ident, depth)
    out.append(Check("compactness-identity", comp["sufficient"].status == FAILS
                     and comp["necessary"].status == FAILS, comp["necessary"].reason))

    tp0 = tp0_boundedness_checks(builtin("level-constant", q), 2, depth)
    peaks = [r["peak"] for r in tp0["vertex_decay"].profile["vertices"]]
    out.append(Check("level-constant-divergence", peaks == [level_size(q, n) for n in range(depth // 2 + 1)],
                     f"peaks={[str(x) for x in peaks]}"))
    tp0 = tp0_boundedness_checks(builtin("constant", q, target="0"), INF, depth)
    wit = tp0["min_level"].witness
    ok = tp0["min_level"].status == FAILS and wit is not None and all(
        _close(x, 1.0, 1e-12) for x in wit["composed_level_sup"].values())
    out.append(Check("bounded-image-tinf0-witness", ok, f"image_bound={wit and wit['image_bound']}"))
    tp0 = tp0_boundedness_checks(ident, 2, depth)
    out.append(Check("identity-tp0", tp0["min_level"].status == HOLDS and tp0["vertex_decay"].status == HOLDS,
                     tp0["vertex_decay"].status))

    for phi in (builtin("one-to-root", q), builtin("level-split", q), builtin("root-displace", q)):
        est = operator_norm(phi, 2, depth)
        orc = brute_force_norm_lower_bound(phi, 2, depth, trials=trials, seed=seed)
        out.append(Check(f"oracle-agreement[{phi.name}]", _close(orc.value, est.value_pth),
                         f"alpha={est.value_pth} oracle={orc.value:.12g}"))
    for i in range(3):
        phi = random_table(q, min(depth, 5), rng)
        est = operator_norm(phi, 2, phi.depth)
        orc = brute_force_norm_lower_bound(phi, 2, phi.depth, trials=trials, seed=seed)
        chk = verify_norm_infinity(phi, phi.depth, trials=20, seed=seed)
        out.append(Check(f"random-table[{i}]", _close(orc.value, est.value_pth) and chk.ok,
                         f"alpha={est.value_pth} oracle={orc.value:.12g} inf-ratio={chk.max_ratio:.12g}"))
    return out


def function_checks(q: int, depth: int, seed: int, trials: int) -> list[Check]:
    out = []
    # supports on different levels: all four norms equal 1, so 2 + 2 != 1 + 1 fails the parallelogram law
    f = TreeFunction.indicator(q, ROOT)
    g = TreeFunction.indicator(q, (0,), level_size(q, 1) ** 0.5)
    norms = [tp_norm(h, 2).value for h in (f, g, f + g, f - g)]
    out.append(Check("parallelogram", all(_close(x, 1.0, 1e-12) for x in norms), f"norms={norms}"))

    rng = random.Random(seed)
    ok = True
    for _ in range(min(trials, 50)):
        h = random_function(q, depth, rng)
        ok &= growth_bound_check(h, 2).holds and norm_limit_check(h, [1, 2, 4, 8, 16, 32]).ok
    out.append(Check("growth-and-norm-limit", ok, f"{min(trials, 50)} random functions"))

    ok = True
    for scale in (1, 5, 10):
        means = rule_level_means(radial_decay(scale), q, 2, min(depth, 6))
        ok &= all(_close(m, scale / (scale + n), 1e-12) for n, m in enumerate(means))
    out.append(Check("radial-decay-means", ok, "scales 1, 5, 10"))
    return out


def run(q: int, depth: int, seed: int = 42, trials: int = 200) -> list[Check]:
    return (q1_checks(depth, seed, trials)
            + qge2_checks(max(q, 2), depth, seed, trials)
            + function_checks(max(q, 2), depth, seed, trials))
