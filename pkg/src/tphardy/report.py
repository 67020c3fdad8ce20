"""JSON reports.

Reals carry 15 significant digits, integers (counts) are written as exact
decimal strings, and exact ratios as ``"num/den"`` strings next to their
real value.  Nothing time-dependent is emitted, so a fixed configuration and
seed give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

from .analysis.criteria import (
    FAILS,
    HOLDS,
    Verdict,
    bounded_necessary_check,
    compact_sufficient_check,
    invertibility_check,
    tp0_boundedness_checks,
)
from .analysis.isometry import (
    Condition,
    IsometryReport,
    isometry_check_inf,
    isometry_check_q1,
    isometry_check_qge2,
    isometry_level_permutation_check,
)
from .analysis.operator import alpha_sequence, compose_function, operator_norm, verify_norm_infinity
from .analysis.oracle import brute_force_norm_lower_bound
from .analysis.trends import DEFAULT_THRESHOLDS, HEURISTIC_NOTE, TrendThresholds
from .functions import INF, TreeFunction, format_p, tp_norm
from .symbols import Classification, Symbol, classify
from .tree import ROOT, format_vertex


def real(x) -> float | str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.15g}")


def _key(k) -> str:
    if isinstance(k, tuple):
        return ",".join(map(str, k))
    if isinstance(k, float):
        return format_p(k)
    return str(k)


def encode(obj):
    """Recursively turn analysis results into JSON-ready values."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return {"exact": f"{obj.numerator}/{obj.denominator}" if obj.denominator != 1 else str(obj.numerator),
                "value": real(obj)}
    if isinstance(obj, float):
        return real(obj)
    if isinstance(obj, complex):
        return [real(obj.real), real(obj.imag)]
    if isinstance(obj, TreeFunction):
        return [[a, real(x), real(y)] for a, x, y in obj.to_triples()]
    if isinstance(obj, dict):
        return {_key(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_") and f.repr}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def classification_section(cls: Classification) -> dict:
    out = encode(cls)
    out["first_collision"] = (None if cls.first_collision is None
                              else [format_vertex(v) for v in cls.first_collision])
    out["root_image"] = format_vertex(cls.root_image)
    out["qualifier"] = f"up to depth {cls.depth}"
    return out


def alpha_section(phi: Symbol, depth: int, th: TrendThresholds) -> tuple[dict, object]:
    alpha = alpha_sequence(phi, depth, th)
    return {
        "per_level": encode(alpha.per_level),
        "alpha_lower": encode(alpha.alpha_lower),
        "argmax_level": alpha.argmax_level,
        "trend": alpha.trend,
        "exact": alpha.exact,
    }, alpha


def norm_section(phi: Symbol, p: float, depth: int, th: TrendThresholds, seed: int, trials: int) -> dict:
    if p == INF:
        check = verify_norm_infinity(phi, depth, trials=trials, seed=seed)
        return {
            "p": "inf",
            "value": real(1.0),
            "witness": encode(TreeFunction.indicator(phi.q, phi.apply(ROOT))),
            "spot_check": {"max_ratio": real(check.max_ratio), "trials": check.trials, "ok": check.ok},
        }
    est = operator_norm(phi, p, depth, th)
    oracle = brute_force_norm_lower_bound(phi, p, depth, trials=trials, seed=seed)
    return {
        "p": real(p),
        "value": real(est.value),
        "value_pth": encode(est.value_pth),
        "witness": encode(est.witness),
        "witness_level": est.witness_level,
        "oracle": {"lower_bound_pth": real(oracle.value), "source": oracle.source, "candidates": oracle.candidates},
    }


def verdict_dict(v: Verdict) -> dict:
    return {"status": v.status, "reason": v.reason, "profile": encode(v.profile),
            "witness": encode(v.witness), "notes": v.notes}


def condition_dict(c: Condition) -> dict:
    return {"holds": c.holds, "detail": c.detail, "witness": encode(c.witness)}


def isometry_section(phi: Symbol, p: float, depth: int) -> dict:
    if p == INF:
        c = isometry_check_inf(phi, depth)
        return {"overall": "isometry-up-to-depth" if c.holds else "violated", "conditions": {"onto": condition_dict(c)}}
    rep: IsometryReport = isometry_check_q1(phi, depth, p) if phi.q == 1 else isometry_check_qge2(phi, depth, p)
    out = {
        "overall": rep.overall,
        "violated": rep.violated,
        "conditions": {cid: condition_dict(c) for cid, c in rep.conditions.items()},
        "qualifiers": rep.qualifiers,
    }
    if rep.lam:
        out["lambda"] = encode(rep.lam)
    perm = isometry_level_permutation_check(phi, depth)
    out["level_permutation"] = encode(perm.levels)
    return out


def bounded_section(phi: Symbol, p: float, depth: int, th: TrendThresholds) -> dict:
    if p == INF:
        return {"status": HOLDS, "reason": "every composition operator on T_inf is bounded with norm 1",
                "profile": {}, "witness": None, "notes": []}
    return verdict_dict(bounded_necessary_check(phi, depth, th))


def verdicts_section(phi: Symbol, p: float, depth: int, th: TrendThresholds) -> dict:
    return {
        "bounded": bounded_section(phi, p, depth, th),
        "invertible": verdict_dict(invertibility_check(phi, p, depth, th)),
        "isometry": isometry_section(phi, p, depth),
        "compact_sufficient": {k: verdict_dict(v) for k, v in compact_sufficient_check(phi, depth, th).items()},
        "tp0": {k: verdict_dict(v) for k, v in tp0_boundedness_checks(phi, p, depth, thresholds=th).items()},
    }


def function_section(phi: Symbol, f: TreeFunction, p: float, depth: int) -> dict:
    own = tp_norm(f, p).value
    composed = compose_function(phi, f, depth).norm(p)
    return {
        "norm": real(own),
        "composed_norm": real(composed.value),
        "composed_level": composed.level,
        "ratio": real(composed.value / own) if own else None,
    }


def truncation_section(phi: Symbol, depth: int, alpha=None, extra=()) -> dict:
    quals = [HEURISTIC_NOTE]
    if alpha is not None and not alpha.exact:
        quals.append("alpha_lower is the max over computed levels, a lower bound for the supremum")
    if phi.depth is not None and phi.depth > depth:
        quals.append(f"symbol is defined up to depth {phi.depth}, analysed up to {depth}")
    quals.extend(extra)
    return {"depth": depth, "qualifiers": quals}


def config_section(phi: Symbol, p: float, depth: int, seed: int, trials: int, th: TrendThresholds) -> dict:
    return {
        "q": phi.q,
        "p": format_p(p),
        "depth": depth,
        "symbol": {"name": phi.name, "kind": phi.kind, "params": encode(phi.params)},
        "seed": seed,
        "trials": trials,
        "thresholds": {"plateau_window": th.plateau_window, "decay_ratio": th.decay_ratio},
    }


def build_report(phi: Symbol, p: float, depth: int, *, seed: int = 42, trials: int = 200,
                 thresholds: TrendThresholds = DEFAULT_THRESHOLDS, f: TreeFunction | None = None) -> dict:
    depth = phi.clamp(depth)
    alpha, seq = alpha_section(phi, depth, thresholds)
    report = {
        "config": config_section(phi, p, depth, seed, trials, thresholds),
        "classification": classification_section(classify(phi, depth)),
        "alpha": alpha,
        "norm": norm_section(phi, p, depth, thresholds, seed, trials),
        "verdicts": verdicts_section(phi, p, depth, thresholds),
    }
    if f is not None:
        report["function"] = function_section(phi, f, p, depth)
    report["truncation"] = truncation_section(phi, depth, seq)
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def has_failure(section) -> bool:
    """True if any nested ``status`` is ``fails`` or an ``overall`` is ``violated``."""
    if isinstance(section, dict):
        if section.get("status") == FAILS or section.get("overall") == "violated":
            return True
        return any(has_failure(v) for v in section.values())
    if isinstance(section, list):
        return any(has_failure(v) for v in section)
    return False
