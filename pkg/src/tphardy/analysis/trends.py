"""Finite-data trend heuristics.

Every limit or supremum over infinitely many levels is only observable up to
a truncation depth.  These rules turn a finite profile into a labelled guess;
they are heuristics, not proofs, and every report says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

HEURISTIC_NOTE = "trend classification is a finite-depth heuristic, not a proof"


@dataclass(frozen=True)
class TrendThresholds:
    """``plateau_window`` is the trailing fraction of levels inspected;
    ``decay_ratio`` is the final/max ratio below which a profile counts as
    decaying."""

    plateau_window: float = 0.5
    decay_ratio: float = 0.1

    def __post_init__(self):
        if not 0 < self.plateau_window <= 1:
            raise ValueError("plateau_window must lie in (0, 1]")
        if not 0 < self.decay_ratio < 1:
            raise ValueError("decay_ratio must lie in (0, 1)")


DEFAULT_THRESHOLDS = TrendThresholds()


def split_tail(values: Sequence, window: float) -> tuple[list, list]:
    k = max(1, math.ceil(len(values) * window))
    k = min(k, len(values))
    return list(values[:-k]) if k < len(values) else [], list(values[-k:])


def is_nonincreasing(values: Sequence) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


def classify_growth(values: Sequence, th: TrendThresholds = DEFAULT_THRESHOLDS) -> str:
    """One of ``"decreasing"``, ``"plateau"``, ``"increasing-unbounded-suspected"``.

    Decreasing: the tail never rises and ends below ``decay_ratio`` times the
    overall max.  Plateau: the running max does not change inside the tail.
    """
    if not values:
        raise ValueError("empty profile")
    head, tail = split_tail(values, th.plateau_window)
    top = max(values)
    if top > 0 and len(values) > 1 and is_nonincreasing(tail) and tail[-1] < th.decay_ratio * top:
        return "decreasing"
    if not head or max(tail) <= max(head):
        return "plateau"
    return "increasing-unbounded-suspected"


def grows_without_bound(values: Sequence, th: TrendThresholds = DEFAULT_THRESHOLDS) -> bool:
    """True when the tail minimum exceeds the head maximum (a "tends to infinity" guess)."""
    head, tail = split_tail(values, th.plateau_window)
    return bool(head) and min(tail) > max(head)


def tends_to_zero(values: Sequence, th: TrendThresholds = DEFAULT_THRESHOLDS) -> str:
    """``"plausible"``, ``"fails"`` or ``"inconclusive"`` for a nonnegative profile."""
    head, tail = split_tail(values, th.plateau_window)
    top = max(values)
    if top == 0 or all(x == 0 for x in tail):
        return "plausible"
    if is_nonincreasing(tail) and tail[-1] < th.decay_ratio * top:
        return "plausible"
    if min(tail) >= th.decay_ratio * top and head and min(tail) >= 0.5 * max(head):
        return "fails"
    return "inconclusive"
