"""Brute-force lower bound for ``||C_phi||^p``, independent of the alpha formula.

The ball of radius ``depth`` is flattened once into an array of image
indices.  A batch of candidate functions (rows of a dense matrix over the
image vertices) is then composed with ``phi`` by fancy indexing, and level
sums come from ``np.add.reduceat``.  No pre-image histogram from
:mod:`tphardy.symbols` is used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..functions import TreeFunction, tp_norm
from ..symbols import Symbol
from ..tree import enumerate_level, level_size
from .operator import check_operator_p

_CHUNK = 256


@dataclass
class OracleResult:
    value: float  # best sup_n M_p^p(n, f o phi) / ||f||^p found
    witness: TreeFunction
    source: str  # "indicator", "level-sum" or "random"
    level: int
    candidates: int


class _Flattened:
    def __init__(self, phi: Symbol, depth: int):
        q = phi.q
        images = []
        self.sizes = []
        for n in range(depth + 1):
            row = [phi.apply(v) for v in enumerate_level(q, n)]
            images.extend(row)
            self.sizes.append(len(row))
        self.vertices = sorted(set(images), key=lambda w: (len(w), w))
        index = {w: i for i, w in enumerate(self.vertices)}
        self.idx = np.fromiter((index[w] for w in images), dtype=np.int64, count=len(images))
        self.offsets = np.concatenate(([0], np.cumsum(self.sizes)[:-1])).astype(np.int64)
        self.c = np.array(self.sizes, dtype=float)
        self.img_level = np.array([len(w) for w in self.vertices])
        self.img_c = np.array([float(level_size(q, len(w))) for w in self.vertices])

    def level_profiles(self, abs_pow: np.ndarray) -> np.ndarray:
        """Rows of ``M_p^p(n, f o phi)`` for candidates given as ``|f|^p`` on image vertices."""
        composed = abs_pow[:, self.idx]
        return np.add.reduceat(composed, self.offsets, axis=1) / self.c


def brute_force_norm_lower_bound(phi: Symbol, p: float, depth: int, trials: int = 200,
                                 seed: int = 42, max_support: int = 12) -> OracleResult:
    p = check_operator_p(p)
    depth = phi.clamp(depth)
    q = phi.q
    flat = _Flattened(phi, depth)
    k = len(flat.vertices)
    best = (-1.0, None, "", 0)
    count = 0

    # scaled indicators c_|w|^(1/p) chi_w: ratio c_|w| * #pre-images / c_n
    for n in range(depth + 1):
        lo = flat.offsets[n]
        hits = np.bincount(flat.idx[lo:lo + flat.sizes[n]], minlength=k)
        ratio = hits * flat.img_c / flat.c[n]
        i = int(np.argmax(ratio))
        count += k
        if ratio[i] > best[0]:
            w = flat.vertices[i]
            best = (float(ratio[i]), TreeFunction(q, {w: flat.img_c[i] ** (1 / p)}), "indicator", n)

    # per-level sums of indicators at the first most-hit vertex of each image level
    for n in range(depth + 1):
        lo = flat.offsets[n]
        hits = np.bincount(flat.idx[lo:lo + flat.sizes[n]], minlength=k)
        vals = {}
        for m in np.unique(flat.img_level[hits > 0]):
            cols = np.nonzero(flat.img_level == m)[0]
            i = cols[int(np.argmax(hits[cols]))]
            vals[flat.vertices[i]] = flat.img_c[i] ** (1 / p)
        f = TreeFunction(q, vals)
        value = _ratio(flat, f, p)
        count += 1
        if value > best[0]:
            best = (value, f, "level-sum", n)

    rng = np.random.default_rng(seed)
    done = 0
    while done < trials:
        batch = min(_CHUNK, trials - done)
        dense = np.zeros((batch, k))
        norms_pth = np.empty(batch)
        funcs = []
        for b in range(batch):
            size = int(rng.integers(1, min(max_support, k) + 1))
            cols = rng.choice(k, size=size, replace=False)
            raw = rng.random(size) + 1e-3
            f = TreeFunction(q, {flat.vertices[c]: float(x) for c, x in zip(cols, raw)})
            norms_pth[b] = tp_norm(f, p).value ** p
            dense[b, cols] = raw ** p
            funcs.append(f)
        prof = flat.level_profiles(dense) / norms_pth[:, None]
        row_best = prof.max(axis=1)
        b = int(np.argmax(row_best))
        if row_best[b] > best[0]:
            f = funcs[b] / tp_norm(funcs[b], p).value
            best = (float(row_best[b]), f, "random", int(np.argmax(prof[b])))
        done += batch
        count += batch

    value, witness, source, lvl = best
    return OracleResult(value, witness, source, lvl, count)


def _ratio(flat: _Flattened, f: TreeFunction, p: float) -> float:
    index = {w: i for i, w in enumerate(flat.vertices)}
    dense = np.zeros((1, len(flat.vertices)))
    for w, x in f.items():
        if w in index:
            dense[0, index[w]] = abs(x) ** p
    return float(flat.level_profiles(dense).max() / tp_norm(f, p).value ** p)
