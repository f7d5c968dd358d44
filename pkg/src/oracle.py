# -*- coding: utf-8 -*-
"""
Brute-force oracle
==================

Direct evaluations of the quantities the sweep computes, independent of the
realized-state machinery. Used by the tests and by ``feedlink check``.

- dilation_of(): dilation of r via q straight from the definition
- left_dilation_via(), right_dilation_via(), dilation_via(): exact worst
  dilation through q, minimized per plot piece in closed form
- grid_best(): best feed-link position on a grid of q
- brute_jump(): lowest piece visible leftwards from a plot point
"""

from __future__ import annotations
import logging, math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import CoincidentPoints
from .geom_core import PolygonChain, SegmentTable, arc_between, hyperbola_params, point_at
from .plot import contact_for_slope
from .retarget import point_tangent_slopes

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

JUMP_RESOLUTION = 1e-4  # sampling step of brute_jump, times the perimeter
R_SAMPLES_PER_EDGE = 200  # r samples per edge and side when r_refine is off


@dataclass(frozen=True)
class OracleConfig:
    q_samples: Optional[int] = None  # None means 100 * n
    r_refine: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        if self.q_samples is not None and self.q_samples < 1:
            raise ValueError("q_samples must be > 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def samples_for(self, n: int) -> int:
        q = 100 * n if self.q_samples is None else self.q_samples
        if q < n:
            raise ValueError(f"q_samples must be >= n ({n}), got {q}")
        return q


# ----------------- dilation -----------------

def dilation_of(chain: PolygonChain, t_q: float, t_r: float, cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    dist = min(arc_between(chain, t_q, t_r), arc_between(chain, t_r, t_q))
    if dist <= cfg.eps_param(chain.perimeter):
        raise CoincidentPoints(f"t_q={t_q!r} and t_r={t_r!r} name the same boundary point")
    p = chain.focus
    q, r = point_at(chain, t_q), point_at(chain, t_r)
    return (math.hypot(q.x - p.x, q.y - p.y) + dist) / math.hypot(r.x - p.x, r.y - p.y)


def _h_many(segs: SegmentTable, ts: np.ndarray) -> np.ndarray:
    mu = segs.perimeter
    local = np.mod(ts, mu)
    r = np.clip(np.searchsorted(segs.breaks, local, side="right") - 1, 0, segs.n - 1)
    return np.hypot(local - segs.base_m[r], segs.base_d[r])


def _clamp(x: float, a: float, b: float) -> float:
    return min(max(x, a), b)


def _left_exact(segs: SegmentTable, t_q: float) -> Tuple[float, float]:
    half = segs.perimeter / 2.0
    o = t_q - segs.value(t_q)
    lo, hi = t_q, t_q + half
    best_s, best_x = math.inf, lo
    for j in range(segs.index_at(lo), segs.index_at(hi) + 1):
        seg = segs.seg(j)
        a, b = max(lo, seg.e_left), min(hi, seg.e_right)
        if b < a:
            continue
        x = _clamp(seg.m + seg.d * seg.d / (seg.m - o), a, b) if o < seg.m else b
        s = seg.value(x) / (x - o)
        if s < best_s:
            best_s, best_x = s, x
    return best_s, best_x


def _right_exact(segs: SegmentTable, t_q: float) -> Tuple[float, float]:
    half = segs.perimeter / 2.0
    o_minus = t_q + segs.value(t_q)
    lo, hi = t_q - half, t_q
    best_s, best_x = math.inf, hi
    for j in range(segs.index_at(lo), segs.index_at(hi) + 1):
        seg = segs.seg(j)
        a, b = max(lo, seg.e_left), min(hi, seg.e_right)
        if b < a:
            continue
        x = _clamp(seg.m - seg.d * seg.d / (o_minus - seg.m), a, b) if o_minus > seg.m else a
        s = seg.value(x) / (o_minus - x)
        if s < best_s:
            best_s, best_x = s, x
    return best_s, best_x


def _sampled(segs: SegmentTable, t_q: float, right: bool) -> Tuple[float, float]:
    half = segs.perimeter / 2.0
    h_q = segs.value(t_q)
    count = R_SAMPLES_PER_EDGE * segs.n + 1
    if right:
        xs = np.linspace(t_q - half, t_q, count)
        slopes = _h_many(segs, xs) / ((t_q + h_q) - xs)
    else:
        xs = np.linspace(t_q, t_q + half, count)
        slopes = _h_many(segs, xs) / (xs - (t_q - h_q))
    k = int(np.argmin(slopes))
    return float(slopes[k]), float(xs[k])


def _side(segs: SegmentTable, t_q: float, right: bool, refine: bool) -> Tuple[float, float]:
    if refine:
        s, x = (_right_exact if right else _left_exact)(segs, t_q)
    else:
        s, x = _sampled(segs, t_q, right)
    return 1.0 / s, x % segs.perimeter


def left_dilation_via(chain: PolygonChain, t_q: float, segs: Optional[SegmentTable] = None,
                      refine: bool = True) -> Tuple[float, float]:
    """Worst dilation via P(t_q) over targets within half a perimeter after q."""
    segs = segs if segs is not None else hyperbola_params(chain)
    return _side(segs, t_q, False, refine)


def right_dilation_via(chain: PolygonChain, t_q: float, segs: Optional[SegmentTable] = None,
                       refine: bool = True) -> Tuple[float, float]:
    """Worst dilation via P(t_q) over targets within half a perimeter before q."""
    segs = segs if segs is not None else hyperbola_params(chain)
    return _side(segs, t_q, True, refine)


def dilation_via(chain: PolygonChain, t_q: float, segs: Optional[SegmentTable] = None,
                 refine: bool = True) -> Tuple[float, float]:
    """(worst dilation via P(t_q), parameter of a target attaining it); ties go left."""
    segs = segs if segs is not None else hyperbola_params(chain)
    left = _side(segs, t_q, False, refine)
    right = _side(segs, t_q, True, refine)
    return left if left[0] >= right[0] else right


def grid_best(
    chain: PolygonChain,
    cfg: OracleConfig = OracleConfig(),
    breakpoints: Optional[Iterable[float]] = None,
) -> Tuple[float, float]:
    """Minimizer of dilation_via over a uniform q grid, the vertices and ``breakpoints``."""
    mu = chain.perimeter
    q = cfg.samples_for(chain.n)
    ts = set(np.linspace(0.0, mu, q, endpoint=False).tolist())
    ts.update(float(c) for c in chain.cum_len[:-1])
    if breakpoints is not None:
        ts.update(float(t) % mu for t in breakpoints)
    grid = sorted(ts)
    segs = hyperbola_params(chain)

    def evaluate(t: float) -> float:
        return dilation_via(chain, t, segs, cfg.r_refine)[0]

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            values = list(pool.map(evaluate, grid))
    else:
        values = [evaluate(t) for t in grid]

    k = int(np.argmin(values))
    logger.info("grid oracle: %d positions, best %r at t=%r", len(grid), values[k], grid[k])
    return grid[k], float(values[k])


# ----------------- visibility -----------------

def brute_jump(segs: SegmentTable, x: float) -> int:
    """
    Index of the piece holding the steepest chord from H(x) into the period
    left of x. The own piece competes with its derivative at x; ties (1e-12
    relative) go to the rightmost touching position.
    """
    mu = segs.perimeter
    hx = segs.value(x)
    k = segs.index_at(x)
    own = segs.seg(k).slope(x)
    step = JUMP_RESOLUTION * mu

    ws: List[np.ndarray] = []
    vs: List[np.ndarray] = []
    js: List[np.ndarray] = []
    for j in range(segs.index_at(x - mu), k + 1):
        seg = segs.seg(j)
        a, b = max(seg.e_left, x - mu), min(seg.e_right, x)
        if not b > a:
            continue
        exact = [a] + [w for w in (contact_for_slope(seg, s) for s in point_tangent_slopes(x, hx, seg))
                       if a <= w < b]
        w = np.concatenate((np.asarray(exact), np.arange(a, b, step)))
        w = w[w < x]
        ws.append(w)
        vs.append(np.hypot(w - seg.m, seg.d))
        js.append(np.full(w.size, j))
    if not ws:
        return k
    w, v, j = np.concatenate(ws), np.concatenate(vs), np.concatenate(js)
    if not w.size:
        return k
    slopes = (hx - v) / (x - w)
    best = max(own, float(slopes.max()))
    tol = 1e-12 * max(1.0, abs(best))
    if own >= best - tol:
        return k
    close = slopes >= best - tol
    return int(j[close][np.argmax(w[close])])
