# -*- coding: utf-8 -*-
"""
Distance plot h(t)
==================

- h_eval(), o_eval(): the plot and the lever origin o(t) = t - h(t)
- plot_point(), origin_point(): the same as points H(t) and O(t)
- t_from_o(): inverse of o on one hyperbola piece
- tangent_contact(), tangent_slope(): contact abscissa c_j(o) and slope s_j(o)
  of the tangent from (o, 0) to hyperbola j
- global_min(): lowest point of one period (smallest t on ties)
"""

from __future__ import annotations
import logging, math
from typing import NamedTuple, Tuple

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import DivisionDegeneracy, PreconditionViolated
from .geom_core import HyperbolaSeg, SegmentTable

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class PlotPoint(NamedTuple):
    t: float
    y: float


class OriginPoint(NamedTuple):
    o: float


def h_eval(segs: SegmentTable, t: float) -> float:
    return segs.value(t)


def o_eval(segs: SegmentTable, t: float) -> float:
    return t - segs.value(t)


def plot_point(segs: SegmentTable, t: float) -> PlotPoint:
    return PlotPoint(t, segs.value(t))


def origin_point(segs: SegmentTable, t: float) -> OriginPoint:
    return OriginPoint(o_eval(segs, t))


def t_from_o(seg: HyperbolaSeg, o: float) -> float:
    """Parameter t on hyperbola ``seg`` whose lever origin is ``o``."""
    denom = 2.0 * (o - seg.m)
    if denom == 0.0:
        raise DivisionDegeneracy(f"o equals the apex abscissa m={seg.m!r}")
    return (o * o - seg.d * seg.d - seg.m * seg.m) / denom


def _require_left_of_apex(seg: HyperbolaSeg, o: float) -> None:
    if not o < seg.m:
        raise PreconditionViolated(f"o={o!r} must be left of the apex m={seg.m!r}")


def tangent_contact(seg: HyperbolaSeg, o: float) -> float:
    _require_left_of_apex(seg, o)
    return seg.m + seg.d * seg.d / (seg.m - o)


def tangent_slope(seg: HyperbolaSeg, o: float) -> float:
    _require_left_of_apex(seg, o)
    return 1.0 / math.hypot((seg.m - o) / seg.d, 1.0)


def contact_for_slope(seg: HyperbolaSeg, s: float) -> float:
    """Abscissa where the hyperbola's derivative equals ``s`` (|s| < 1)."""
    s = min(max(s, -1.0 + 1e-15), 1.0 - 1e-15)
    return seg.m + s * seg.d / math.sqrt(1.0 - s * s)


def global_min(segs: SegmentTable, cfg: SolverConfig = DEFAULT_CONFIG) -> Tuple[float, int]:
    """(p_low, j0): a global minimizer in [0, mu) and the index of its piece."""
    tie = cfg.eps_tie(segs.perimeter)
    best_t, best_v, best_j = 0.0, math.inf, 0
    for seg in segs:
        cands = [seg.e_left]
        if seg.e_left < seg.m < seg.e_right:
            cands.append(seg.m)
        for t in cands:
            v = seg.value(t)
            if v < best_v - tie or (abs(v - best_v) <= tie and t < best_t):
                best_t, best_v, best_j = t, v, seg.index
    logger.debug("global minimum h=%r at t=%r (segment %d)", best_v, best_t, best_j)
    return best_t, best_j
