# -*- coding: utf-8 -*-
"""
Merging left and right dilation
===============================

- left_pipeline(): plot, retargeting points and left sweep of a chain
- right_sequence(): the same pipeline on the reversed chain; the right
  dilation at t is the left dilation of the reversed chain at mu - t
- canonical_pieces(), merge_sequences(): both sequences cut to [0, mu) and
  overlapped into one breakpoint list
- interval_opt(): best position of one merged interval for min(s+, s-)
- optimal_feedlink() / solve(): the global optimum with its witness
- dilation_profile(): left/right/total dilation curves from the sequences
"""

from __future__ import annotations
import logging, math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize as opt

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import SweepError
from .geom_core import Point, PolygonChain, SegmentTable, hyperbola_params, point_at
from .plot import global_min
from .retarget import RetargetTable, retargeting_points
from .roots import sign_changes
from .sweep import (
    LeverState, RealizedSequence, StateKind, TraceSink, contact_of, side_slope, slide_lever,
)

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class Piece:
    """State of one side over [lo, hi] in original parameters."""

    lo: float
    hi: float
    state: LeverState
    offset: float
    mirrored: bool = False

    def local(self, t: float) -> float:
        """Parameter of the side's own sweep that corresponds to original t."""
        return self.offset - t if self.mirrored else self.offset + t


@dataclass(frozen=True)
class MergedEntry:
    lo: float
    hi: float
    left: Piece
    right: Piece


@dataclass(frozen=True)
class MergedSequence:
    entries: Tuple[MergedEntry, ...]

    @property
    def breakpoints(self) -> List[float]:
        return [e.lo for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FeedLinkResult:
    t_star: float
    q: Point
    dilation: float
    witness_t: float
    witness: Point


@dataclass(frozen=True)
class SidePipeline:
    segs: SegmentTable
    retargets: RetargetTable
    seq: RealizedSequence
    mirrored: bool = False

    def local(self, t: float) -> float:
        return self.segs.perimeter - t if self.mirrored else t

    def slope(self, t: float) -> float:
        tr = self.seq.reduce(self.local(t))
        return side_slope(self.segs, self.seq.state_at(tr), tr)

    def pieces(self) -> List[Piece]:
        return canonical_pieces(self.seq, self.mirrored)

    def breakpoints(self) -> List[float]:
        """Breakpoints in original parameters, ascending in [0, mu)."""
        return sorted({p.lo for p in self.pieces()})


# ----------------- pipelines -----------------

def left_pipeline(
    chain: PolygonChain, cfg: SolverConfig = DEFAULT_CONFIG, trace: Optional[TraceSink] = None
) -> SidePipeline:
    segs = hyperbola_params(chain, cfg)
    _, j0 = global_min(segs, cfg)
    rts = retargeting_points(segs, j0, cfg)
    seq = slide_lever(segs, rts, cfg, trace)
    return SidePipeline(segs, rts, seq)


def right_sequence(
    chain: PolygonChain, cfg: SolverConfig = DEFAULT_CONFIG, trace: Optional[TraceSink] = None
) -> SidePipeline:
    """Left pipeline of the reversed chain, read back through t -> mu - t."""
    side = left_pipeline(chain.reversed(), cfg, trace)
    return SidePipeline(side.segs, side.retargets, side.seq, mirrored=True)


def canonical_pieces(seq: RealizedSequence, mirrored: bool = False) -> List[Piece]:
    """Cut the sequence's spans at multiples of mu so they tile [0, mu)."""
    mu = seq.perimeter
    out: List[Piece] = []
    for lo, hi, state in seq.spans():
        if mirrored:
            a, b = mu - hi, mu - lo
        else:
            a, b = lo, hi
        base = math.floor(a / mu)
        for s in (-base - 1, -base, -base + 1):
            x0, x1 = max(a + s * mu, 0.0), min(b + s * mu, mu)
            if x1 > x0:
                offset = mu * (1 + s) if mirrored else -s * mu
                out.append(Piece(x0, x1, state, offset, mirrored))
    out.sort(key=lambda p: p.lo)
    return out


def merge_sequences(left: Sequence[Piece], right: Sequence[Piece]) -> MergedSequence:
    """Two-pointer overlap of two tilings of [0, mu)."""
    out: List[MergedEntry] = []
    a = b = 0
    while a < len(left) and b < len(right):
        lp, rp = left[a], right[b]
        lo, hi = max(lp.lo, rp.lo), min(lp.hi, rp.hi)
        if hi > lo:
            out.append(MergedEntry(lo, hi, lp, rp))
        if lp.hi < rp.hi:
            a += 1
        elif rp.hi < lp.hi:
            b += 1
        else:
            a += 1
            b += 1
    return MergedSequence(tuple(out))


# ----------------- per-interval optimum -----------------

def _y_stationary(segs: SegmentTable, piece: Piece, lo: float, hi: float) -> List[float]:
    """Interior stationary points of a Y-state slope on [lo, hi]."""
    half = segs.perimeter / 2.0
    seg_i, seg_j = segs.seg(piece.state.i), segs.seg(piece.state.j)

    def deriv(t: float) -> float:
        tau = piece.local(t)
        num, den = seg_j.value(tau + half), seg_i.value(tau) + half
        return seg_j.slope(tau + half) * den - num * seg_i.slope(tau)

    return sign_changes(deriv, lo, hi, 32)


def interval_opt(
    segs_left: SegmentTable,
    segs_right: SegmentTable,
    entry: MergedEntry,
    p_k: float,
    p_k1: float,
) -> Tuple[float, float]:
    """argmax of min(s+, s-) over [p_k, p_k1] and the value there."""

    def s_plus(t: float) -> float:
        return side_slope(segs_left, entry.left.state, entry.left.local(t))

    def s_minus(t: float) -> float:
        return side_slope(segs_right, entry.right.state, entry.right.local(t))

    cands = [p_k, p_k1]
    lk, rk = entry.left.state.kind, entry.right.state.kind
    if lk is StateKind.Y and rk is StateKind.Y:
        cands += _y_stationary(segs_left, entry.left, p_k, p_k1)
        cands += _y_stationary(segs_right, entry.right, p_k, p_k1)
    if p_k1 > p_k:
        def diff(t: float) -> float:
            return s_plus(t) - s_minus(t)

        f0, f1 = diff(p_k), diff(p_k1)
        if f0 * f1 < 0.0:
            cands.append(float(opt.brentq(diff, p_k, p_k1, xtol=1e-15, rtol=4 * np.finfo(float).eps)))

    best_t, best_v = p_k, -math.inf
    for t in sorted(cands):
        v = min(s_plus(t), s_minus(t))
        if v > best_v:
            best_t, best_v = t, v
    return best_t, best_v


# ----------------- global optimum -----------------

@dataclass(frozen=True)
class Solution:
    """Everything the CLI reports on: the optimum plus both sweeps."""

    chain: PolygonChain
    left: SidePipeline
    right: SidePipeline
    merged: MergedSequence
    result: FeedLinkResult


def _witness(chain: PolygonChain, sol_left: SidePipeline, sol_right: SidePipeline,
             entry: MergedEntry, t: float) -> float:
    mu = chain.perimeter
    lt, rt = entry.left.local(t), entry.right.local(t)
    s_plus = side_slope(sol_left.segs, entry.left.state, lt)
    s_minus = side_slope(sol_right.segs, entry.right.state, rt)
    if s_plus <= s_minus:
        return contact_of(sol_left.segs, entry.left.state, lt) % mu
    return (mu - contact_of(sol_right.segs, entry.right.state, rt)) % mu


def _tagged(trace: Optional[TraceSink], side: str) -> Optional[TraceSink]:
    if trace is None:
        return None
    return lambda record: trace({"side": side, **record})


def solve(
    chain: PolygonChain, cfg: SolverConfig = DEFAULT_CONFIG, trace: Optional[TraceSink] = None
) -> Solution:
    left = left_pipeline(chain, cfg, _tagged(trace, "left"))
    right = right_sequence(chain, cfg, _tagged(trace, "right"))
    merged = merge_sequences(left.pieces(), right.pieces())

    best: Optional[Tuple[float, float, MergedEntry]] = None
    for entry in merged.entries:
        t, v = interval_opt(left.segs, right.segs, entry, entry.lo, entry.hi)
        logger.debug("interval [%r, %r] %s/%s: best slope %r at %r",
                     entry.lo, entry.hi, entry.left.state, entry.right.state, v, t)
        if best is None or v > best[1] + cfg.slope_abs:
            best = (t, v, entry)
    if best is None:
        raise SweepError("Merged sequence is empty")

    t_star, slope, entry = best
    t_star %= chain.perimeter
    w = _witness(chain, left, right, entry, best[0])
    result = FeedLinkResult(
        t_star=t_star,
        q=point_at(chain, t_star),
        dilation=1.0 / slope,
        witness_t=w,
        witness=point_at(chain, w),
    )
    logger.info("optimum t*=%r dilation=%r (%d merged intervals)", t_star, result.dilation, len(merged))
    return Solution(chain, left, right, merged, result)


def optimal_feedlink(chain: PolygonChain, cfg: SolverConfig = DEFAULT_CONFIG) -> FeedLinkResult:
    return solve(chain, cfg).result


def dilation_profile(sol: Solution, ts: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(left, right, total) dilation via P(t) for every t, from the sequences alone."""
    left = np.array([1.0 / sol.left.slope(t) for t in ts])
    right = np.array([1.0 / sol.right.slope(t) for t in ts])
    return left, right, np.maximum(left, right)
