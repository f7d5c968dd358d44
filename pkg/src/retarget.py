# -*- coding: utf-8 -*-
"""
Retargeting points
==================

The jump destination of a plot position x is the index of the lowest plot
piece visible when looking left from H(x). It only changes at retargeting
positions, which are found in one left-to-right pass over a stack holding the
convex support of the pieces seen so far (monotone-chain style).

- common_tangent(): lowest line touching the closures of two pieces
- tangent_hits_segment(): leftmost crossing of such a line with a piece
- retargeting_points(): every retargeting position of one period
- jump_of(): jump destination of an arbitrary position

Every point stores both destinations: ``dest_before`` applies just left of
``x``, ``dest`` at ``x`` and to its right.
"""

from __future__ import annotations
import bisect, enum, logging, math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from scipy import optimize as opt

from .config import DEFAULT_CONFIG, SolverConfig
from .geom_core import HyperbolaSeg, SegmentTable
from .plot import contact_for_slope
from .roots import quadratic_roots

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class TangentLine:
    slope: float
    intercept: float
    touch_i: float
    touch_j: float

    def at(self, x: float) -> float:
        return self.slope * x + self.intercept

    @property
    def origin_x(self) -> float:
        if self.slope == 0.0:
            return -math.inf if self.intercept > 0 else math.inf
        return -self.intercept / self.slope


class PointKind(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class RetargetingPoint:
    x: float
    dest: int
    dest_before: int
    kind: PointKind


# ----------------- utils -----------------

def _ends(seg: HyperbolaSeg) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    return (seg.e_left, seg.value(seg.e_left)), (seg.e_right, seg.value(seg.e_right))


def _support_gap(seg: HyperbolaSeg, s: float, b: float) -> Tuple[float, float]:
    """(min of h - line over the closure, where it is attained)."""
    x = min(max(contact_for_slope(seg, s), seg.e_left), seg.e_right)
    return seg.value(x) - (s * x + b), x


def point_tangent_slopes(ax: float, ay: float, seg: HyperbolaSeg) -> List[float]:
    """Slopes of the lines through (ax, ay) tangent to the full hyperbola of ``seg``."""
    u = ax - seg.m
    r2 = u * u + seg.d * seg.d
    excess = r2 - ay * ay
    if excess < 0.0:
        if excess < -1e-12 * r2:
            return []
        excess = 0.0
    root = seg.d * math.sqrt(excess)
    out: List[float] = []
    for s in ((ay * u - root) / r2, (ay * u + root) / r2):
        if -1.0 < s < 1.0 and ay - s * u >= -1e-12 * max(1.0, abs(ay)):
            out.append(s)
    return out


def _candidate_lines(si: HyperbolaSeg, sj: HyperbolaSeg) -> List[Tuple[float, float]]:
    lines: List[Tuple[float, float]] = []
    if si.m != sj.m:
        r = (si.d - sj.d) / (si.m - sj.m)
        s = r / math.hypot(1.0, r)
        lines.append((s, si.d * math.sqrt(1.0 - s * s) - s * si.m))
    for (ax, ay) in _ends(si):
        lines.extend((s, ay - s * ax) for s in point_tangent_slopes(ax, ay, sj))
    for (bx, by) in _ends(sj):
        lines.extend((s, by - s * bx) for s in point_tangent_slopes(bx, by, si))
    for (ax, ay) in _ends(si):
        for (bx, by) in _ends(sj):
            if bx > ax:
                s = (by - ay) / (bx - ax)
                lines.append((s, ay - s * ax))
    return lines


def _fallback_tangent(si: HyperbolaSeg, sj: HyperbolaSeg) -> Tuple[float, float]:
    """Slope where the supporting intercepts of both closures agree (bisection)."""
    def support(seg: HyperbolaSeg, s: float) -> float:
        gap, x = _support_gap(seg, s, 0.0)
        return gap

    def phi(s: float) -> float:
        return support(si, s) - support(sj, s)

    lo, hi = -1.0 + 1e-12, 1.0 - 1e-12
    flo, fhi = phi(lo), phi(hi)
    if flo >= 0.0:
        s = lo
    elif fhi <= 0.0:
        s = hi
    else:
        s = float(opt.brentq(phi, lo, hi, xtol=1e-15))
    return s, support(si, s)


def common_tangent_of(si: HyperbolaSeg, sj: HyperbolaSeg, tol: float) -> TangentLine:
    """Lowest common supporting line of cl(si) and cl(sj); smallest slope on ties."""
    best: Optional[TangentLine] = None
    for s, b in _candidate_lines(si, sj):
        gi, xi = _support_gap(si, s, b)
        gj, xj = _support_gap(sj, s, b)
        if -tol <= gi <= tol and -tol <= gj <= tol:
            if best is None or s < best.slope:
                best = TangentLine(s, b, xi, xj)
    if best is None:
        logger.warning("no closed-form common tangent for %d/%d, bisecting", si.index, sj.index)
        s, b = _fallback_tangent(si, sj)
        _, xi = _support_gap(si, s, b)
        _, xj = _support_gap(sj, s, b)
        best = TangentLine(s, b, xi, xj)
    return best


def common_tangent(segs: SegmentTable, i: int, j: int, cfg: SolverConfig = DEFAULT_CONFIG) -> TangentLine:
    if not i < j:
        raise ValueError("common_tangent needs i < j")
    return common_tangent_of(segs.seg(i), segs.seg(j), cfg.eps_param(segs.perimeter))


def tangent_hits(line: TangentLine, seg: HyperbolaSeg, tol: float, dip: float) -> Optional[float]:
    """
    Leftmost x in [e_left, e_right) with h(x) = line(x), provided the piece
    properly dips below the line (by more than ``dip``). Grazing is no hit.
    """
    s, b = line.slope, line.intercept
    gap, _ = _support_gap(seg, s, b)
    if gap >= -dip:
        return None
    qa = 1.0 - s * s
    qb = -2.0 * (seg.m + s * b)
    qc = seg.m * seg.m + seg.d * seg.d - b * b
    hits = [
        x for x in quadratic_roots(qa, qb, qc)
        if s * x + b >= -tol and seg.e_left - tol <= x < seg.e_right
    ]
    if not hits:
        return None
    return max(seg.e_left, hits[0])


def tangent_hits_segment(
    line: TangentLine, segs: SegmentTable, k: int, cfg: SolverConfig = DEFAULT_CONFIG
) -> Optional[float]:
    mu = segs.perimeter
    return tangent_hits(line, segs.seg(k), cfg.eps_param(mu), cfg.eps_tie(mu))


# ----------------- the stack pass -----------------

class RetargetTable(Sequence[RetargetingPoint]):
    """
    Retargeting points of one period plus periodic lookups.

    Extended index q addresses point ``q mod N`` shifted by ``q div N``
    periods; positions are nondecreasing in q.
    """

    def __init__(self, points: List[RetargetingPoint], n: int, perimeter: float):
        self._points = list(points)
        self._xs = [p.x for p in self._points]
        self.n = n
        self.perimeter = perimeter

    def __len__(self) -> int:
        return len(self._points)

    def __getitem__(self, k):  # type: ignore[override]
        return self._points[k]

    def __iter__(self) -> Iterator[RetargetingPoint]:
        return iter(self._points)

    def position(self, q: int) -> float:
        k, r = divmod(q, len(self._points))
        return self._xs[r] + k * self.perimeter

    def dest(self, q: int) -> int:
        k, r = divmod(q, len(self._points))
        return self._points[r].dest + k * self.n

    def dest_before(self, q: int) -> int:
        k, r = divmod(q, len(self._points))
        return self._points[r].dest_before + k * self.n

    def rightmost_at_or_before(self, x: float, tol: float = 0.0) -> int:
        """Extended index of the rightmost point with position <= x + tol."""
        big_n = len(self._points)
        x0 = self._xs[0]
        k = math.floor((x + tol - x0) / self.perimeter)
        y = x + tol - k * self.perimeter
        r = bisect.bisect_right(self._xs, y) - 1
        if r < 0:
            k, r = k - 1, big_n - 1
        return k * big_n + r


def retargeting_points(segs: SegmentTable, j0: int, cfg: SolverConfig = DEFAULT_CONFIG) -> RetargetTable:
    """All retargeting positions on pieces j0+1 .. j0+n, sorted left to right."""
    mu = segs.perimeter
    tol, tie = cfg.eps_param(mu), cfg.eps_tie(mu)
    stack: List[int] = [j0 - 1, j0]
    out: List[RetargetingPoint] = []
    for k in range(j0 + 1, j0 + segs.n + 1):
        seg_k = segs.seg(k)
        while True:
            i, j = stack[-2], stack[-1]
            g = None
            if len(stack) > 2:
                g = tangent_hits(common_tangent(segs, i, j, cfg), seg_k, tol, tie)
            if g is not None:
                out.append(RetargetingPoint(g, dest=i, dest_before=j, kind=PointKind.FIRST))
                logger.debug("first-type point x=%r: %d -> %d", g, j, i)
                stack.pop()
                continue
            touch = common_tangent(segs, j, k, cfg).touch_j
            if seg_k.e_left - tol <= touch < seg_k.e_right - tie:
                x = max(touch, seg_k.e_left)
                out.append(RetargetingPoint(x, dest=k, dest_before=j, kind=PointKind.SECOND))
                logger.debug("second-type point x=%r: %d -> %d", x, j, k)
                stack.append(k)
            break
    out.sort(key=lambda p: p.x)
    logger.debug("%d retargeting points for n=%d", len(out), segs.n)
    return RetargetTable(out, segs.n, mu)


def jump_of(retargets: RetargetTable, x: float, tol: float = 0.0) -> int:
    """Jump destination at x; a point's destination applies at and right of it."""
    if not len(retargets):
        raise ValueError("jump_of needs at least one retargeting point")
    return retargets.dest(retargets.rightmost_at_or_before(x, tol))
