# -*- coding: utf-8 -*-
"""
Polygon chain and distance-plot segments
========================================

- Chain: build_chain(), point_at(), arc_between(), antipode()
- Plot pieces: hyperbola_params() -> SegmentTable of HyperbolaSeg

Conventions:
- Traversal direction is the input vertex order; no orientation is imposed.
- Arc-length parameter t is unbounded; everything is periodic in the
  perimeter mu.
- Segments are addressed by an unbounded signed index j; the table never
  materializes copies for other periods:
    m(j) = m[j mod n] + floor(j / n) * mu, d(j) = d[j mod n],
    e(j) = e[j mod n] + floor(j / n) * mu
"""

from __future__ import annotations
import logging, math
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np

from .config import DEFAULT_CONFIG, SolverConfig
from .errors import DegeneratePolygon, FocusOnBoundary, TooFewVertices

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class Point(NamedTuple):
    x: float
    y: float


# ----------------- utils -----------------

def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _strip_duplicates(vertices: Sequence[Tuple[float, float]]) -> List[Point]:
    """Drop consecutive repeats, including a closing vertex equal to the first."""
    out: List[Point] = []
    for v in vertices:
        pt = Point(float(v[0]), float(v[1]))
        if out and pt == out[-1]:
            continue
        out.append(pt)
    while len(out) > 1 and out[-1] == out[0]:
        out.pop()
    return out


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.hypot(*(p - a)))
    u = min(1.0, max(0.0, float((p - a) @ ab) / denom))
    return float(np.hypot(*(p - (a + u * ab))))


# ----------------- chain -----------------

@dataclass(frozen=True)
class PolygonChain:
    """Closed boundary with cumulative arc lengths and the focus point p."""

    vertices: Tuple[Point, ...]
    cum_len: np.ndarray = field(repr=False, compare=False)
    perimeter: float
    focus: Point

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edge(self, r: int) -> Tuple[Point, Point]:
        r %= self.n
        return self.vertices[r], self.vertices[(r + 1) % self.n]

    def reversed(self) -> "PolygonChain":
        """Same boundary traversed the other way, still starting at v_0."""
        vs = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
        return _assemble(list(vs), self.focus)


def _assemble(vertices: List[Point], p: Point) -> PolygonChain:
    pts = np.asarray(vertices, dtype=float)
    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    cum = np.concatenate(([0.0], np.cumsum(lengths)))
    return PolygonChain(
        vertices=tuple(vertices),
        cum_len=_frozen(cum),
        perimeter=float(cum[-1]),
        focus=p,
    )


def build_chain(
    vertices: Sequence[Tuple[float, float]],
    p: Tuple[float, float],
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> PolygonChain:
    """
    Validate the input and build the parametrization substrate.

    Raises TooFewVertices (< 3 distinct consecutive vertices), DegeneratePolygon
    (non-finite input or zero perimeter) and FocusOnBoundary (p closer than
    ``boundary_rel`` times the bounding-box diagonal to some edge; a vertex
    counts as boundary).
    """
    coords = [c for v in vertices for c in v] + [p[0], p[1]]
    if not all(math.isfinite(float(c)) for c in coords):
        raise DegeneratePolygon("Coordinates must be finite")

    cleaned = _strip_duplicates(vertices)
    if len(cleaned) < 3:
        raise TooFewVertices(f"Need at least 3 distinct vertices, got {len(cleaned)}")

    focus = Point(float(p[0]), float(p[1]))
    chain = _assemble(cleaned, focus)
    if not chain.perimeter > 0:
        raise DegeneratePolygon("Polygon has zero perimeter")

    pts = np.asarray(cleaned, dtype=float)
    diag = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
    limit = cfg.boundary_rel * diag
    pv = np.asarray(focus, dtype=float)
    for r in range(chain.n):
        a, b = pts[r], pts[(r + 1) % chain.n]
        if _point_segment_distance(pv, a, b) <= limit:
            raise FocusOnBoundary(f"Point p={tuple(focus)} lies on edge {r}")

    logger.debug("chain built: n=%d perimeter=%r", chain.n, chain.perimeter)
    return chain


def _locate(cum: np.ndarray, n: int, perimeter: float, t: float) -> Tuple[int, int, float]:
    """(period k, edge r, local offset) with t = k*mu + cum[r] + offset."""
    k = math.floor(t / perimeter)
    local = t - k * perimeter
    if local >= perimeter:
        k += 1
        local -= perimeter
    if local < 0.0:
        k -= 1
        local += perimeter
    r = int(np.searchsorted(cum, local, side="right")) - 1
    r = min(max(r, 0), n - 1)
    return k, r, local - float(cum[r])


def point_at(chain: PolygonChain, t: float) -> Point:
    _, r, off = _locate(chain.cum_len, chain.n, chain.perimeter, t)
    a, b = chain.edge(r)
    length = float(chain.cum_len[r + 1] - chain.cum_len[r])
    u = off / length
    return Point(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y))


def arc_between(chain: PolygonChain, a: float, b: float) -> float:
    """Length travelled from P(a) to P(b) in the positive direction, in [0, mu)."""
    mu = chain.perimeter
    d = (b - a) % mu
    return 0.0 if d >= mu else d


def antipode(chain: PolygonChain, t: float) -> float:
    return t + chain.perimeter / 2.0


# ----------------- hyperbola segments -----------------

@dataclass(frozen=True)
class HyperbolaSeg:
    """One plot piece h(x) = sqrt((x - m)^2 + d^2) over [e_left, e_right)."""

    index: int
    m: float
    d: float
    e_left: float
    e_right: float

    def value(self, x: float) -> float:
        return math.hypot(x - self.m, self.d)

    def slope(self, x: float) -> float:
        return (x - self.m) / self.value(x)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.e_left - tol <= x < self.e_right + tol


class SegmentTable(Sequence[HyperbolaSeg]):
    """Periodic list of plot pieces; indexing by base index r in [0, n)."""

    def __init__(self, m: np.ndarray, d: np.ndarray, e: np.ndarray, clamped: np.ndarray):
        self._m = _frozen(np.asarray(m, dtype=float))
        self._d = _frozen(np.asarray(d, dtype=float))
        self._e = _frozen(np.asarray(e, dtype=float))
        self.clamped = _frozen(np.asarray(clamped, dtype=bool))
        self.n = len(self._m)
        self.perimeter = float(self._e[-1])

    # ----- Sequence protocol -----

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, r):  # type: ignore[override]
        if isinstance(r, slice):
            return [self.seg(k) for k in range(*r.indices(self.n))]
        if not -self.n <= r < self.n:
            raise IndexError(r)
        return self.seg(r % self.n)

    def __iter__(self) -> Iterator[HyperbolaSeg]:
        return (self.seg(r) for r in range(self.n))

    # ----- extended index arithmetic -----

    def m_of(self, j: int) -> float:
        k, r = divmod(j, self.n)
        return float(self._m[r]) + k * self.perimeter

    def d_of(self, j: int) -> float:
        return float(self._d[j % self.n])

    def e_of(self, j: int) -> float:
        k, r = divmod(j, self.n)
        return float(self._e[r]) + k * self.perimeter

    def seg(self, j: int) -> HyperbolaSeg:
        return HyperbolaSeg(j, self.m_of(j), self.d_of(j), self.e_of(j), self.e_of(j + 1))

    def index_at(self, t: float) -> int:
        """Extended index i with t in [e(i), e(i+1))."""
        k, r, _ = _locate(self._e, self.n, self.perimeter, t)
        return k * self.n + r

    def value(self, t: float) -> float:
        return self.seg(self.index_at(t)).value(t)

    @property
    def base_m(self) -> np.ndarray:
        return self._m

    @property
    def base_d(self) -> np.ndarray:
        return self._d

    @property
    def breaks(self) -> np.ndarray:
        return self._e


def hyperbola_params(chain: PolygonChain, cfg: SolverConfig = DEFAULT_CONFIG) -> SegmentTable:
    """
    Apex abscissa m_r and apex height d_r of every edge's distance hyperbola.

    d_r below ``clamp_rel * mu`` (p on the supporting line of edge r) is
    lifted to that floor and flagged in ``clamped``.
    """
    pts = np.asarray(chain.vertices, dtype=float)
    a = pts
    b = np.roll(pts, -1, axis=0)
    ab = b - a
    ap = np.asarray(chain.focus, dtype=float) - a
    lengths = np.diff(chain.cum_len)
    m = chain.cum_len[:-1] + (ab[:, 0] * ap[:, 0] + ab[:, 1] * ap[:, 1]) / lengths
    d = np.abs(ab[:, 0] * ap[:, 1] - ab[:, 1] * ap[:, 0]) / lengths
    floor = cfg.clamp_rel * chain.perimeter
    clamped = d < floor
    if clamped.any():
        logger.debug("clamping d on edges %s", np.flatnonzero(clamped).tolist())
    d = np.maximum(d, floor)
    return SegmentTable(m, d, np.array(chain.cum_len, dtype=float), clamped)
