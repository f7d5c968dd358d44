# tests/test_retarget.py
import math
import random
import numpy as np
import pytest

from src.geom_core import HyperbolaSeg, SegmentTable, hyperbola_params
from src.oracle import brute_jump
from src.plot import global_min
from src.retarget import (  # noqa
    PointKind, TangentLine, common_tangent, common_tangent_of, jump_of, retargeting_points, tangent_hits,
    tangent_hits_segment,
)

SEG_I = HyperbolaSeg(0, 0.0, 1.0, -1.0, 1.0)
SEG_J = HyperbolaSeg(1, 4.0, 2.0, 3.0, 5.0)


def _table(chain):
    segs = hyperbola_params(chain)
    _, j0 = global_min(segs)
    return segs, retargeting_points(segs, j0)


def test_common_tangent_interior_contacts():
    line = common_tangent_of(SEG_I, SEG_J, 1e-12)
    assert line.touch_i == pytest.approx(0.25)
    assert line.touch_j == pytest.approx(4.5)
    assert line.origin_x == pytest.approx(-4.0)
    assert line.slope == pytest.approx(0.25 / math.hypot(1.0, 0.25))


def test_common_tangent_equal_apex_heights(make_polygon):
    segs = hyperbola_params(make_polygon("square"))
    line = common_tangent(segs, 0, 1)
    assert line.slope == pytest.approx(0.0, abs=1e-12)
    assert line.intercept == pytest.approx(0.5)
    assert (line.touch_i, line.touch_j) == (pytest.approx(0.5), pytest.approx(1.5))


def test_common_tangent_wedge_uses_joint():
    # descending piece followed by an ascending one; the lowest support pivots on the joint
    si = HyperbolaSeg(0, 1.5, 0.5, 0.0, 1.0)
    sj = HyperbolaSeg(1, 0.5, 0.5, 1.0, 2.0)
    line = common_tangent_of(si, sj, 1e-12)
    assert line.slope == pytest.approx(-1 / math.sqrt(2))
    assert line.touch_i == pytest.approx(1.0)
    assert line.touch_j == pytest.approx(1.0)
    for seg in (si, sj):
        for k in range(101):
            x = seg.e_left + (seg.e_right - seg.e_left) * k / 100
            assert seg.value(x) >= line.at(x) - 1e-9


def test_common_tangent_needs_order(make_polygon):
    segs = hyperbola_params(make_polygon("square"))
    with pytest.raises(ValueError, match="i < j"):
        common_tangent(segs, 2, 1)


def test_tangent_hits_leftmost_root():
    line = TangentLine(0.0, 1.5, 0.0, 0.0)
    seg = HyperbolaSeg(0, 0.0, 1.0, -2.0, 2.0)
    assert tangent_hits(line, seg, 1e-9, 1e-12) == pytest.approx(-math.sqrt(1.25))


def test_tangent_hits_roots_outside_closure():
    s = 1 / math.sqrt(2)
    line = TangentLine(s, s, 1.0, 1.0)
    seg = HyperbolaSeg(2, 4.0, 0.5, 3.0, 5.0)
    assert tangent_hits(line, seg, 1e-9, 1e-12) is None


def test_tangent_hits_line_below():
    line = TangentLine(0.1, -3.0, 0.0, 0.0)
    assert tangent_hits(line, SEG_J, 1e-9, 1e-12) is None


def test_tangent_hits_grazing_is_no_hit():
    line = TangentLine(0.0, 2.0, 0.0, 0.0)
    assert tangent_hits(line, SEG_J, 1e-9, 1e-12) is None


def _two_piece_table(d_right):
    return SegmentTable(m=[0.0, 4.0], d=[1.0, d_right], e=[0.0, 3.0, 5.0], clamped=[False, False])


def test_tangent_hits_segment_crossing():
    line = TangentLine(0.0, 0.5, 0.0, 0.0)
    x = tangent_hits_segment(line, _two_piece_table(0.1), 1)
    assert x == pytest.approx(4.0 - math.sqrt(0.24))
    assert _two_piece_table(0.1).seg(1).value(x) == pytest.approx(0.5)


@pytest.mark.parametrize("d_right", [0.5, 0.1])
def test_tangent_hits_segment_steep_line_misses(d_right):
    # y = (x + 1) / sqrt(2) stays above the piece on [3, 5); its crossings lie outside the closure
    s = 1 / math.sqrt(2)
    line = TangentLine(s, s, 1.0, 1.0)
    assert tangent_hits_segment(line, _two_piece_table(d_right), 1) is None


def test_square_retargeting_points(make_polygon):
    segs, rts = _table(make_polygon("square"))
    assert [p.x for p in rts] == pytest.approx([1.5, 2.5, 3.5, 4.5])
    assert [(p.dest_before, p.dest) for p in rts] == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert all(p.kind is PointKind.SECOND for p in rts)


@pytest.mark.parametrize("x, expected", [(0.5, 0), (1.2, 0), (1.5, 1), (1.7, 1), (2.49, 1), (3.6, 3), (-0.2, -1)])
def test_square_jump_of(make_polygon, x, expected):
    segs, rts = _table(make_polygon("square"))
    assert jump_of(rts, x, 1e-9) == expected


def test_jump_of_needs_points(make_polygon):
    segs, rts = _table(make_polygon("square"))
    empty = type(rts)([], rts.n, rts.perimeter)
    with pytest.raises(ValueError, match="at least one"):
        jump_of(empty, 0.0)


@pytest.mark.parametrize("name", ["valley", "triangle", "lshape", "hexagon", "bowtie"])
def test_points_sorted_and_consistent(make_polygon, name):
    segs, rts = _table(make_polygon(name))
    xs = [p.x for p in rts]
    assert xs == sorted(xs)
    assert 1 <= len(rts) <= 2 * segs.n
    for a, b in zip(rts, list(rts)[1:]):
        assert a.dest != b.dest


@pytest.mark.parametrize("name", ["square", "valley", "triangle", "lshape", "hexagon", "bowtie"])
def test_jump_of_matches_visibility_scan(make_polygon, name):
    segs, rts = _table(make_polygon(name))
    mu = segs.perimeter
    rng = random.Random(sum(map(ord, name)))
    checked = 0
    while checked < 40:
        x = rng.uniform(0.0, mu)
        if any(abs(((x - p.x + mu / 2) % mu) - mu / 2) < 1e-3 * mu for p in rts):
            continue
        assert jump_of(rts, x) == brute_jump(segs, x), f"x={x!r}"
        checked += 1


def test_periodic_lookup(make_polygon):
    segs, rts = _table(make_polygon("triangle"))
    n, mu = segs.n, segs.perimeter
    for q in range(-2 * len(rts), 2 * len(rts)):
        assert rts.position(q + len(rts)) == pytest.approx(rts.position(q) + mu)
        assert rts.dest(q + len(rts)) == rts.dest(q) + n
    for x in (-7.3, 0.1, 5.5, 19.0):
        q = rts.rightmost_at_or_before(x)
        assert rts.position(q) <= x < rts.position(q + 1)


def _change_points(segs, a, ja, b, jb, tol, out):
    # destinations never come back, so equal ends mean no change in between
    if ja == jb:
        return
    if b - a <= tol:
        out.append((b, ja, jb))
        return
    mid = 0.5 * (a + b)
    jm = brute_jump(segs, mid)
    _change_points(segs, a, ja, mid, jm, tol, out)
    _change_points(segs, mid, jm, b, jb, tol, out)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("kind", ["convex", "star", "offcenter", "crossing"])
def test_retargeting_points_match_change_scan(make_random_polygon, kind, seed):
    n = 3 + (7 * seed + len(kind)) % 18
    segs, rts = _table(make_random_polygon(seed, n, kind))
    mu = segs.perimeter
    x_lo = 0.5 * (rts.position(-1) + rts.position(0))
    x_hi = x_lo + mu
    xs = np.linspace(x_lo, x_hi, 40 * n + 1)
    js = [brute_jump(segs, float(x)) for x in xs]
    found = []
    for a, ja, b, jb in zip(xs, js, xs[1:], js[1:]):
        _change_points(segs, float(a), ja, float(b), jb, 1e-9 * mu, found)

    expected = range(rts.rightmost_at_or_before(x_lo) + 1, rts.rightmost_at_or_before(x_hi) + 1)
    assert len(found) == len(expected)
    for (x, before, after), q in zip(found, expected):
        assert x == pytest.approx(rts.position(q), abs=1e-7 * mu)
        assert (before, after) == (rts.dest_before(q), rts.dest(q))
