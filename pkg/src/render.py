# -*- coding: utf-8 -*-
"""
SVG output
==========

- render_polygon_svg(): polygon, p, the feed-link pq and the witness point
- render_plot_svg(): one period of the distance plot h(t) with the lever at t*

Both drawings are SVG 1.1, fitted to their content with a 5% margin. The
y axis is flipped so that drawings read like the usual math orientation.
"""

from __future__ import annotations
import logging
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import svgwrite

from .merge import Solution
from .plot import origin_point, plot_point
from .sweep import side_slope

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())

MARGIN = 0.05
PathLike = Union[str, Path]


def _viewbox(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float, float]:
    """(x, y, w, h) in flipped coordinates, padded by MARGIN on every side."""
    x0, x1 = min(xs), max(xs)
    y0, y1 = -max(ys), -min(ys)
    w, h = max(x1 - x0, 1e-12), max(y1 - y0, 1e-12)
    pad = MARGIN * max(w, h)
    return x0 - pad, y0 - pad, w + 2 * pad, h + 2 * pad


def _drawing(path: PathLike, box: Tuple[float, float, float, float]) -> svgwrite.Drawing:
    dwg = svgwrite.Drawing(str(path), profile="full", size=("800px", f"{800 * box[3] / box[2]:.0f}px"))
    dwg.attribs["viewBox"] = " ".join(repr(float(v)) for v in box)
    return dwg


def _flip(pts: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    return [(float(x), -float(y)) for x, y in pts]


def render_polygon_svg(sol: Solution, path: PathLike) -> Path:
    chain, res = sol.chain, sol.result
    pts = list(chain.vertices) + [chain.focus]
    box = _viewbox([p.x for p in pts], [p.y for p in pts])
    stroke = box[2] / 400.0
    dwg = _drawing(path, box)

    dwg.add(dwg.polygon(points=_flip(chain.vertices), stroke="#111", fill="none",
                        stroke_width=stroke, id="polygon"))
    link = _flip([chain.focus, res.q])
    dwg.add(dwg.line(start=link[0], end=link[1], stroke="#d11", stroke_width=2 * stroke, id="feed_link"))

    marks = dwg.g(id="points", stroke="none")
    for (x, y), color in zip(_flip([chain.focus, res.q, res.witness]), ("#111", "#d11", "#15c")):
        marks.add(dwg.circle(center=(x, y), r=3 * stroke, fill=color))
    dwg.add(marks)
    dwg.add(dwg.text(f"dilation {res.dilation:.6g}", insert=(box[0] + stroke, box[1] + 8 * stroke),
                     font_size=8 * stroke, fill="#111"))
    dwg.save()
    logger.info("wrote polygon drawing %s", path)
    return Path(path)


def render_plot_svg(sol: Solution, path: PathLike, samples: int = 2000) -> Path:
    """h over [0, mu) plus the left lever at t* from O(t*) to its contact."""
    segs, res = sol.left.segs, sol.result
    mu = segs.perimeter
    ts = np.linspace(0.0, mu, samples + 1)
    curve = [plot_point(segs, float(t)) for t in ts]

    t = res.t_star
    o = origin_point(segs, t).o
    tr = sol.left.seq.reduce(t)
    slope = side_slope(segs, sol.left.seq.state_at(tr), tr)
    x_end = t + mu / 2.0
    lever = [(o, 0.0), (x_end, slope * (x_end - o))]

    box = _viewbox([pt.t for pt in curve] + [o, x_end], [pt.y for pt in curve] + [0.0, lever[1][1]])
    stroke = box[2] / 600.0
    dwg = _drawing(path, box)
    dwg.add(dwg.line(start=(box[0], 0.0), end=(box[0] + box[2], 0.0), stroke="#999",
                     stroke_width=stroke, id="axis"))
    dwg.add(dwg.polyline(points=_flip(curve), stroke="#111", fill="none",
                         stroke_width=stroke, id="plot"))
    seg = _flip(lever)
    dwg.add(dwg.line(start=seg[0], end=seg[1], stroke="#d11", stroke_width=stroke, id="lever"))
    dwg.save()
    logger.info("wrote plot drawing %s", path)
    return Path(path)
