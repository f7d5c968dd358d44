# tests/conftest.py
import json
import math
from pathlib import Path
import numpy as np
import pytest

from src.geom_core import build_chain

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
DATA = Path(__file__).parent / "data"


def regular_ngon(n, radius=1.0, phase=0.1):
    return [(radius * math.cos(phase + 2 * math.pi * k / n), radius * math.sin(phase + 2 * math.pi * k / n))
            for k in range(n)]


@pytest.fixture
def make_polygon():
    """
    Factory for solver chains. Uso nei test: chain = make_polygon("square")
    or make_polygon(vertices, p).
    """
    named = {
        "square": (SQUARE, (0.5, 0.5)),
        "triangle": ([(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)], (1.0, 1.0)),
        "valley": ([(0.0, 0.0), (10.0, 0.0), (0.0, 1.0)], (5.0, 0.4)),
        "rectangle": ([(0.0, 0.0), (10.0, 0.0), (10.0, 1.0), (0.0, 1.0)], (5.0, 0.5)),
        "hexagon": (regular_ngon(6), (0.0, 0.0)),
        "lshape": ([(0, 0), (3, 0), (3, 1), (1, 1), (1, 3), (0, 3)], (0.5, 0.5)),
        "bowtie": ([(0, 0), (2, 2), (2, 0), (0, 2)], (0.5, 1.0)),
        # thin triangle and self-crossing quad whose lever contact sits right at the endpoint
        "sliver": ([(-0.7117929900678197, -0.572467854631039), (-0.6737035138209982, -0.6029815996489807),
                    (0.4958430502936188, -0.12916563946575513)], (0.1998126340924662, -0.24620621455534264)),
        "crossing": ([(-0.39, 0.44), (-0.04, -0.82), (-0.96, 0.1), (-0.42, 0.98)], (-0.26, 0.01)),
    }

    def _make(vertices="square", p=None):
        if isinstance(vertices, str):
            vertices, default_p = named[vertices]
            p = default_p if p is None else p
        return build_chain(vertices, p)
    return _make


def _random_instance(rng, n, kind):
    if kind == "convex":
        w = rng.uniform(1.0, 1.5, n)
        angles = rng.uniform(0.0, 2 * math.pi) + 2 * math.pi * np.cumsum(w) / w.sum()
        verts = np.column_stack((np.cos(angles), np.sin(angles)))
        return verts, rng.uniform(-0.1, 0.1, 2)
    if kind in ("star", "offcenter", "zigzag"):
        angles = rng.uniform(0.0, 2 * math.pi) + 2 * math.pi * np.arange(n) / n
        if kind == "zigzag":
            radii = np.where(np.arange(n) % 2 == 0, 1.0, 0.7)
            p = rng.uniform(-0.02, 0.02, 2)
        else:
            radii = rng.uniform(0.6, 2.0, n)
            p = rng.uniform(-0.5, 0.5, 2) if kind == "offcenter" else rng.uniform(-0.1, 0.1, 2)
        return np.column_stack((radii * np.cos(angles), radii * np.sin(angles))), p
    if kind == "crossing":
        r, a = np.sqrt(rng.uniform(0.0, 1.0, n)), rng.uniform(0.0, 2 * math.pi, n)
        verts = np.column_stack((r * np.cos(a), r * np.sin(a)))
        return verts, verts.mean(axis=0) + rng.uniform(-0.1, 0.1, 2)
    raise ValueError(f"unknown kind {kind!r}")


def clearance(verts, p):
    """(distance from p to the nearest edge, shortest edge), both over the bbox diagonal."""
    a = np.asarray(verts, dtype=float)
    ab = np.roll(a, -1, axis=0) - a
    lengths = np.hypot(ab[:, 0], ab[:, 1])
    u = np.clip(((np.asarray(p, dtype=float) - a) * ab).sum(axis=1) / lengths ** 2, 0.0, 1.0)
    gap = a + u[:, None] * ab - np.asarray(p, dtype=float)
    diag = float(np.hypot(*(a.max(axis=0) - a.min(axis=0))))
    return float(np.hypot(gap[:, 0], gap[:, 1]).min()) / diag, float(lengths.min()) / diag


@pytest.fixture
def make_random_polygon():
    """
    Seeded random chains: kind is "convex", "star", "offcenter", "zigzag"
    (alternating radii) or "crossing" (self-intersecting). Instances with p
    almost on an edge or with tiny edges are redrawn.
    """
    def _make(seed, n, kind="star"):
        rng = np.random.default_rng(seed)
        for _ in range(200):
            verts, p = _random_instance(rng, n, kind)
            near, short = clearance(verts, p)
            if near > 2e-3 and short > 1e-3:
                return build_chain([tuple(v) for v in verts.tolist()], tuple(p.tolist()))
        raise RuntimeError(f"no usable {kind} instance for seed={seed}, n={n}")
    return _make


@pytest.fixture
def make_problem_file(tmp_path: Path):
    """Factory writing a problem document; returns its path as str."""
    def _make(polygon=SQUARE, point=(0.5, 0.5), name="problem.json", fmt="json") -> str:
        path = tmp_path / name
        if fmt == "plain":
            lines = [f"{x!r} {y!r}" for x, y in polygon] + [f"p: {point[0]!r} {point[1]!r}"]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        else:
            path.write_text(json.dumps({"polygon": [list(v) for v in polygon], "point": list(point)}),
                            encoding="utf-8")
        return str(path)
    return _make


@pytest.fixture
def outdir(tmp_path: Path):
    d = tmp_path / "out"
    d.mkdir()
    return d
