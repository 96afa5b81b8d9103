"""Collocation lattices, closed boundary curves and boundary-fitted relocation.

A uniform lattice over the inner box is built first.  For an irregular
domain, lattice points next to the boundary curve are moved onto it: for each
element edge crossed by the curve, the edge endpoint closest to the crossing
is moved to the crossing point.  Since the crossing lies on the edge, the
move never exceeds half an edge length.
"""

from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree

from .eigenbasis import ExtendedRectangle
from .errors import ContractError

logger = logging.getLogger(__name__)

CSV_HEADER = "# stretched-eigenbasis v1"

# points closer than this to the curve count as lying on it
ON_CURVE_TOL = 1e-10
CLASSIFY_SAMPLES = 4096


class Tag(enum.IntEnum):
    INTERIOR = 0
    RECT_BOUNDARY = 1
    RELOCATED = 2
    EXTERIOR = 3

    @property
    def label(self) -> str:
        return self.name.lower()


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CollocationGrid:
    """Collocation nodes with per-node tags.

    ``indices`` holds the lattice multi-index each node came from and
    ``origins`` its lattice position; for nodes that were not relocated the
    two coincide with ``points``.
    """

    rect: ExtendedRectangle
    n: int
    points: np.ndarray
    tags: np.ndarray
    indices: np.ndarray
    origins: np.ndarray
    candidates: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("points", "tags", "indices", "origins"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        cand = np.zeros(len(self.points), bool) if self.candidates is None else self.candidates
        object.__setattr__(self, "candidates", _frozen(cand))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> float:
        """Largest lattice spacing ``max_k L_k / (n - 1)``."""
        return max(L / (self.n - 1) for L in self.rect.lengths)

    def mask(self, *tags: Tag) -> np.ndarray:
        return np.isin(self.tags, [int(t) for t in tags])

    @property
    def displacements(self) -> np.ndarray:
        return np.linalg.norm(self.points - self.origins, axis=1)


def uniform_grid(rect: ExtendedRectangle, n: int) -> CollocationGrid:
    """Tensor lattice with ``n`` points per axis spanning the closed inner box."""
    if n < 4:
        raise ContractError(f"grid needs n >= 4 points per axis, got {n}")
    lo, _ = rect.inner_bounds
    axes = [lo[k] + np.arange(n) * rect.lengths[k] / (n - 1) for k in range(rect.dim)]
    # pin the far end exactly to L_k
    for k in range(rect.dim):
        axes[k][-1] = lo[k] + rect.lengths[k]
    idx = np.stack([g.ravel() for g in np.meshgrid(*[np.arange(n)] * rect.dim, indexing="ij")], axis=1)
    pts = np.stack([axes[k][idx[:, k]] for k in range(rect.dim)], axis=1)
    on_edge = np.any((idx == 0) | (idx == n - 1), axis=1)
    tags = np.where(on_edge, Tag.RECT_BOUNDARY, Tag.INTERIOR).astype(np.int8)
    return CollocationGrid(rect, n, pts, tags, idx, pts.copy())


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed planar curve ``t -> gamma(t)`` on ``[0, 1]``.

    ``func`` maps an array of parameters to an (m, 2) array of points and
    must be 1-periodic.  The curve may cross itself (a figure-eight bounds
    two lobes); the enclosed domain is where its winding number is nonzero.
    ``indicator``, when given, is an analytic level-set function that is
    negative inside the domain; it is used only for cross-checking.
    """

    func: Callable[[np.ndarray], np.ndarray]
    description: str = "analytic"
    name: str = ""
    indicator: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        # evaluate at the wrapped parameter so gamma(1) == gamma(0) exactly
        return np.asarray(self.func(np.mod(t, 1.0)), dtype=float).reshape(-1, 2)

    @classmethod
    def ellipse(cls, a: float, b: float, center=(0.0, 0.0), name: str = "ellipse") -> BoundaryCurve:
        cx, cy = center

        def func(t):
            th = 2 * np.pi * t
            return np.stack([cx + a * np.cos(th), cy + b * np.sin(th)], axis=1)

        def indicator(x, y):
            return ((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 - 1

        return cls(func, "analytic", name, indicator)

    @classmethod
    def circle(cls, radius: float, center=(0.0, 0.0), name: str = "circle") -> BoundaryCurve:
        return cls.ellipse(radius, radius, center, name)

    @classmethod
    def polar(cls, radius: Callable[[np.ndarray], np.ndarray], center=(0.0, 0.0), name: str = "polar") -> BoundaryCurve:
        """Star-shaped curve ``r = radius(theta)`` about ``center``, theta = 2 pi t."""
        cx, cy = center

        def func(t):
            th = 2 * np.pi * t
            r = radius(th)
            return np.stack([cx + r * np.cos(th), cy + r * np.sin(th)], axis=1)

        def indicator(x, y):
            dx, dy = x - cx, y - cy
            return np.hypot(dx, dy) - radius(np.mod(np.arctan2(dy, dx), 2 * np.pi))

        return cls(func, "polar", name, indicator)

    def sample(self, n_c: int) -> np.ndarray:
        return sample_curve(self, n_c)

    def dense(self, m: int = CLASSIFY_SAMPLES) -> np.ndarray:
        return self(np.arange(m) / m)

    def perimeter(self, m: int = CLASSIFY_SAMPLES) -> float:
        pts = self.dense(m)
        return float(np.sum(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)))


def sample_curve(curve: BoundaryCurve, n_c: int) -> np.ndarray:
    """Curve samples ``gamma(i / n_c)`` for ``i = 1..n_c``."""
    if n_c < 4:
        raise ContractError(f"need at least 4 curve samples, got {n_c}")
    return curve(np.arange(1, n_c + 1) / n_c)


def default_curve_samples(curve: BoundaryCurve, grid: CollocationGrid) -> int:
    """Four samples per lattice spacing along the curve, at least 64."""
    return max(64, int(np.ceil(4 * curve.perimeter() / grid.spacing)))


def winding_numbers(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Winding number of a closed polygon (vertices in order) about each point.

    Points are sorted by ``y`` so each edge only touches the slice of points
    whose horizontal ray it can cross.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    order = np.argsort(pts[:, 1], kind="stable")
    px = pts[order, 0]
    py = pts[order, 1]
    v0 = np.asarray(polygon, dtype=float)
    v1 = np.roll(v0, -1, axis=0)
    upward = v1[:, 1] > v0[:, 1]
    lo_y = np.where(upward, v0[:, 1], v1[:, 1])
    hi_y = np.where(upward, v1[:, 1], v0[:, 1])
    # half-open band [lo, hi) in y, matching the usual crossing rule
    start = np.searchsorted(py, lo_y, side="left")
    stop = np.searchsorted(py, hi_y, side="left")
    wind = np.zeros(len(pts), dtype=int)
    for e in np.nonzero(stop > start)[0]:
        a, b = start[e], stop[e]
        x0, y0 = v0[e]
        x1, y1 = v1[e]
        left = (x1 - x0) * (py[a:b] - y0) - (px[a:b] - x0) * (y1 - y0)
        if upward[e]:
            wind[a:b] += left > 0
        else:
            wind[a:b] -= left < 0
    out = np.empty_like(wind)
    out[order] = wind
    return out


def distance_to_polyline(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Distance from each point to the closed polygon."""
    pts = np.atleast_2d(points)
    tree = cKDTree(polygon)
    _, nearest = tree.query(pts)
    m = len(polygon)
    best = np.full(len(pts), np.inf)
    # the closest segment touches the closest vertex (or a close neighbour of it)
    for offset in range(-2, 2):
        a = polygon[(nearest + offset) % m]
        b = polygon[(nearest + offset + 1) % m]
        ab = b - a
        denom = np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300)
        s = np.clip(np.einsum("ij,ij->i", pts - a, ab) / denom, 0.0, 1.0)
        best = np.minimum(best, np.linalg.norm(pts - (a + s[:, None] * ab), axis=1))
    return best


def inside_mask(curve: BoundaryCurve, points: np.ndarray, samples: int = CLASSIFY_SAMPLES) -> np.ndarray:
    """True where the curve winds around the point (either orientation)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    poly = curve.dense(samples)
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    box = np.all((pts >= lo) & (pts <= hi), axis=1)
    out = np.zeros(len(pts), dtype=bool)
    if np.any(box):
        out[box] = winding_numbers(pts[box], poly) != 0
    return out


def classify(grid: CollocationGrid, curve: BoundaryCurve, samples: int = CLASSIFY_SAMPLES) -> CollocationGrid:
    """Tag each non-relocated node interior or exterior with respect to the curve.

    Nodes within ``ON_CURVE_TOL`` of the curve are additionally flagged in
    ``grid.candidates`` so that :func:`relocate` puts them on the curve.
    """
    if grid.rect.dim != 2:
        raise ContractError("curve classification is only defined in 2D")
    poly = curve.dense(samples)
    lo, hi = grid.rect.inner_bounds
    if np.any(poly.min(axis=0) < lo) or np.any(poly.max(axis=0) > hi):
        raise ContractError("boundary curve leaves the inner box")
    keep = grid.mask(Tag.RELOCATED)
    inside = inside_mask(curve, grid.points, samples)
    tags = np.where(inside, Tag.INTERIOR, Tag.EXTERIOR).astype(np.int8)
    tags[keep] = Tag.RELOCATED
    near = (distance_to_polyline(grid.points, poly) <= ON_CURVE_TOL) & ~keep
    return replace(grid, tags=tags, candidates=near)


@dataclass
class _Move:
    flat: int
    target: np.ndarray
    dist: float
    t: float


def _lattice_crossings(curve: BoundaryCurve, grid: CollocationGrid, n_c: int) -> list[_Move]:
    """Candidate moves from every sample segment that crosses a lattice line."""
    n = grid.n
    lo, _ = grid.rect.inner_bounds
    steps = np.asarray(grid.rect.lengths) / (n - 1)
    half = 0.5 * grid.spacing
    ts = np.arange(n_c + 1) / n_c
    pts = curve(ts)
    moves = []
    for k in (0, 1):
        o = 1 - k
        a = (pts[:-1, k] - lo[k]) / steps[k]
        b = (pts[1:, k] - lo[k]) / steps[k]
        first = np.floor(np.minimum(a, b)).astype(int) + 1
        last = np.floor(np.maximum(a, b)).astype(int)
        for i in np.nonzero(last >= first)[0]:
            for m in range(max(first[i], 0), min(last[i], n - 1) + 1):
                g = lo[k] + m * steps[k]
                ta, tb = ts[i], ts[i + 1]
                # re-evaluate pointwise so the bracket matches what brentq sees
                fa = curve(ta)[0, k] - g
                fb = curve(tb)[0, k] - g
                if fa == 0.0:
                    tc = ta
                elif fb == 0.0:
                    tc = tb
                elif fa * fb > 0:
                    continue
                else:
                    tc = brentq(lambda t: curve(t)[0, k] - g, ta, tb, xtol=1e-15, rtol=1e-15)
                target = curve(tc)[0]
                target[k] = g
                u = (target[o] - lo[o]) / steps[o]
                near = int(np.clip(np.rint(u), 0, n - 1))
                idx = [0, 0]
                idx[k], idx[o] = m, near
                flat = idx[0] * n + idx[1]
                dist = float(np.linalg.norm(target - grid.origins[flat]))
                if dist <= half + 1e-12:
                    moves.append(_Move(flat, target, dist, tc))
    return moves


def relocate(grid: CollocationGrid, curve: BoundaryCurve, n_c: int | None = None,
             min_separation: float = 0.1) -> CollocationGrid:
    """Move lattice points next to the curve onto it.

    When several crossings claim the same lattice point the one needing the
    smallest displacement wins.  Moves that would bring two nodes closer than
    ``min_separation * h`` are dropped (the later one along the curve).
    """
    if grid.rect.dim != 2:
        raise ContractError("relocation is only defined in 2D")
    if n_c is None:
        n_c = default_curve_samples(curve, grid)
    if n_c < 8:
        raise ContractError(f"need at least 8 curve samples, got {n_c}")
    h = grid.spacing
    best: dict[int, _Move] = {}
    for mv in _lattice_crossings(curve, grid, n_c):
        if grid.tags[mv.flat] == Tag.RELOCATED:
            continue
        cur = best.get(mv.flat)
        if cur is None or mv.dist < cur.dist:
            best[mv.flat] = mv

    poly = curve.dense(max(CLASSIFY_SAMPLES, n_c))
    for flat in np.nonzero(grid.candidates)[0]:
        if flat not in best:
            d = np.linalg.norm(poly - grid.points[flat], axis=1)
            j = int(np.argmin(d))
            best[flat] = _Move(flat, poly[j], float(d[j]), j / len(poly))

    points = grid.points.copy()
    tags = grid.tags.copy()
    accepted: list[np.ndarray] = [points[grid.mask(Tag.RELOCATED)]]
    dropped = 0
    for mv in sorted(best.values(), key=lambda m: m.t):
        placed = np.concatenate(accepted) if accepted else np.empty((0, 2))
        if len(placed) and np.min(np.linalg.norm(placed - mv.target, axis=1)) < min_separation * h:
            dropped += 1
            continue
        points[mv.flat] = mv.target
        tags[mv.flat] = Tag.RELOCATED
        accepted.append(mv.target[None, :])
    if dropped:
        logger.warning("dropped %d relocation(s) closer than %.2g h to another node", dropped, min_separation)
    moved = replace(grid, points=points, tags=tags, candidates=np.zeros(len(points), bool))
    return moved


def fit_to_curve(grid: CollocationGrid, curve: BoundaryCurve, n_c: int | None = None) -> CollocationGrid:
    """Classify then relocate; the usual pipeline for an irregular domain."""
    return relocate(classify(grid, curve), curve, n_c)


def write_grid_csv(grid: CollocationGrid, path) -> None:
    """Dump nodes as ``ix, iy, x, y, tag, orig_x, orig_y`` rows to a path or text stream."""
    if grid.rect.dim != 2:
        raise ContractError("grid dumps are 2D only")
    if hasattr(path, "write"):
        _write_grid_rows(grid, path)
        return
    with open(path, "w", newline="") as fh:
        _write_grid_rows(grid, fh)


def _write_grid_rows(grid: CollocationGrid, fh) -> None:
    fh.write(CSV_HEADER + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["ix", "iy", "x", "y", "tag", "orig_x", "orig_y"])
    for (ix, iy), (x, y), tag, (ox, oy) in zip(grid.indices, grid.points, grid.tags, grid.origins):
        w.writerow([int(ix), int(iy), repr(float(x)), repr(float(y)), Tag(tag).label, repr(float(ox)), repr(float(oy))])


def read_grid_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))
