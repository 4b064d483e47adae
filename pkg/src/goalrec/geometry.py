"""Planar geometric primitives: poses, rectangles, polylines, convex hulls,
and the disc-based collision predicates the planner builds on.

Conventions: region membership is closed (boundaries count as inside),
disc-disc contact is open (tangency is not a collision). All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Vertices closer than this are considered duplicates and merged.
DEDUPE_EPS = 1e-9


def wrap_angle(theta: float) -> float:
    """Normalize an angle into [-pi, pi)."""
    wrapped = math.fmod(theta + math.pi, 2.0 * math.pi)
    if wrapped < 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


@dataclass(frozen=True)
class Pose2:
    """Planar pose: position in meters, heading normalized into [-pi, pi)."""

    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.theta)):
            raise ValueError(f"non-finite pose ({self.x}, {self.y}, {self.theta})")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def xy(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with strictly positive extent."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"degenerate rect {self}")

    @property
    def center(self) -> np.ndarray:
        return np.array([(self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0])

    def contains(self, p) -> bool:
        """Closed containment test (boundary counts as inside)."""
        x, y = float(p[0]), float(p[1])
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def clamp(self, p) -> np.ndarray:
        """Nearest point of the rectangle to p."""
        return np.array([
            min(max(float(p[0]), self.xmin), self.xmax),
            min(max(float(p[1]), self.ymin), self.ymax),
        ])

    def distance(self, p) -> float:
        """Euclidean distance from p to the rectangle (0 if inside)."""
        q = self.clamp(p)
        return math.hypot(float(p[0]) - q[0], float(p[1]) - q[1])

    def shrunk(self, margin: float) -> "Rect":
        return Rect(self.xmin + margin, self.ymin + margin,
                    self.xmax - margin, self.ymax - margin)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return np.array([rng.uniform(self.xmin, self.xmax),
                         rng.uniform(self.ymin, self.ymax)])


def point_in_rect(p, r: Rect) -> bool:
    """Closed membership of a point in a rectangle."""
    return r.contains(p)


def polyline(points) -> np.ndarray:
    """Build an (N, 2) polyline array, merging consecutive duplicate vertices."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) == 0:
        raise ValueError("polyline needs at least one (x, y) vertex")
    if not np.all(np.isfinite(pts)):
        raise ValueError("polyline vertices must be finite")
    kept = [pts[0]]
    for p in pts[1:]:
        if math.hypot(p[0] - kept[-1][0], p[1] - kept[-1][1]) > DEDUPE_EPS:
            kept.append(p)
    return np.array(kept)


def path_length(path) -> float:
    """Total Euclidean arc length of a polyline; 0 for a single vertex."""
    pts = np.atleast_2d(np.asarray(path, dtype=float))
    if len(pts) < 2:
        return 0.0
    deltas = np.diff(pts, axis=0)
    return float(np.sqrt((deltas ** 2).sum(axis=1)).sum())


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class Hull:
    """Convex hull: CCW polygon vertices; degenerate inputs give a segment
    (2 vertices) or point (1 vertex) hull."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if len(verts) == 0:
            raise ValueError("hull needs at least one vertex")
        object.__setattr__(self, "vertices", verts)

    @property
    def points(self) -> np.ndarray:
        return np.array(self.vertices)

    def contains(self, p, tol: float = 0.0) -> bool:
        """Closed containment (only meaningful for polygon hulls)."""
        verts = self.vertices
        if len(verts) == 1:
            return math.hypot(p[0] - verts[0][0], p[1] - verts[0][1]) <= tol
        if len(verts) == 2:
            return _segment_distance(p, verts[0], verts[1]) <= tol
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            if _cross(a, b, p) < -tol:
                return False
        return True


def convex_hull(points) -> Hull:
    """Minimal convex polygon containing all input points (monotone chain).

    Collinear inputs yield a segment hull, a single point a point hull.
    """
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        raise ValueError("convex hull of empty point set")
    pts = np.atleast_2d(arr)
    uniq = sorted({(float(p[0]), float(p[1])) for p in pts})
    if len(uniq) == 1:
        return Hull((uniq[0],))
    if len(uniq) == 2:
        return Hull(tuple(uniq))

    def half(points_iter):
        chain = []
        for p in points_iter:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(uniq)
    upper = half(reversed(uniq))
    verts = lower[:-1] + upper[:-1]
    if len(verts) == 2:  # all points collinear
        return Hull(tuple(verts))
    return Hull(tuple(verts))


def _segment_distance(p, a, b) -> float:
    """Distance from point p to segment ab."""
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def hull_distance(p, h: Hull) -> float:
    """Distance from a point to a closed convex hull (0 if inside/on it)."""
    verts = h.vertices
    if len(verts) == 1:
        return math.hypot(p[0] - verts[0][0], p[1] - verts[0][1])
    if len(verts) == 2:
        return _segment_distance(p, verts[0], verts[1])
    if h.contains(p):
        return 0.0
    return min(_segment_distance(p, verts[i], verts[(i + 1) % len(verts)])
               for i in range(len(verts)))


def disc_hull_intersects(center, radius: float, h: Hull) -> bool:
    """True iff the closed disc shares any point with the closed hull."""
    if radius <= 0.0:
        raise ValueError("disc radius must be positive")
    return hull_distance(center, h) <= radius


def disc_disc_collides(a, ra: float, b, rb: float) -> bool:
    """Open-contact disc collision: touching discs do not collide."""
    if ra <= 0.0 or rb <= 0.0:
        raise ValueError("disc radii must be positive")
    return math.hypot(a[0] - b[0], a[1] - b[1]) < ra + rb


def resample_polyline(path, spacing: float) -> np.ndarray:
    """Resample a polyline at arc-length steps of at most `spacing`.

    Original vertices are kept, so every output point lies exactly on the
    input path and total length is preserved.
    """
    pts = polyline(path)
    if len(pts) == 1 or spacing <= 0.0:
        return pts
    out = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        seg_len = math.hypot(b[0] - a[0], b[1] - a[1])
        n = int(math.ceil(seg_len / spacing))
        for k in range(1, n + 1):
            out.append(a + (k / n) * (b - a))
    return np.array(out)
