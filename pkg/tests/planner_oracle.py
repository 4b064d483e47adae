"""Independent shortest-path oracle for planner tests: Dijkstra over a fine
16-connected grid. Deliberately shares no code with the sampling planner
beyond the goal-membership contract."""

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from goalrec.planner import ClearanceGoal, RegionGoal

# knight moves included: worst-case metric overestimate is 1/cos(13.28deg);
# dividing by the band midpoint keeps the oracle within +/-1.4% of the truth
METRIC_CORRECTION = 1.0137

_MOVES = [(1, 0), (0, 1), (-1, 0), (0, -1),
          (1, 1), (1, -1), (-1, 1), (-1, -1),
          (2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2), (2, -1)]


def _segment_hull_distances(points, hull):
    """Distance from each point to a closed convex hull (vectorized)."""
    verts = hull.points
    pts = np.asarray(points, dtype=float)
    if len(verts) == 1:
        return np.hypot(pts[:, 0] - verts[0][0], pts[:, 1] - verts[0][1])

    def seg_dist(a, b):
        d = b - a
        seg2 = float(d @ d)
        if seg2 == 0.0:
            return np.hypot(pts[:, 0] - a[0], pts[:, 1] - a[1])
        t = np.clip(((pts - a) @ d) / seg2, 0.0, 1.0)
        proj = a + t[:, None] * d
        return np.hypot(pts[:, 0] - proj[:, 0], pts[:, 1] - proj[:, 1])

    if len(verts) == 2:
        return seg_dist(verts[0], verts[1])
    dists = np.min(np.stack([seg_dist(verts[i], verts[(i + 1) % len(verts)])
                             for i in range(len(verts))]), axis=0)
    inside = np.ones(len(pts), dtype=bool)
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        cross = (b[0] - a[0]) * (pts[:, 1] - a[1]) - (b[1] - a[1]) * (pts[:, 0] - a[0])
        inside &= cross >= 0.0
    dists[inside] = 0.0
    return dists


def _goal_mask(points, goal):
    pts = np.asarray(points)
    if isinstance(goal, RegionGoal):
        r = goal.rect
        return ((pts[:, 0] >= r.xmin) & (pts[:, 0] <= r.xmax) &
                (pts[:, 1] >= r.ymin) & (pts[:, 1] <= r.ymax))
    if isinstance(goal, ClearanceGoal):
        return _segment_hull_distances(pts, goal.hull) > goal.clearance_radius
    raise TypeError(goal)


def grid_optimal_cost(cspace, start, goal, resolution=0.005):
    """Corrected grid-Dijkstra cost from start into the goal set; inf if cut off."""
    fb = cspace.free_bounds
    nx = int(round((fb.xmax - fb.xmin) / resolution)) + 1
    ny = int(round((fb.ymax - fb.ymin) / resolution)) + 1
    xs = fb.xmin + resolution * np.arange(nx)
    ys = fb.ymin + resolution * np.arange(ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    points = np.column_stack([X.ravel(), Y.ravel()])
    n = nx * ny

    free = np.ones(n, dtype=bool)
    for ox, oy, r in cspace.obstacles:
        free &= (points[:, 0] - ox) ** 2 + (points[:, 1] - oy) ** 2 >= r * r

    if _goal_mask([start], goal)[0]:
        return 0.0

    rows, cols, data = [], [], []
    idx = np.arange(n).reshape(nx, ny)
    for dx, dy in _MOVES:
        sx = slice(max(0, -dx), nx - max(0, dx))
        sy = slice(max(0, -dy), ny - max(0, dy))
        tx = slice(max(0, dx), nx + min(0, dx) or None)
        ty = slice(max(0, dy), ny + min(0, dy) or None)
        src = idx[sx, sy].ravel()
        dst = idx[tx, ty].ravel()
        ok = free[src] & free[dst]
        # swept check of the straight hop against every obstacle disc
        delta = np.array([dx * resolution, dy * resolution])
        seg2 = float(delta @ delta)
        p_src = points[src]
        for ox, oy, r in cspace.obstacles:
            rel = np.array([ox, oy]) - p_src
            t = np.clip((rel @ delta) / seg2, 0.0, 1.0)
            ex = rel[:, 0] - t * delta[0]
            ey = rel[:, 1] - t * delta[1]
            ok &= ex * ex + ey * ey >= r * r
        rows.append(src[ok])
        cols.append(dst[ok])
        data.append(np.full(int(ok.sum()), math.sqrt(seg2)))

    graph = csr_matrix((np.concatenate(data),
                        (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))

    si = int(round((start[0] - fb.xmin) / resolution))
    sj = int(round((start[1] - fb.ymin) / resolution))
    start_idx = int(idx[min(max(si, 0), nx - 1), min(max(sj, 0), ny - 1)])
    if not free[start_idx]:
        order = np.argsort((points[:, 0] - start[0]) ** 2 + (points[:, 1] - start[1]) ** 2)
        for cand in order[:200]:
            if free[cand]:
                start_idx = int(cand)
                break

    dist = dijkstra(graph, directed=False, indices=start_idx)
    goal_cells = _goal_mask(points, goal) & free
    if not goal_cells.any():
        return math.inf
    best = float(dist[goal_cells].min())
    if math.isinf(best):
        return math.inf
    return best / METRIC_CORRECTION
