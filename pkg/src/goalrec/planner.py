"""RRT* over the planar configuration space of a single moved object.

Obstacles are discs already inflated by the moving object's footprint, so
planning reduces to a point robot. Goals are either rectangular regions or
clearance sets (everywhere a disc of the given radius stays off a convex
hull). Costs are Euclidean arc lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from goalrec.geometry import Hull, Rect, hull_distance, path_length


class StartInCollisionError(ValueError):
    """Raised when a planning query starts inside an obstacle or off the table."""


@dataclass(frozen=True)
class RegionGoal:
    """Goal set: a rectangle the moving object's center must reach."""

    rect: Rect


@dataclass(frozen=True)
class ClearanceGoal:
    """Goal set: placements whose inflated disc stays strictly off the hull."""

    hull: Hull
    clearance_radius: float

    def __post_init__(self):
        if self.clearance_radius <= 0.0:
            raise ValueError("clearance radius must be positive")


@dataclass(frozen=True)
class PlannerParams:
    max_iterations: int = 5000
    step_size: float = 0.03
    goal_bias: float = 0.1
    rewire_radius_const: float = 1.5
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.goal_bias < 1.0:
            raise ValueError("goal_bias must be in (0, 1)")
        if self.step_size <= 0.0 or self.max_iterations < 1:
            raise ValueError("invalid planner parameters")

    def with_seed(self, seed: int) -> "PlannerParams":
        return PlannerParams(self.max_iterations, self.step_size,
                             self.goal_bias, self.rewire_radius_const, seed)


@dataclass(frozen=True)
class ConfigSpace:
    """Table bounds plus inflated disc obstacles for one moving object."""

    bounds: Rect
    obstacles: tuple  # ((x, y, inflated_radius), ...)
    moving_radius: float = 0.0

    def __post_init__(self):
        obs = tuple((float(x), float(y), float(r)) for x, y, r in self.obstacles)
        object.__setattr__(self, "obstacles", obs)
        m = self.moving_radius
        fb = self.bounds.shrunk(m) if m > 0.0 else self.bounds
        object.__setattr__(self, "_free_bounds", fb)

    @property
    def free_bounds(self) -> Rect:
        """Bounds shrunk so the whole moving disc stays on the table."""
        return self._free_bounds

    def point_free(self, p) -> bool:
        b = self.free_bounds
        if not b.contains(p):
            return False
        for ox, oy, r in self.obstacles:
            if math.hypot(p[0] - ox, p[1] - oy) < r:
                return False
        return True

    def segment_free(self, a, b) -> bool:
        """Exact swept check of segment ab against every obstacle disc."""
        fb = self.free_bounds
        if not (fb.contains(a) and fb.contains(b)):
            return False
        ax, ay = float(a[0]), float(a[1])
        dx, dy = float(b[0]) - ax, float(b[1]) - ay
        seg2 = dx * dx + dy * dy
        for ox, oy, r in self.obstacles:
            if seg2 <= 0.0:
                t = 0.0
            else:
                t = ((ox - ax) * dx + (oy - ay) * dy) / seg2
                t = min(1.0, max(0.0, t))
            if math.hypot(ax + t * dx - ox, ay + t * dy - oy) < r:
                return False
        return True


def goal_satisfied(p, goal) -> bool:
    """Membership test for either goal kind.

    Region goals are closed; clearance goals require strict separation, so a
    disc tangent to the hull still blocks.
    """
    if isinstance(goal, RegionGoal):
        return goal.rect.contains(p)
    if isinstance(goal, ClearanceGoal):
        return hull_distance(p, goal.hull) > goal.clearance_radius
    raise TypeError(f"unknown goal spec {goal!r}")


@dataclass
class PlanResult:
    path: np.ndarray
    cost: float
    iterations_used: int
    goal_reached: bool
    best_cost_history: np.ndarray | None = field(default=None, repr=False)


def _truncate_at_first_goal_touch(pts: np.ndarray, goal) -> np.ndarray:
    """Cut the path at its earliest goal-set contact.

    For region goals each segment is clipped against the rect exactly; for
    clearance goals the blocked set (hull dilated by the radius) is convex, so
    the first cleared vertex brackets the boundary crossing and bisection
    recovers it.
    """
    if isinstance(goal, RegionGoal):
        r = goal.rect
        for i in range(len(pts) - 1):
            a, b = pts[i], pts[i + 1]
            d = b - a
            t0, t1 = 0.0, 1.0
            ok = True
            for lo, hi, p0, delta in ((r.xmin, r.xmax, a[0], d[0]),
                                      (r.ymin, r.ymax, a[1], d[1])):
                if abs(delta) < 1e-15:
                    if p0 < lo or p0 > hi:
                        ok = False
                        break
                else:
                    ta, tb = (lo - p0) / delta, (hi - p0) / delta
                    if ta > tb:
                        ta, tb = tb, ta
                    t0, t1 = max(t0, ta), min(t1, tb)
            if ok and t0 <= t1:
                touch = a + t0 * d
                return np.vstack([pts[:i + 1], touch])
        return pts

    for k in range(1, len(pts)):
        if goal_satisfied(pts[k], goal):
            lo, hi = 0.0, 1.0  # pts[k-1] is blocked, pts[k] cleared
            a, b = pts[k - 1], pts[k]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if goal_satisfied(a + mid * (b - a), goal):
                    hi = mid
                else:
                    lo = mid
            touch = a + hi * (b - a)
            return np.vstack([pts[:k], touch])
    return pts


def plan(cspace: ConfigSpace, start, goal, params: PlannerParams,
         record_history: bool = False) -> PlanResult:
    """RRT* search for a minimum-length path from start into the goal set.

    Deterministic for a fixed rng_seed. Returns goal_reached=False with
    infinite cost when no path is found within the iteration budget.
    """
    start = np.asarray(start, dtype=float)
    if not cspace.point_free(start):
        raise StartInCollisionError(f"start {tuple(start)} is in collision or off-table")

    if goal_satisfied(start, goal):
        hist = np.zeros(1) if record_history else None
        return PlanResult(np.array([start]), 0.0, 0, True, hist)

    max_iter = params.max_iterations
    step = params.step_size
    gamma = params.rewire_radius_const
    fb = cspace.free_bounds
    xmin, ymin, xmax, ymax = fb.xmin, fb.ymin, fb.xmax, fb.ymax
    obstacles = cspace.obstacles

    # uniform samples and bias coins are pre-drawn in one block; goal-set
    # samples come from a separate stream so the layout stays deterministic
    rng = np.random.default_rng(params.rng_seed)
    coins = rng.random(max_iter)
    uniform_x = rng.uniform(xmin, xmax, max_iter)
    uniform_y = rng.uniform(ymin, ymax, max_iter)
    goal_rng = np.random.default_rng(np.random.SeedSequence((params.rng_seed, 0x9E3779B9)))
    goal_bias = params.goal_bias

    if isinstance(goal, RegionGoal):
        r = goal.rect
        if r.xmin < xmax and r.xmax > xmin and r.ymin < ymax and r.ymax > ymin:
            gxmin, gxmax = max(r.xmin, xmin), min(r.xmax, xmax)
            gymin, gymax = max(r.ymin, ymin), min(r.ymax, ymax)
        else:
            gxmin, gxmax, gymin, gymax = xmin, xmax, ymin, ymax

        def sample_goal():
            return goal_rng.uniform(gxmin, gxmax), goal_rng.uniform(gymin, gymax)
    else:
        def sample_goal():
            for _ in range(64):
                p = (goal_rng.uniform(xmin, xmax), goal_rng.uniform(ymin, ymax))
                if goal_satisfied(p, goal):
                    return p
            return goal_rng.uniform(xmin, xmax), goal_rng.uniform(ymin, ymax)

    def seg_free(ax, ay, bx, by) -> bool:
        if not (xmin <= bx <= xmax and ymin <= by <= ymax):
            return False
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        for ox, oy, r in obstacles:
            if seg2 > 0.0:
                t = ((ox - ax) * dx + (oy - ay) * dy) / seg2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
            else:
                t = 0.0
            ex, ey = ax + t * dx - ox, ay + t * dy - oy
            if ex * ex + ey * ey < r * r:
                return False
        return True

    coords = np.empty((2, max_iter + 1))  # row 0: x, row 1: y
    xs, ys = coords[0], coords[1]
    costs = np.empty(max_iter + 1)
    parents = np.full(max_iter + 1, -1, dtype=np.int64)
    children: list[list[int]] = [[] for _ in range(max_iter + 1)]
    is_goal = np.zeros(max_iter + 1, dtype=bool)
    work = np.empty((2, max_iter + 1))
    sample_vec = np.empty((2, 1))
    xs[0], ys[0] = start
    costs[0] = 0.0
    n = 1

    goal_nodes: list[int] = []
    best_cost = math.inf  # node costs only ever decrease, so track min incrementally
    history = np.empty(max_iter) if record_history else None
    log = math.log

    for it in range(max_iter):
        if coins[it] < goal_bias:
            sx, sy = sample_goal()
        else:
            sx, sy = uniform_x[it], uniform_y[it]

        w = work[:, :n]
        sample_vec[0, 0], sample_vec[1, 0] = sx, sy
        np.subtract(coords[:, :n], sample_vec, out=w)
        np.multiply(w, w, out=w)
        tx = w[0]
        np.add(w[0], w[1], out=tx)
        nearest = int(np.argmin(tx))
        dist = math.sqrt(tx[nearest])
        if dist < 1e-12:
            if record_history:
                history[it] = best_cost
            continue
        nx, ny = xs[nearest], ys[nearest]
        steered = dist > step
        if steered:
            scale = step / dist
            sx, sy = nx + scale * (sx - nx), ny + scale * (sy - ny)

        if not seg_free(nx, ny, sx, sy):
            if record_history:
                history[it] = best_cost
            continue

        if steered:  # distances were to the pre-steer sample; redo for the new point
            sample_vec[0, 0], sample_vec[1, 0] = sx, sy
            np.subtract(coords[:, :n], sample_vec, out=w)
            np.multiply(w, w, out=w)
            np.add(w[0], w[1], out=tx)
        radius = gamma * math.sqrt(log(n + 1) / (n + 1))
        if radius < step:
            radius = step
        near = np.flatnonzero(tx <= radius * radius)
        d_near = np.sqrt(tx[near])

        # choose the cheapest collision-free parent among near nodes
        parent = nearest
        new_cost = costs[nearest] + (step if steered else dist)
        cand = costs[near] + d_near
        for pos in np.argsort(cand, kind="stable"):
            idx = int(near[pos])
            c = cand[pos]
            if c >= new_cost:
                break
            if seg_free(xs[idx], ys[idx], sx, sy):
                parent = idx
                new_cost = c
                break

        node_id = n
        xs[node_id], ys[node_id] = sx, sy
        costs[node_id] = new_cost
        parents[node_id] = parent
        children[parent].append(node_id)
        n += 1

        # rewire neighbors through the new node where it shortens them
        for pos in range(len(near)):
            idx = int(near[pos])
            c_through = new_cost + d_near[pos]
            if c_through + 1e-12 < costs[idx] and seg_free(sx, sy, xs[idx], ys[idx]):
                old_parent = parents[idx]
                if old_parent >= 0:
                    children[old_parent].remove(idx)
                parents[idx] = node_id
                children[node_id].append(idx)
                delta = c_through - costs[idx]
                stack = [idx]
                while stack:
                    j = stack.pop()
                    costs[j] += delta
                    if is_goal[j] and costs[j] < best_cost:
                        best_cost = costs[j]
                    stack.extend(children[j])

        if goal_satisfied((sx, sy), goal):
            goal_nodes.append(node_id)
            is_goal[node_id] = True
            if new_cost < best_cost:
                best_cost = new_cost
        if record_history:
            history[it] = best_cost

    if not goal_nodes:
        return PlanResult(np.array([start]), math.inf, max_iter, False, history)

    best = min(goal_nodes, key=lambda g: costs[g])
    chain = []
    node = best
    while node >= 0:
        chain.append(node)
        node = int(parents[node])
    chain.reverse()
    pts = np.column_stack([xs[chain], ys[chain]])

    # deterministic greedy shortcutting: connect each vertex to the farthest
    # visible successor, which strips the step-size kinks RRT* leaves behind
    def shortcut(p):
        if len(p) <= 2:
            return p
        out = [0]
        i = 0
        last = len(p) - 1
        while i < last:
            j = last
            while j > i + 1 and not seg_free(p[i][0], p[i][1], p[j][0], p[j][1]):
                j -= 1
            out.append(j)
            i = j
        return p[out]

    pts = shortcut(pts)
    pts = _truncate_at_first_goal_touch(pts, goal)
    pts = shortcut(pts)

    cost = path_length(pts)
    if record_history and cost < history[-1]:
        history[-1] = cost
    return PlanResult(pts, cost, max_iter, True, history)


def config_space(scene, poses: dict, moving: str, exclude=(),
                 margin: float = 0.0) -> ConfigSpace:
    """Configuration space for one moving object: every other posed object
    becomes a disc obstacle inflated by the moving object's footprint."""
    r_move = scene.radius(moving)
    obstacles = []
    for obj in scene.objects:
        if obj.name == moving or obj.name in exclude or obj.name not in poses:
            continue
        p = poses[obj.name]
        obstacles.append((p.x, p.y, obj.radius + r_move + margin))
    return ConfigSpace(scene.table, tuple(obstacles), r_move)


def optimal_cost(cspace: ConfigSpace, from_point, goal, params: PlannerParams,
                 seeds=None) -> float:
    """Best plan cost over one or more planner seeds; +inf when unreachable."""
    if seeds is None:
        seeds = (params.rng_seed,)
    best = math.inf
    for s in seeds:
        result = plan(cspace, from_point, goal, params.with_seed(s))
        if result.goal_reached and result.cost < best:
            best = result.cost
    return best
