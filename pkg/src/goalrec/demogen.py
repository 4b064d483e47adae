"""Procedural generator for the mockup cooking dataset.

Each task cooks one ingredient (pour it into the bowl, move the bowl onto a
stove, wait). One of the two key carries is initially blocked by a blocker
object, which the demonstrator moves first: either intentionally into the
storage region (placed well inside), or incidentally, just far enough to
clear the blocked carry's swept path, crossing into storage on the way.

The two variants use different blocker placements along the blocked
corridor: incidental demos start where storage is nearer than the clearance
displacement (so the minimal clearing move lands in storage), intentional
demos start where storage is clearly farther than clearing. With goal sets
satisfied at the segment endpoint, the cost-ratio score compares the two
goals' optimal costs from the start pose, so this separation is what makes
the two variants distinguishable at all.

The task grammar enumerates 2 ingredients x 2 blocked steps x 3 blockers x
2 intents = 24 tasks; 4 demos per task gives the 96-demonstration dataset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from goalrec.demo import Demonstration, Frame, PourEvent, demo_states
from goalrec.domain import (
    SceneConfig,
    check_goal,
    cooked,
    default_scene,
    goal_holds,
    in_container,
    in_region,
)
from goalrec.geometry import Pose2, Rect, path_length, resample_polyline
from goalrec.planner import (
    PlannerParams,
    RegionGoal,
    config_space,
    plan,
)

INGREDIENTS = ("tomato_soup", "spam")
BLOCKED_STEPS = ("pour", "cook")
BLOCKERS = ("cracker_box", "mustard_bottle", "sugar_box")

CARRY_SPEED = 0.25        # m/s along planned paths
GEN_PLAN_ITERS = 1500     # carries get straightened by the shortcut pass
CLEAR_OVERSHOOT = 0.025   # incidental clearing pushes this far past minimal
MIN_DECISION_GAP = 0.012  # storage-entry vs clearance cost separation
INTENTIONAL_MARGIN = 0.05  # storage must be this much beyond clearance
REGION_MARGIN = 0.01
COLLISION_MARGIN = 0.012

# rest anchors; per-scene jitter is applied around these
BOWL_START = (0.22, 0.12)
STOVE_TARGET = (0.75, 0.675)
ING_NEAR_BOWL = (0.10, 0.20)       # ingredient start when the pour is free
ING_FAR = (0.62, 0.64)             # ingredient start when the pour is blocked
CLUTTER = {"storage_a": (0.08, 0.72), "storage_b": (0.08, 0.60),
           "workspace": (1.05, 0.15)}
INTENTIONAL_TARGET_BOX = Rect(0.20, 0.60, 0.44, 0.75)
EDGE_MARGIN = 0.012  # logged noise must never push a rest pose off-table


class GenerationError(RuntimeError):
    """Scene construction or scripting failed for a task spec."""


@dataclass(frozen=True)
class TaskSpec:
    ingredient: str
    blocked_step: str
    blocker: str
    blocker_intentional: bool

    def __post_init__(self):
        if self.ingredient not in INGREDIENTS or self.blocker not in BLOCKERS \
                or self.blocked_step not in BLOCKED_STEPS:
            raise ValueError(f"bad task spec {self}")

    @property
    def label(self) -> str:
        intent = "intentional" if self.blocker_intentional else "incidental"
        return f"{self.ingredient}-{self.blocked_step}-{self.blocker}-{intent}"


def all_task_specs() -> list[TaskSpec]:
    """The full 2 x 2 x 3 x 2 task grammar, in a fixed order."""
    return [TaskSpec(f, step, b, intent)
            for f in INGREDIENTS
            for step in BLOCKED_STEPS
            for b in BLOCKERS
            for intent in (False, True)]


@dataclass(frozen=True)
class NoiseParams:
    sigma_carry: float = 0.003   # per-waypoint jitter while an object moves
    sigma_rest: float = 0.001    # per-frame jitter of resting poses


@dataclass(frozen=True)
class ScriptStep:
    action: str
    obj: str
    planned_path: np.ndarray
    planned_cost: float
    start_frame: int
    end_frame: int


@dataclass(frozen=True)
class GeneratedDemo:
    spec: TaskSpec
    demo: Demonstration
    ground_truth: frozenset
    script: tuple
    seed: int
    return_bowl: bool
    blocker_start: tuple
    blocker_end: tuple


def _seg_point_distance(p, a, b) -> float:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    seg2 = dx * dx + dy * dy
    t = 0.0 if seg2 == 0.0 else min(1.0, max(0.0, ((p[0] - ax) * dx + (p[1] - ay) * dy) / seg2))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def _collision_free(pos: dict, scene: SceneConfig, margin=COLLISION_MARGIN,
                    skip=()) -> bool:
    names = [n for n in pos if n not in skip]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            need = scene.radius(a) + scene.radius(b) + margin
            if math.hypot(pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]) < need:
                return False
    return True


def _in_some_region(p, scene: SceneConfig, margin=REGION_MARGIN) -> str | None:
    for region in scene.regions:
        r = region.rect
        if r.xmin - margin <= p[0] <= r.xmax + margin and \
           r.ymin - margin <= p[1] <= r.ymax + margin:
            return region.name
    return None


def build_scene(spec: TaskSpec, seed: int,
                scene: SceneConfig | None = None) -> dict:
    """Initial poses plus the blocker's scripted destination for one task.

    Returns a dict with keys: scene, positions, blocker_end, corridor
    (the blocked carry's start/end), ingredient_start, bowl_start,
    stove_target. Placement is rejection-sampled under explicit geometric
    margins; irrecoverable specs raise GenerationError.
    """
    scene = scene or default_scene()
    storage = scene.region("storage").rect
    rng = np.random.default_rng(np.random.SeedSequence([seed, 101]))
    r_blk = scene.radius(spec.blocker)
    moving = "bowl" if spec.blocked_step == "cook" else spec.ingredient
    r_clear = r_blk + scene.radius(moving)

    for attempt in range(80):
        jit = lambda s: rng.uniform(-s, s, 2)
        bowl = np.array(BOWL_START) + jit(0.008)
        stove = np.array(STOVE_TARGET) + jit(0.008)
        ing_anchor = ING_NEAR_BOWL if spec.blocked_step == "cook" else ING_FAR
        ingredient = np.array(ing_anchor) + jit(0.008)

        corridor = (bowl, stove) if spec.blocked_step == "cook" else (ingredient, bowl)
        a, b = corridor

        if spec.blocker_intentional:
            # far enough from storage that clearing is the cheaper reading
            t_candidates = np.linspace(0.25, 0.75, 41)
            blocker = None
            for t in t_candidates:
                p = a + t * (b - a) + jit(0.006)
                if storage.distance(p) >= r_clear + INTENTIONAL_MARGIN and \
                        _in_some_region(p, scene) is None:
                    blocker = p
                    break
            if blocker is None:
                continue
            fb = scene.table.shrunk(r_blk + EDGE_MARGIN)
            box = Rect(INTENTIONAL_TARGET_BOX.xmin, INTENTIONAL_TARGET_BOX.ymin,
                       min(INTENTIONAL_TARGET_BOX.xmax, fb.xmax),
                       min(INTENTIONAL_TARGET_BOX.ymax, fb.ymax))
            target = None
            for _ in range(40):
                q = np.array([rng.uniform(box.xmin, box.xmax),
                              rng.uniform(box.ymin, box.ymax)])
                if _seg_point_distance(q, a, b) >= r_clear + 0.04:
                    target = q
                    break
            if target is None:
                continue
            blocker_end = target
        else:
            # nearest corridor point to storage, offset slightly toward it
            ts = np.linspace(0.12, 0.88, 153)
            pts = a + ts[:, None] * (b - a)
            d_storage = np.array([storage.distance(p) for p in pts])
            t_star = ts[int(np.argmin(d_storage))]
            p_star = a + t_star * (b - a)
            to_storage = storage.clamp(p_star) - p_star
            d_star = float(np.hypot(*to_storage))
            if d_star < 1e-6 or r_clear - d_star < MIN_DECISION_GAP:
                continue  # corridor jittered too far from storage; redraw
            u = to_storage / d_star
            rho = 0.015 + rng.uniform(0.0, 0.004)
            blocker = p_star + rho * u
            blocker_end = blocker + (r_clear - rho + CLEAR_OVERSHOOT) * u
            if _in_some_region(blocker, scene) is not None:
                continue
            end_margin = min(blocker_end[0] - storage.xmin, storage.xmax - blocker_end[0],
                             blocker_end[1] - storage.ymin, storage.ymax - blocker_end[1])
            if end_margin < REGION_MARGIN:
                continue

        other_ing = [f for f in INGREDIENTS if f != spec.ingredient][0]
        other_blockers = [blk for blk in BLOCKERS if blk != spec.blocker]
        positions = {
            "bowl": bowl,
            spec.ingredient: ingredient,
            spec.blocker: blocker,
            other_ing: np.array(CLUTTER["workspace"]) + jit(0.006),
            other_blockers[0]: np.array(CLUTTER["storage_a"]) + jit(0.006),
            other_blockers[1]: np.array(CLUTTER["storage_b"]) + jit(0.006),
        }

        if not _collision_free(positions, scene):
            continue
        if any(not scene.table.shrunk(scene.radius(name) + EDGE_MARGIN).contains(p)
               for name, p in positions.items()):
            continue
        end_positions = dict(positions)
        end_positions[spec.blocker] = blocker_end
        if not _collision_free(end_positions, scene):
            continue
        fb = scene.table.shrunk(r_blk + EDGE_MARGIN)
        if not (fb.contains(blocker) and fb.contains(blocker_end)):
            continue
        # the blocker must actually block: inflated footprint on the corridor
        if _seg_point_distance(blocker, a, b) > r_clear - 0.01:
            continue

        return {
            "scene": scene,
            "positions": {k: np.asarray(v, dtype=float) for k, v in positions.items()},
            "blocker_end": np.asarray(blocker_end, dtype=float),
            "corridor": (np.asarray(a), np.asarray(b)),
            "bowl_start": bowl,
            "stove_target": stove,
            "ingredient_start": ingredient,
        }

    raise GenerationError(f"{spec.label}: no feasible scene after 80 attempts (seed {seed})")


class _FrameWriter:
    """Accumulates frames with per-frame sensor noise and ride-along logic."""

    def __init__(self, scene, positions, noise, rng, hz):
        self.scene = scene
        self.pos = {k: np.array(v, dtype=float) for k, v in positions.items()}
        self.noise = noise
        self.rng = rng
        self.hz = hz
        self.frames: list[Frame] = []
        self.riders: dict[str, str] = {}
        self.t = 0.0

    def _emit(self, moving=None, in_hand=None, events=()):
        poses = {}
        for name, p in self.pos.items():
            sigma = self.noise.sigma_carry if name == moving else self.noise.sigma_rest
            for _ in range(8):
                n = self.rng.normal(0.0, sigma, 2) if sigma > 0 else np.zeros(2)
                if np.hypot(*n) <= 3.5 * sigma + 1e-12:
                    break
            poses[name] = Pose2(p[0] + n[0], p[1] + n[1])
        self.frames.append(Frame(round(self.t, 6), poses, in_hand, tuple(events)))
        self.t += 1.0 / self.hz

    def rest(self, seconds):
        for _ in range(max(int(round(seconds * self.hz)), 1)):
            self._emit()

    def carry(self, obj, path: np.ndarray, pour_into: str | None = None):
        start_frame = len(self.frames)
        waypoints = resample_polyline(path, CARRY_SPEED / self.hz)
        for k, wp in enumerate(waypoints[1:], start=1):
            self.pos[obj] = np.array(wp)
            for rider, cont in self.riders.items():
                if cont == obj:
                    self.pos[rider] = self.pos[obj].copy()
            events = ()
            if pour_into is not None and k == len(waypoints) - 1:
                events = (PourEvent(round(self.t, 6), obj, pour_into),)
                self.riders[obj] = pour_into
                self.pos[obj] = self.pos[pour_into].copy()
            self._emit(moving=obj, in_hand=obj, events=events)
        return start_frame, len(self.frames) - 1


def _plan_carry(scene, positions, obj, target, seed, exclude=()):
    # small obstacle margin so logged sensor noise cannot push a carried
    # object into contact
    cspace = config_space(scene, {k: Pose2(*v) for k, v in positions.items()},
                          obj, exclude, margin=0.006)
    h = 5e-4
    goal = RegionGoal(Rect(target[0] - h, target[1] - h, target[0] + h, target[1] + h))
    params = PlannerParams(max_iterations=GEN_PLAN_ITERS, rng_seed=seed)
    result = plan(cspace, positions[obj], goal, params)
    if not result.goal_reached:
        raise GenerationError(f"no path for {obj} to {tuple(np.round(target, 3))}")
    path = np.vstack([result.path, target])
    return path, path_length(path)


def generate(spec: TaskSpec, seed: int, noise: NoiseParams | None = None,
             scene: SceneConfig | None = None, return_bowl: bool | None = None,
             hz: float | None = None) -> GeneratedDemo:
    """Script and record one demonstration for a task spec."""
    noise = noise or NoiseParams()
    layout = build_scene(spec, seed, scene)
    scene = layout["scene"]
    hz = hz or scene.nominal_hz
    ss = np.random.SeedSequence([seed, 202])
    plan_seeds = np.random.default_rng(ss).integers(0, 2 ** 31, size=8)
    noise_rng = np.random.default_rng(np.random.SeedSequence([seed, 303]))
    if return_bowl is None:
        return_bowl = seed % 2 == 0

    positions = layout["positions"]
    blocker_end = layout["blocker_end"]
    writer = _FrameWriter(scene, positions, noise, noise_rng, hz)
    script: list[ScriptStep] = []

    def do_carry(action, obj, target, seed_idx, exclude=(), pour_into=None):
        riders = {r for r, c in writer.riders.items() if c == obj}
        path, cost = _plan_carry(scene, writer.pos, obj, target,
                                 int(plan_seeds[seed_idx]), set(exclude) | riders)
        f0, f1 = writer.carry(obj, path, pour_into=pour_into)
        script.append(ScriptStep(action, obj, path, cost, f0, f1))
        writer.rest(1.0)

    writer.rest(1.0)
    do_carry("move_blocker", spec.blocker, blocker_end, 0)
    do_carry("pour", spec.ingredient, layout["bowl_start"], 1,
             exclude=("bowl",), pour_into="bowl")
    do_carry("cook_place", "bowl", layout["stove_target"], 2)
    writer.rest(scene.t_cook + 0.6)
    if return_bowl:
        do_carry("serve", "bowl", layout["bowl_start"], 3)

    demo = Demonstration(scene, tuple(writer.frames))

    goal = {in_container(spec.ingredient, "bowl"), cooked(spec.ingredient)}
    goal.add(in_region("bowl", "workspace" if return_bowl else "stove_left"))
    if spec.blocker_intentional:
        goal.add(in_region(spec.blocker, "storage"))
    ground_truth = check_goal(goal, scene)

    final_state = demo_states(demo, scene)[-1]
    if not goal_holds(final_state, ground_truth):
        missing = ground_truth - final_state
        raise GenerationError(f"{spec.label} seed {seed}: ground truth not "
                              f"reached, missing {sorted(map(str, missing))}")
    _validate_log_collisions(demo, spec, seed)

    return GeneratedDemo(spec, demo, ground_truth, tuple(script), seed,
                         return_bowl, tuple(positions[spec.blocker]),
                         tuple(blocker_end))


def _validate_log_collisions(demo: Demonstration, spec: TaskSpec, seed: int) -> None:
    """Logged resting objects must never overlap; a grasped object is lifted
    and objects inside the container share its pose by design."""
    scene = demo.scene
    riders: set[str] = set()
    for t, frame in enumerate(demo.frames):
        riders |= {ev.obj for ev in frame.events}
        names = [n for n in frame.poses
                 if n not in riders and n != frame.in_hand]
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                pa, pb = frame.poses[a], frame.poses[b]
                if math.hypot(pa.x - pb.x, pa.y - pb.y) < \
                        scene.radius(a) + scene.radius(b):
                    raise GenerationError(
                        f"{spec.label} seed {seed}: {a} and {b} overlap in "
                        f"frame {t}")


def dataset_seed(master_seed: int, spec_index: int, demo_index: int) -> int:
    """Stable per-demo seed stream derived from the master seed."""
    ss = np.random.SeedSequence([master_seed, spec_index, demo_index])
    return int(ss.generate_state(1)[0] % (2 ** 31))


def generate_dataset(master_seed: int = 0, demos_per_task: int = 4,
                     noise: NoiseParams | None = None,
                     scene: SceneConfig | None = None) -> list[GeneratedDemo]:
    """The full dataset: every task spec times `demos_per_task` seeds."""
    out = []
    for spec_index, spec in enumerate(all_task_specs()):
        for j in range(demos_per_task):
            seed = dataset_seed(master_seed, spec_index, j)
            out.append(generate(spec, seed, noise, scene, return_bowl=j % 2 == 0))
    return out
