"""Per-segment intent classification: was the object moved to achieve its
task predicate, or to clear a path for a later manipulation?

Each hypothesis is a goal set in the plane. A trajectory's log-likelihood
under a hypothesis is the cost-ratio score

    log P(xi | g) = C(opt: start -> g) - C(xi) - C(opt: end -> g)

so a trajectory that is (near-)optimal for its goal scores near zero and
detours score negative. Both per-hypothesis optima come from the sampling
planner, taking the best cost over a few fixed seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from goalrec.demo import Demonstration
from goalrec.domain import Predicate, SceneConfig, is_goal_eligible
from goalrec.geometry import Hull, Rect, convex_hull, disc_hull_intersects, path_length
from goalrec.planner import (
    ClearanceGoal,
    ConfigSpace,
    PlannerParams,
    RegionGoal,
    config_space,
    goal_satisfied,
    optimal_cost,
)
from goalrec.segmentation import Segment

TASK = "task"
MOTION = "motion"
BOTH_TRIVIAL_TASK = "both_trivial_task"
TRIVIAL_MOTION = "trivial_motion"
NOISE = "noise"

TIE_EPS = 1e-6


class HypothesisContractError(ValueError):
    """The segment endpoint does not satisfy the hypothesis goal set."""


@dataclass(frozen=True)
class MotionPredicate:
    """Moving `moved_object` cleared the path swept by a later segment."""

    moved_object: str
    enabled_object: str
    enabled_segment: int
    hull: Hull
    clearance_radius: float


@dataclass(frozen=True)
class TaskHypothesis:
    predicate: Predicate
    goal_spec: object


@dataclass(frozen=True)
class MotionHypothesis:
    motion: MotionPredicate
    goal_spec: ClearanceGoal


@dataclass(frozen=True)
class IntentScore:
    log_likelihood: float
    cost_observed: float
    cost_opt_from_start: float
    cost_opt_from_end: float


@dataclass(frozen=True)
class SegmentIntent:
    decision: str
    task_predicate: Predicate | None = None
    motion_predicate: MotionPredicate | None = None
    scores: dict = field(default_factory=dict)

    @property
    def is_task_intent(self) -> bool:
        return self.decision in (TASK, BOTH_TRIVIAL_TASK)


def motion_predicate_for(seg_index: int, segments: list[Segment],
                         scene: SceneConfig) -> MotionPredicate | None:
    """Earliest later segment whose swept hull the object stopped blocking.

    The hull covers the later object's observed trajectory, inflated by the
    sum of both footprints. The move counts as path-enabling only if the
    start pose intersected the inflated hull and the end pose clears it.
    """
    seg = segments[seg_index]
    if seg.is_dwell:
        return None
    r_i = scene.radius(seg.object)
    for k in range(seg_index + 1, len(segments)):
        later = segments[k]
        if later.is_dwell or later.object == seg.object:
            continue
        hull = convex_hull(later.trajectory)
        r_clear = scene.radius(later.object) + r_i
        blocked = disc_hull_intersects(seg.start_point, r_clear, hull)
        cleared = not disc_hull_intersects(seg.end_point, r_clear, hull)
        if blocked and cleared:
            return MotionPredicate(seg.object, later.object, k, hull, r_clear)
    return None


def pick_task_predicate(seg: Segment, scene: SceneConfig) -> Predicate | None:
    """Candidate achieved task predicate, placement predicates first."""
    eligible = sorted(p for p in seg.achieved if is_goal_eligible(p, scene))
    if not eligible:
        return None
    for name in ("in_region", "in", "cooked"):
        for p in eligible:
            if p.name == name:
                return p
    return eligible[0]


def _riders(seg: Segment, container: str) -> set[str]:
    return {p.args[0] for p in seg.state_before if p.name == "in" and p.args[1] == container}


def scoring_cspace(demo: Demonstration, seg: Segment, scene: SceneConfig,
                   extra_exclude=()) -> ConfigSpace:
    """Obstacle snapshot at the segment's start frame for its moving object.

    Objects riding inside the moving container share its pose and are not
    obstacles to it.
    """
    poses = demo.frames[seg.start].poses
    exclude = set(extra_exclude)
    exclude |= _riders(seg, seg.object)
    return config_space(scene, poses, seg.object, exclude)


def task_goal_spec(pred: Predicate, demo: Demonstration, seg: Segment,
                   scene: SceneConfig) -> RegionGoal:
    """Planar goal set whose membership matches the task predicate."""
    if pred.name == "in_region":
        return RegionGoal(scene.region(pred.args[1]).rect)
    if pred.name == "in":
        # reaching over the container: a square inscribed in the hover disc
        target = pred.args[1]
        tp = demo.frames[seg.end].poses[target]
        h = scene.eps_on / math.sqrt(2.0)
        return RegionGoal(Rect(tp.x - h, tp.y - h, tp.x + h, tp.y + h))
    if pred.name == "cooked":
        x, y = seg.end_point
        h = scene.eps_on / math.sqrt(2.0)
        return RegionGoal(Rect(x - h, y - h, x + h, y + h))
    raise ValueError(f"no goal set for predicate {pred}")


def score_seeds(params: PlannerParams, count: int = 3) -> tuple:
    """Fixed planner seeds used for every optimal-cost estimate."""
    return tuple(params.rng_seed + j for j in range(count))


def trajectory_log_likelihood(xi: np.ndarray, hyp, cspace: ConfigSpace,
                              params: PlannerParams, seeds=None) -> IntentScore:
    """Cost-ratio score of an observed trajectory under one hypothesis."""
    goal = hyp.goal_spec
    q = xi[-1]
    if not goal_satisfied(q, goal):
        raise HypothesisContractError(
            f"segment endpoint {tuple(q)} does not satisfy {type(hyp).__name__}")
    seeds = seeds or score_seeds(params)
    c_obs = path_length(xi)
    c_start = optimal_cost(cspace, xi[0], goal, params, seeds)
    c_end = optimal_cost(cspace, q, goal, params, seeds)
    if math.isinf(c_start) or math.isinf(c_end):
        ll = -math.inf
    else:
        ll = c_start - c_obs - c_end
    return IntentScore(ll, c_obs, c_start, c_end)


def classify_segment(seg_index: int, segments: list[Segment],
                     demo: Demonstration, scene: SceneConfig,
                     params: PlannerParams, prior_task: float = 0.5,
                     tie_eps: float = TIE_EPS, seeds=None) -> SegmentIntent:
    """Decide task vs motion intent for one segment.

    Easy cases short-circuit: a task predicate with no path enabled is plain
    task intent; an enabling move with no achieved task predicate is plain
    motion; neither is noise. Only the ambiguous case runs the planner, and
    ties go to the motion (non-goal) reading.
    """
    seg = segments[seg_index]
    task_pred = pick_task_predicate(seg, scene)
    motion_pred = motion_predicate_for(seg_index, segments, scene)

    if task_pred is not None and motion_pred is None:
        return SegmentIntent(BOTH_TRIVIAL_TASK, task_pred, None)
    if task_pred is None and motion_pred is not None:
        return SegmentIntent(TRIVIAL_MOTION, None, motion_pred)
    if task_pred is None and motion_pred is None:
        return SegmentIntent(NOISE)

    task_hyp = TaskHypothesis(task_pred, task_goal_spec(task_pred, demo, seg, scene))
    motion_hyp = MotionHypothesis(motion_pred, ClearanceGoal(motion_pred.hull,
                                                             motion_pred.clearance_radius))
    exclude = (task_pred.args[1],) if task_pred.name == "in" else ()
    cs_task = scoring_cspace(demo, seg, scene, extra_exclude=exclude)
    cs_motion = scoring_cspace(demo, seg, scene)
    xi = seg.trajectory
    seeds = seeds or score_seeds(params)
    s_task = trajectory_log_likelihood(xi, task_hyp, cs_task, params, seeds)
    s_motion = trajectory_log_likelihood(xi, motion_hyp, cs_motion, params, seeds)

    post_task = s_task.log_likelihood + math.log(prior_task)
    post_motion = s_motion.log_likelihood + math.log(1.0 - prior_task)
    if abs(post_task - post_motion) < tie_eps:
        decision = MOTION
    else:
        decision = TASK if post_task > post_motion else MOTION
    return SegmentIntent(decision, task_pred, motion_pred,
                         {TASK: s_task, MOTION: s_motion})
