"""End-to-end goal recognition: segment the demonstration, classify each
segment's intent, and pool the intentional predicates into the goal.

Planner-backed scoring is the expensive part, so it is split out: `analyze`
runs segmentation and scoring once per demonstration and returns a trace;
`decide` re-applies the (cheap) decision rules for any hyperparameter
setting. `recognize` composes the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from goalrec.demo import Demonstration, demo_states
from goalrec.domain import SceneConfig, is_goal_eligible
from goalrec.intent import (
    BOTH_TRIVIAL_TASK,
    MOTION,
    TASK,
    IntentScore,
    TaskHypothesis,
    classify_segment,
    score_seeds,
    scoring_cspace,
    task_goal_spec,
    trajectory_log_likelihood,
)
from goalrec.planner import PlannerParams
from goalrec.pooling import pool
from goalrec.segmentation import segment

METHOD_OURS = "ours"
METHOD_FINAL_STATE = "final_state"
METHOD_TASK_PREDICATES = "task_predicates"
METHOD_NO_MOTION = "no_motion"
BASELINES = (METHOD_FINAL_STATE, METHOD_TASK_PREDICATES, METHOD_NO_MOTION)


@dataclass(frozen=True)
class RecognizerParams:
    """Every threshold of the pipeline in one bundle.

    tau is the no-motion baseline's acceptance threshold on the task
    log-likelihood; delta_plan the planner suboptimality allowance used by
    score audits.
    """

    theta_move: float = 0.005
    window: int = 5
    smooth: int = 3
    prior_task: float = 0.5
    tie_eps: float = 1e-6
    tau: float = 0.05
    delta_plan: float = 0.05
    n_score_seeds: int = 3
    planner: PlannerParams = PlannerParams(max_iterations=2500, rng_seed=1000)

    def with_overrides(self, **kw) -> "RecognizerParams":
        return replace(self, **kw)

    @property
    def seeds(self) -> tuple:
        return score_seeds(self.planner, self.n_score_seeds)


@dataclass(frozen=True)
class SegmentTrace:
    """Everything recorded about one segment for decisions and audit."""

    index: int
    object: str
    start: int
    end: int
    is_dwell: bool
    achieved: frozenset
    eligible: frozenset
    decision: str               # decision under the analysis-time params
    task_predicate: object = None
    motion_predicate: object = None
    task_score: IntentScore | None = None
    motion_score: IntentScore | None = None

    @property
    def ambiguous(self) -> bool:
        return self.motion_score is not None


@dataclass(frozen=True)
class DemoTrace:
    segments: tuple            # Segment objects, in temporal order
    records: tuple             # SegmentTrace per segment
    final_state: frozenset


def analyze(demo: Demonstration, params: RecognizerParams | None = None) -> DemoTrace:
    """Segment and score a demonstration once; all methods decide from this."""
    params = params or RecognizerParams()
    scene = demo.scene
    segs = segment(demo, scene, params.theta_move, params.window, params.smooth)
    final_state = demo_states(demo, scene)[-1]

    records = []
    for i, seg in enumerate(segs):
        intent = classify_segment(i, segs, demo, scene, params.planner,
                                  params.prior_task, params.tie_eps, params.seeds)
        eligible = frozenset(p for p in seg.achieved if is_goal_eligible(p, scene))
        task_score = intent.scores.get(TASK)
        if task_score is None and intent.task_predicate is not None:
            task_score = _task_score(demo, seg, scene, intent.task_predicate, params)
        records.append(SegmentTrace(
            i, seg.object, seg.start, seg.end, seg.is_dwell,
            seg.achieved, eligible, intent.decision,
            intent.task_predicate, intent.motion_predicate,
            task_score, intent.scores.get(MOTION)))
    return DemoTrace(tuple(segs), tuple(records), final_state)


def _task_score(demo, seg, scene, pred, params) -> IntentScore:
    if seg.is_dwell:
        # a dwell achievement happens in place: zero cost under its own goal
        return IntentScore(0.0, 0.0, 0.0, 0.0)
    hyp = TaskHypothesis(pred, task_goal_spec(pred, demo, seg, scene))
    exclude = (pred.args[1],) if pred.name == "in" else ()
    cspace = scoring_cspace(demo, seg, scene, extra_exclude=exclude)
    return trajectory_log_likelihood(seg.trajectory, hyp, cspace,
                                     params.planner, params.seeds)


def _decision(rec: SegmentTrace, params: RecognizerParams) -> str:
    """Re-apply the argmax rule under the given prior; short circuits stand."""
    if not rec.ambiguous:
        return rec.decision
    post_task = rec.task_score.log_likelihood + math.log(params.prior_task)
    post_motion = rec.motion_score.log_likelihood + math.log(1.0 - params.prior_task)
    if abs(post_task - post_motion) < params.tie_eps:
        return MOTION
    return TASK if post_task > post_motion else MOTION


def decide(trace: DemoTrace, params: RecognizerParams | None = None,
           method: str = METHOD_OURS, scene: SceneConfig | None = None,
           tau: float | None = None) -> frozenset:
    """Derive a goal from a trace under any method and hyperparameters."""
    params = params or RecognizerParams()
    if scene is None:
        raise ValueError("decide needs the scene config")
    tau = params.tau if tau is None else tau

    if method == METHOD_FINAL_STATE:
        return frozenset(p for p in trace.final_state if is_goal_eligible(p, scene))

    if method == METHOD_OURS:
        keep = [rec for rec in trace.records
                if _decision(rec, params) in (TASK, BOTH_TRIVIAL_TASK)]
    elif method == METHOD_TASK_PREDICATES:
        keep = [rec for rec in trace.records if rec.eligible]
    elif method == METHOD_NO_MOTION:
        keep = [rec for rec in trace.records
                if rec.task_score is not None
                and rec.task_score.log_likelihood >= -tau]
    else:
        raise ValueError(f"unknown method {method!r}")

    pairs = [(rec.index, p) for rec in keep for p in sorted(rec.eligible)]
    return pool(pairs, list(trace.segments), trace.final_state, scene)


def recognize(demo: Demonstration,
              params: RecognizerParams | None = None) -> tuple[frozenset, DemoTrace]:
    """Full pipeline: returns the goal and the per-segment audit trace."""
    params = params or RecognizerParams()
    trace = analyze(demo, params)
    goal = decide(trace, params, METHOD_OURS, demo.scene)
    return goal, trace


def recognize_baseline(demo: Demonstration, method: str,
                       params: RecognizerParams | None = None,
                       trace: DemoTrace | None = None) -> frozenset:
    """Baseline goal readers over the same trace machinery."""
    params = params or RecognizerParams()
    if trace is None:
        trace = analyze(demo, params)
    return decide(trace, params, method, demo.scene)
