"""Goal recognition for tabletop demonstrations via task-and-motion reasoning.

Given a time-stamped log of planar object poses (plus pour events) from a
single-handed tabletop demonstration, infer the demonstrator's symbolic goal:
segment the log into per-object manipulations, decide for each move whether
it pursued its achieved task predicate or merely cleared a path for a later
move (by comparing trajectory costs against per-hypothesis planner optima),
and pool the intentional predicates into the goal.

Also ships a procedural generator for the mockup cooking dataset the
evaluation protocol runs on, and a command-line pipeline (``goalrec``).
"""

from goalrec.demo import Demonstration, Frame, PourEvent, demo_states
from goalrec.demogen import (
    GeneratedDemo,
    NoiseParams,
    TaskSpec,
    all_task_specs,
    generate,
    generate_dataset,
)
from goalrec.domain import (
    Predicate,
    SceneConfig,
    default_scene,
    eval_predicates,
    goal_holds,
)
from goalrec.evaluation import MetricsRow, run_experiment, score_goal
from goalrec.geometry import Hull, Pose2, Rect, convex_hull, path_length
from goalrec.intent import (
    IntentScore,
    MotionPredicate,
    SegmentIntent,
    classify_segment,
    motion_predicate_for,
    trajectory_log_likelihood,
)
from goalrec.planner import (
    ClearanceGoal,
    ConfigSpace,
    PlannerParams,
    PlanResult,
    RegionGoal,
    config_space,
    optimal_cost,
    plan,
)
from goalrec.pooling import pool
from goalrec.recognizer import (
    DemoTrace,
    RecognizerParams,
    analyze,
    decide,
    recognize,
    recognize_baseline,
)
from goalrec.segmentation import Segment, detect_motion, segment

__version__ = "0.1.0"

__all__ = [
    "ClearanceGoal", "ConfigSpace", "DemoTrace", "Demonstration", "Frame",
    "GeneratedDemo", "Hull", "IntentScore", "MetricsRow", "MotionPredicate",
    "NoiseParams", "PlanResult", "PlannerParams", "Pose2", "PourEvent",
    "Predicate", "RecognizerParams", "Rect", "RegionGoal", "SceneConfig",
    "Segment", "SegmentIntent", "TaskSpec",
    "all_task_specs", "analyze", "classify_segment", "config_space",
    "convex_hull", "decide", "default_scene", "demo_states", "detect_motion",
    "eval_predicates", "generate", "generate_dataset", "goal_holds",
    "motion_predicate_for", "optimal_cost", "path_length", "plan", "pool",
    "recognize", "recognize_baseline", "run_experiment", "score_goal",
    "segment", "trajectory_log_likelihood",
    "__version__",
]
