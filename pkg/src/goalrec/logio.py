"""File formats: demonstration logs (JSON lines), ground-truth goals, scene
and parameter documents, and the dataset manifest.

Log records are one JSON object per line:
  {"kind": "header", "scene": {...}}
  {"kind": "frame", "t": ..., "poses": {name: [x, y, theta]}, "in_hand": ...}
  {"kind": "event", "t": ..., "event": "pour", "from": ..., "to": ...}

All writers sort keys and use canonical float repr, so identical inputs
produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json

from goalrec.demo import Demonstration, Frame, PourEvent
from goalrec.domain import ObjectSpec, Predicate, Region, SceneConfig, check_goal
from goalrec.geometry import Pose2, Rect

SCHEMA_VERSION = 1


class ParseError(ValueError):
    """Raised when an input file does not match the expected schema."""


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def scene_to_dict(scene: SceneConfig) -> dict:
    return {
        "table": [scene.table.xmin, scene.table.ymin, scene.table.xmax, scene.table.ymax],
        "objects": [{"name": o.name, "kind": o.kind, "radius": o.radius}
                    for o in scene.objects],
        "regions": {r.name: [r.rect.xmin, r.rect.ymin, r.rect.xmax, r.rect.ymax]
                    for r in scene.regions},
        "t_cook": scene.t_cook,
        "eps_on": scene.eps_on,
        "nominal_hz": scene.nominal_hz,
    }


def scene_from_dict(d: dict) -> SceneConfig:
    try:
        return SceneConfig(
            table=Rect(*d["table"]),
            objects=tuple(ObjectSpec(o["name"], o["kind"], o["radius"])
                          for o in d["objects"]),
            regions=tuple(Region(name, Rect(*box))
                          for name, box in sorted(d["regions"].items())),
            t_cook=d["t_cook"],
            eps_on=d["eps_on"],
            nominal_hz=d["nominal_hz"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad scene config: {exc}") from exc


def demo_to_lines(demo: Demonstration) -> list[str]:
    lines = [_dumps({"kind": "header", "version": SCHEMA_VERSION,
                     "scene": scene_to_dict(demo.scene)})]
    for frame in demo.frames:
        poses = {name: [p.x, p.y, p.theta] for name, p in sorted(frame.poses.items())}
        lines.append(_dumps({"kind": "frame", "t": frame.t, "poses": poses,
                             "in_hand": frame.in_hand}))
        for ev in frame.events:
            lines.append(_dumps({"kind": "event", "t": ev.t, "event": "pour",
                                 "from": ev.obj, "to": ev.target}))
    return lines


def write_demo(path, demo: Demonstration) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(demo_to_lines(demo)) + "\n")


def read_demo(path) -> Demonstration:
    scene = None
    frames: list[Frame] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: not JSON: {exc}") from exc
            kind = rec.get("kind")
            if kind == "header":
                scene = scene_from_dict(rec["scene"])
            elif kind == "frame":
                if scene is None:
                    raise ParseError(f"{path}:{lineno}: frame before header")
                try:
                    poses = {name: Pose2(*xyz) for name, xyz in rec["poses"].items()}
                    frames.append(Frame(rec["t"], poses, rec.get("in_hand")))
                except (KeyError, TypeError, ValueError) as exc:
                    raise ParseError(f"{path}:{lineno}: bad frame: {exc}") from exc
            elif kind == "event":
                if not frames or rec.get("event") != "pour":
                    raise ParseError(f"{path}:{lineno}: stray or unknown event")
                last = frames[-1]
                ev = PourEvent(rec["t"], rec["from"], rec["to"])
                frames[-1] = Frame(last.t, last.poses, last.in_hand, last.events + (ev,))
            else:
                raise ParseError(f"{path}:{lineno}: unknown record kind {kind!r}")
    if scene is None:
        raise ParseError(f"{path}: missing header record")
    try:
        return Demonstration(scene, tuple(frames))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def goal_to_dict(goal) -> dict:
    return {"goal": [{"pred": p.name, "args": list(p.args)}
                     for p in sorted(goal)]}


def write_goal(path, goal) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dumps(goal_to_dict(goal)) + "\n")


def read_goal(path, scene: SceneConfig) -> frozenset:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            d = json.load(fh)
            goal = frozenset(Predicate(g["pred"], tuple(g["args"])) for g in d["goal"])
            return check_goal(goal, scene)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad goal file: {exc}") from exc


def goalspec_to_dict(goal) -> dict:
    from goalrec.planner import ClearanceGoal, RegionGoal

    if isinstance(goal, RegionGoal):
        r = goal.rect
        return {"type": "region", "rect": [r.xmin, r.ymin, r.xmax, r.ymax]}
    if isinstance(goal, ClearanceGoal):
        return {"type": "clearance",
                "hull": [list(v) for v in goal.hull.vertices],
                "clearance_radius": goal.clearance_radius}
    raise TypeError(f"unknown goal spec {goal!r}")


def goalspec_from_dict(d: dict):
    from goalrec.geometry import Hull
    from goalrec.planner import ClearanceGoal, RegionGoal

    try:
        if d["type"] == "region":
            return RegionGoal(Rect(*d["rect"]))
        if d["type"] == "clearance":
            return ClearanceGoal(Hull(tuple(tuple(v) for v in d["hull"])),
                                 d["clearance_radius"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad goal spec: {exc}") from exc
    raise ParseError(f"unknown goal spec type {d.get('type')!r}")


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def trace_to_dict(trace, goal=None) -> dict:
    """Serializable audit record of a recognition run."""
    segments = []
    for rec in trace.records:
        seg = trace.segments[rec.index]
        entry = {
            "index": rec.index,
            "object": rec.object,
            "start": rec.start,
            "end": rec.end,
            "is_dwell": rec.is_dwell,
            "decision": rec.decision,
            "achieved": [str(p) for p in sorted(rec.achieved)],
            "trajectory": [[float(x), float(y)] for x, y in seg.trajectory],
            "task_predicate": str(rec.task_predicate) if rec.task_predicate else None,
        }
        for label, score in (("task_score", rec.task_score),
                             ("motion_score", rec.motion_score)):
            entry[label] = None if score is None else {
                "log_likelihood": score.log_likelihood,
                "cost_observed": score.cost_observed,
                "cost_opt_from_start": score.cost_opt_from_start,
                "cost_opt_from_end": score.cost_opt_from_end,
            }
        mp = rec.motion_predicate
        entry["motion_predicate"] = None if mp is None else {
            "moved_object": mp.moved_object,
            "enabled_object": mp.enabled_object,
            "enabled_segment": mp.enabled_segment,
            "hull": [list(v) for v in mp.hull.vertices],
            "clearance_radius": mp.clearance_radius,
        }
        segments.append(entry)
    doc = {"version": SCHEMA_VERSION, "segments": segments}
    if goal is not None:
        doc["goal"] = [str(p) for p in sorted(goal)]
    return doc


def write_trace(path, trace, goal=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(trace_to_dict(trace, goal), sort_keys=True, indent=1) + "\n")


def read_trace(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if "segments" not in doc:
            raise ParseError(f"{path}: not a trace file")
        return doc
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: cannot read trace: {exc}") from exc


def config_to_dict(scene=None, recognizer=None, noise=None) -> dict:
    """Full configuration document with every pipeline default."""
    from goalrec.demogen import NoiseParams
    from goalrec.domain import default_scene
    from goalrec.recognizer import RecognizerParams

    scene = scene or default_scene()
    recognizer = recognizer or RecognizerParams()
    noise = noise or NoiseParams()
    p = recognizer.planner
    return {
        "schema_version": SCHEMA_VERSION,
        "scene": scene_to_dict(scene),
        "recognizer": {
            "theta_move": recognizer.theta_move,
            "window": recognizer.window,
            "smooth": recognizer.smooth,
            "prior_task": recognizer.prior_task,
            "tie_eps": recognizer.tie_eps,
            "tau": recognizer.tau,
            "delta_plan": recognizer.delta_plan,
            "n_score_seeds": recognizer.n_score_seeds,
            "planner": {
                "max_iterations": p.max_iterations,
                "step_size": p.step_size,
                "goal_bias": p.goal_bias,
                "rewire_radius_const": p.rewire_radius_const,
                "rng_seed": p.rng_seed,
            },
        },
        "noise": {"sigma_carry": noise.sigma_carry, "sigma_rest": noise.sigma_rest},
    }


def config_from_dict(doc: dict):
    """(scene, recognizer params, noise params) from a config document."""
    from goalrec.demogen import NoiseParams
    from goalrec.planner import PlannerParams
    from goalrec.recognizer import RecognizerParams

    try:
        scene = scene_from_dict(doc["scene"])
        r = doc["recognizer"]
        planner = PlannerParams(**r["planner"])
        rec = RecognizerParams(
            theta_move=r["theta_move"], window=r["window"], smooth=r["smooth"],
            prior_task=r["prior_task"], tie_eps=r["tie_eps"], tau=r["tau"],
            delta_plan=r["delta_plan"], n_score_seeds=r["n_score_seeds"],
            planner=planner)
        noise = NoiseParams(**doc["noise"])
        return scene, rec, noise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad config document: {exc}") from exc


def write_config(path, scene=None, recognizer=None, noise=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(config_to_dict(scene, recognizer, noise),
                            sort_keys=True, indent=1) + "\n")


def read_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return config_from_dict(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: cannot read config: {exc}") from exc


def write_manifest(path, master_seed: int, entries: list[dict]) -> None:
    doc = {"version": SCHEMA_VERSION, "master_seed": master_seed, "entries": entries}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")


def read_manifest(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        if "entries" not in doc or "master_seed" not in doc:
            raise ParseError(f"{path}: not a dataset manifest")
        return doc
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: cannot read manifest: {exc}") from exc
