"""Temporal segmentation of a demonstration into single-object manipulation
segments, plus the predicate changes each segment achieves.

Motion is detected per object from smoothed center displacement over a short
sliding window (or from the in-hand flag). Exactly one object may move at a
time; objects riding inside the container are not independent movers.

Predicate changes that fire between manipulations (the cook dwell) are
emitted as zero-motion "dwell" segments attributed to the affected object, so
every achieved predicate has a home segment in temporal order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from goalrec.demo import Demonstration, demo_states
from goalrec.domain import SceneConfig, diff_predicates

THETA_MOVE = 0.005   # meters of net window displacement that count as motion
WINDOW = 5           # frames per detection window
SMOOTH = 3           # centered moving-average width for the noise floor


class SimultaneousMotionError(RuntimeError):
    """Two objects manipulated at once: outside the single-handed contract."""


@dataclass(frozen=True)
class Segment:
    """One manipulation (or dwell) interval with its predicate effects."""

    object: str
    start: int                       # frame indices, inclusive
    end: int
    trajectory: np.ndarray           # object-center polyline over [start, end]
    achieved: frozenset
    removed: frozenset
    state_before: frozenset
    state_after: frozenset
    events: tuple = ()
    is_dwell: bool = False

    @property
    def start_point(self) -> np.ndarray:
        return self.trajectory[0]

    @property
    def end_point(self) -> np.ndarray:
        return self.trajectory[-1]


def _positions(demo: Demonstration, obj: str) -> np.ndarray:
    return np.array([[f.poses[obj].x, f.poses[obj].y] for f in demo.frames])


def _smooth(pos: np.ndarray, width: int) -> np.ndarray:
    if width <= 1:
        return pos
    kernel = np.ones(width) / width
    out = np.empty_like(pos)
    for c in range(pos.shape[1]):
        padded = np.concatenate([np.repeat(pos[0, c], width // 2),
                                 pos[:, c],
                                 np.repeat(pos[-1, c], width // 2)])
        out[:, c] = np.convolve(padded, kernel, mode="valid")
    return out


def detect_motion(demo: Demonstration, obj: str,
                  theta: float = THETA_MOVE, window: int = WINDOW,
                  smooth: int = SMOOTH) -> np.ndarray:
    """Per-frame mask: displacement over the forward window exceeds theta,
    or the object is in hand."""
    demo.scene.object(obj)
    pos = _smooth(_positions(demo, obj), smooth)
    n = len(pos)
    mask = np.zeros(n, dtype=bool)
    for t in range(n):
        w = min(t + window, n - 1)
        dx = pos[w, 0] - pos[t, 0]
        dy = pos[w, 1] - pos[t, 1]
        if dx * dx + dy * dy > theta * theta:
            mask[t] = True
    for t, frame in enumerate(demo.frames):
        if frame.in_hand == obj:
            mask[t] = True
    return mask


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    runs = []
    start = None
    for t, v in enumerate(mask):
        if v and start is None:
            start = t
        elif not v and start is not None:
            runs.append((start, t - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def segment(demo: Demonstration, scene: SceneConfig | None = None,
            theta: float = THETA_MOVE, window: int = WINDOW,
            smooth: int = SMOOTH) -> list[Segment]:
    """Split a demonstration into ordered manipulation and dwell segments."""
    scene = scene or demo.scene
    states = demo_states(demo, scene)
    n = len(demo.frames)
    container = scene.container.name

    # objects inside the container are carried along, never independent movers
    contained = np.zeros((len(scene.objects), n), dtype=bool)
    names = [o.name for o in scene.objects]
    for i, name in enumerate(names):
        key = ("in", (name, container))
        for t, st in enumerate(states):
            contained[i, t] = any(p.name == "in" and p.args[0] == name for p in st)

    masks = {}
    for i, name in enumerate(names):
        m = detect_motion(demo, name, theta, window, smooth)
        held = np.array([f.in_hand == name for f in demo.frames])
        m &= ~(contained[i] & ~held)  # riders move with the container, but a
        masks[name] = m               # grasped object is still the mover


    mover: list[str | None] = [None] * n
    for t in range(n):
        moving = [name for name in names if masks[name][t]]
        if len(moving) > 1:
            raise SimultaneousMotionError(
                f"objects {moving} move simultaneously at frame {t} "
                f"(t={demo.frames[t].t:.2f}s)")
        if moving:
            mover[t] = moving[0]

    intervals: list[tuple[str, int, int]] = []
    t = 0
    while t < n:
        if mover[t] is None:
            t += 1
            continue
        obj = mover[t]
        u = t
        while u + 1 < n and mover[u + 1] == obj:
            u += 1
        intervals.append((obj, t, u))
        t = u + 1

    segments: list[Segment] = []
    smoothed = {name: _smooth(_positions(demo, name), smooth) for name in names}

    def add_motion_segment(obj, a, b):
        # widen to the rest frames flanking the run so endpoints are at rest;
        # the trajectory uses the same smoothed signal as motion detection so
        # per-frame sensor noise does not inflate its cost
        s = max(a - 1, 0)
        e = min(b + 1, n - 1)
        pos = smoothed[obj][s:e + 1]
        events = tuple(ev for f in demo.frames[s:e + 1] for ev in f.events)
        added, removed = diff_predicates(states[s], states[e])
        segments.append(Segment(obj, s, e, pos, added, removed,
                                states[s], states[e], events))
        return s, e

    def add_dwell_segments(a, b):
        """Emit a dwell segment if predicates change over a rest span [a, b]."""
        if b <= a:
            return
        added, removed = diff_predicates(states[a], states[b])
        if not added and not removed:
            return
        fire = a + 1
        while fire < b and states[fire] == states[a]:
            fire += 1
        changed = added | removed
        subject = sorted(changed)[0].args[0]
        pos = _positions(demo, subject)[fire:fire + 1]
        segments.append(Segment(subject, fire, fire, pos, added, removed,
                                states[a], states[b], (), is_dwell=True))

    prev_end = 0
    for obj, a, b in intervals:
        s = max(a - 1, 0)
        add_dwell_segments(prev_end, s)
        _, e = add_motion_segment(obj, a, b)
        prev_end = e
    add_dwell_segments(prev_end, n - 1)

    return segments


def segment_trajectory(demo: Demonstration, seg: Segment,
                       smooth: int = SMOOTH) -> np.ndarray:
    """Object-center polyline over the segment's frames (duplicates merged)."""
    from goalrec.geometry import polyline

    pos = _smooth(_positions(demo, seg.object), smooth)
    return polyline(pos[seg.start:seg.end + 1])
