"""Demonstration logs: time-stamped frames of object poses plus pour events,
and the per-frame symbolic state trace derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass

from goalrec.domain import (
    STOVE_REGIONS,
    DomainError,
    SceneConfig,
    eval_predicates,
    in_container,
    in_region,
)


@dataclass(frozen=True)
class PourEvent:
    t: float
    obj: str
    target: str


@dataclass(frozen=True)
class Frame:
    """One log record: every object's planar pose, the grasped object if any,
    and the pour events firing at this timestamp."""

    t: float
    poses: dict
    in_hand: str | None = None
    events: tuple = ()


@dataclass(frozen=True)
class Demonstration:
    scene: SceneConfig
    frames: tuple

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        if len(self.frames) < 2:
            raise DomainError("a demonstration needs at least two frames")
        max_gap = 3.0 / self.scene.nominal_hz
        prev = None
        for f in self.frames:
            if prev is not None:
                if f.t <= prev:
                    raise DomainError("frame timestamps must strictly increase")
                if f.t - prev > max_gap + 1e-9:
                    raise DomainError(f"frame gap {f.t - prev:.3f}s exceeds 3x nominal period")
            prev = f.t
            for name in f.poses:
                self.scene.object(name)

    @property
    def duration(self) -> float:
        return self.frames[-1].t - self.frames[0].t


def demo_states(demo: Demonstration, scene: SceneConfig | None = None) -> list[frozenset]:
    """Per-frame predicate sets, with the cook-dwell rule applied.

    An object inside the container cooks at the first frame where the
    container has been on a stove region, with that object inside, for
    ``t_cook`` continuous seconds. Cooked is monotone within a demo.
    """
    scene = scene or demo.scene
    container = scene.container.name
    events: list[tuple] = []
    poured: list[str] = []
    cooked_objs: set[str] = set()
    dwell_since: dict[str, float] = {}
    states = []

    for frame in demo.frames:
        for ev in frame.events:
            if ev.obj in poured:
                raise DomainError(f"{ev.obj} poured twice")
            events.append(("pour", ev.obj, ev.target))
            poured.append(ev.obj)

        state = eval_predicates(frame.poses, frame.in_hand, events, scene)
        on_stove = any(in_region(container, s) in state for s in STOVE_REGIONS)
        fired = False
        for obj in poured:
            if obj in cooked_objs:
                continue
            if on_stove and in_container(obj, container) in state:
                since = dwell_since.setdefault(obj, frame.t)
                if frame.t - since >= scene.t_cook - 1e-9:
                    events.append(("cook", obj))
                    cooked_objs.add(obj)
                    fired = True
            else:
                dwell_since.pop(obj, None)
        if fired:
            state = eval_predicates(frame.poses, frame.in_hand, events, scene)
        states.append(state)

    return states
