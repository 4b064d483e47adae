import json
import math
import pathlib

import numpy as np
import pytest

from goalrec.demo import Demonstration, Frame, PourEvent
from goalrec.domain import default_scene
from goalrec.logio import goalspec_from_dict, scene_from_dict
from goalrec.geometry import Pose2
from goalrec.planner import config_space

SCENES_DIR = pathlib.Path(__file__).parent / "scenes"
BENCHMARK_NAMES = ["empty", "single_disc", "corridor",
                   "hull_clearance_near", "hull_clearance_far"]


def load_benchmark(name):
    """Benchmark planning query from a scene-config file: (cspace, start, goal)."""
    doc = json.loads((SCENES_DIR / f"{name}.json").read_text())
    scene = scene_from_dict(doc["scene"])
    poses = {name_: Pose2(*xyz) for name_, xyz in doc["poses"].items()}
    cspace = config_space(scene, poses, doc["moving_object"])
    return cspace, tuple(doc["start"]), goalspec_from_dict(doc["goal"])


@pytest.fixture(scope="session")
def scene():
    return default_scene()


BASE_POSES = {
    "bowl": (0.22, 0.12),
    "spam": (0.10, 0.18),
    "tomato_soup": (1.05, 0.15),
    "cracker_box": (0.45, 0.40),
    "sugar_box": (0.08, 0.74),
    "mustard_bottle": (0.08, 0.62),
}

HZ = 10.0


class DemoBuilder:
    """Scripted synthetic demos: rests, straight carries, pours."""

    def __init__(self, scene, rng=None, noise=0.0, poses=None):
        self.scene = scene
        self.pos = {k: np.array(v, dtype=float)
                    for k, v in (poses or BASE_POSES).items()}
        self.frames = []
        self.t = 0.0
        self.rng = rng or np.random.default_rng(0)
        self.noise = noise
        self.carry_intervals = {}
        self.riders = {}  # object -> container it moves with

    def _noisy(self, p):
        if self.noise == 0.0:
            return Pose2(p[0], p[1])
        return Pose2(*(p + self.rng.uniform(-self.noise, self.noise, 2)))

    def _emit(self, in_hand=None, events=()):
        poses = {k: self._noisy(v) for k, v in self.pos.items()}
        self.frames.append(Frame(self.t, poses, in_hand, tuple(events)))
        self.t += 1.0 / HZ

    def rest(self, seconds):
        for _ in range(int(seconds * HZ)):
            self._emit()
        return self

    def carry(self, obj, target, speed=0.25, pour_into=None):
        start_idx = len(self.frames)
        a = self.pos[obj].copy()
        b = np.array(target, dtype=float)
        dist = float(np.hypot(*(b - a)))
        steps = max(int(math.ceil(dist / (speed / HZ))), 1)
        for k in range(1, steps + 1):
            self.pos[obj] = a + (k / steps) * (b - a)
            for rider, cont in self.riders.items():
                if cont == obj:
                    self.pos[rider] = self.pos[obj].copy()
            events = ()
            if pour_into is not None and k == steps:
                events = (PourEvent(self.t, obj, pour_into),)
                self.riders[obj] = pour_into
                self.pos[obj] = self.pos[pour_into].copy()
            self._emit(in_hand=obj, events=events)
        self.carry_intervals.setdefault(obj, []).append((start_idx, len(self.frames) - 1))
        return self

    def build(self):
        return Demonstration(self.scene, tuple(self.frames))
