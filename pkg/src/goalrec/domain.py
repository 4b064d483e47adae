"""Symbolic cooking domain: object catalog, table regions, ground predicates,
operators, and per-frame predicate grounding from object poses.

The domain is fixed-schema: regions and objects come from a SceneConfig, the
operator inventory is pick/place/hover/pour/cook. Cooking is modeled with a
dwell rule: an ingredient inside the container cooks once the container has
sat on a stove continuously for ``t_cook`` seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

from goalrec.geometry import Rect

OBJECT_KINDS = ("container", "ingredient", "blocker")
REGION_IDS = ("workspace", "storage", "stove_left", "stove_right")
STOVE_REGIONS = ("stove_left", "stove_right")

# Predicates allowed to appear in a demonstration goal. in_hand/on are
# transient grasp states and never goal components.
GOAL_ELIGIBLE_NAMES = frozenset({"in_region", "in", "cooked"})


class DomainError(ValueError):
    """Raised for catalog/state inconsistencies."""


@dataclass(frozen=True)
class ObjectSpec:
    name: str
    kind: str
    radius: float

    def __post_init__(self):
        if self.kind not in OBJECT_KINDS:
            raise DomainError(f"unknown object kind {self.kind!r}")
        if self.radius <= 0.0:
            raise DomainError(f"object {self.name} needs a positive footprint radius")


@dataclass(frozen=True)
class Region:
    name: str
    rect: Rect

    def __post_init__(self):
        if self.name not in REGION_IDS:
            raise DomainError(f"unknown region id {self.name!r}")


@dataclass(frozen=True)
class SceneConfig:
    """Immutable scene description shared by the generator and recognizer."""

    table: Rect
    objects: tuple
    regions: tuple
    t_cook: float = 3.0
    eps_on: float = 0.02
    nominal_hz: float = 10.0

    def __post_init__(self):
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise DomainError("duplicate object names in catalog")
        containers = [o for o in self.objects if o.kind == "container"]
        if len(containers) != 1:
            raise DomainError("scene needs exactly one container")
        region_names = [r.name for r in self.regions]
        if len(set(region_names)) != len(region_names):
            raise DomainError("duplicate region ids")
        for i, a in enumerate(self.regions):
            for b in self.regions[i + 1:]:
                ra, rb = a.rect, b.rect
                if ra.xmin < rb.xmax and rb.xmin < ra.xmax and \
                   ra.ymin < rb.ymax and rb.ymin < ra.ymax:
                    raise DomainError(f"regions {a.name} and {b.name} overlap")
        # canonical name order makes equality independent of authoring order
        object.__setattr__(self, "objects",
                           tuple(sorted(self.objects, key=lambda o: o.name)))
        object.__setattr__(self, "regions",
                           tuple(sorted(self.regions, key=lambda r: r.name)))

    @property
    def container(self) -> ObjectSpec:
        return next(o for o in self.objects if o.kind == "container")

    def object(self, name: str) -> ObjectSpec:
        for o in self.objects:
            if o.name == name:
                return o
        raise DomainError(f"unknown object {name!r}")

    def region(self, name: str) -> Region:
        for r in self.regions:
            if r.name == name:
                return r
        raise DomainError(f"unknown region {name!r}")

    def radius(self, name: str) -> float:
        return self.object(name).radius


def default_scene() -> SceneConfig:
    """The stock 1.2 x 0.8 m table with four regions and six objects."""
    return SceneConfig(
        table=Rect(0.0, 0.0, 1.2, 0.8),
        objects=(
            ObjectSpec("bowl", "container", 0.08),
            ObjectSpec("spam", "ingredient", 0.045),
            ObjectSpec("tomato_soup", "ingredient", 0.035),
            ObjectSpec("cracker_box", "blocker", 0.06),
            ObjectSpec("sugar_box", "blocker", 0.05),
            ObjectSpec("mustard_bottle", "blocker", 0.04),
        ),
        regions=(
            Region("workspace", Rect(0.0, 0.0, 1.2, 0.30)),
            Region("storage", Rect(0.0, 0.55, 0.50, 0.80)),
            Region("stove_left", Rect(0.65, 0.575, 0.85, 0.775)),
            Region("stove_right", Rect(0.90, 0.575, 1.10, 0.775)),
        ),
        t_cook=3.0,
        eps_on=0.02,
        nominal_hz=10.0,
    )


@dataclass(frozen=True, order=True)
class Predicate:
    """A ground atom, e.g. in_region(cracker_box, storage)."""

    name: str
    args: tuple

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"


def in_region(obj: str, region: str) -> Predicate:
    return Predicate("in_region", (obj, region))


def in_hand(obj: str) -> Predicate:
    return Predicate("in_hand", (obj,))


def on(obj: str, other: str) -> Predicate:
    return Predicate("on", (obj, other))


def in_container(obj: str, container: str) -> Predicate:
    return Predicate("in", (obj, container))


def cooked(obj: str) -> Predicate:
    return Predicate("cooked", (obj,))


def is_goal_eligible(p: Predicate, scene: SceneConfig) -> bool:
    """Goal components: in_region(.), in(., container), cooked(.)."""
    if p.name not in GOAL_ELIGIBLE_NAMES:
        return False
    if p.name == "in":
        return p.args[1] == scene.container.name
    return True


def check_goal(goal, scene: SceneConfig) -> frozenset:
    """Validate and freeze a goal predicate set."""
    goal = frozenset(goal)
    for p in goal:
        if not is_goal_eligible(p, scene):
            raise DomainError(f"predicate {p} is not goal-eligible")
    return goal


@dataclass(frozen=True)
class Operator:
    """Grounded STRIPS-style operator."""

    name: str
    args: tuple
    preconditions: frozenset
    add: frozenset
    delete: frozenset

    def __post_init__(self):
        if self.add & self.delete:
            raise DomainError(f"operator {self.name} adds and deletes the same atom")

    def __str__(self):
        return f"{self.name}({','.join(self.args)})"


def pick_op(obj: str, region: str | None) -> Operator:
    pre = frozenset({in_region(obj, region)}) if region else frozenset()
    return Operator("pick", (obj,), pre, frozenset({in_hand(obj)}),
                    frozenset({in_region(obj, region)}) if region else frozenset())


def place_op(obj: str, region: str | None) -> Operator:
    add = frozenset({in_region(obj, region)}) if region else frozenset()
    return Operator("place", (obj, region or "table"), frozenset({in_hand(obj)}),
                    add, frozenset({in_hand(obj)}))


def hover_op(obj: str, target: str) -> Operator:
    return Operator("hover", (obj, target), frozenset({in_hand(obj)}),
                    frozenset({on(obj, target)}), frozenset())


def pour_op(obj: str, container: str) -> Operator:
    return Operator("pour", (obj, container),
                    frozenset({in_hand(obj), on(obj, container)}),
                    frozenset({in_container(obj, container)}),
                    frozenset({in_hand(obj), on(obj, container)}))


def cook_op(obj: str, container: str, stove: str) -> Operator:
    if stove not in STOVE_REGIONS:
        raise DomainError(f"cook needs a stove region, got {stove!r}")
    return Operator("cook", (obj,),
                    frozenset({in_container(obj, container), in_region(container, stove)}),
                    frozenset({cooked(obj)}), frozenset())


def apply_operator(state, op: Operator) -> frozenset:
    """Apply a grounded operator; raises naming any unmet preconditions."""
    state = frozenset(state)
    missing = op.preconditions - state
    if missing:
        atoms = ", ".join(sorted(str(m) for m in missing))
        raise DomainError(f"cannot apply {op}: missing {atoms}")
    return (state - op.delete) | op.add


def diff_predicates(before, after) -> tuple[frozenset, frozenset]:
    """(added, removed) between two predicate sets."""
    before, after = frozenset(before), frozenset(after)
    return after - before, before - after


def goal_holds(state, goal) -> bool:
    return frozenset(goal) <= frozenset(state)


def eval_predicates(poses: dict, held: str | None, events, scene: SceneConfig) -> frozenset:
    """Ground the predicate set for one frame.

    ``poses`` maps every catalog object to its pose; ``held`` names the
    in-hand object (if any); ``events`` is the ordered history of pour events
    and fired cook events up to and including this frame. Containment follows
    from pour history: an object inside the container reports no region of
    its own (its placement is the container's).
    """
    for name in poses:
        scene.object(name)
    contained: dict[str, str] = {}
    state = set()
    for ev in events:
        if ev[0] == "pour":
            _, obj, target = ev
            if scene.object(target).kind != "container":
                raise DomainError(f"pour target {target} is not a container")
            contained[obj] = target
            state.add(in_container(obj, target))
        elif ev[0] == "cook":
            state.add(cooked(ev[1]))
        else:
            raise DomainError(f"unknown event kind {ev[0]!r}")

    if held is not None:
        scene.object(held)
        state.add(in_hand(held))

    for obj in scene.objects:
        name = obj.name
        if name not in poses:
            if name == held:
                continue
            raise DomainError(f"no pose for {name} and it is not in hand")
        if name == held or name in contained:
            continue
        p = poses[name]
        for region in scene.regions:
            if region.rect.contains((p.x, p.y)):
                state.add(in_region(name, region.name))
                break  # region rects are disjoint

    if held is not None and held in poses:
        hp = poses[held]
        for obj in scene.objects:
            if obj.name == held or obj.name not in poses:
                continue
            q = poses[obj.name]
            if (hp.x - q.x) ** 2 + (hp.y - q.y) ** 2 <= scene.eps_on ** 2:
                state.add(on(held, obj.name))

    return frozenset(state)
