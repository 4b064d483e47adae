"""Combine per-segment intentional task predicates into the demonstration
goal, pruning predicates that only served as preconditions of later
intentional steps and no longer hold at the end.

Example: the container is placed on a stove so that its contents cook, then
returned to the workspace. The stove placement was instrumental (it is the
cook step's precondition and is false at the end), so it is pruned; had the
container stayed on the stove, the placement survives.
"""

from __future__ import annotations

from goalrec.domain import (
    DomainError,
    Operator,
    Predicate,
    SceneConfig,
    cook_op,
    is_goal_eligible,
    place_op,
    pour_op,
    STOVE_REGIONS,
)
from goalrec.segmentation import Segment


def grounded_operators(seg: Segment, scene: SceneConfig) -> list[Operator]:
    """Operators a segment embodies, inferred from its achieved predicates."""
    ops = []
    container = scene.container.name
    for p in sorted(seg.achieved):
        if p.name == "cooked":
            context = seg.state_after | seg.state_before
            stove = next((s for s in STOVE_REGIONS
                          if Predicate("in_region", (container, s)) in context), None)
            if stove is not None:
                ops.append(cook_op(p.args[0], container, stove))
        elif p.name == "in":
            ops.append(pour_op(p.args[0], p.args[1]))
        elif p.name == "in_region":
            ops.append(place_op(p.args[0], p.args[1]))
    return ops


def pool(intentional: list[tuple[int, Predicate]], segments: list[Segment],
         final_state, scene: SceneConfig) -> frozenset:
    """Pool intentional (segment index, predicate) pairs into the goal.

    A predicate from segment i is dropped iff it appears among the grounded
    preconditions of a later intentional segment's operator AND it no longer
    holds in the final state. Survivors are deduplicated.
    """
    final_state = frozenset(final_state)
    for _, p in intentional:
        if not is_goal_eligible(p, scene):
            raise DomainError(f"predicate {p} is not goal-eligible")

    later_preconds: dict[int, frozenset] = {}
    for idx, _ in intentional:
        if idx not in later_preconds:
            preconds: set = set()
            for op in grounded_operators(segments[idx], scene):
                preconds |= op.preconditions
            later_preconds[idx] = frozenset(preconds)

    goal = set()
    for idx, p in intentional:
        if p in final_state:
            goal.add(p)
            continue
        needed_later = any(p in later_preconds[j]
                           for j, _ in intentional if j > idx)
        if not needed_later:
            goal.add(p)
    return frozenset(goal)
