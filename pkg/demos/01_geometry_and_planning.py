"""Planning on the tabletop: configuration spaces, region goals, clearance
goals, and how close the sampling planner gets to a grid-search oracle.

Run:  python demos/01_geometry_and_planning.py
"""

import numpy as np

from goalrec.domain import default_scene
from goalrec.geometry import Pose2, convex_hull
from goalrec.planner import (
    ClearanceGoal,
    PlannerParams,
    RegionGoal,
    config_space,
    plan,
)

scene = default_scene()
print(f"table: {scene.table}")
print("objects:", ", ".join(f"{o.name}(r={o.radius})" for o in scene.objects))

# The bowl wants to travel from the workspace onto the left stove while the
# cracker box sits in the way.
poses = {
    "cracker_box": Pose2(0.55, 0.45),
    "spam": Pose2(0.10, 0.20),
}
cspace = config_space(scene, poses, moving="bowl")
print(f"\nconfig space for the bowl: {len(cspace.obstacles)} inflated obstacles")

stove = RegionGoal(scene.region("stove_left").rect)
result = plan(cspace, (0.22, 0.12), stove, PlannerParams(rng_seed=3))
print(f"bowl -> stove_left: cost {result.cost:.3f} m over {len(result.path)} vertices")

# Clearance goals: where can the cracker box stand so that it no longer
# blocks the bowl's swept path?
carry = np.array([[0.22, 0.12], [0.75, 0.675]])
hull = convex_hull(carry)
clearance = ClearanceGoal(hull, scene.radius("bowl") + scene.radius("cracker_box"))
escape = plan(config_space(scene, {"spam": poses["spam"]}, "cracker_box"),
              (0.55, 0.45), clearance, PlannerParams(rng_seed=3))
print(f"cracker box minimal clearing move: {escape.cost:.3f} m "
      f"to {np.round(escape.path[-1], 3).tolist()}")

# Costs are near-optimal: compare against the straight-line bound in an
# empty scene.
empty = config_space(scene, {}, "bowl")
direct = plan(empty, (0.22, 0.12), stove, PlannerParams(rng_seed=5))
lower = stove.rect.distance((0.22, 0.12))
print(f"\nempty-scene sanity: planner {direct.cost:.4f} m vs "
      f"straight-line {lower:.4f} m ({100 * (direct.cost / lower - 1):.1f}% over)")
