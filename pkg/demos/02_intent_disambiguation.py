"""The core question: was the cracker box moved to put it in storage, or
just to get it out of the bowl's way?

Two synthetic demonstrations share the same script shape: move the blocker,
pour, cook. They differ only in where the blocker starts and how far it is
carried. The cost-ratio score separates them.

Run:  python demos/02_intent_disambiguation.py
"""

from goalrec.demogen import TaskSpec, generate
from goalrec.recognizer import RecognizerParams, recognize

params = RecognizerParams()

for intentional in (False, True):
    spec = TaskSpec("spam", "cook", "cracker_box", intentional)
    g = generate(spec, seed=7, return_bowl=True)
    goal, trace = recognize(g.demo, params)

    variant = "intentional" if intentional else "incidental"
    start = tuple(round(float(x), 3) for x in g.blocker_start)
    end = tuple(round(float(x), 3) for x in g.blocker_end)
    print(f"\n=== {variant} blocker move ({spec.label}) ===")
    print(f"blocker: {start} -> {end}")
    for rec in trace.records:
        line = f"  seg {rec.index}: {rec.object:13s} -> {rec.decision}"
        if rec.motion_score is not None:
            line += (f"  [llh task {rec.task_score.log_likelihood:+.4f} "
                     f"vs motion {rec.motion_score.log_likelihood:+.4f}]")
        print(line)
    print("recognized goal:", ", ".join(str(p) for p in sorted(goal)))
    print("ground truth:   ", ", ".join(str(p) for p in sorted(g.ground_truth)))
    print("exact match:", goal == g.ground_truth)
