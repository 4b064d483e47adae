"""The command-line pipeline end to end, driven in-process: generate a small
dataset, recognize one demonstration with an audit trace, and render it.

Run:  python demos/04_cli_pipeline.py
"""

import json
import pathlib
import tempfile

from goalrec.cli import main

workdir = pathlib.Path(tempfile.mkdtemp(prefix="goalrec_demo_"))
ds = workdir / "dataset"

print("$ goalrec gen --out", ds, "--demos-per-task 1 --seed 4 --quiet")
main(["gen", "--out", str(ds), "--demos-per-task", "1", "--seed", "4", "--quiet"])

manifest = json.loads((ds / "manifest.json").read_text())
entry = manifest["entries"][0]
print(f"\nfirst entry: task={entry['task']} file={entry['demo_file']}")

demo = ds / entry["demo_file"]
trace = workdir / "trace.json"
print(f"\n$ goalrec recognize {demo.name} --trace trace.json")
main(["recognize", str(demo), "--trace", str(trace)])

svg = workdir / "demo.svg"
print(f"\n$ goalrec render {demo.name} --trace trace.json --out demo.svg")
main(["render", str(demo), "--trace", str(trace), "--out", str(svg)])
print(f"rendered {svg} ({svg.stat().st_size} bytes)")
print(f"\nartifacts kept under {workdir}")
