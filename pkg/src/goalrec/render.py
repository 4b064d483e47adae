"""Deterministic SVG rendering of a demonstration and its recognition trace:
regions, object footprints, carried trajectories, clearance hulls, and
per-segment decisions. Byte-identical output for identical inputs.
"""

from __future__ import annotations

from goalrec.demo import Demonstration

SCALE = 800.0  # pixels per meter
MARGIN = 30.0

SEGMENT_COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                  "#ff7f0e", "#8c564b", "#17becf")
REGION_FILL = {"workspace": "#f2f2f2", "storage": "#fff3d6",
               "stove_left": "#fde0dd", "stove_right": "#fde0dd"}


def _f(x: float) -> str:
    return f"{x:.2f}"


class _Svg:
    def __init__(self, width, height):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
            f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">',
            '<rect width="100%" height="100%" fill="white"/>',
        ]

    def rect(self, x, y, w, h, fill="none", stroke="#444", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="{_f(width)}"{d}/>')

    def circle(self, cx, cy, r, fill, stroke="#333", width=1.0, opacity=1.0):
        op = f' fill-opacity="{_f(opacity)}"' if opacity < 1.0 else ""
        self.parts.append(
            f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="{fill}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"{op}/>')

    def polyline(self, pts, stroke, width=2.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{_f(width)}"{d}/>')

    def polygon(self, pts, fill, stroke, width=1.0, opacity=0.25):
        coords = " ".join(f"{_f(x)},{_f(y)}" for x, y in pts)
        self.parts.append(
            f'<polygon points="{coords}" fill="{fill}" fill-opacity="{_f(opacity)}" '
            f'stroke="{stroke}" stroke-width="{_f(width)}"/>')

    def text(self, x, y, s, size=12, color="#222", anchor="start"):
        self.parts.append(
            f'<text x="{_f(x)}" y="{_f(y)}" font-family="monospace" '
            f'font-size="{size}" fill="{color}" text-anchor="{anchor}">{s}</text>')

    def tostring(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def render_demo(demo: Demonstration, trace_doc: dict | None = None) -> str:
    """SVG of the scene with per-segment trajectories and trace annotations."""
    scene = demo.scene
    table = scene.table
    width = (table.xmax - table.xmin) * SCALE + 2 * MARGIN
    height = (table.ymax - table.ymin) * SCALE + 2 * MARGIN
    footer = 18.0 * (len(trace_doc["segments"]) + 1) if trace_doc else 0.0
    svg = _Svg(width, height + footer)

    def px(p):
        # world y points up, svg y points down
        return (MARGIN + (p[0] - table.xmin) * SCALE,
                MARGIN + (table.ymax - p[1]) * SCALE)

    svg.rect(*px((table.xmin, table.ymax)),
             (table.xmax - table.xmin) * SCALE,
             (table.ymax - table.ymin) * SCALE, stroke="#000", width=2.0)

    for region in scene.regions:
        r = region.rect
        x, y = px((r.xmin, r.ymax))
        svg.rect(x, y, (r.xmax - r.xmin) * SCALE, (r.ymax - r.ymin) * SCALE,
                 fill=REGION_FILL.get(region.name, "#eee"), stroke="#999", dash="4,3")
        svg.text(x + 4, y + 14, region.name, size=11, color="#666")

    segments = trace_doc["segments"] if trace_doc else []
    for entry in segments:
        mp = entry.get("motion_predicate")
        if mp and entry["decision"] in ("motion", "trivial_motion", "task"):
            hull_px = [px(v) for v in mp["hull"]]
            if len(hull_px) >= 3:
                svg.polygon(hull_px, fill="#ffd6e0", stroke="#c06080")
            else:
                svg.polyline(hull_px, stroke="#c06080", width=1.5, dash="2,2")

    for entry in segments:
        color = SEGMENT_COLORS[entry["index"] % len(SEGMENT_COLORS)]
        pts = [px(p) for p in entry["trajectory"]]
        if len(pts) >= 2:
            svg.polyline(pts, stroke=color, width=2.0)
            svg.circle(*pts[-1], 3.0, fill=color)

    first = demo.frames[0].poses
    last = demo.frames[-1].poses
    for name in sorted(first):
        radius = scene.radius(name) * SCALE
        svg.circle(*px((first[name].x, first[name].y)), radius,
                   fill="#bbb", stroke="#555", opacity=0.45)
        svg.circle(*px((last[name].x, last[name].y)), radius,
                   fill="#7fb2d9", stroke="#235", opacity=0.55)
        svg.text(*px((last[name].x, last[name].y)), name, size=10, anchor="middle")

    if trace_doc:
        y = height + 12.0
        if "goal" in trace_doc:
            svg.text(MARGIN, y, "goal: " + ", ".join(trace_doc["goal"]) , size=12)
            y += 18.0
        for entry in segments:
            color = SEGMENT_COLORS[entry["index"] % len(SEGMENT_COLORS)]
            score = entry.get("task_score") or {}
            ll = score.get("log_likelihood")
            ll_s = "" if ll is None else f" llh(task)={ll:+.4f}"
            line = (f"seg {entry['index']}: {entry['object']} "
                    f"[{entry['start']}..{entry['end']}] -> {entry['decision']}{ll_s}")
            svg.text(MARGIN, y, line, size=12, color=color)
            y += 18.0

    return svg.tostring()
