"""SVG 1.1 drawings of planar traces.

Failed probes are hatched, successful ones outlined. L-infinity balls are
squares and L1 balls diamonds. The search point's path is a polyline and
POIs are small dots. The y axis points up, as in the usual figures.
"""

from __future__ import annotations

from typing import List, Sequence
from xml.sax.saxutils import escape

from .geometry import Metric

__all__ = ["render_svg"]

_SIZE = 640  # pixels per side

_HEADER = """<?xml version="1.0" encoding="UTF-8" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
"""


def _f(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def _ball(center: Sequence[float], radius: float, metric: Metric, cls: str) -> str:
    # svg y grows downward, so y is negated everywhere
    x, y = center[0], -center[1]
    attrs = f'class="{cls}"'
    if cls.endswith("failed"):
        attrs += ' fill="url(#hatch)"'
    else:
        attrs += ' fill="none"'
    if metric is Metric.LINF:
        return (
            f'<rect {attrs} x="{_f(x - radius)}" y="{_f(y - radius)}" '
            f'width="{_f(2 * radius)}" height="{_f(2 * radius)}"/>'
        )
    pts = [(x + radius, y), (x, y + radius), (x - radius, y), (x, y - radius)]
    return f'<polygon {attrs} points="{" ".join(f"{_f(a)},{_f(b)}" for a, b in pts)}"/>'


def render_svg(trace: dict) -> str:
    """Render a ``k = 2`` trace dictionary (see :mod:`rectisearch.trace`)."""
    k = int(trace["k"])
    if k != 2:
        raise ValueError(f"only planar traces can be rendered, this one has k={k}")
    metric = Metric.parse(trace["metric"])
    n = float(trace["n"])
    margin = n / 20
    lo, span = -n - margin, 2 * (n + margin)
    stroke = span / _SIZE

    body: List[str] = [
        f'<rect class="search-square" x="{_f(-n)}" y="{_f(-n)}" width="{_f(2 * n)}" '
        f'height="{_f(2 * n)}" fill="none" stroke="black" stroke-width="{_f(2 * stroke)}"/>'
    ]
    path = [(0.0, 0.0)]
    probes: List[str] = []
    for e in trace["events"]:
        if e["type"] == "move":
            path.append(tuple(e["to"]))
        elif e["type"] == "probe":
            cls = "probe hit" if e["result"] else "probe failed"
            probes.append(_ball(e["center"], float(e["radius"]), metric, cls))
    if probes:
        body.append(f'<g stroke="steelblue" stroke-width="{_f(stroke)}">')
        body.extend(probes)
        body.append("</g>")
    if len(path) > 1:
        pts = " ".join(f"{_f(x)},{_f(-y)}" for x, y in path)
        body.append(
            f'<polyline class="path" points="{pts}" fill="none" stroke="crimson" '
            f'stroke-width="{_f(1.5 * stroke)}"/>'
        )
    body.append(f'<circle class="origin" cx="0" cy="0" r="{_f(4 * stroke)}" fill="black"/>')
    for p in trace.get("pois", []):
        body.append(
            f'<circle class="poi" cx="{_f(p[0])}" cy="{_f(-p[1])}" r="{_f(3 * stroke)}" fill="darkorange"/>'
        )

    hatch = 8 * stroke
    defs = (
        f'<defs><pattern id="hatch" patternUnits="userSpaceOnUse" width="{_f(hatch)}" '
        f'height="{_f(hatch)}" patternTransform="rotate(45)">'
        f'<line x1="0" y1="0" x2="0" y2="{_f(hatch)}" stroke="gray" stroke-width="{_f(stroke)}"/>'
        f"</pattern></defs>"
    )
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="{_f(lo)} {_f(lo)} {_f(span)} {_f(span)}">'
    )
    title = f"<title>{escape(str(trace.get('algo', '')))} k=2 n={_f(n)} {metric.value}</title>"
    return _HEADER + "\n".join([head, title, defs, *body, "</svg>"]) + "\n"
