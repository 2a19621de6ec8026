"""Static SVG rendering of zero sets and coexistence curves.

Output depends only on the inputs: no timestamps, ids or random numbers.
"""

from __future__ import annotations

import numpy as np

SIZE = 600
MARGIN = 0.10


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _bounds(arrays):
    xs, ys = [-1.0, 1.0], [-1.0, 1.0]
    for a in arrays:
        a = np.asarray(a, dtype=complex).ravel()
        a = a[np.isfinite(a)]
        if a.size:
            xs += [float(a.real.min()), float(a.real.max())]
            ys += [float(a.imag.min()), float(a.imag.max())]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0)
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    half = 0.5 * span * (1 + 2 * MARGIN)
    return cx - half, cy - half, 2 * half


def emit_svg(curves=(), exact=None, predicted=None, multiple_points=None, title: str | None = None) -> str:
    """Render an SVG document.

    curves: sequence of ``(points, stable)`` pairs (``stable`` may be None);
    exact / predicted / multiple_points: arrays of complex positions.
    Exact zeros are drawn as crosses, predicted zeros as circles, multiple
    points as filled diamonds; the unit circle is dashed.
    """
    curves = [(np.asarray(p, dtype=complex), None if s is None else np.asarray(s, bool)) for p, s in curves]
    exact = np.asarray([] if exact is None else exact, dtype=complex)
    predicted = np.asarray([] if predicted is None else predicted, dtype=complex)
    mps = np.asarray([] if multiple_points is None else multiple_points, dtype=complex)
    x0, y0, span = _bounds([p for p, _ in curves] + [exact, predicted, mps])
    scale = SIZE / span

    def X(z):
        return _fmt((z.real - x0) * scale)

    def Y(z):
        return _fmt((y0 + span - z.imag) * scale)

    mark = 0.006 * SIZE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if title:
        safe = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        out.append(f'<text x="8" y="18" font-family="sans-serif" font-size="13">{safe}</text>')
    origin = complex(0, 0)
    out.append(f'<line x1="0" y1="{Y(origin)}" x2="{SIZE}" y2="{Y(origin)}" stroke="#bbbbbb" stroke-width="0.5"/>')
    out.append(f'<line x1="{X(origin)}" y1="0" x2="{X(origin)}" y2="{SIZE}" stroke="#bbbbbb" stroke-width="0.5"/>')
    out.append(f'<circle cx="{X(origin)}" cy="{Y(origin)}" r="{_fmt(scale)}" fill="none" stroke="#888888" '
               'stroke-width="0.8" stroke-dasharray="4 3"/>')

    for pts, stable in curves:
        if len(pts) < 2:
            continue
        step = max(1, len(pts) // 4000)
        idx = np.unique(np.r_[np.arange(0, len(pts), step), len(pts) - 1])
        coords = " ".join(f"{X(z)},{Y(z)}" for z in pts[idx])
        out.append(f'<polyline points="{coords}" fill="none" stroke="#c8c8e8" stroke-width="0.8"/>')
        if stable is not None:
            # stable runs drawn on top
            runs, start = [], None
            for i, s in enumerate(stable):
                if s and start is None:
                    start = i
                if not s and start is not None:
                    runs.append((start, i))
                    start = None
            if start is not None:
                runs.append((start, len(stable)))
            for a, b in runs:
                seg = pts[a:b]
                if len(seg) < 2:
                    continue
                sidx = np.unique(np.r_[np.arange(0, len(seg), step), len(seg) - 1])
                coords = " ".join(f"{X(z)},{Y(z)}" for z in seg[sidx])
                out.append(f'<polyline points="{coords}" fill="none" stroke="#3050a0" stroke-width="1.2"/>')

    for z in predicted:
        out.append(f'<circle cx="{X(z)}" cy="{Y(z)}" r="{_fmt(mark)}" fill="none" stroke="#d04020" stroke-width="0.8"/>')
    for z in exact:
        x, y = (z.real - x0) * scale, (y0 + span - z.imag) * scale
        out.append(f'<path d="M{_fmt(x - mark)},{_fmt(y - mark)}L{_fmt(x + mark)},{_fmt(y + mark)}'
                   f'M{_fmt(x - mark)},{_fmt(y + mark)}L{_fmt(x + mark)},{_fmt(y - mark)}" '
                   'stroke="#000000" stroke-width="0.9"/>')
    d = 1.6 * mark
    for z in mps:
        x, y = (z.real - x0) * scale, (y0 + span - z.imag) * scale
        out.append(f'<path d="M{_fmt(x)},{_fmt(y - d)}L{_fmt(x + d)},{_fmt(y)}L{_fmt(x)},{_fmt(y + d)}'
                   f'L{_fmt(x - d)},{_fmt(y)}Z" fill="#208040"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
