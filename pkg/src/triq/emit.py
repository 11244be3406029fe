"""Byte-reproducible CSV and SVG writers for sweep results."""

from __future__ import annotations

import csv
import io
import math
from xml.sax.saxutils import escape

from triq.errors import UsageError

# viridis anchors, interpolated linearly
_PALETTE = [
    (68, 1, 84),
    (59, 82, 139),
    (33, 145, 140),
    (94, 201, 98),
    (253, 231, 37),
]
_SERIES_COLORS = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22",
]


def format_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def format_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    for row in result.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def emit_csv(result, path):
    text = format_csv(result)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def _color(t):
    if not math.isfinite(t):
        return "#cccccc"
    t = min(1.0, max(0.0, t))
    x = t * (len(_PALETTE) - 1)
    k = min(int(x), len(_PALETTE) - 2)
    f = x - k
    rgb = [round(a + (b - a) * f) for a, b in zip(_PALETTE[k], _PALETTE[k + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _num(v):
    return format(v, ".6g")


def _pick_quantity(result, quantity):
    if quantity is None:
        return result.quantities[0]
    if quantity not in result.quantities:
        raise UsageError(f"quantity {quantity!r} not in result {result.quantities}")
    return quantity


def _values(result, name):
    return result.column(name)


def _header_comment(config_echo):
    if not config_echo:
        return ""
    lines = "\n".join(f"{k}={v}" for k, v in config_echo.items())
    # '--' is not allowed inside XML comments
    return "<!--\n" + lines.replace("--", "- -") + "\n-->\n"


def render_heatmap(result, quantity=None, config_echo=None) -> str:
    if len(result.axis_names) != 2:
        raise UsageError("heatmap needs exactly two sweep axes")
    qname = _pick_quantity(result, quantity)
    xname, yname = result.axis_names
    xs = sorted(set(_values(result, xname)))
    ys = sorted(set(_values(result, yname)))
    if len(xs) < 2 or len(ys) < 2:
        raise UsageError("heatmap needs at least two points along each axis")
    grid = {}
    for x, y, v in zip(_values(result, xname), _values(result, yname), _values(result, qname)):
        grid[(x, y)] = v if isinstance(v, float) else math.nan
    finite = [v for v in grid.values() if math.isfinite(v)]
    vmin, vmax = (min(finite), max(finite)) if finite else (0.0, 1.0)
    span = vmax - vmin or 1.0

    left, top, width, height = 70, 40, 480, 360
    cw, ch = width / len(xs), height / len(ys)
    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="680" height="460" font-family="sans-serif" font-size="12">\n']
    out.append(_header_comment(config_echo))
    out.append(f'<text x="{left + width / 2}" y="24" text-anchor="middle" font-size="14">{escape(qname)}</text>\n')
    for ix, x in enumerate(xs):
        for iy, y in enumerate(ys):
            v = grid.get((x, y), math.nan)
            px = left + ix * cw
            py = top + height - (iy + 1) * ch
            out.append(
                f'<rect x="{_num(px)}" y="{_num(py)}" width="{_num(cw)}" height="{_num(ch)}" '
                f'fill="{_color((v - vmin) / span)}"/>\n'
            )
    out.append(f'<rect x="{left}" y="{top}" width="{width}" height="{height}" fill="none" stroke="black"/>\n')
    for k in range(5):
        fx = k / 4
        xv = xs[0] + fx * (xs[-1] - xs[0])
        yv = ys[0] + fx * (ys[-1] - ys[0])
        out.append(f'<text x="{_num(left + fx * width)}" y="{top + height + 16}" text-anchor="middle">{_num(xv)}</text>\n')
        out.append(f'<text x="{left - 6}" y="{_num(top + height - fx * height + 4)}" text-anchor="end">{_num(yv)}</text>\n')
    out.append(f'<text x="{left + width / 2}" y="{top + height + 36}" text-anchor="middle">{escape(xname)}</text>\n')
    out.append(
        f'<text x="18" y="{top + height / 2}" text-anchor="middle" transform="rotate(-90 18 {top + height / 2})">{escape(yname)}</text>\n'
    )
    # color bar
    bx = left + width + 30
    for k in range(50):
        out.append(
            f'<rect x="{bx}" y="{_num(top + height - (k + 1) * height / 50)}" width="20" height="{_num(height / 50)}" fill="{_color(k / 49)}"/>\n'
        )
    out.append(f'<text x="{bx + 26}" y="{top + height}">{_num(vmin)}</text>\n')
    out.append(f'<text x="{bx + 26}" y="{top + 10}">{_num(vmax)}</text>\n')
    out.append("</svg>\n")
    return "".join(out)


def render_lines(result, quantity=None, config_echo=None) -> str:
    names = result.axis_names
    if len(names) not in (1, 2):
        raise UsageError("line plot needs one or two sweep axes")
    xname = names[0]
    xs_all = _values(result, xname)
    series = []
    if len(names) == 2:
        qname = _pick_quantity(result, quantity)
        sname = names[1]
        labels = []
        for s in _values(result, sname):
            if s not in labels:
                labels.append(s)
        for label in labels:
            pts = [
                (x, v)
                for x, s, v in zip(xs_all, _values(result, sname), _values(result, qname))
                if s == label and isinstance(v, float)
            ]
            series.append((f"{sname}={_num(label)}", pts))
        ylabel = qname
    else:
        qnames = [quantity] if quantity else result.quantities
        for q in qnames:
            _pick_quantity(result, q)
            pts = [(x, v) for x, v in zip(xs_all, _values(result, q)) if isinstance(v, float)]
            series.append((q, pts))
        ylabel = ", ".join(qnames)
    allpts = [p for _, pts in series for p in pts]
    if len({x for x, _ in allpts}) < 2:
        raise UsageError("line plot needs at least two x values")
    x0, x1 = min(x for x, _ in allpts), max(x for x, _ in allpts)
    y0, y1 = min(y for _, y in allpts), max(y for _, y in allpts)
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    left, top, width, height = 70, 40, 480, 360

    def px(x):
        return left + (x - x0) / (x1 - x0) * width

    def py(y):
        return top + height - (y - y0) / (y1 - y0) * height

    out = ['<svg xmlns="http://www.w3.org/2000/svg" width="700" height="460" font-family="sans-serif" font-size="12">\n']
    out.append(_header_comment(config_echo))
    out.append(f'<rect x="{left}" y="{top}" width="{width}" height="{height}" fill="none" stroke="black"/>\n')
    for k in range(5):
        f = k / 4
        out.append(f'<text x="{_num(left + f * width)}" y="{top + height + 16}" text-anchor="middle">{_num(x0 + f * (x1 - x0))}</text>\n')
        out.append(f'<text x="{left - 6}" y="{_num(top + height - f * height + 4)}" text-anchor="end">{_num(y0 + f * (y1 - y0))}</text>\n')
    out.append(f'<text x="{left + width / 2}" y="{top + height + 36}" text-anchor="middle">{escape(xname)}</text>\n')
    out.append(
        f'<text x="18" y="{top + height / 2}" text-anchor="middle" transform="rotate(-90 18 {top + height / 2})">{escape(ylabel)}</text>\n'
    )
    for k, (label, pts) in enumerate(series):
        color = _SERIES_COLORS[k % len(_SERIES_COLORS)]
        coords = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>\n')
        ly = top + 14 + 16 * k
        out.append(f'<line x1="{left + width + 12}" y1="{ly - 4}" x2="{left + width + 32}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>\n')
        out.append(f'<text x="{left + width + 36}" y="{ly}">{escape(label)}</text>\n')
    out.append("</svg>\n")
    return "".join(out)


def emit_svg(result, kind, path, quantity=None, config_echo=None):
    if kind == "heatmap":
        text = render_heatmap(result, quantity, config_echo)
    elif kind == "lines":
        text = render_lines(result, quantity, config_echo)
    else:
        raise UsageError(f"unknown plot kind {kind!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path
