"""Dependency-free SVG line charts of per-k metric summaries.

One chart per metric: k on the x axis, one polyline per solver through
the across-trial means, with +/- one standard deviation error bars.  A
plain-text sidecar (plotdata.txt) repeats the plotted numbers.
"""

from __future__ import annotations

from pathlib import Path

from .harness import SUMMARY_METRICS, ExperimentReport, format_real

_WIDTH = 640
_HEIGHT = 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 150, 40, 60

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def _chart(metric: str, series: dict[str, list[tuple[int, float, float]]]) -> str:
    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM
    ks = sorted({k for points in series.values() for k, _, _ in points})
    y_top = max((mean + std for pts in series.values() for _, mean, std in pts), default=0.0)
    y_top = y_top * 1.15 if y_top > 0 else 1.0

    def x_px(k: int) -> float:
        if len(ks) == 1:
            return _LEFT + plot_w / 2
        return _LEFT + (k - ks[0]) / (ks[-1] - ks[0]) * plot_w

    def y_px(v: float) -> float:
        return _TOP + plot_h - (v / y_top) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="18" '
        f'font-family="sans-serif">{metric}</text>',
    ]
    # axes and ticks
    bottom = _TOP + plot_h
    parts.append(f'<line x1="{_LEFT}" y1="{bottom}" x2="{_LEFT + plot_w}" y2="{bottom}" '
                 'stroke="#000" stroke-width="1.5"/>')
    parts.append(f'<line x1="{_LEFT}" y1="{_TOP}" x2="{_LEFT}" y2="{bottom}" '
                 'stroke="#000" stroke-width="1.5"/>')
    for i in range(5):
        v = y_top * i / 4
        y = y_px(v)
        parts.append(f'<line x1="{_LEFT - 4}" y1="{y:.2f}" x2="{_LEFT + plot_w}" y2="{y:.2f}" '
                     'stroke="#ddd" stroke-width="1"/>')
        parts.append(f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
                     f'font-family="sans-serif">{v:.3g}</text>')
    for k in ks:
        x = x_px(k)
        parts.append(f'<line x1="{x:.2f}" y1="{bottom}" x2="{x:.2f}" y2="{bottom + 5}" '
                     'stroke="#000" stroke-width="1"/>')
        parts.append(f'<text x="{x:.2f}" y="{bottom + 20}" text-anchor="middle" font-size="12" '
                     f'font-family="sans-serif">{k}</text>')
    parts.append(f'<text x="{_LEFT + plot_w / 2:.0f}" y="{_HEIGHT - 14}" text-anchor="middle" '
                 'font-size="12" font-family="sans-serif">k (components)</text>')

    for idx, (solver, points) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        points = sorted(points)
        # error bars first so markers sit on top
        for k, mean, std in points:
            x, y0, y1 = x_px(k), y_px(max(mean - std, 0.0)), y_px(mean + std)
            parts.append(f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" y2="{y1:.2f}" '
                         f'stroke="{color}" stroke-width="1"/>')
            for y in (y0, y1):
                parts.append(f'<line x1="{x - 3:.2f}" y1="{y:.2f}" x2="{x + 3:.2f}" y2="{y:.2f}" '
                             f'stroke="{color}" stroke-width="1"/>')
        if len(points) >= 2:
            coords = " ".join(f"{x_px(k):.2f},{y_px(mean):.2f}" for k, mean, _ in points)
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                         f'points="{coords}"/>')
        for k, mean, _ in points:
            parts.append(f'<circle cx="{x_px(k):.2f}" cy="{y_px(mean):.2f}" r="3.5" '
                         f'fill="{color}"/>')
        ly = _TOP + 14 + idx * 20
        lx = _LEFT + plot_w + 18
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly + 4}" font-size="12" '
                     f'font-family="sans-serif">{solver}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot_data(report: ExperimentReport, out_dir: str | Path) -> None:
    """Write rmse.svg, acc.svg, nmi.svg and plotdata.txt under out_dir."""
    if not report.summaries:
        raise ValueError("report has no summaries to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sidecar_lines = ["# metric solver k mean std"]
    for metric in SUMMARY_METRICS:
        series: dict[str, list[tuple[int, float, float]]] = {}
        for row in report.summaries:
            if row.metric == metric:
                series.setdefault(row.solver, []).append((row.k, row.mean, row.std))
        (out / f"{metric}.svg").write_text(_chart(metric, series))
        for solver, points in series.items():
            for k, mean, std in sorted(points):
                sidecar_lines.append(
                    f"{metric} {solver} {k} {format_real(mean)} {format_real(std)}"
                )
    (out / "plotdata.txt").write_text("\n".join(sidecar_lines) + "\n")
