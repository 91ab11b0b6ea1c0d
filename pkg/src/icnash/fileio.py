"""File emission and parsing: frontier/conditions CSV, stats JSON, region SVG,
and achievable/converse polygon CSV inputs."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError
from .geometry import Frontier, Point
from .neregion import ConditionConstants
from .sweep import SweepStats

__all__ = [
    "write_frontier_csv",
    "write_conditions_csv",
    "write_stats_json",
    "write_region_svg",
    "read_polygon_csv",
    "conditions_rows",
]


def write_frontier_csv(path: Path, frontier: Frontier) -> None:
    """Frontier as `R1,R2` rows with 9 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write("R1,R2\n")
        for pt in frontier.points:
            fh.write(f"{pt.r1:.9g},{pt.r2:.9g}\n")


def conditions_rows(cc: ConditionConstants) -> Iterable[tuple]:
    """Flatten condition constants into dump rows.

    One row per condition half-plane per sweep point:
    (rho, mu1, mu2, condition_id, i, c1, c2, rhs, sense).
    """
    for k in range(cc.n_points):
        rho, mu1, mu2 = cc.points[k]
        for i in (1, 2):
            c1, c2 = (1.0, 0.0) if i == 1 else (0.0, 1.0)
            yield (rho, mu1, mu2, "13a", i, c1, c2, float(cc.lower[i - 1][k]), ">=")
            for idx in range(3):
                yield (
                    rho, mu1, mu2, f"13b.{idx + 1}", i, c1, c2,
                    float(cc.upper[i - 1][idx][k]), "<=",
                )
            yield (rho, mu1, mu2, "13c", i, 1.0, 1.0, float(cc.sum_bound[i - 1][k]), "<=")


def write_conditions_csv(path: Path, rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rho", "mu1", "mu2", "condition_id", "i", "c1", "c2", "rhs", "sense"])
        for rho, mu1, mu2, cond, i, c1, c2, rhs, sense in rows:
            writer.writerow(
                [f"{rho:.12g}", f"{mu1:.12g}", f"{mu2:.12g}", cond, i,
                 f"{c1:.12g}", f"{c2:.12g}", f"{rhs:.12g}", sense]
            )


def write_stats_json(path: Path, stats: SweepStats, meta: Optional[dict] = None) -> None:
    doc = dict(meta or {})
    doc["sweep"] = stats.to_json_dict()
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def read_polygon_csv(path: Path) -> list[Point]:
    """Vertex list `R1,R2` per row (implicitly closed); header optional."""
    pts: list[Point] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not "".join(row).strip():
                continue
            if lineno == 1 and row[0].strip().lower() in ("r1", "x"):
                continue
            if len(row) < 2:
                raise ConfigError(f"{path}:{lineno}: expected two columns, got {row!r}")
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: not a number: {row!r}") from exc
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ConfigError(f"{path}:{lineno}: vertices must be finite")
            pts.append((x, y))
    if len(pts) < 3:
        raise ConfigError(f"{path}: polygon needs at least 3 vertices")
    return pts


# ---------------------------------------------------------------------------
# SVG export
# ---------------------------------------------------------------------------

_COLORS = ("#1f4e9c", "#c23b22", "#2f8f4e", "#8656b8", "#b8860b", "#12808a")


def _tick_step(rmax: float) -> float:
    raw = rmax / 6.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if mag * mult >= raw:
            return mag * mult
    return mag * 10.0


def write_region_svg(
    path: Path,
    frontiers: Sequence[tuple[str, Frontier]],
    rmax: float,
    overlays: Sequence[tuple[str, Sequence[Point]]] = (),
    title: str = "",
) -> None:
    """Plot frontier polylines (solid) and capacity polygons (dashed).

    Axes are in bits per channel use over [0, rmax]^2.
    """
    width, height, margin = 640, 640, 80
    span = width - 2 * margin

    def sx(x: float) -> float:
        return margin + span * x / rmax

    def sy(y: float) -> float:
        return height - margin - span * y / rmax

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" '
        'fill="none" stroke="#404040" stroke-width="1"/>',
    ]
    step = _tick_step(rmax)
    t = 0.0
    while t <= rmax + 1e-9:
        px, py = sx(t), sy(t)
        parts.append(
            f'<line x1="{px:.1f}" y1="{height - margin}" x2="{px:.1f}" '
            f'y2="{height - margin + 6}" stroke="#404040"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{height - margin + 22}" font-size="12" '
            f'text-anchor="middle">{t:g}</text>'
        )
        parts.append(
            f'<line x1="{margin - 6}" y1="{py:.1f}" x2="{margin}" y2="{py:.1f}" '
            'stroke="#404040"/>'
        )
        parts.append(
            f'<text x="{margin - 10}" y="{py + 4:.1f}" font-size="12" '
            f'text-anchor="end">{t:g}</text>'
        )
        t += step
    parts.append(
        f'<text x="{margin + span / 2}" y="{height - 20}" font-size="14" '
        'text-anchor="middle">R1 [bits per channel use]</text>'
    )
    parts.append(
        f'<text x="24" y="{margin + span / 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 24 {margin + span / 2})">R2 [bits per channel use]</text>'
    )
    if title:
        parts.append(
            f'<text x="{width / 2}" y="40" font-size="15" text-anchor="middle">{title}</text>'
        )

    legend_y = margin + 16
    for idx, (label, poly) in enumerate(overlays):
        color = "#707070"
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in list(poly) + [poly[0]])
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5" stroke-dasharray="7,5"/>'
        )
        parts.append(
            f'<line x1="{width - margin - 150}" y1="{legend_y}" x2="{width - margin - 120}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="1.5" stroke-dasharray="7,5"/>'
        )
        parts.append(
            f'<text x="{width - margin - 112}" y="{legend_y + 4}" font-size="12">{label}</text>'
        )
        legend_y += 18
    for idx, (label, frontier) in enumerate(frontiers):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(f"{sx(p.r1):.2f},{sy(p.r2):.2f}" for p in frontier.points)
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<line x1="{width - margin - 150}" y1="{legend_y}" x2="{width - margin - 120}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{width - margin - 112}" y="{legend_y + 4}" font-size="12">{label}</text>'
        )
        legend_y += 18
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
