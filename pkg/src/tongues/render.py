"""Tongue-diagram rendering: deterministic SVG, optional matplotlib PNG.

The SVG path is byte-deterministic (fixed header, records sorted by
(q, p, b), all floats printed with %.6f) so diagram regressions can be
tested by direct file comparison.  PNG rendering delegates to matplotlib
for interactive-quality output and is not byte-stable across versions.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from .tongue_scan import TongueRecord

WIDTH, HEIGHT = 640, 480
MARGIN = 50

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f"]


def _sx(omega: float) -> float:
    return MARGIN + omega * (WIDTH - 2 * MARGIN)


def _sy(b: float) -> float:
    return HEIGHT - MARGIN - b * (HEIGHT - 2 * MARGIN)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def render_svg(records: Sequence[TongueRecord],
               pinches: Iterable[tuple[int, int, float, float]] = ()) -> str:
    """Deterministic SVG of tongue boundaries in the (omega, b) square.

    pinches: optional (p, q, b, omega) markers for certified pinch points.
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 12}" text-anchor="middle" '
        'font-size="14">omega</text>',
        f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" '
        'font-size="14" transform="rotate(-90 16 '
        f'{HEIGHT // 2})">b</text>',
    ]
    grouped: dict[tuple[int, int], list[TongueRecord]] = defaultdict(list)
    for r in records:
        grouped[(r.q, r.p)].append(r)
    for (q, p) in sorted(grouped):
        rows = sorted(grouped[(q, p)], key=lambda r: r.b)
        color = _PALETTE[(q - 1) % len(_PALETTE)]
        for side in ("left", "right"):
            pts = []
            for r in rows:
                iv = r.omega_left if side == "left" else r.omega_right
                pts.append(f"{_fmt(_sx(float(iv.mid)))},{_fmt(_sy(float(r.b)))}")
            if len(pts) >= 2:
                lines.append(f'<polyline fill="none" stroke="{color}" '
                             f'stroke-width="1" points="{" ".join(pts)}"/>')
            elif pts:
                x, y = pts[0].split(",")
                lines.append(f'<circle cx="{x}" cy="{y}" r="1.5" '
                             f'fill="{color}"/>')
        lines.append(f'<text x="{_fmt(_sx(p / q))}" y="{MARGIN - 8}" '
                     f'text-anchor="middle" font-size="10" fill="{color}">'
                     f'{p}/{q}</text>')
    for (p, q, b, omega) in sorted(pinches):
        lines.append(f'<circle cx="{_fmt(_sx(float(omega)))}" '
                     f'cy="{_fmt(_sy(float(b)))}" r="3" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_png(path: str, records: Sequence[TongueRecord],
               pinches: Iterable[tuple[int, int, float, float]] = ()) -> None:
    """Matplotlib rendering of the same diagram to a PNG file."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    grouped: dict[tuple[int, int], list[TongueRecord]] = defaultdict(list)
    for r in records:
        grouped[(r.q, r.p)].append(r)
    for (q, p) in sorted(grouped):
        rows = sorted(grouped[(q, p)], key=lambda r: r.b)
        color = _PALETTE[(q - 1) % len(_PALETTE)]
        bs = [float(r.b) for r in rows]
        ax.plot([float(r.omega_left.mid) for r in rows], bs,
                color=color, lw=0.8)
        ax.plot([float(r.omega_right.mid) for r in rows], bs,
                color=color, lw=0.8)
    for (p, q, b, omega) in sorted(pinches):
        ax.plot([float(omega)], [float(b)], "ko", ms=4)
    ax.set_xlabel("omega")
    ax.set_ylabel("b")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    fig.savefig(path, dpi=120)
    plt.close(fig)
