"""Dependency-free SVG scatter of the (d1, d2) objective plane."""

from __future__ import annotations

SIZE = 640
MARGIN = 60


def _fmt(x: float) -> str:
    return format(x, ".2f")


def _to_px(d1: float, d2: float):
    plot = SIZE - 2 * MARGIN
    x = MARGIN + d1 * plot
    y = SIZE - MARGIN - d2 * plot
    return x, y


def objective_scatter_svg(risk_months, flagged) -> str:
    """Render all months as gray dots, front months filled, near-front hollow.

    Flagged points carry their month label. Axes span the unit square.
    """
    flagged_by_month = {f.t: f for f in flagged}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    # axes + ticks
    x0, y0 = _to_px(0.0, 0.0)
    x1, y1 = _to_px(1.0, 1.0)
    parts.append(
        f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" width="{_fmt(x1 - x0)}" '
        f'height="{_fmt(y0 - y1)}" fill="none" stroke="black"/>'
    )
    for k in range(6):
        v = k / 5.0
        tx, _ = _to_px(v, 0.0)
        _, ty = _to_px(0.0, v)
        parts.append(
            f'<line x1="{_fmt(tx)}" y1="{_fmt(y0)}" x2="{_fmt(tx)}" y2="{_fmt(y0 + 6)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(y0 + 22)}" font-size="12" text-anchor="middle">{v:.1f}</text>'
        )
        parts.append(
            f'<line x1="{_fmt(x0 - 6)}" y1="{_fmt(ty)}" x2="{_fmt(x0)}" y2="{_fmt(ty)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x0 - 10)}" y="{_fmt(ty + 4)}" font-size="12" text-anchor="end">{v:.1f}</text>'
        )
    parts.append(
        f'<text x="{SIZE // 2}" y="{SIZE - 14}" font-size="14" text-anchor="middle">'
        "d1 (closeness gap: regional potential risk)</text>"
    )
    parts.append(
        f'<text x="18" y="{SIZE // 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {SIZE // 2})">d2 (closeness gap: local variation)</text>'
    )

    for m in risk_months:
        if m.t in flagged_by_month:
            continue
        x, y = _to_px(m.d1, m.d2)
        parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#b0b0b0"/>'
        )
    for f in flagged:
        x, y = _to_px(f.d1, f.d2)
        if f.flag == "front":
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="#c0392b"/>'
            )
        else:
            parts.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="none" '
                'stroke="#c0392b" stroke-width="1.5"/>'
            )
        parts.append(
            f'<text x="{_fmt(x + 8)}" y="{_fmt(y - 6)}" font-size="11">{f.t}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
