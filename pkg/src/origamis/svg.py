"""Deterministic SVG rendering of square tilings.

Squares are placed on an integer grid by BFS from square 1; glued edge pairs
share a label glyph, drawn with an arrowhead on each edge.  Translation
gluings carry matching arrows, flip gluings a reversed arrowhead on the
second edge of the pair.  Output bytes are a pure function of the input.
"""

from __future__ import annotations

from .errors import Disconnected
from .origami import Origami, _pairs_of

__all__ = ["render_svg"]

_CELL = 60
_PAD = 30


def _layout(O: Origami) -> dict[int, tuple[int, int]]:
    pos = {1: (0, 0)}
    taken = {(0, 0)}
    queue = [1]
    qi = 0
    while qi < len(queue):
        k = queue[qi]
        qi += 1
        x, y = pos[k]
        steps = (
            (abs(O.mu(k)), (x + 1, y)),
            (abs(O.mu(-k)), (x - 1, y)),
            (abs(O.nu(k)), (x, y + 1)),
            (abs(O.nu(-k)), (x, y - 1)),
        )
        for nb, cell in steps:
            if nb not in pos:
                if cell in taken:
                    # fall back to a fresh column on collisions
                    cx = max(c[0] for c in taken) + 1
                    cell = (cx, 0)
                    while cell in taken:
                        cell = (cell[0], cell[1] + 1)
                pos[nb] = cell
                taken.add(cell)
                queue.append(nb)
    return pos


_LABELS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _label(i: int) -> str:
    if i < len(_LABELS):
        return _LABELS[i]
    return _LABELS[i % len(_LABELS)] + str(i // len(_LABELS))


def render_svg(O: Origami) -> str:
    """Valid SVG 1.1 document for a connected origami."""
    if not O.connected:
        raise Disconnected("render_svg requires a connected origami")
    pos = _layout(O)
    min_x = min(p[0] for p in pos.values())
    min_y = min(p[1] for p in pos.values())
    max_x = max(p[0] for p in pos.values())
    max_y = max(p[1] for p in pos.values())
    width = (max_x - min_x + 1) * _CELL + 2 * _PAD
    height = (max_y - min_y + 1) * _CELL + 2 * _PAD

    def corner(k: int) -> tuple[int, int]:
        x, y = pos[k]
        # svg y grows downward; our grid y grows upward
        return (_PAD + (x - min_x) * _CELL, _PAD + (max_y - y) * _CELL)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for k in sorted(pos):
        x0, y0 = corner(k)
        parts.append(
            f'<rect x="{x0}" y="{y0}" width="{_CELL}" height="{_CELL}" '
            f'fill="none" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x0 + _CELL // 2}" y="{y0 + _CELL // 2 + 4}" font-size="14" '
            f'text-anchor="middle" fill="gray">{k}</text>'
        )

    def edge_points(side: int, kind: str):
        """Arrow start/end along the given material side of square |side|."""
        k = abs(side)
        x0, y0 = corner(k)
        m = _CELL // 2
        q = _CELL // 4
        if kind == "h":  # left/right side, arrow points upward along the edge
            x = x0 + (_CELL if side > 0 else 0)
            return (x, y0 + _CELL - q), (x, y0 + q)
        # top/bottom side, arrow points rightward along the edge
        y = y0 + (0 if side > 0 else _CELL)
        return (x0 + q, y), (x0 + _CELL - q, y)

    pair_index = 0
    for kind, perm in (("h", O.mu), ("v", O.nu)):
        for s, t in _pairs_of(perm):
            glyph = _label(pair_index)
            pair_index += 1
            flip = (s > 0) == (t > 0)
            for which, side in enumerate((s, t)):
                (ax, ay), (bx, by) = edge_points(side, kind)
                if flip and which == 1:
                    ax, ay, bx, by = bx, by, ax, ay  # reversed arrowhead
                parts.append(
                    f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                    f'stroke="blue" stroke-width="2"/>'
                )
                # arrowhead: small triangle at (bx, by)
                dx = bx - ax
                dy = by - ay
                ln = max(abs(dx), abs(dy)) or 1
                ux, uy = dx / ln, dy / ln
                px, py = -uy, ux
                parts.append(
                    f'<path d="M {bx} {by} L {bx - 6 * ux + 3 * px} {by - 6 * uy + 3 * py} '
                    f'L {bx - 6 * ux - 3 * px} {by - 6 * uy - 3 * py} Z" fill="blue"/>'
                )
                lx = (ax + bx) / 2 + (8 if kind == "h" else 0) * (1 if side > 0 else -1)
                ly = (ay + by) / 2 + (0 if kind == "h" else 14 * (-0.3 if side > 0 else 1))
                parts.append(
                    f'<text x="{lx:g}" y="{ly:g}" font-size="12" text-anchor="middle" '
                    f'fill="red">{glyph}</text>'
                )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
