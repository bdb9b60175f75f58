"""Deterministic SVG and ASCII drawings of puzzles."""

from __future__ import annotations

from math import sqrt

from .puzzle import Cell, Puzzle, all_cells

FILL = {
    "black": "black",
    "white": "white",
    "grey": "grey",
    "green": "#0f0",
    "yellow": "#ff0",
    "purple": "#909",
}
CHAR = {"black": "#", "white": ".", "grey": "+", "green": "g", "yellow": "y", "purple": "p"}
FORMATS = ("ascii", "svg")

Point = tuple[int, int]


def _corners(cell: Cell) -> tuple[Point, Point, Point]:
    """Counter-clockwise corners in lattice coordinates."""
    t, a, b = cell
    if t == "U":
        return (a, b), (a + 1, b), (a, b + 1)
    return (a + 1, b), (a + 1, b + 1), (a, b + 1)


def region_outline(cells: tuple[Cell, ...]) -> list[Point]:
    """Boundary of a simply connected union of cells, counter-clockwise."""
    directed = set()
    for c in cells:
        p = _corners(c)
        for i in range(3):
            seg = (p[i], p[(i + 1) % 3])
            if (seg[1], seg[0]) in directed:
                directed.discard((seg[1], seg[0]))
            else:
                directed.add(seg)
    nxt = dict(directed)
    if len(nxt) != len(directed):
        raise ValueError(f"region {cells} is not a disk")
    start = min(nxt)
    loop = [start]
    cur = nxt[start]
    while cur != start:
        loop.append(cur)
        cur = nxt[cur]
    # drop collinear corners
    out = []
    for i, p in enumerate(loop):
        q, r = loop[i - 1], loop[(i + 1) % len(loop)]
        if (p[0] - q[0]) * (r[1] - p[1]) != (p[1] - q[1]) * (r[0] - p[0]):
            out.append(p)
    return out


def cell_colors(p: Puzzle) -> dict[Cell, str]:
    return {c: color for pl in p.placements for color, cells in pl.shape.regions for c in cells}


def render_svg(p: Puzzle, unit: float = 40.0) -> str:
    h = unit * sqrt(3) / 2
    width, height = p.n * unit, p.n * h
    margin = unit / 2

    def xy(pt: Point) -> str:
        a, b = pt
        return f"{margin + (a + b / 2) * unit:.2f},{margin + height - b * h:.2f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + 2 * margin:.2f}" '
        f'height="{height + 2 * margin:.2f}" viewBox="0 0 {width + 2 * margin:.2f} {height + 2 * margin:.2f}">'
    ]
    for pl in p.placements:
        for color, cells in pl.shape.regions:
            pts = " ".join(xy(q) for q in region_outline(cells))
            lines.append(
                f'  <polygon points="{pts}" fill="{FILL[color]}" stroke="black" stroke-width="1" '
                f'data-piece="{pl.kind.value}" data-color="{color}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_ascii(p: Puzzle) -> str:
    """Two text rows per strip; up cells are 4 columns wide at their base."""
    colors = cell_colors(p)
    rows = []
    for b in range(p.n - 1, -1, -1):
        upper = [" "] * (4 * p.n + 2)
        lower = [" "] * (4 * p.n + 2)
        for a in range(p.n - b):
            x = 4 * a + 2 * b
            ch = CHAR[colors[("U", a, b)]]
            upper[x + 1: x + 4] = ["/", ch, "\\"]
            lower[x: x + 4] = ["/", ch, ch, "\\"]
            if a + b <= p.n - 2:
                upper[x + 4] = CHAR[colors[("D", a, b)]]
        rows.append("".join(upper).rstrip())
        rows.append("".join(lower).rstrip())
    return "\n".join(rows) + "\n"


def render_puzzle(p: Puzzle, fmt: str = "ascii") -> str:
    if fmt == "svg":
        return render_svg(p)
    if fmt == "ascii":
        return render_ascii(p)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def covered_cells(p: Puzzle) -> set[Cell]:
    return set(cell_colors(p))


def is_complete_drawing(p: Puzzle) -> bool:
    return covered_cells(p) == set(all_cells(p.n))
