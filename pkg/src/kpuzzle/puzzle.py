"""Puzzles: tilings of the side-``n`` triangle by labeled pieces.

Lattice coordinates ``(a, b)`` stand for the point ``a*(1, 0) + b*(1/2, sqrt(3)/2)``.
Unit cells are up triangles ``U(a, b)`` with corners (a,b), (a+1,b), (a,b+1) and
down triangles ``D(a, b)`` with corners (a+1,b), (a,b+1), (a+1,b+1).  Unit edges are
horizontal ``H(a, b)``, forward ``L(a, b)`` (the ``/`` from (a,b) to (a,b+1)) and
backward ``R(a, b)`` (the ``\\`` from (a+1,b) to (a,b+1)).

Boundary conventions: the left side carries the first index read bottom to top,
the right side the second index read top to bottom, the bottom the third index
read left to right.

Pieces carrying a gash present, to their neighbour, the label on the far side of
the gash.  With that convention every pair of adjacent pieces simply has to agree
on the shared edge.  The standalone gashed triangle of the original rule also
constrains an edge it does not own; those constraints are tracked separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Literal

from .grcore import GrIndex, ShapeError
from .kring import EquivFactor, LaurentPoly, product_of

Cell = tuple[str, int, int]  # ("U" | "D", a, b)
Edge = tuple[str, int, int]  # ("H" | "L" | "R", a, b)
Mode = Literal["modified", "original"]


class Kind(str, Enum):
    ZERO_UP = "zero_up"
    ZERO_DOWN = "zero_down"
    ONE_UP = "one_up"
    ONE_DOWN = "one_down"
    GREY_BACK = "grey_back"    # glued on a backward edge; horizontal sides 1
    GREY_FWD = "grey_fwd"      # glued on a forward edge; backward sides 1
    GREY_FLAT = "grey_flat"    # glued on a horizontal edge; forward sides 1
    GREEN = "green"            # equivariant diamond, never rotated
    GREEN_YELLOW = "green_yellow"
    PURPLE_GREEN = "purple_green"
    PURPLE_GREEN_YELLOW = "purple_green_yellow"
    PURPLE_GREY_BLACK = "purple_grey_black"
    PURPLE = "purple"          # standalone, original rule only


KV_COUNT = {
    Kind.GREEN_YELLOW: 1,
    Kind.PURPLE_GREEN: 1,
    Kind.PURPLE_GREEN_YELLOW: 2,
    Kind.PURPLE_GREY_BLACK: 1,
    Kind.PURPLE: 1,
}

MODIFIED_KINDS = (
    Kind.ZERO_UP, Kind.ZERO_DOWN, Kind.ONE_UP, Kind.ONE_DOWN,
    Kind.GREY_BACK, Kind.GREY_FWD, Kind.GREY_FLAT, Kind.GREEN,
    Kind.GREEN_YELLOW, Kind.PURPLE_GREEN, Kind.PURPLE_GREEN_YELLOW, Kind.PURPLE_GREY_BLACK,
)
ORIGINAL_KINDS = (
    Kind.ZERO_UP, Kind.ZERO_DOWN, Kind.ONE_UP, Kind.ONE_DOWN,
    Kind.GREY_BACK, Kind.GREY_FWD, Kind.GREY_FLAT, Kind.GREEN,
    Kind.GREEN_YELLOW, Kind.PURPLE,
)


@dataclass(frozen=True)
class Shape:
    """Footprint and presented outer labels of one placed piece."""

    cells: tuple[Cell, ...]
    edges: tuple[tuple[Edge, Cell, int], ...]  # (edge, owning cell, presented label)
    # colored sub-regions for drawing: (color name, cells)
    regions: tuple[tuple[str, tuple[Cell, ...]], ...]


def U(a: int, b: int) -> Cell:
    return ("U", a, b)


def D(a: int, b: int) -> Cell:
    return ("D", a, b)


def up_edges(a: int, b: int) -> tuple[Edge, Edge, Edge]:
    """Horizontal edge first, then the forward one."""
    return ("H", a, b), ("L", a, b), ("R", a, b)


def down_edges(a: int, b: int) -> tuple[Edge, Edge, Edge]:
    """Horizontal edge first, then the backward one."""
    return ("H", a, b + 1), ("R", a, b), ("L", a + 1, b)


@lru_cache(maxsize=None)
def shape_of(kind: Kind, a: int, b: int) -> Shape:
    """Geometry of ``kind`` placed at reference point ``(a, b)``."""
    if kind in (Kind.ZERO_UP, Kind.ONE_UP):
        lab = 1 if kind is Kind.ONE_UP else 0
        c = U(a, b)
        color = "black" if lab else "white"
        return Shape((c,), tuple((e, c, lab) for e in up_edges(a, b)), ((color, (c,)),))
    if kind in (Kind.ZERO_DOWN, Kind.ONE_DOWN):
        lab = 1 if kind is Kind.ONE_DOWN else 0
        c = D(a, b)
        color = "black" if lab else "white"
        return Shape((c,), tuple((e, c, lab) for e in down_edges(a, b)), ((color, (c,)),))
    if kind is Kind.GREY_BACK:
        u, d = U(a, b), D(a, b)
        return Shape(
            (u, d),
            ((("H", a, b), u, 1), (("L", a, b), u, 0), (("H", a, b + 1), d, 1), (("L", a + 1, b), d, 0)),
            (("grey", (u, d)),),
        )
    if kind is Kind.GREY_FWD:
        d, u = D(a, b), U(a + 1, b)
        return Shape(
            (d, u),
            ((("H", a, b + 1), d, 0), (("R", a, b), d, 1), (("H", a + 1, b), u, 0), (("R", a + 1, b), u, 1)),
            (("grey", (d, u)),),
        )
    if kind in (Kind.GREY_FLAT, Kind.GREEN):
        u, d = U(a, b + 1), D(a, b)
        slash, back = (1, 0) if kind is Kind.GREY_FLAT else (0, 1)
        # green: NW 0, NE 1, SW 1, SE 0
        return Shape(
            (u, d),
            (
                (("L", a, b + 1), u, slash),
                (("R", a, b + 1), u, back),
                (("R", a, b), d, back),
                (("L", a + 1, b), d, slash),
            ),
            (("grey" if kind is Kind.GREY_FLAT else "green", (u, d)),),
        )
    if kind is Kind.GREEN_YELLOW:
        u, d, y = U(a, b + 1), D(a, b), D(a, b + 1)
        return Shape(
            (u, y, d),
            (
                (("L", a, b + 1), u, 0),
                (("R", a, b), d, 1),
                (("L", a + 1, b), d, 1),       # gash below the yellow
                (("H", a, b + 2), y, 1),
                (("L", a + 1, b + 1), y, 0),   # gashed side of the yellow
            ),
            (("green", (u, d)), ("yellow", (y,))),
        )
    if kind in (Kind.PURPLE_GREEN, Kind.PURPLE_GREEN_YELLOW):
        p, u, d = D(a, b), U(a + 1, b), D(a + 1, b - 1)
        edges = [
            (("H", a, b + 1), p, 0),
            (("R", a, b), p, 1),               # gashed side of the purple
            (("R", a + 1, b - 1), d, 0),       # gash below the purple
        ]
        regions = [("purple", (p,)), ("green", (u, d))]
        if kind is Kind.PURPLE_GREEN:
            edges += [(("R", a + 1, b), u, 1), (("L", a + 2, b - 1), d, 0)]
            cells = (p, u, d)
        else:
            y = D(a + 1, b)
            edges += [(("H", a + 1, b + 1), y, 1), (("L", a + 2, b), y, 0), (("L", a + 2, b - 1), d, 1)]
            regions.append(("yellow", (y,)))
            cells = (p, u, y, d)
        return Shape(cells, tuple(edges), tuple(regions))
    if kind is Kind.PURPLE_GREY_BLACK:
        p, u, g, k = D(a, b), U(a + 1, b), D(a + 1, b), D(a + 1, b - 1)
        return Shape(
            (p, u, g, k),
            (
                (("H", a, b + 1), p, 0),
                (("R", a, b), p, 1),
                (("H", a + 1, b + 1), g, 1),
                (("L", a + 2, b), g, 0),
                (("L", a + 2, b - 1), k, 1),
                (("R", a + 1, b - 1), k, 0),
            ),
            (("purple", (p,)), ("grey", (u, g)), ("black", (k,))),
        )
    if kind is Kind.PURPLE:
        p = D(a, b)
        return Shape(
            (p,),
            ((("H", a, b + 1), p, 0), (("R", a, b), p, 1), (("L", a + 1, b), p, 0)),
            (("purple", (p,)),),
        )
    raise ValueError(kind)


def external_gash(kind: Kind, a: int, b: int) -> tuple[Edge, int, int] | None:
    """For the standalone purple: (edge, label seen from its left, label seen from its right)."""
    if kind is Kind.PURPLE:
        return ("R", a + 1, b - 1), 0, 1
    return None


def own_gashes(kind: Kind, a: int, b: int) -> tuple[Edge, ...]:
    if kind is Kind.PURPLE:
        return (("R", a, b),)
    if kind is Kind.GREEN_YELLOW:
        return (("L", a + 1, b), ("L", a + 1, b + 1))
    return ()


@dataclass(frozen=True, order=True)
class Placement:
    kind: Kind
    a: int
    b: int

    @cached_property
    def shape(self) -> Shape:
        return shape_of(self.kind, self.a, self.b)

    def diamond(self) -> tuple[int, int] | None:
        """Lattice point at the middle of the equivariant diamond's horizontal diagonal."""
        if self.kind in (Kind.GREEN, Kind.GREEN_YELLOW):
            return (self.a, self.b + 1)
        if self.kind in (Kind.PURPLE_GREEN, Kind.PURPLE_GREEN_YELLOW):
            return (self.a + 1, self.b)
        return None

    def __str__(self) -> str:
        return f"{self.kind.value}@{self.a},{self.b}"


# lattice


def in_triangle(cell: Cell, n: int) -> bool:
    t, a, b = cell
    if a < 0 or b < 0:
        return False
    return a + b <= (n - 1 if t == "U" else n - 2)


def all_cells(n: int) -> list[Cell]:
    """Cells in scan order: top strip first, left to right within a strip."""
    out = []
    for b in range(n - 1, -1, -1):
        for a in range(0, n - b):
            out.append(U(a, b))
            if a + b <= n - 2:
                out.append(D(a, b))
    return out


def scan_key(cell: Cell) -> tuple[int, int, int]:
    t, a, b = cell
    return (-b, a, 0 if t == "U" else 1)


def edge_sides(edge: Edge) -> tuple[Cell, Cell]:
    """(left or lower-left side, right or upper side) cells of an edge."""
    t, a, b = edge
    if t == "H":
        return D(a, b - 1), U(a, b)
    if t == "L":
        return D(a - 1, b), U(a, b)
    return U(a, b), D(a, b)


def boundary_label(edge: Edge, n: int, left: str, right: str, bottom: str | None) -> int | None | bool:
    """Label imposed on a boundary edge, ``None`` if unconstrained, ``False`` if interior."""
    t, a, b = edge
    if t == "H" and b == 0:
        return None if bottom is None else int(bottom[a])
    if t == "L" and a == 0:
        return int(left[b])
    if t == "R" and a + b == n - 1:
        return int(right[n - 1 - b])
    return False


@dataclass(frozen=True)
class Puzzle:
    n: int
    left: str
    right: str
    bottom: str
    placements: tuple[Placement, ...]
    mode: Mode = "modified"

    @cached_property
    def kv_count(self) -> int:
        return sum(KV_COUNT.get(p.kind, 0) for p in self.placements)

    @cached_property
    def cell_owner(self) -> dict[Cell, Placement]:
        return {c: p for p in self.placements for c in p.shape.cells}

    def equiv_positions(self) -> list[tuple[int, int]]:
        return sorted(d for p in self.placements if (d := p.diamond()) is not None)

    def key(self) -> tuple:
        return tuple((p.kind.value, p.a, p.b) for p in self.placements)

    def __lt__(self, other: "Puzzle") -> bool:
        return self.key() < other.key()

    def counts(self) -> dict[str, int]:
        """Number of unit-piece regions of each color."""
        out: dict[str, int] = {}
        for p in self.placements:
            for color, _ in p.shape.regions:
                out[color] = out.get(color, 0) + 1
        return out


def equivariant_indices(n: int, diamond: tuple[int, int]) -> tuple[int, int]:
    """Bottom-side segments, counted from the right, hit by the two legs of a diamond.

    The diamond's center is the midpoint of ``H(x, y)``; the south-east leg lands in
    segment ``x + y`` from the left and the south-west leg in segment ``x``.
    """
    x, y = diamond
    return n - x - y, n - x


def diamond_height(diamond: tuple[int, int]) -> int:
    """Distance from the diamond's top corner down to the bottom side along a diagonal."""
    return diamond[1] + 1


def puzzle_factors(p: Puzzle) -> list[EquivFactor]:
    return [EquivFactor(*equivariant_indices(p.n, d)) for d in p.equiv_positions()]


def puzzle_weight(p: Puzzle) -> LaurentPoly:
    return product_of(puzzle_factors(p), p.n, sign=(-1) ** p.kv_count)


# search


@dataclass
class _State:
    n: int
    left: str
    right: str
    bottom: str | None
    kinds: tuple[Kind, ...]
    covered: set[Cell] = field(default_factory=set)
    labels: dict[Edge, dict[Cell, int]] = field(default_factory=dict)
    gashes: dict[Edge, tuple[int, int]] = field(default_factory=dict)
    gashed_edges: set[Edge] = field(default_factory=set)
    found: dict[int, int] = field(default_factory=dict)


def _candidates(cell: Cell, kinds: tuple[Kind, ...]) -> Iterator[Placement]:
    t, a, b = cell
    if t == "U":
        options = (
            (Kind.ZERO_UP, a, b), (Kind.ONE_UP, a, b), (Kind.GREY_BACK, a, b),
            (Kind.GREY_FLAT, a, b - 1), (Kind.GREEN, a, b - 1), (Kind.GREEN_YELLOW, a, b - 1),
        )
    else:
        options = (
            (Kind.ZERO_DOWN, a, b), (Kind.ONE_DOWN, a, b), (Kind.GREY_FWD, a, b),
            (Kind.PURPLE_GREEN, a, b), (Kind.PURPLE_GREEN_YELLOW, a, b),
            (Kind.PURPLE_GREY_BLACK, a, b), (Kind.PURPLE, a, b),
        )
    for kind, x, y in options:
        if kind in kinds:
            yield Placement(kind, x, y)


def _try_place(st: _State, pl: Placement) -> list | None:
    """Check ``pl`` against the partial filling; return an undo log or ``None``."""
    shape = pl.shape
    n = st.n
    for c in shape.cells:
        if c in st.covered or not in_triangle(c, n):
            return None
    gash = external_gash(pl.kind, pl.a, pl.b)
    own = own_gashes(pl.kind, pl.a, pl.b)
    if gash is not None:
        edge = gash[0]
        left, right = edge_sides(edge)
        if not (in_triangle(left, n) and in_triangle(right, n)):
            return None
        if edge in st.gashed_edges:
            return None
        seen = st.labels.get(edge, {})
        if seen.get(left, gash[1]) != gash[1] or seen.get(right, gash[2]) != gash[2]:
            return None
    if any(e in st.gashed_edges or e in st.gashes for e in own):
        return None
    new_bottom: dict[int, int] = {}
    for edge, cell, lab in shape.edges:
        bl = boundary_label(edge, n, st.left, st.right, st.bottom)
        if bl is not False:
            if bl is not None and bl != lab:
                return None
            if edge[0] == "H" and edge[2] == 0:
                if st.found.get(edge[1], lab) != lab:
                    return None
                new_bottom[edge[1]] = lab
            continue
        if edge in st.gashes:
            left, right = edge_sides(edge)
            want = st.gashes[edge][0] if cell == left else st.gashes[edge][1]
            if lab != want:
                return None
            continue
        for other, olab in st.labels.get(edge, {}).items():
            if other != cell and olab != lab:
                return None
    log: list = []
    for c in shape.cells:
        st.covered.add(c)
    log.append(("cells", shape.cells))
    for edge, cell, lab in shape.edges:
        st.labels.setdefault(edge, {})[cell] = lab
        log.append(("label", edge, cell))
    for a, lab in new_bottom.items():
        if a not in st.found:
            st.found[a] = lab
            log.append(("found", a))
    if gash is not None:
        st.gashes[gash[0]] = (gash[1], gash[2])
        st.gashed_edges.add(gash[0])
        log.append(("gash", gash[0]))
    for e in own:
        st.gashed_edges.add(e)
        log.append(("own", e))
    return log


def _undo(st: _State, log: list) -> None:
    for entry in reversed(log):
        tag = entry[0]
        if tag == "cells":
            for c in entry[1]:
                st.covered.discard(c)
        elif tag == "label":
            del st.labels[entry[1]][entry[2]]
        elif tag == "found":
            del st.found[entry[1]]
        elif tag == "gash":
            del st.gashes[entry[1]]
            st.gashed_edges.discard(entry[1])
        elif tag == "own":
            st.gashed_edges.discard(entry[1])


def _search(n: int, left: str, right: str, bottom: str | None, mode: Mode) -> Iterator[tuple[tuple[Placement, ...], str]]:
    kinds = MODIFIED_KINDS if mode == "modified" else ORIGINAL_KINDS
    st = _State(n, left, right, bottom, kinds)
    order = all_cells(n)
    chosen: list[Placement] = []

    def rec(pos: int) -> Iterator[tuple[tuple[Placement, ...], str]]:
        while pos < len(order) and order[pos] in st.covered:
            pos += 1
        if pos == len(order):
            yield tuple(sorted(chosen)), "".join(str(st.found[a]) for a in range(n))
            return
        for pl in _candidates(order[pos], kinds):
            log = _try_place(st, pl)
            if log is None:
                continue
            chosen.append(pl)
            yield from rec(pos + 1)
            chosen.pop()
            _undo(st, log)

    yield from rec(0)


def _check_triple(left: GrIndex, right: GrIndex, bottom: GrIndex | None) -> None:
    others = [right] + ([bottom] if bottom is not None else [])
    for x in others:
        if (x.n, x.k) != (left.n, left.k):
            raise ShapeError(f"boundary mismatch: {left} and {x} do not index the same Grassmannian")


NonlocalRule = Callable[[Puzzle, Placement], bool]


def nonlocal_top_line(p: Puzzle, pl: Placement) -> bool:
    """The horizontal edges right of the purple's top edge, on its line, read 0...01."""
    return _line_reads_zeros_then_one(p, pl.a + 1, pl.b + 1)


def nonlocal_bottom_line(p: Puzzle, pl: Placement) -> bool:
    """Same test on the line through the purple's bottom corner."""
    return _line_reads_zeros_then_one(p, pl.a + 1, pl.b)


def _line_reads_zeros_then_one(p: Puzzle, start: int, height: int) -> bool:
    labels = edge_labels(p)
    for a in range(start, p.n - height):
        lab = labels.get(("H", a, height))
        if lab is None:
            return False
        if lab == 1:
            return True
    return False


NONLOCAL_RULES: dict[str, NonlocalRule] = {
    "top-line": nonlocal_top_line,
    "bottom-line": nonlocal_bottom_line,
}


def enumerate_puzzles(
    left: GrIndex,
    right: GrIndex,
    bottom: GrIndex,
    mode: Mode = "modified",
    nonlocal_rule: str = "top-line",
) -> list[Puzzle]:
    """All fillings of the triangle with the given boundary, canonically sorted."""
    _check_triple(left, right, bottom)
    return _enumerate(left, right, bottom, mode, nonlocal_rule)


def enumerate_puzzles_free_bottom(
    left: GrIndex, right: GrIndex, mode: Mode = "modified", nonlocal_rule: str = "top-line"
) -> dict[str, list[Puzzle]]:
    """Puzzles for every bottom boundary at once, keyed by the bottom bit string."""
    _check_triple(left, right, None)
    out: dict[str, list[Puzzle]] = {}
    for p in _enumerate(left, right, None, mode, nonlocal_rule):
        out.setdefault(p.bottom, []).append(p)
    return out


def _enumerate(left: GrIndex, right: GrIndex, bottom: GrIndex | None, mode: Mode, nonlocal_rule: str) -> list[Puzzle]:
    n = left.n
    found = []
    rule = NONLOCAL_RULES[nonlocal_rule]
    for placements, bits in _search(n, left.bits, right.bits, None if bottom is None else bottom.bits, mode):
        if bits.count("1") != left.k:
            continue
        p = Puzzle(n, left.bits, right.bits, bits, placements, mode)
        if mode == "original" and not all(rule(p, pl) for pl in placements if pl.kind is Kind.PURPLE):
            continue
        found.append(p)
    return sorted(found, key=Puzzle.key)


def puzzle_sum(left: GrIndex, right: GrIndex, bottom: GrIndex, mode: Mode = "modified") -> LaurentPoly:
    total = LaurentPoly.zero(left.n)
    for p in enumerate_puzzles(left, right, bottom, mode):
        total = total + puzzle_weight(p)
    return total


# independent validation


def edge_labels(p: Puzzle) -> dict[Edge, int]:
    """Label of every edge as presented by its lower/left owner, for reading boundaries."""
    out: dict[Edge, int] = {}
    for pl in p.placements:
        for edge, _cell, lab in pl.shape.edges:
            out.setdefault(edge, lab)
    return out


def validate_puzzle(p: Puzzle) -> list[str]:
    """Re-check a finished puzzle edge by edge; returns a list of problems."""
    problems: list[str] = []
    n = p.n
    seen: dict[Cell, Placement] = {}
    for pl in p.placements:
        for c in pl.shape.cells:
            if not in_triangle(c, n):
                problems.append(f"{pl} leaves the triangle at {c}")
            if c in seen:
                problems.append(f"{c} covered by {seen[c]} and {pl}")
            seen[c] = pl
    missing = set(all_cells(n)) - set(seen)
    if missing:
        problems.append(f"uncovered cells {sorted(missing)}")
    allowed = MODIFIED_KINDS if p.mode == "modified" else ORIGINAL_KINDS
    for pl in p.placements:
        if pl.kind not in allowed:
            problems.append(f"{pl} is not a {p.mode} piece")
    presented: dict[Edge, dict[Cell, int]] = {}
    for pl in p.placements:
        for edge, cell, lab in pl.shape.edges:
            presented.setdefault(edge, {})[cell] = lab
    gashes = {}
    gashed: list[Edge] = []
    for pl in p.placements:
        g = external_gash(pl.kind, pl.a, pl.b)
        if g is not None:
            gashes[g[0]] = (g[1], g[2])
            gashed.append(g[0])
        gashed.extend(own_gashes(pl.kind, pl.a, pl.b))
    if len(gashed) != len(set(gashed)):
        problems.append("two gashes overlaid on one edge")
    for edge, sides in presented.items():
        bl = boundary_label(edge, n, p.left, p.right, p.bottom)
        if bl is not False:
            (lab,) = sides.values()
            if bl != lab:
                problems.append(f"boundary edge {edge} reads {lab}, expected {bl}")
            continue
        left, right = edge_sides(edge)
        if edge in gashes:
            want = dict(zip((left, right), gashes[edge]))
            for cell, lab in sides.items():
                if lab != want[cell]:
                    problems.append(f"gash on {edge} sees {lab} from {cell}")
            continue
        if len(set(sides.values())) > 1:
            problems.append(f"edge {edge} carries mismatched labels {sides}")
    for g in gashes:
        if not all(in_triangle(c, n) for c in edge_sides(g)):
            problems.append(f"gash {g} falls outside the triangle")
    return problems
