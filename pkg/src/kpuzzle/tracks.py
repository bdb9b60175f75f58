"""Tracks through modified puzzles and the bijection with starred genomic tableaux.

A track starts at a 1 on the bottom side and leaves through a 1 on the right
side.  It is recorded as a word in nine letters, one per piece it crosses:

    A1 grey rhombus glued on ``\\``   A4 green diamond        A7 green + yellow
    A2 black up triangle              A5 purple + green       A8 purple + grey + black
    A3 grey rhombus glued on ``/``    A6 black down triangle  A9 purple + green + yellow

Every track word has the shape ``boxes (edges startrow boxes)* edges`` where
``boxes = A1* A2``, ``edges = (A3|A4|A5)*`` and ``startrow = A6|A7|A8|A9``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .grcore import GrIndex, Partition, partition_to_bits
from .puzzle import (
    Cell,
    Edge,
    Kind,
    Placement,
    Puzzle,
    U,
    D,
    all_cells,
    diamond_height,
    enumerate_puzzles,
    equivariant_indices,
    puzzle_factors,
    puzzle_weight,
    validate_puzzle,
)
from .tableau import GeneLabel, GenomicTableau, enumerate_tableaux, tableau_factors, tableau_weight, validate


class Letter(str, Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A6 = "A6"
    A7 = "A7"
    A8 = "A8"
    A9 = "A9"


STARTROW = frozenset({Letter.A6, Letter.A7, Letter.A8, Letter.A9})
EDGE_LETTERS = frozenset({Letter.A3, Letter.A4, Letter.A5})

# entry via the south edge of an up cell
_FROM_BELOW = {Kind.GREY_BACK: Letter.A1, Kind.ONE_UP: Letter.A2}
# entry via the west ``\`` edge of a down cell, keyed by the kind anchored at that cell
_FROM_WEST = {
    Kind.GREY_FWD: Letter.A3,
    Kind.GREEN: Letter.A4,
    Kind.PURPLE_GREEN: Letter.A5,
    Kind.ONE_DOWN: Letter.A6,
    Kind.GREEN_YELLOW: Letter.A7,
    Kind.PURPLE_GREY_BLACK: Letter.A8,
    Kind.PURPLE_GREEN_YELLOW: Letter.A9,
}
KIND_OF = {v: k for k, v in {**_FROM_BELOW, **_FROM_WEST}.items()}


class TrackError(ValueError):
    """Raised when a track cannot be read off a puzzle or built from a tableau."""


@dataclass(frozen=True)
class Step:
    letter: Letter
    placement: Placement


@dataclass(frozen=True)
class Track:
    index: int
    start: int  # bottom segment, 0-based from the left
    steps: tuple[Step, ...]

    @property
    def word(self) -> tuple[Letter, ...]:
        return tuple(s.letter for s in self.steps)

    def word_text(self) -> str:
        return format_word(self.word)


def format_word(word: Iterable[Letter]) -> str:
    return ".".join(x.value for x in word)


def parse_word(text: str) -> tuple[Letter, ...]:
    """Read ``A1.A1.A2`` or compressed forms like ``A1^3 A2``."""
    out: list[Letter] = []
    for tok in re.split(r"[\s.,]+", text.strip()):
        if not tok:
            continue
        m = re.fullmatch(r"(A[1-9])(?:\^(\d+))?", tok)
        if not m:
            raise TrackError(f"unknown track letter {tok!r}")
        out.extend([Letter(m.group(1))] * int(m.group(2) or 1))
    return tuple(out)


# grammar


@dataclass(frozen=True)
class Segment:
    role: str  # "boxes" | "edges" | "startrow"
    letters: tuple[Letter, ...]

    def __str__(self) -> str:
        return f"{self.role}={format_word(self.letters) or 'ε'}"


def parse_track(word: Iterable[Letter]) -> list[Segment]:
    """Unique segmentation against the track grammar; raises with the first bad position."""
    w = tuple(word)
    segs: list[Segment] = []
    pos = 0

    def take_boxes() -> None:
        nonlocal pos
        start = pos
        while pos < len(w) and w[pos] is Letter.A1:
            pos += 1
        if pos >= len(w) or w[pos] is not Letter.A2:
            raise TrackError(f"position {pos}: expected A1 or A2, found {w[pos].value if pos < len(w) else 'end'}")
        pos += 1
        segs.append(Segment("boxes", w[start:pos]))

    take_boxes()
    while True:
        start = pos
        while pos < len(w) and w[pos] in EDGE_LETTERS:
            pos += 1
        segs.append(Segment("edges", w[start:pos]))
        if pos == len(w):
            return segs
        if w[pos] not in STARTROW:
            raise TrackError(f"position {pos}: expected an edge or row-start letter, found {w[pos].value}")
        segs.append(Segment("startrow", (w[pos],)))
        pos += 1
        take_boxes()


# extraction


def _exit(pl: Placement, letter: Letter) -> tuple[str, int, int]:
    """Where the track goes next: ("below", x, y) enters U(x, y); ("west", a, b) enters D(a, b)."""
    a, b = pl.a, pl.b
    return {
        Letter.A1: ("below", a, b + 1),
        Letter.A2: ("west", a, b),
        Letter.A3: ("west", a + 1, b),
        Letter.A4: ("west", a, b + 1),
        Letter.A5: ("west", a + 1, b),
        Letter.A6: ("below", a, b + 1),
        Letter.A7: ("below", a, b + 2),
        Letter.A8: ("below", a + 1, b + 1),
        Letter.A9: ("below", a + 1, b + 1),
    }[letter]


def extract_tracks(puz: Puzzle) -> list[Track]:
    owner = puz.cell_owner
    n = puz.n
    starts = [a for a in range(n) if puz.bottom[a] == "1"]
    tracks = []
    used: set[Placement] = set()
    for i, a0 in enumerate(starts, start=1):
        steps = []
        state = ("below", a0, 0)
        while True:
            side, x, y = state
            if side == "west" and x + y == n - 1:
                break
            cell = U(x, y) if side == "below" else D(x, y)
            pl = owner.get(cell)
            if pl is None:
                raise TrackError(f"track {i} leaves the triangle at {cell}")
            table = _FROM_BELOW if side == "below" else _FROM_WEST
            letter = table.get(pl.kind)
            anchor_ok = (pl.a, pl.b) == (x, y)
            if letter is None or not anchor_ok:
                raise TrackError(f"track {i} cannot pass {pl} entering {cell} from the {side}")
            if pl in used:
                raise TrackError(f"tracks meet at {pl}")
            used.add(pl)
            steps.append(Step(letter, pl))
            state = _exit(pl, letter)
        tracks.append(Track(i, a0, tuple(steps)))
    return tracks


# boundary sequences


def _left_edges(st: Step) -> list[Edge]:
    a, b = st.placement.a, st.placement.b
    return {
        Letter.A1: [("L", a, b)],
        Letter.A2: [("L", a, b)],
        Letter.A3: [("H", a, b + 1)],
        Letter.A4: [("L", a, b + 1)],
        Letter.A5: [("H", a, b + 1)],
        Letter.A6: [],
        Letter.A7: [("L", a, b + 1)],
        Letter.A8: [("H", a, b + 1)],
        Letter.A9: [("H", a, b + 1)],
    }[st.letter]


def _right_edges(st: Step) -> list[Edge]:
    a, b = st.placement.a, st.placement.b
    return {
        Letter.A1: [("L", a + 1, b)],
        Letter.A2: [],
        Letter.A3: [("H", a + 1, b)],
        Letter.A4: [("L", a + 1, b)],
        Letter.A5: [("L", a + 2, b - 1)],
        Letter.A6: [("L", a + 1, b)],
        Letter.A7: [("L", a + 1, b), ("L", a + 1, b + 1)],
        Letter.A8: [("L", a + 2, b - 1), ("L", a + 2, b)],
        Letter.A9: [("L", a + 2, b - 1), ("L", a + 2, b)],
    }[st.letter]


def _read(tr: Track, puz: Puzzle, edges_of) -> str:
    out = []
    for st in tr.steps:
        labels = {e: lab for e, _c, lab in st.placement.shape.edges}
        out.extend(str(labels[e]) for e in edges_of(st))
    return "".join(out)


def left_sequence(tr: Track, puz: Puzzle) -> str:
    """Bottom labels west of the track, then the ``/`` and ``-`` edges along its west side."""
    return puz.bottom[: tr.start] + _read(tr, puz, _left_edges)


def right_sequence(tr: Track, puz: Puzzle) -> str:
    """Bottom labels up to the track's start, then the ``/`` and ``-`` edges along its east side."""
    return puz.bottom[: tr.start + 1] + _read(tr, puz, _right_edges)


# rays


@dataclass(frozen=True)
class Ray:
    black: Placement
    greys: tuple[Placement, ...]
    terminus: tuple[str, object]  # ("boundary", height) or ("piece", Placement)
    end_edge: Edge


def nwray(puz: Puzzle, black: Placement) -> Ray:
    """Stack of flat grey rhombi running north-west from a black up triangle."""
    if black.kind is not Kind.ONE_UP:
        raise TrackError(f"{black} is not a black up triangle")
    owner = puz.cell_owner
    x, y = black.a, black.b
    greys = []
    while True:
        edge = ("L", x, y)
        if x == 0:
            return Ray(black, tuple(greys), ("boundary", y), edge)
        pl = owner[D(x - 1, y)]
        if pl.kind is Kind.GREY_FLAT and (pl.a, pl.b) == (x - 1, y):
            greys.append(pl)
            x, y = x - 1, y + 1
            continue
        return Ray(black, tuple(greys), ("piece", pl), edge)


# puzzle to tableau


_NEW_GENE = {Letter.A1, Letter.A4, Letter.A7}
_BOX = {Letter.A1, Letter.A7, Letter.A8, Letter.A9}
_STAR = {Letter.A7, Letter.A9}


def puzzle_to_tableau(puz: Puzzle) -> GenomicTableau:
    n = puz.n
    left = GrIndex.parse(puz.left)
    k = left.k
    content = GrIndex.parse(puz.right).partition()
    boxes: dict[tuple[int, int], GeneLabel] = {}
    edges: dict[tuple[int, int], list[GeneLabel]] = {}
    for tr in extract_tracks(puz):
        i = tr.index
        gene = content[i] + 1
        ones = i - 1
        strip = tr.start + 1
        for st in tr.steps:
            letter = st.letter
            if letter is Letter.A6:
                continue
            if letter is Letter.A2:
                ones += 1
                strip += 1
                continue
            col = n - k - (strip - ones) + 1
            strip += 1
            if letter is Letter.A3:
                continue
            if letter in _NEW_GENE:
                gene -= 1
            if letter in _BOX:
                pos = (ones + 1, col)
                if pos in boxes:
                    raise TrackError(f"two box labels land in {pos}")
                boxes[pos] = GeneLabel(i, gene, letter in _STAR)
            else:
                edges.setdefault((ones, col), []).append(GeneLabel(i, gene))
    tab = GenomicTableau.build(
        n, GrIndex.parse(puz.bottom).partition(), left.partition(), content, boxes, edges
    )
    return tab


# tableau to puzzle


def _outer_after(tab: GenomicTableau, families: int) -> Partition:
    """Outer shape of the labels of families ``1..families`` together with the inner shape."""
    k = tab.k
    rows = list(tab.shape.inner.parts)
    for (r, c), lab in tab.boxes:
        if lab.family <= families:
            rows[r - 1] = max(rows[r - 1], c)
    return Partition(tuple(rows)) if all(a >= b for a, b in zip(rows, rows[1:])) else Partition.of(rows, k)


def family_word(tab: GenomicTableau, i: int) -> tuple[Letter, ...]:
    """Letters of the family-``i`` track, read right to left from row ``i`` down."""
    k = tab.k
    content = tab.content
    prev = _outer_after(tab, i - 1)
    boxes = {p: lab for p, lab in tab.boxes if lab.family == i}
    edges = {p: lab for p, ls in tab.edges for lab in ls if lab.family == i}
    last = content[i] + 1
    word: list[Letter] = []

    def fresh(lab: GeneLabel) -> bool:
        nonlocal last
        if lab.gene == last - 1:
            last -= 1
            return True
        if lab.gene == last:
            return False
        raise TrackError(f"label {lab} breaks the gene order of family {i}")

    def row_boxes(r: int) -> list[int]:
        return sorted((c for (rr, c) in boxes if rr == r), reverse=True)

    for c in row_boxes(i):
        if not fresh(boxes[(i, c)]) or boxes[(i, c)].starred:
            raise TrackError(f"row {i} label {boxes[(i, c)]} must be a new unstarred gene")
        word.append(Letter.A1)
    word.append(Letter.A2)
    for r in range(i + 1, k + 2):
        cols = range(prev[r - 1], prev[r], -1) if r <= k else range(prev[k], 0, -1)
        in_row = row_boxes(r) if r <= k else []
        rightmost = in_row[0] if in_row else None
        for c in cols:
            if rightmost is not None and c <= rightmost:
                if c == rightmost:
                    lab = boxes[(r, c)]
                    new = fresh(lab)
                    if lab.starred:
                        word.append(Letter.A7 if new else Letter.A9)
                    elif new:
                        word += [Letter.A6, Letter.A1]
                    else:
                        word.append(Letter.A8)
                else:
                    lab = boxes.get((r, c))
                    if lab is None:
                        raise TrackError(f"family {i} boxes in row {r} are not contiguous")
                    if not fresh(lab) or lab.starred:
                        raise TrackError(f"{lab} at {(r, c)} must be a new unstarred gene")
                    word.append(Letter.A1)
                continue
            lab = edges.get((r - 1, c))
            if lab is None:
                word.append(Letter.A3)
            else:
                word.append(Letter.A4 if fresh(lab) else Letter.A5)
        if r <= k:
            if rightmost is None:
                word.append(Letter.A6)
            word.append(Letter.A2)
    if last != 1 and content[i] > 0:
        raise TrackError(f"family {i} does not use every gene")
    return tuple(word)


def tableau_to_puzzle(tab: GenomicTableau) -> Puzzle:
    n, k = tab.n, tab.k
    left = partition_to_bits(tab.shape.inner, n, k).bits
    right = partition_to_bits(tab.content, n, k).bits
    bottom = partition_to_bits(tab.shape.outer, n, k).bits
    placed: dict[Cell, Placement] = {}
    placements: list[Placement] = []
    blacks: list[Placement] = []

    def put(pl: Placement) -> None:
        for c in pl.shape.cells:
            if c in placed:
                raise TrackError(f"{pl} overlaps {placed[c]}")
            placed[c] = pl
        placements.append(pl)

    starts = [a for a in range(n) if bottom[a] == "1"]
    for i in range(1, k + 1):
        state = ("below", starts[i - 1], 0)
        for letter in family_word(tab, i):
            side, x, y = state
            if side == "west" and x + y == n - 1:
                raise TrackError(f"track {i} reaches the right side before its word ends")
            if (side == "below") != (letter in _FROM_BELOW.values()):
                raise TrackError(f"track {i}: {letter.value} cannot be entered from the {side}")
            pl = Placement(KIND_OF[letter], x, y)
            put(pl)
            if letter is Letter.A2:
                blacks.append(pl)
            state = _exit(pl, letter)
        side, x, y = state
        if not (side == "west" and x + y == n - 1):
            raise TrackError(f"track {i} does not end on the right side")
    for black in blacks:
        x, y = black.a, black.b
        while x > 0 and D(x - 1, y) not in placed:
            put(Placement(Kind.GREY_FLAT, x - 1, y))
            x, y = x - 1, y + 1
    for c in all_cells(n):
        if c not in placed:
            put(Placement(Kind.ZERO_UP if c[0] == "U" else Kind.ZERO_DOWN, c[1], c[2]))
    puz = Puzzle(n, left, right, bottom, tuple(sorted(placements)), "modified")
    problems = validate_puzzle(puz)
    if problems:
        raise TrackError("constructed filling is not a puzzle: " + "; ".join(problems[:3]))
    return puz


# verification


@dataclass
class BijectionReport:
    triple: tuple[str, str, str]
    puzzle_count: int
    tableau_count: int
    matched: int
    weight_equal: bool
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_json(self) -> dict:
        return {
            "triple": list(self.triple),
            "counts": {"puzzles": self.puzzle_count, "tableaux": self.tableau_count, "matched": self.matched},
            "weight_equal": self.weight_equal,
            "ok": self.ok,
            "problems": self.problems,
        }


def _factor_key(fs) -> list[tuple[int, int]]:
    return sorted((f.a, f.b) for f in fs)


def verify_bijection(
    first: GrIndex, second: GrIndex, target: GrIndex, puzzles: list[Puzzle] | None = None
) -> BijectionReport:
    """Check that the two maps are mutually inverse and weight-preserving on one triple.

    ``puzzles`` may be passed in when the caller already enumerated them.
    """
    if puzzles is None:
        puzzles = enumerate_puzzles(first, second, target, "modified")
    tableaux = enumerate_tableaux(first.n, first.partition(), second.partition(), target.partition())
    problems: list[str] = []
    images = {}
    weights_ok = True
    for puz in puzzles:
        try:
            tab = puzzle_to_tableau(puz)
        except TrackError as exc:
            problems.append(f"puzzle_to_tableau failed on {puz.key()}: {exc}")
            continue
        bad = validate(tab)
        if bad:
            problems.append(f"puzzle_to_tableau image invalid: {bad[0]}")
        if puzzle_weight(puz) != tableau_weight(tab) or _factor_key(puzzle_factors(puz)) != _factor_key(tableau_factors(tab)):
            weights_ok = False
            problems.append(f"weight mismatch on {tab.to_text()!r}")
        try:
            back = tableau_to_puzzle(tab)
        except TrackError as exc:
            problems.append(f"tableau_to_puzzle failed on puzzle_to_tableau image: {exc}")
        else:
            if back.key() != puz.key():
                problems.append("tableau_to_puzzle(puzzle_to_tableau(puz)) differs from puz")
        images[tab.key()] = puz
    keys = {tab.key() for tab in tableaux}
    if set(images) != keys:
        problems.append(f"puzzle_to_tableau image has {len(images)} tableaux, enumeration has {len(keys)}")
    for tab in tableaux:
        try:
            puz = tableau_to_puzzle(tab)
            if puzzle_to_tableau(puz).key() != tab.key():
                problems.append("puzzle_to_tableau(tableau_to_puzzle(tab)) differs from tab")
        except TrackError as exc:
            problems.append(f"tableau_to_puzzle failed: {exc}")
    matched = len(set(images) & keys)
    return BijectionReport((first.bits, second.bits, target.bits), len(puzzles), len(tableaux), matched, weights_ok, problems)


def puzzles_via_tableaux(first: GrIndex, second: GrIndex, target: GrIndex) -> list[Puzzle]:
    """Second generator: every puzzle obtained as an image of the tableau enumeration."""
    tableaux = enumerate_tableaux(first.n, first.partition(), second.partition(), target.partition())
    return sorted((tableau_to_puzzle(tab) for tab in tableaux), key=Puzzle.key)


# structural properties


def _south_east_edge(st: Step) -> Edge:
    """Edge where a row-start piece meets the ray of the next track."""
    a, b = st.placement.a, st.placement.b
    if st.letter in (Letter.A6, Letter.A7):
        return ("L", a + 1, b)
    return ("L", a + 2, b - 1)


@dataclass
class StructureReport:
    problems: list[str]
    black_counts: list[int]  # black up triangles per track, track 1 first


def check_structure(puz: Puzzle) -> StructureReport:
    """Every structural property of one puzzle that holds without the oracle; returns the violations."""
    problems: list[str] = []
    n = puz.n
    tracks = extract_tracks(puz)
    k = len(tracks)
    for tr in tracks:
        try:
            parse_track(tr.word)
        except TrackError as exc:
            problems.append(f"track {tr.index} word {tr.word_text()} rejected: {exc}")
    lefts = [left_sequence(tr, puz) for tr in tracks]
    rights = [right_sequence(tr, puz) for tr in tracks]
    if k:
        if lefts[0] != puz.left:
            problems.append(f"first left sequence {lefts[0]} differs from the left boundary {puz.left}")
        if rights[-1] != puz.bottom:
            problems.append(f"last right sequence {rights[-1]} differs from the bottom {puz.bottom}")
    for i in range(1, k):
        if lefts[i] != rights[i - 1]:
            problems.append(f"left sequence of track {i + 1} differs from right sequence of track {i}")
    tab = puzzle_to_tableau(puz)
    for i, seq in enumerate(lefts, start=1):
        shape = _outer_after(tab, i - 1)
        if seq != partition_to_bits(shape, n, k).bits:
            problems.append(f"left sequence of track {i} is not the shape of families below {i}")
    blacks = [[st.placement for st in tr.steps if st.letter is Letter.A2] for tr in tracks]
    starts = [[st for st in tr.steps if st.letter in STARTROW] for tr in tracks]
    if blacks:
        ones = [y for y in range(n) if puz.left[y] == "1"]
        ends = []
        for bl in blacks[0]:
            ray = nwray(puz, bl)
            ends.append(ray.terminus[1] if ray.terminus[0] == "boundary" else None)
        if ends != ones:
            problems.append(f"rays of track 1 end at heights {ends}, left boundary 1s are at {ones}")
    for i in range(1, k):
        if len(blacks[i]) != len(starts[i - 1]):
            problems.append(f"track {i + 1} has {len(blacks[i])} black triangles, track {i} has {len(starts[i - 1])} row starts")
            continue
        for bl, st in zip(blacks[i], starts[i - 1]):
            ray = nwray(puz, bl)
            if ray.terminus != ("piece", st.placement):
                problems.append(f"ray from {bl} ends at {ray.terminus}, expected {st.placement}")
            _, x, y = _south_east_edge(st)
            if x + y != bl.a + bl.b or not x <= bl.a:
                problems.append(f"{st.placement} is not on the north-west diagonal of {bl}")
    for pl in puz.placements:
        d = pl.diamond()
        if d is None:
            continue
        low, high = equivariant_indices(n, d)
        if high != low + diamond_height(d) - 1:
            problems.append(f"diamond at {d} has indices {low},{high} and height {diamond_height(d)}")
    return StructureReport(problems, [len(b) for b in blacks])
