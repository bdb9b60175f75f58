"""Edge-labeled genomic tableaux with stars, and their weighted enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterator, Mapping

from .grcore import BoxPos, GrIndex, Partition, ShapeError, SkewShape, manhattan
from .kring import EquivFactor, LaurentPoly, product_of

Pos = tuple[int, int]  # (row, col), 1-indexed


@dataclass(frozen=True, order=True)
class GeneLabel:
    family: int
    gene: int
    starred: bool = False

    def plain(self) -> "GeneLabel":
        return GeneLabel(self.family, self.gene)

    def __str__(self) -> str:
        return f"{self.family}_{self.gene}" + ("*" if self.starred else "")

    @classmethod
    def parse(cls, text: str) -> "GeneLabel":
        m = re.fullmatch(r"\s*(\d+)_(\d+)(\*?)\s*", text)
        if not m:
            raise ValueError(f"cannot read label {text!r}; expected like 2_1 or 1_3*")
        return cls(int(m.group(1)), int(m.group(2)), bool(m.group(3)))


@dataclass(frozen=True)
class Violation:
    condition: str
    where: str
    detail: str

    def __str__(self) -> str:
        return f"{self.condition} at {self.where}: {self.detail}"


@dataclass(frozen=True)
class GenomicTableau:
    n: int
    shape: SkewShape
    content: Partition
    boxes: tuple[tuple[Pos, GeneLabel], ...]
    edges: tuple[tuple[Pos, tuple[GeneLabel, ...]], ...]  # labels on the south edge of (row, col)

    @classmethod
    def build(
        cls,
        n: int,
        outer: Partition,
        inner: Partition,
        content: Partition,
        boxes: Mapping[Pos, GeneLabel],
        edges: Mapping[Pos, "tuple[GeneLabel, ...] | list[GeneLabel]"] = {},
    ) -> "GenomicTableau":
        return cls(
            n,
            SkewShape(outer, inner),
            content,
            tuple(sorted(boxes.items())),
            tuple(sorted((p, tuple(sorted(ls))) for p, ls in edges.items() if ls)),
        )

    @property
    def k(self) -> int:
        return self.shape.outer.k

    @cached_property
    def box_map(self) -> dict[Pos, GeneLabel]:
        return dict(self.boxes)

    @cached_property
    def edge_map(self) -> dict[Pos, tuple[GeneLabel, ...]]:
        return dict(self.edges)

    def all_labels(self) -> list[tuple[str, Pos, GeneLabel]]:
        out = [("box", p, lab) for p, lab in self.boxes]
        out += [("edge", p, lab) for p, ls in self.edges for lab in ls]
        return out

    @property
    def star_count(self) -> int:
        return sum(lab.starred for _, lab in self.boxes)

    def with_stars(self, cells: frozenset[Pos] | set[Pos]) -> "GenomicTableau":
        boxes = {p: GeneLabel(lab.family, lab.gene, p in cells) for p, lab in self.boxes}
        return GenomicTableau(self.n, self.shape, self.content, tuple(sorted(boxes.items())), self.edges)

    def unstarred(self) -> "GenomicTableau":
        return self.with_stars(frozenset())

    def key(self) -> tuple:
        return (
            tuple((p, (l.family, l.gene, l.starred)) for p, l in self.boxes),
            tuple((p, tuple((l.family, l.gene) for l in ls)) for p, ls in self.edges),
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "outer": list(self.shape.outer.parts),
            "inner": list(self.shape.inner.parts),
            "content": list(self.content.parts),
            "boxes": [{"row": r, "col": c, "label": str(lab)} for (r, c), lab in self.boxes],
            "edges": [{"row": r, "col": c, "labels": [str(x) for x in ls]} for (r, c), ls in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GenomicTableau":
        k = len(data["outer"])
        return cls.build(
            int(data["n"]),
            Partition.of(data["outer"], k),
            Partition.of(data["inner"], k),
            Partition.of(data["content"], k),
            {(b["row"], b["col"]): GeneLabel.parse(b["label"]) for b in data["boxes"]},
            {(e["row"], e["col"]): [GeneLabel.parse(x) for x in e["labels"]] for e in data["edges"]},
        )

    def to_text(self) -> str:
        """One line per row; ``##`` marks inner boxes, ``..`` cells outside, edge labels in braces after their cell."""
        lines = []
        inner, outer = self.shape.inner, self.shape.outer
        for r in range(1, self.k + 1):
            cells = []
            for c in range(1, self.n - self.k + 1):
                if c <= inner[r]:
                    txt = "##"
                elif c <= outer[r]:
                    txt = str(self.box_map[(r, c)])
                else:
                    txt = ".."
                under = self.edge_map.get((r, c))
                if under:
                    txt += "{" + ",".join(map(str, under)) + "}"
                cells.append(txt)
            lines.append(" ".join(cells).rstrip())
        return "\n".join(lines)


def edge_positions(inner: Partition, outer: Partition) -> list[Pos]:
    """South edges of boxes in row >= 1 lying between the two borders."""
    k = outer.k
    return [(r, c) for r in range(1, k + 1) for c in range(inner[r + 1] + 1, outer[r] + 1)]


# validation


def _column_sequence(tab: GenomicTableau, c: int) -> list[tuple[str, Pos, list[GeneLabel]]]:
    """Labeled slots of column ``c`` top to bottom."""
    seq = []
    for r in range(1, tab.k + 1):
        if (r, c) in tab.box_map:
            seq.append(("box", (r, c), [tab.box_map[(r, c)]]))
        if (r, c) in tab.edge_map:
            seq.append(("edge", (r, c), list(tab.edge_map[(r, c)])))
    return seq


def validate(tab: GenomicTableau, content: Partition | None = None) -> list[Violation]:
    """Every broken condition, each naming the offending position."""
    out: list[Violation] = []
    content = content if content is not None else tab.content
    cells = tab.shape.cells
    width = tab.n - tab.k

    for p in cells:
        if p not in tab.box_map:
            out.append(Violation("shape", f"box {p}", "box of the skew shape has no label"))
    for p, _ in tab.boxes:
        if p not in cells:
            out.append(Violation("shape", f"box {p}", "label outside the skew shape"))
    allowed_edges = set(edge_positions(tab.shape.inner, tab.shape.outer))
    for p, _ in tab.edges:
        if p not in allowed_edges:
            out.append(Violation("shape", f"edge {p}", "edge lies outside the fillable region"))

    # box labels strictly increase along rows
    for (r, c), lab in tab.boxes:
        right = tab.box_map.get((r, c + 1))
        if right is not None and not (lab.family, lab.gene) < (right.family, right.gene):
            out.append(Violation("row-strict", f"box {(r, c)}", f"{lab} is not left of a larger label {right}"))
    # families strictly increase down columns, edges included
    for c in range(1, width + 1):
        seq = _column_sequence(tab, c)
        for idx, (_, p, labs) in enumerate(seq):
            for _, q, lower in seq[idx + 1:]:
                for a in labs:
                    for b in lower:
                        if not a.family < b.family:
                            out.append(Violation("column-strict", f"{p} over {q}", f"{a} is not less than {b} below it"))
    # one label per family on an edge
    for p, labs in tab.edges:
        fams = [x.family for x in labs]
        if len(fams) != len(set(fams)):
            out.append(Violation("edge-distinct", f"edge {p}", "repeated label on one edge"))
        if any(x.starred for x in labs):
            out.append(Violation("star", f"edge {p}", "edge labels cannot be starred"))
    # genes weakly increase west to east within a family
    placed = [(p, lab) for _, p, lab in tab.all_labels()]
    for (p, a) in placed:
        for (q, b) in placed:
            if a.family == b.family and p[1] < q[1] and a.gene > b.gene:
                out.append(Violation("gene-order", f"{p} west of {q}", f"{a} lies west of {b}"))
    # too high
    for kind, (r, c), lab in tab.all_labels():
        if r < lab.family:
            out.append(Violation("too-high", f"{kind} {(r, c)}", f"{lab} sits above row {lab.family}"))
    # genes and content
    genes: dict[int, set[int]] = {}
    for _, _, lab in tab.all_labels():
        genes.setdefault(lab.family, set()).add(lab.gene)
    for fam, gs in sorted(genes.items()):
        if gs != set(range(1, max(gs) + 1)):
            out.append(Violation("genes", f"family {fam}", f"genes {sorted(gs)} do not form an initial interval"))
    got = [max(genes.get(i, {0})) for i in range(1, max(content.k, max(genes, default=0)) + 1)]
    want = [content[i] for i in range(1, len(got) + 1)]
    if got != want:
        out.append(Violation("content", "tableau", f"content {got} differs from {want}"))
    # stars
    for p, lab in tab.boxes:
        if lab.starred and not starrable(tab, p):
            out.append(Violation("star", f"box {p}", f"{lab} is starred but the box is not starrable"))
    if not out and not is_ballot(tab):
        out.append(Violation("ballot", "reading word", "some choice of gene representatives is not ballot"))
    return out


def reading_word(tab: GenomicTableau) -> list[GeneLabel]:
    """Columns right to left, each top to bottom, edge sets least to greatest."""
    word = []
    for c in range(tab.n - tab.k, 0, -1):
        for _, _, labs in _column_sequence(tab, c):
            word.extend(sorted(x.plain() for x in labs))
    return word


def is_ballot(tab: GenomicTableau) -> bool:
    """Ballot for every choice of one representative per gene.

    For a fixed family pair and prefix, the worst choice takes each gene of the
    larger family at its first occurrence and each gene of the smaller at its last.
    """
    word = reading_word(tab)
    first: dict[tuple[int, int], int] = {}
    last: dict[tuple[int, int], int] = {}
    for pos, lab in enumerate(word):
        g = (lab.family, lab.gene)
        first.setdefault(g, pos)
        last[g] = pos
    families = {f for f, _ in first}
    for i in families | {f - 1 for f in families if f > 1}:
        if i < 1:
            continue
        lo = sorted(p for (f, _), p in last.items() if f == i)
        hi = sorted(p for (f, _), p in first.items() if f == i + 1)
        # prefix ending at each position of a larger-family first occurrence
        for count, p in enumerate(hi, start=1):
            have = sum(1 for q in lo if q <= p)
            if count > have:
                return False
    return True


def is_ballot_bruteforce(tab: GenomicTableau) -> bool:
    word = reading_word(tab)
    occurrences: dict[tuple[int, int], list[int]] = {}
    for pos, lab in enumerate(word):
        occurrences.setdefault((lab.family, lab.gene), []).append(pos)
    genes = sorted(occurrences)
    for choice in product(*(occurrences[g] for g in genes)):
        chosen = sorted(zip(choice, (g[0] for g in genes)))
        counts: dict[int, int] = {}
        for _, fam in chosen:
            counts[fam] = counts.get(fam, 0) + 1
            if fam > 1 and counts[fam] > counts.get(fam - 1, 0):
                return False
    return True


def starrable(tab: GenomicTableau, cell: Pos) -> bool:
    lab = tab.box_map.get(cell)
    if lab is None:
        return False
    r, c = cell
    right = tab.box_map.get((r, c + 1))
    nxt = right is not None and right.family == lab.family and right.gene == lab.gene + 1
    return r > lab.family and not nxt


def starrable_cells(tab: GenomicTableau) -> list[Pos]:
    return [p for p, _ in tab.boxes if starrable(tab, p)]


# weights


def _far_index(r: int, lab: GeneLabel, content: Partition, man: int) -> int:
    return r - lab.family + content[lab.family] - lab.gene + 1 + man


def tableau_factors(tab: GenomicTableau) -> list[EquivFactor]:
    content, n, k = tab.content, tab.n, tab.k
    out = []
    for (r, c), labs in tab.edges:
        man = manhattan(BoxPos(r, c), n, k)
        out.extend(EquivFactor(man, _far_index(r, lab, content, man)) for lab in labs)
    for (r, c), lab in tab.boxes:
        if lab.starred:
            man = manhattan(BoxPos(r, c), n, k)
            out.append(EquivFactor(man + 1, _far_index(r, lab, content, man)))
    return out


def sign_exponent(tab: GenomicTableau) -> int:
    labels = len(tab.boxes) + sum(len(ls) for _, ls in tab.edges)
    return labels + tab.star_count - tab.content.size


def tableau_weight(tab: GenomicTableau) -> LaurentPoly:
    return product_of(tableau_factors(tab), tab.n, sign=(-1) ** sign_exponent(tab))


# enumeration


@dataclass
class _Search:
    n: int
    k: int
    inner: Partition
    outer: Partition
    content: Partition
    slots: list[tuple[str, Pos]] = field(default_factory=list)


def _slots(inner: Partition, outer: Partition, k: int, width: int) -> list[tuple[str, Pos]]:
    edges = set(edge_positions(inner, outer))
    out = []
    for c in range(1, width + 1):
        for r in range(1, k + 1):
            if inner[r] < c <= outer[r]:
                out.append(("box", (r, c)))
            if (r, c) in edges:
                out.append(("edge", (r, c)))
    return out


def _unstarred_fillings(n: int, inner: Partition, outer: Partition, content: Partition) -> Iterator[GenomicTableau]:
    k = outer.k
    width = n - k
    slots = _slots(inner, outer, k, width)
    families = [i for i in range(1, k + 1) if content[i] > 0]
    top_gene = {i: 0 for i in families}
    boxes: dict[Pos, GeneLabel] = {}
    edges: dict[Pos, tuple[GeneLabel, ...]] = {}
    col_fam: dict[int, int] = {}      # largest family placed so far in each column
    col_used: dict[int, set[int]] = {}  # families present in each column
    shape = SkewShape(outer, inner)

    def label_options(fam: int, c: int) -> list[int]:
        if fam in col_used.get(c, ()):
            return []
        m = top_gene[fam]
        opts = [m] if m >= 1 else []
        if m < content[fam]:
            opts.append(m + 1)
        return opts

    def place(fam: int, gene: int, c: int) -> tuple[int, int | None]:
        prev = top_gene[fam]
        top_gene[fam] = gene
        old = col_fam.get(c)
        col_fam[c] = fam
        col_used.setdefault(c, set()).add(fam)
        return prev, old

    def unplace(fam: int, c: int, prev: int, old: int | None) -> None:
        top_gene[fam] = prev
        col_used[c].discard(fam)
        if old is None:
            del col_fam[c]
        else:
            col_fam[c] = old

    def rec(idx: int) -> Iterator[GenomicTableau]:
        if idx == len(slots):
            if all(top_gene[i] == content[i] for i in families):
                tab = GenomicTableau(n, shape, content, tuple(sorted(boxes.items())), tuple(sorted(edges.items())))
                if is_ballot(tab):
                    yield tab
            return
        kind, (r, c) = slots[idx]
        floor = col_fam.get(c, 0)
        if kind == "box":
            left = boxes.get((r, c - 1))
            for fam in families:
                if fam <= floor or fam > r:
                    continue
                if left is not None and fam < left.family:
                    continue
                for gene in label_options(fam, c):
                    if left is not None and (fam, gene) <= (left.family, left.gene):
                        continue
                    prev, old = place(fam, gene, c)
                    boxes[(r, c)] = GeneLabel(fam, gene)
                    yield from rec(idx + 1)
                    del boxes[(r, c)]
                    unplace(fam, c, prev, old)
        else:
            choices = [f for f in families if floor < f <= r]
            yield from rec_edge(idx, r, c, choices, 0)

    def rec_edge(idx: int, r: int, c: int, choices: list[int], start: int) -> Iterator[GenomicTableau]:
        # labels on one edge are added in increasing family order
        yield from rec(idx + 1)
        for pos in range(start, len(choices)):
            fam = choices[pos]
            for gene in label_options(fam, c):
                prev, old = place(fam, gene, c)
                edges[(r, c)] = edges.get((r, c), ()) + (GeneLabel(fam, gene),)
                yield from rec_edge(idx, r, c, choices, pos + 1)
                rest = edges[(r, c)][:-1]
                if rest:
                    edges[(r, c)] = rest
                else:
                    del edges[(r, c)]
                unplace(fam, c, prev, old)

    yield from rec(0)


def enumerate_tableaux(n: int, inner: Partition, content: Partition, outer: Partition) -> list[GenomicTableau]:
    """All starred ballot tableaux of shape ``outer/inner`` and content ``content``, canonically sorted."""
    k = outer.k
    for p in (inner, content, outer):
        if p.k != k or p[1] > n - k:
            raise ShapeError(f"partition {p} does not fit the {k}x{n - k} rectangle")
    if not all(outer[r] >= inner[r] for r in range(1, k + 1)):
        return []
    out = []
    for tab in _unstarred_fillings(n, inner, outer, content):
        spots = starrable_cells(tab)
        for m in range(len(spots) + 1):
            for chosen in combinations(spots, m):
                out.append(tab.with_stars(frozenset(chosen)))
    return sorted(out, key=GenomicTableau.key)


def tableau_sum(first: GrIndex, second: GrIndex, target: GrIndex) -> LaurentPoly:
    """Signed weight sum over all tableaux of shape ``target/first`` with content ``second``."""
    total = LaurentPoly.zero(first.n)
    for tab in enumerate_tableaux(first.n, first.partition(), second.partition(), target.partition()):
        total = total + tableau_weight(tab)
    return total
