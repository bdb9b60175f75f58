"""Exhaustive agreement checks over every triple of a Grassmannian.

Work is split by the pair of input classes: puzzles are enumerated once per pair
with the bottom boundary left free, then every target is checked.  Pairs are
independent, so they can be farmed out to worker processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .grcore import GrIndex, all_indices
from .kring import LaurentPoly
from .oracle import oracle_coeffs
from .puzzle import enumerate_puzzles_free_bottom, puzzle_weight
from .tableau import tableau_sum
from .tracks import check_structure, verify_bijection


@dataclass
class TripleResult:
    triple: tuple[str, str, str]
    puzzle: LaurentPoly
    tableau: LaurentPoly
    oracle: LaurentPoly
    puzzle_count: int
    bijection_problems: list[str] = field(default_factory=list)
    structure_problems: list[str] = field(default_factory=list)
    # black up triangles per track, collected over all puzzles of the triple
    black_counts: list[list[int]] = field(default_factory=list)

    @property
    def problems(self) -> list[str]:
        return self.bijection_problems + self.structure_problems

    @property
    def agree(self) -> bool:
        return self.puzzle == self.tableau == self.oracle

    @property
    def ok(self) -> bool:
        return self.agree and not self.problems


def check_pair(first: str, second: str, bijection: bool = True, structure: bool = True) -> list[TripleResult]:
    a, b = GrIndex.parse(first), GrIndex.parse(second)
    by_bottom = enumerate_puzzles_free_bottom(a, b, "modified")
    oracle = oracle_coeffs(a, b)
    out = []
    for target in all_indices(a.n, a.k):
        puzzles = by_bottom.get(target.bits, [])
        total = LaurentPoly.zero(a.n)
        for p in puzzles:
            total = total + puzzle_weight(p)
        res = TripleResult(
            (a.bits, b.bits, target.bits), total, tableau_sum(a, b, target), oracle[target.bits], len(puzzles)
        )
        if bijection:
            res.bijection_problems.extend(verify_bijection(a, b, target, puzzles).problems)
        if structure:
            for p in puzzles:
                rep = check_structure(p)
                res.structure_problems.extend(rep.problems)
                res.black_counts.append(rep.black_counts)
        out.append(res)
    return out


def _job(args: tuple[str, str, bool, bool]) -> list[TripleResult]:
    return check_pair(*args)


def run_sweep(n: int, k: int, jobs: int = 1, bijection: bool = True, structure: bool = True) -> list[TripleResult]:
    """Results for every triple, in the order of :func:`all_indices` (first, second, target)."""
    pts = [g.bits for g in all_indices(n, k)]
    work = [(x, y, bijection, structure) for x in pts for y in pts]
    if jobs <= 1:
        chunks = map(_job, work)
        return [r for chunk in chunks for r in chunk]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for chunk in pool.map(_job, work) for r in chunk]
