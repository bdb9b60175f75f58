"""Non-equivariant K-theory structure constants from set-valued tableaux.

Deliberately shares nothing with the equivariant code paths beyond the
bit/partition conversion.  Grothendieck polynomials are expanded in ``k``
variables, products are decomposed by peeling off the lowest-degree leading
partition, and partitions leaving the ``k`` by ``n-k`` box are dropped.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from itertools import combinations

from .grcore import GrIndex, all_indices, partition_to_bits

Mono = tuple[int, ...]
Poly = dict[Mono, int]


def _cells(shape: tuple[int, ...]) -> list[tuple[int, int]]:
    return [(r, c) for r, length in enumerate(shape) for c in range(length)]


@lru_cache(maxsize=None)
def grothendieck_poly(shape: tuple[int, ...], nvars: int) -> tuple[tuple[Mono, int], ...]:
    """Signed sum over set-valued tableaux of ``shape`` with entries in ``1..nvars``."""
    shape = tuple(p for p in shape if p)
    cells = _cells(shape)
    size = len(cells)
    subsets = [frozenset(s) for m in range(1, nvars + 1) for s in combinations(range(1, nvars + 1), m)]
    out: Poly = defaultdict(int)
    filling: dict[tuple[int, int], frozenset[int]] = {}

    def rec(i: int) -> None:
        if i == size:
            mono = [0] * nvars
            total = 0
            for s in filling.values():
                for v in s:
                    mono[v - 1] += 1
                total += len(s)
            out[tuple(mono)] += (-1) ** (total - size)
            return
        r, c = cells[i]
        for s in subsets:
            # rows weakly increase, columns strictly increase, comparing max to min
            if c and max(filling[(r, c - 1)]) > min(s):
                continue
            if r and max(filling[(r - 1, c)]) >= min(s):
                continue
            filling[(r, c)] = s
            rec(i + 1)
            del filling[(r, c)]

    rec(0)
    return tuple(sorted((m, v) for m, v in out.items() if v))


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = defaultdict(int)
    for a, x in p.items():
        for b, y in q.items():
            out[tuple(i + j for i, j in zip(a, b))] += x * y
    return {m: v for m, v in out.items() if v}


def expand_product(first: tuple[int, ...], second: tuple[int, ...], nvars: int) -> dict[tuple[int, ...], int]:
    """Coefficients of the product of two Grothendieck polynomials in the Grothendieck basis."""
    rest: Poly = _mul(dict(grothendieck_poly(first, nvars)), dict(grothendieck_poly(second, nvars)))
    out: dict[tuple[int, ...], int] = {}
    while rest:
        low = min(sum(m) for m in rest)
        lead = max(m for m in rest if sum(m) == low)
        if any(lead[i] < lead[i + 1] for i in range(nvars - 1)):
            raise ArithmeticError(f"leading monomial {lead} is not a partition")
        c = rest[lead]
        out[lead] = c
        for m, v in grothendieck_poly(lead, nvars):
            rest[m] = rest.get(m, 0) - c * v
            if not rest[m]:
                del rest[m]
    return out


def nonequivariant_coeffs(first: GrIndex, second: GrIndex) -> dict[str, int]:
    """Structure constants of Gr(k, n), keyed by bit string, zeros included."""
    n, k = first.n, first.k
    raw = expand_product(first.partition().parts, second.partition().parts, k)
    out = {g.bits: 0 for g in all_indices(n, k)}
    for shape, c in raw.items():
        if shape[0] <= n - k:
            out[partition_to_bits(list(shape), n, k).bits] = c
    return out
