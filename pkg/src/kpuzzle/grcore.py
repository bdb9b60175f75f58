"""Index combinatorics for Schubert classes of the Grassmannian Gr(k, n).

A class is indexed either by a 0/1 string of length ``n`` with ``k`` ones or by a
partition fitting in the ``k x (n - k)`` rectangle.  The two are linked by the
boundary lattice path of the partition, traced from the north-east corner of the
rectangle: a step left records ``0`` and a step down records ``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence


class ShapeError(ValueError):
    """Raised when an index or partition does not fit the rectangle."""


@dataclass(frozen=True, order=True)
class GrIndex:
    n: int
    k: int
    bits: str

    def __post_init__(self) -> None:
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ShapeError(f"need n >= 1 and 0 <= k <= n, got n={self.n}, k={self.k}")
        if len(self.bits) != self.n or set(self.bits) - {"0", "1"}:
            raise ShapeError(f"{self.bits!r} is not a 0/1 string of length {self.n}")
        if self.bits.count("1") != self.k:
            raise ShapeError(f"{self.bits!r} does not have exactly {self.k} ones")

    @classmethod
    def parse(cls, text: str) -> "GrIndex":
        text = text.strip()
        return cls(len(text), text.count("1"), text)

    def partition(self) -> "Partition":
        return bits_to_partition(self)

    def __str__(self) -> str:
        return self.bits


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing parts, always padded to exactly ``k`` entries."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.parts):
            raise ShapeError(f"negative part in {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ShapeError(f"{self.parts} is not weakly decreasing")

    @classmethod
    def of(cls, parts: Sequence[int], k: int) -> "Partition":
        parts = tuple(parts)
        if len(parts) > k:
            if any(parts[k:]):
                raise ShapeError(f"{parts} has more than {k} nonzero parts")
            parts = parts[:k]
        return cls(parts + (0,) * (k - len(parts)))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __getitem__(self, row: int) -> int:
        """1-indexed row length; rows past ``k`` have length 0."""
        if row < 1:
            raise IndexError(row)
        return self.parts[row - 1] if row <= len(self.parts) else 0

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((r + 1, c + 1) for r, p in enumerate(self.parts) for c in range(p))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class BoxPos:
    row: int
    col: int


def bits_to_partition(idx: GrIndex) -> Partition:
    # each 1 is a row, its part is the number of 0s after it
    parts = []
    zeros_after = idx.bits.count("0")
    for ch in idx.bits:
        if ch == "0":
            zeros_after -= 1
        else:
            parts.append(zeros_after)
    return Partition(tuple(parts))


def partition_to_bits(p: Partition | Sequence[int], n: int, k: int) -> GrIndex:
    part = p if isinstance(p, Partition) else Partition.of(p, k)
    if part.k != k:
        part = Partition.of(part.parts, k)
    if part[1] > n - k:
        raise ShapeError(f"partition {part} does not fit in {k}x{n - k}")
    out = []
    col = n - k
    for length in part.parts:
        out.append("0" * (col - length))
        out.append("1")
        col = length
    out.append("0" * col)
    return GrIndex(n, k, "".join(out))


def manhattan(x: BoxPos, n: int, k: int) -> int:
    """Lattice distance from the rectangle's south-west corner to the north-west corner of ``x``."""
    if not (1 <= x.row <= k and 1 <= x.col <= n - k):
        raise ShapeError(f"box ({x.row},{x.col}) lies outside {k}x{n - k}")
    return (k - x.row + 1) + (x.col - 1)


def contains(outer: Partition, inner: Partition) -> bool:
    width = max(outer.k, inner.k)
    return all(outer[r] >= inner[r] for r in range(1, width + 1))


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition

    def __post_init__(self) -> None:
        if not contains(self.outer, self.inner):
            raise ShapeError(f"{self.inner} is not contained in {self.outer}")

    @property
    def cells(self) -> frozenset[tuple[int, int]]:
        return self.outer.cells() - self.inner.cells()


def all_indices(n: int, k: int) -> Iterator[GrIndex]:
    """Every index of Gr(k, n), in increasing order of the bit string."""
    for ones in sorted(combinations(range(n), k), key=lambda s: _bits(n, s)):
        yield GrIndex(n, k, _bits(n, ones))


def _bits(n: int, ones: Sequence[int]) -> str:
    return "".join("1" if i in ones else "0" for i in range(n))


def identity_index(n: int, k: int) -> GrIndex:
    """Index of the empty partition, the unit class."""
    return GrIndex(n, k, "0" * (n - k) + "1" * k)


def coerce_index(value: str, n: int | None = None, k: int | None = None) -> GrIndex:
    """Accept a bit string, or a comma separated partition together with ``n`` and ``k``.

    A comma-free 0/1 string of length at least 2 is always read as bits: as a
    one-part partition it could never fit the box.
    """
    value = value.strip()
    bitlike = bool(value) and set(value) <= {"0", "1"} and "," not in value
    if bitlike and (n is None or len(value) == n or len(value) >= 2):
        if n is not None and len(value) != n:
            raise ShapeError(f"bit string {value!r} has length {len(value)}, expected {n}")
        idx = GrIndex.parse(value)
        if k is not None and idx.k != k:
            raise ShapeError(f"{value!r} has {idx.k} ones, expected {k}")
        return idx
    if n is None or k is None:
        raise ShapeError(f"partition {value!r} needs both n and k")
    try:
        parts = [int(p) for p in value.split(",") if p.strip()] if value else []
    except ValueError as exc:
        raise ShapeError(f"cannot read {value!r} as bits or partition") from exc
    return partition_to_bits(Partition.of(parts, k), n, k)
