"""Double Grothendieck polynomials by isobaric divided differences.

Polynomials live in one Laurent ring with ``2n`` variables: indices ``1..n`` are
the equivariant parameters ``t`` and ``n+1..2n`` the variables ``x``.  Fast enough
for ``n <= 6``; used to cross-check :mod:`kpuzzle.oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .grcore import GrIndex, all_indices
from .kring import LaurentPoly

Perm = tuple[int, ...]  # one-line notation, values 1..n


def length(w: Perm) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def longest(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def times_simple(w: Perm, i: int) -> Perm:
    """``w s_i``: swap positions ``i`` and ``i+1``."""
    w = list(w)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def _x(n: int, i: int) -> int:
    return n + i


def _swap_x(f: LaurentPoly, n: int, i: int) -> LaurentPoly:
    a, b = _x(n, i) - 1, _x(n, i + 1) - 1
    out = {}
    for e, c in f.terms.items():
        e = list(e)
        e[a], e[b] = e[b], e[a]
        out[tuple(e)] = c
    return LaurentPoly(f.n, out)


def isobaric_divided_difference(i: int, f: LaurentPoly, n: int) -> LaurentPoly:
    """``(x_i f - x_{i+1} s_i f) / (x_i - x_{i+1})``, exactly."""
    if not 1 <= i < n:
        raise ValueError(f"need 1 <= i < {n}")
    xi, xj = LaurentPoly.var(f.n, _x(n, i)), LaurentPoly.var(f.n, _x(n, i + 1))
    num = xi * f - xj * _swap_x(f, n, i)
    unit = tuple(1 if j == _x(n, i) - 1 else 0 for j in range(f.n))
    return num.div_monomial(unit).div_factor(_x(n, i + 1), _x(n, i))


@dataclass(frozen=True)
class GConvention:
    # top polynomial factor: 1 - t_j/x_i if True, else 1 - x_i/t_j
    t_over_x: bool
    # t_j is read as t_{n+1-j}
    reverse_t: bool
    # bit string of a class is read right to left before forming its permutation
    reverse_bits: bool

    @property
    def token(self) -> str:
        return "".join("1" if f else "0" for f in (self.t_over_x, self.reverse_t, self.reverse_bits))


ALL_G_CONVENTIONS = tuple(GConvention(*f) for f in product((True, False), repeat=3))


def top_polynomial(n: int, conv: GConvention) -> LaurentPoly:
    m = 2 * n
    one = LaurentPoly.one(m)
    out = one
    for i in range(1, n + 1):
        for j in range(1, n + 1 - i):
            tj = n + 1 - j if conv.reverse_t else j
            sign = 1 if conv.t_over_x else -1
            out = out * (one - LaurentPoly.monomial(m, {tj: sign, _x(n, i): -sign}))
    return out


@lru_cache(maxsize=None)
def grothendieck(w: Perm, conv: GConvention) -> LaurentPoly:
    """Descending induction from the longest permutation."""
    n = len(w)
    if w == longest(n):
        return top_polynomial(n, conv)
    for i in range(1, n):
        if w[i - 1] < w[i]:
            return isobaric_divided_difference(i, grothendieck(times_simple(w, i), conv), n)
    raise AssertionError("unreachable: only the longest permutation has no ascent")


def grassmannian_perm(idx: GrIndex, conv: GConvention) -> Perm:
    """Positions of the 1s in increasing order, then the positions of the 0s."""
    bits = idx.bits[::-1] if conv.reverse_bits else idx.bits
    ones = [p + 1 for p, ch in enumerate(bits) if ch == "1"]
    zeros = [p + 1 for p, ch in enumerate(bits) if ch == "0"]
    return tuple(ones + zeros)


def restriction(cls: GrIndex, point: GrIndex, conv: GConvention) -> LaurentPoly:
    """The class's polynomial evaluated at ``x_m = t_{u(m)}`` for the point's permutation ``u``."""
    n = cls.n
    g = grothendieck(grassmannian_perm(cls, conv), conv)
    u = grassmannian_perm(point, conv)
    assignment = {i: LaurentPoly.var(n, i) for i in range(1, n + 1)}
    for m in range(1, n + 1):
        assignment[_x(n, m)] = LaurentPoly.var(n, u[m - 1])
    return g.substitute(assignment)


def restriction_table(n: int, k: int, conv: GConvention) -> dict[str, dict[str, LaurentPoly]]:
    pts = list(all_indices(n, k))
    return {a.bits: {b.bits: restriction(a, b, conv) for b in pts} for a in pts}
