"""Exact arithmetic in the Laurent ring Z[t_1^{+-1}, ..., t_n^{+-1}].

Every weight and structure constant in the package is a :class:`LaurentPoly`.
Coefficients are Python ints, so nothing overflows.  The ring of a point in
torus-equivariant K-theory is the subring generated by ``z_i = 1 - t_i/t_{i+1}``;
:func:`expand_in_z` decides membership and rewrites an element in the ``z_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping, Union

Exps = tuple[int, ...]
Scalar = Union[int, Fraction]


class RingMismatch(ValueError):
    pass


class InexactDivision(ArithmeticError):
    pass


def _order(e: Exps) -> tuple:
    return (sum(e), e)


class LaurentPoly:
    """Immutable Laurent polynomial in ``t_1..t_n`` with integer coefficients."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Exps, int] | Iterable[tuple[Exps, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exps, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise RingMismatch(f"exponent {e} has length {len(e)}, ring has {n} variables")
            acc[e] = acc.get(e, 0) + c
        self.n = n
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash: int | None = None

    # constructors

    @classmethod
    def const(cls, n: int, c: int) -> "LaurentPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def zero(cls, n: int) -> "LaurentPoly":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "LaurentPoly":
        return cls.const(n, 1)

    @classmethod
    def monomial(cls, n: int, exps: Mapping[int, int], coeff: int = 1) -> "LaurentPoly":
        """``exps`` maps 1-based variable index to exponent."""
        e = [0] * n
        for i, p in exps.items():
            if not 1 <= i <= n:
                raise RingMismatch(f"t{i} is not a variable of a ring with {n} variables")
            e[i - 1] += p
        return cls(n, {tuple(e): coeff})

    @classmethod
    def var(cls, n: int, i: int) -> "LaurentPoly":
        return cls.monomial(n, {i: 1})

    # inspection

    @property
    def terms(self) -> dict[Exps, int]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self._terms.items(), key=lambda kv: _order(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # arithmetic

    def _coerce(self, other: object) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.n != self.n:
                raise RingMismatch(f"cannot combine rings with {self.n} and {other.n} variables")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(self.n, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "LaurentPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: object) -> "LaurentPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "LaurentPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "LaurentPoly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[Exps, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPoly":
        if power < 0:
            if not self.is_monomial():
                raise InexactDivision("only monomials are invertible")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise InexactDivision("only unit monomials are invertible")
            return LaurentPoly(self.n, {tuple(-x * -power for x in e): c ** (-power)})
        result = LaurentPoly.one(self.n)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(self.n, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def div_monomial(self, exps: Exps) -> "LaurentPoly":
        return LaurentPoly(self.n, {tuple(a - b for a, b in zip(e, exps)): c for e, c in self._terms.items()})

    def div_factor(self, a: int, b: int) -> "LaurentPoly":
        """Exact quotient by ``1 - t_a/t_b``; raises :class:`InexactDivision` otherwise."""
        if a == b:
            raise ZeroDivisionError("1 - t_a/t_a is zero")
        ia = a - 1
        # group by the t_a exponent; (1 - t_a/t_b) q = p gives q_e = p_e + q_{e-1}/t_b
        groups: dict[int, dict[Exps, int]] = {}
        for e, c in self._terms.items():
            rest = e[:ia] + (0,) + e[ia + 1:]
            groups.setdefault(e[ia], {})[rest] = c
        if not groups:
            return self
        lo, hi = min(groups), max(groups)
        shift = tuple(-1 if i == b - 1 else 0 for i in range(self.n))
        prev = LaurentPoly(self.n)
        quotient: dict[Exps, int] = {}
        for deg in range(lo, hi + 1):
            cur = LaurentPoly(self.n, groups.get(deg, {})) + prev.div_monomial(tuple(-s for s in shift))
            if deg == hi:
                if cur:
                    raise InexactDivision(f"{self} is not divisible by 1 - t{a}/t{b}")
                break
            for e, c in cur._terms.items():
                quotient[e[:ia] + (deg,) + e[ia + 1:]] = c
            prev = cur
        return LaurentPoly(self.n, quotient)

    def exact_div(self, divisor: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient by a product of factors ``1 - t_a/t_b`` times a unit monomial."""
        factors, unit = factor_binomials(divisor)
        q = self
        for a, b in factors:
            q = q.div_factor(a, b)
        (e, c), = unit._terms.items()
        q = q.div_monomial(e)
        if c not in (1, -1):
            raise InexactDivision("divisor has a non-unit content")
        return q * c

    # evaluation

    def substitute(self, assignment: Mapping[int, "LaurentPoly"]) -> "LaurentPoly":
        """Replace ``t_i`` by ``assignment[i]``; unassigned variables stay put.

        Negative powers need the assigned value to be a unit monomial.
        """
        if not assignment:
            return self
        m = next(iter(assignment.values())).n
        if any(v.n != m for v in assignment.values()):
            raise RingMismatch("assignment values live in different rings")
        if any(i not in assignment for i in range(1, self.n + 1)) and m != self.n:
            raise RingMismatch("partial substitution must stay in the same ring")
        images = [assignment.get(i, LaurentPoly.var(m, i) if m == self.n else None) for i in range(1, self.n + 1)]
        total = LaurentPoly(m)
        for e, c in self._terms.items():
            term = LaurentPoly.const(m, c)
            for img, p in zip(images, e):
                if p:
                    term = term * (img ** p)  # type: ignore[operator]
            total = total + term
        return total

    def evaluate(self, values: Mapping[int, Scalar] | Scalar) -> Fraction:
        """Numeric value; ``values`` is a map from index to number or one number for all."""
        total = Fraction(0)
        for e, c in self._terms.items():
            term = Fraction(c)
            for i, p in enumerate(e, start=1):
                if p:
                    v = Fraction(values if not isinstance(values, Mapping) else values[i])
                    term *= v ** p
            total += term
        return total

    # text and json

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"t{i}" if p == 1 else f"t{i}^{p}" for i, p in enumerate(e, start=1) if p
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.n}, {str(self)!r})"

    def to_json(self) -> list[dict]:
        return [
            {"coeff": c, "exps": {str(i): p for i, p in enumerate(e, start=1) if p}}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, n: int, data: Iterable[Mapping]) -> "LaurentPoly":
        return sum(
            (cls.monomial(n, {int(i): int(p) for i, p in t["exps"].items()}, int(t["coeff"])) for t in data),
            cls.zero(n),
        )


@dataclass(frozen=True)
class EquivFactor:
    """The factor ``1 - t_a/t_b``."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"1 - t{self.a}/t{self.b} is the zero factor")

    def poly(self, n: int) -> LaurentPoly:
        return factor_to_poly(self, n)

    def __str__(self) -> str:
        return f"(1 - t{self.a}/t{self.b})"


def factor_to_poly(f: EquivFactor, n: int) -> LaurentPoly:
    if not (1 <= f.a <= n and 1 <= f.b <= n):
        raise RingMismatch(f"{f} does not live in a ring with {n} variables")
    return LaurentPoly.one(n) - LaurentPoly.monomial(n, {f.a: 1, f.b: -1})


def product_of(factors: Iterable[EquivFactor], n: int, sign: int = 1) -> LaurentPoly:
    out = LaurentPoly.const(n, sign)
    for f in factors:
        out = out * factor_to_poly(f, n)
    return out


def factor_binomials(p: LaurentPoly) -> tuple[list[tuple[int, int]], LaurentPoly]:
    """Split ``p`` as a unit monomial times factors ``1 - t_a/t_b`` by trial division.

    Only used on restriction values, which are such products by construction.
    """
    factors: list[tuple[int, int]] = []
    q = p
    changed = True
    while changed and len(q) > 1:
        changed = False
        for a in range(1, p.n + 1):
            for b in range(1, p.n + 1):
                if a == b:
                    continue
                try:
                    r = q.div_factor(a, b)
                except InexactDivision:
                    continue
                factors.append((a, b))
                q = r
                changed = True
                break
            if changed:
                break
    if not q.is_monomial():
        raise InexactDivision(f"{p} is not a product of factors 1 - t_a/t_b")
    return factors, q


# the subring Z[z_1, ..., z_{n-1}] with z_i = 1 - t_i/t_{i+1}

ZPoly = dict[tuple[int, ...], int]


def expand_in_z(p: LaurentPoly) -> ZPoly | None:
    """Rewrite ``p`` as an integer polynomial in ``z_i = 1 - t_i/t_{i+1}``, or ``None``.

    A monomial of total degree 0 equals ``prod a_i^{c_i}`` with ``a_i = t_i/t_{i+1}`` and
    ``c_i`` the partial sums of its exponents; the ``a_i`` are independent units, so
    membership means every term has total degree 0 and nonnegative partial sums.
    """
    out: dict[tuple[int, ...], int] = {}
    for e, c in p.terms.items():
        if sum(e) != 0:
            return None
        partial, run = [], 0
        for x in e[:-1]:
            run += x
            partial.append(run)
        if any(x < 0 for x in partial):
            return None
        # prod (1 - z_i)^{c_i}
        ranges = [range(ci + 1) for ci in partial]
        for js in product(*ranges):
            coeff = c
            for ci, j in zip(partial, js):
                coeff *= comb(ci, j) * (-1) ** j
            key = tuple(js)
            out[key] = out.get(key, 0) + coeff
    return {e: c for e, c in out.items() if c}


def z_to_t(zpoly: ZPoly, n: int) -> LaurentPoly:
    total = LaurentPoly.zero(n)
    for e, c in zpoly.items():
        term = LaurentPoly.const(n, c)
        for i, p in enumerate(e, start=1):
            if p:
                term = term * (LaurentPoly.one(n) - LaurentPoly.monomial(n, {i: 1, i + 1: -1})) ** p
        total = total + term
    return total


def z_form_text(zpoly: ZPoly) -> list[str]:
    """Terms of a z-polynomial as strings, sorted by degree then exponent."""
    out = []
    for e, c in sorted(zpoly.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        mono = "*".join(f"z{i}" if p == 1 else f"z{i}^{p}" for i, p in enumerate(e, start=1) if p)
        out.append(f"{c}*{mono}" if mono else str(c))
    return out
