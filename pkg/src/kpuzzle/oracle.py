"""Independent structure constants by localization at torus fixed points.

Classes and fixed points are both indexed by bit strings.  The restriction table
``table[cls][u]`` is built from the point class (a product at a single fixed point)
by Demazure-type divided differences acting on both the fixed point and the
variables.  Products are then expanded by a triangular solve ordered by
partition size.  Nothing here looks at puzzles or tableaux.

Sign and orientation conventions vary across the literature, so the recursion is
parametrized by a :class:`Convention`.  The packaged default is the one chosen by
:func:`calibrate_convention`; ``KPUZZLE_ORACLE_CONVENTION`` overrides it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product

from .grcore import GrIndex, all_indices, identity_index
from .kring import EquivFactor, InexactDivision, LaurentPoly, expand_in_z, product_of

ENV_VAR = "KPUZZLE_ORACLE_CONVENTION"


@dataclass(frozen=True)
class Convention:
    # point class factor per (one at a, zero at b): 1 - t_a/t_b if True, else 1 - t_b/t_a
    ones_over_zeros: bool
    # divided difference weights the unswapped value by t_i if True, by t_{i+1} otherwise
    left_weight: bool
    # relabel t_i as t_{n+1-i} in every output
    reverse_vars: bool

    @property
    def token(self) -> str:
        return "".join("1" if f else "0" for f in (self.ones_over_zeros, self.left_weight, self.reverse_vars))

    @classmethod
    def from_token(cls, token: str) -> "Convention":
        token = token.strip()
        if len(token) != 3 or set(token) - {"0", "1"}:
            raise ValueError(f"bad oracle convention token {token!r}")
        return cls(*(c == "1" for c in token))


ALL_CONVENTIONS = tuple(Convention(*flags) for flags in product((True, False), repeat=3))


def default_convention() -> Convention:
    override = os.environ.get(ENV_VAR)
    if override:
        return Convention.from_token(override)
    text = resources.files("kpuzzle").joinpath("data/oracle_convention.txt").read_text()
    token = next(line for line in text.splitlines() if line.strip() and not line.startswith("#"))
    return Convention.from_token(token)


def _swap_vars(p: LaurentPoly, i: int) -> LaurentPoly:
    """Exchange ``t_i`` and ``t_{i+1}``."""
    out = {}
    for e, c in p.terms.items():
        e = list(e)
        e[i - 1], e[i] = e[i], e[i - 1]
        out[tuple(e)] = c
    return LaurentPoly(p.n, out)


def _reverse_vars(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(p.n, {tuple(reversed(e)): c for e, c in p.terms.items()})


def _swap_bits(bits: str, i: int) -> str:
    return bits[: i - 1] + bits[i] + bits[i - 1] + bits[i + 1:]


def _top(n: int, k: int) -> str:
    return "1" * k + "0" * (n - k)


def _point_restriction(bits: str, conv: Convention) -> LaurentPoly:
    n = len(bits)
    ones = [a for a in range(1, n + 1) if bits[a - 1] == "1"]
    zeros = [b for b in range(1, n + 1) if bits[b - 1] == "0"]
    factors = [EquivFactor(a, b) if conv.ones_over_zeros else EquivFactor(b, a) for a in ones for b in zeros]
    return product_of(factors, n)


def _divided_difference(here: LaurentPoly, there: LaurentPoly, i: int, conv: Convention) -> LaurentPoly:
    n = here.n
    ti, tj = LaurentPoly.var(n, i), LaurentPoly.var(n, i + 1)
    moved = _swap_vars(there, i)
    if conv.left_weight:
        num = ti * here - tj * moved
    else:
        num = tj * here - ti * moved
    # num / (t_i - t_{i+1}) = (num / t_i) / (1 - t_{i+1}/t_i)
    unit = tuple(1 if j == i - 1 else 0 for j in range(n))
    return num.div_monomial(unit).div_factor(i + 1, i)


class RestrictionTable:
    """Restrictions of every Schubert class of Gr(k, n) to every fixed point."""

    def __init__(self, n: int, k: int, conv: Convention, path_choice: str = "first"):
        self.n, self.k, self.conv = n, k, conv
        self.points = [g.bits for g in all_indices(n, k)]
        self._raw: dict[str, dict[str, LaurentPoly]] = {}
        self._choice = path_choice
        self.table: dict[str, dict[str, LaurentPoly]] = {}
        for cls in self.points:
            row = self._row(cls)
            self.table[cls] = {u: (_reverse_vars(v) if conv.reverse_vars else v) for u, v in row.items()}

    def _row(self, cls: str) -> dict[str, LaurentPoly]:
        if cls in self._raw:
            return self._raw[cls]
        n = self.n
        if cls == _top(n, self.k):
            zero = LaurentPoly.zero(n)
            row = {u: (_point_restriction(u, self.conv) if u == cls else zero) for u in self.points}
        else:
            steps = [i for i in range(1, n) if cls[i - 1] == "0" and cls[i] == "1"]
            i = steps[0] if self._choice == "first" else steps[-1]
            bigger = self._row(_swap_bits(cls, i))
            row = {u: _divided_difference(bigger[u], bigger[_swap_bits(u, i)], i, self.conv) for u in self.points}
        self._raw[cls] = row
        return row


def _size(bits: str) -> int:
    zeros = 0
    total = 0
    for ch in reversed(bits):
        if ch == "0":
            zeros += 1
        else:
            total += zeros
    return total


@lru_cache(maxsize=64)
def restriction_table(n: int, k: int, token: str) -> RestrictionTable:
    return RestrictionTable(n, k, Convention.from_token(token))


def structure_constants(first: str, second: str, table: RestrictionTable) -> dict[str, LaurentPoly]:
    """Coefficients of the product of two classes, by triangular solve."""
    n = table.n
    order = sorted(table.points, key=lambda u: (_size(u), u))
    coeffs: dict[str, LaurentPoly] = {}
    for u in order:
        target = table.table[first][u] * table.table[second][u]
        for cls, c in coeffs.items():
            target = target - c * table.table[cls][u]
        diag = table.table[u][u]
        if target.is_zero():
            continue
        if diag.is_zero():
            raise InexactDivision(f"class {u} vanishes at its own fixed point")
        coeffs[u] = target.exact_div(diag)
    zero = LaurentPoly.zero(n)
    return {u: coeffs.get(u, zero) for u in table.points}


def oracle_coeffs(first: GrIndex, second: GrIndex, conv: Convention | None = None) -> dict[str, LaurentPoly]:
    """Every coefficient of the product of two classes, keyed by bit string."""
    conv = conv or default_convention()
    table = restriction_table(first.n, first.k, conv.token)
    return structure_constants(first.bits, second.bits, table)


def oracle_coeff(first: GrIndex, second: GrIndex, target: GrIndex, conv: Convention | None = None) -> LaurentPoly:
    return oracle_coeffs(first, second, conv)[target.bits]


# calibration

ANCHOR = ("01001", "00101", "10010")


def anchor_value() -> LaurentPoly:
    """Sum of the individually listed weights of the worked five-dimensional example."""
    return LaurentPoly.monomial(5, {2: 1, 4: -1}, -1)


@dataclass(frozen=True)
class CalibrationReport:
    convention: Convention | None
    survivors: tuple[str, ...]
    checks: dict[str, dict[str, bool]]
    literal_anchor_matches: tuple[str, ...]


def _checks(conv: Convention, literal: LaurentPoly) -> tuple[dict[str, bool], bool]:
    out: dict[str, bool] = {}
    try:
        t5 = RestrictionTable(5, 2, conv)
        alt = RestrictionTable(5, 2, conv, path_choice="last")
    except InexactDivision:
        return {"exact": False}, False
    out["exact"] = True
    out["path-independent"] = t5.table == alt.table
    unit = identity_index(5, 2).bits
    out["unit-class"] = all(v == LaurentPoly.one(5) for v in t5.table[unit].values())
    try:
        got = structure_constants(*ANCHOR[:2], t5)[ANCHOR[2]]
    except InexactDivision:
        out["anchor"] = False
        return out, False
    out["anchor"] = got == anchor_value()
    ok_sub = True
    for a in t5.points:
        for b in t5.points:
            try:
                cs = structure_constants(a, b, t5)
            except InexactDivision:
                ok_sub = False
                break
            if any(expand_in_z(c) is None for c in cs.values()):
                ok_sub = False
                break
        if not ok_sub:
            break
    out["subring"] = ok_sub
    return out, got == literal


def calibrate_convention() -> CalibrationReport:
    """Try every convention and keep the ones passing all checks of :func:`_checks`."""
    literal = -(LaurentPoly.one(5) - LaurentPoly.monomial(5, {2: 1, 4: -1}))
    checks = {}
    literal_hits = []
    for conv in ALL_CONVENTIONS:
        res, lit = _checks(conv, literal)
        checks[conv.token] = res
        if lit:
            literal_hits.append(conv.token)
    survivors = tuple(tok for tok, res in checks.items() if res and all(res.values()) and len(res) > 1)
    chosen = Convention.from_token(survivors[0]) if survivors else None
    return CalibrationReport(chosen, survivors, checks, tuple(literal_hits))
