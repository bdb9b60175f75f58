from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import pytest

from kpuzzle.grcore import GrIndex
from kpuzzle.kring import LaurentPoly
from kpuzzle.sweep import run_sweep
from kpuzzle.tableau import GenomicTableau

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def G(bits: str) -> GrIndex:
    return GrIndex.parse(bits)


def t_ratio(n: int, a: int, b: int) -> LaurentPoly:
    """``t_a / t_b``."""
    return LaurentPoly.monomial(n, {a: 1, b: -1})


def one_minus(n: int, a: int, b: int) -> LaurentPoly:
    """``1 - t_a/t_b``."""
    return LaurentPoly.one(n) - t_ratio(n, a, b)


@lru_cache(maxsize=None)
def sweep(n: int, k: int):
    """Shared exhaustive results, computed once per session."""
    return run_sweep(n, k)


def all_sweeps(max_n: int = 6):
    return {(n, k): sweep(n, k) for n in range(1, max_n + 1) for k in range(0, n + 1)}


@pytest.fixture(scope="session")
def large_example() -> GenomicTableau:
    text = resources.files("kpuzzle").joinpath("data/large_example.json").read_text()
    return GenomicTableau.from_json(json.loads(text))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
