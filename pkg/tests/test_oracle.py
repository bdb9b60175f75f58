import pytest

from kpuzzle import oracle
from kpuzzle.grcore import all_indices, identity_index
from kpuzzle.kring import LaurentPoly, expand_in_z
from kpuzzle.oracle import (
    ALL_CONVENTIONS,
    ENV_VAR,
    Convention,
    RestrictionTable,
    anchor_value,
    calibrate_convention,
    default_convention,
    oracle_coeff,
    oracle_coeffs,
)

from conftest import G


@pytest.fixture(scope="module")
def calibration():
    return calibrate_convention()


def test_exactly_one_convention_survives(calibration):
    assert calibration.survivors == ("011",)
    assert calibration.convention == default_convention()


def test_no_convention_reproduces_the_literal_anchor(calibration):
    assert calibration.literal_anchor_matches == ()


def test_every_rejected_convention_fails_a_named_check(calibration):
    for token, checks in calibration.checks.items():
        if token != "011":
            assert not all(checks.values()) or len(checks) == 1


def test_anchor():
    assert oracle_coeff(G("01001"), G("00101"), G("10010")) == anchor_value()
    assert str(anchor_value()) == "-t2*t4^-1"


def test_env_override(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "110")
    assert default_convention().token == "110"
    monkeypatch.setenv(ENV_VAR, "2")
    with pytest.raises(ValueError):
        default_convention()


def test_token_round_trip():
    assert {Convention.from_token(c.token) for c in ALL_CONVENTIONS} == set(ALL_CONVENTIONS)


def test_restriction_table_is_triangular_and_unit():
    t = RestrictionTable(5, 2, default_convention())
    unit = identity_index(5, 2).bits
    assert all(v == LaurentPoly.one(5) for v in t.table[unit].values())
    sizes = {u: G(u).partition().size for u in t.points}
    for cls in t.points:
        assert not t.table[cls][cls].is_zero()
        for u in t.points:
            if sizes[u] < sizes[cls]:
                assert t.table[cls][u].is_zero()


def test_path_independence():
    conv = default_convention()
    assert RestrictionTable(5, 3, conv).table == RestrictionTable(5, 3, conv, path_choice="last").table


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (5, 3)])
def test_commutative_unital_and_in_subring(n, k):
    pts = list(all_indices(n, k))
    unit = identity_index(n, k)
    for a in pts:
        assert oracle_coeffs(a, unit) == {c.bits: (LaurentPoly.one(n) if c == a else LaurentPoly.zero(n)) for c in pts}
        for b in pts:
            ab = oracle_coeffs(a, b)
            assert ab == oracle_coeffs(b, a)
            assert all(expand_in_z(v) is not None for v in ab.values())


def test_product_support_respects_size():
    # coefficients vanish unless the target is at least as large as each factor
    n, k = 5, 2
    for a in all_indices(n, k):
        for b in all_indices(n, k):
            for c, v in oracle_coeffs(a, b).items():
                if not v.is_zero():
                    assert G(c).partition().size >= max(a.partition().size, b.partition().size)


def test_cached_tables_are_shared():
    assert oracle.restriction_table(4, 2, "011") is oracle.restriction_table(4, 2, "011")
