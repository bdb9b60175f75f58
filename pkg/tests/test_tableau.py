import time
from collections import Counter

import pytest

from kpuzzle.grcore import Partition, all_indices
from kpuzzle.kring import LaurentPoly
from kpuzzle.tableau import (
    GeneLabel,
    GenomicTableau,
    edge_positions,
    enumerate_tableaux,
    is_ballot,
    is_ballot_bruteforce,
    reading_word,
    starrable_cells,
    tableau_factors,
    tableau_sum,
    tableau_weight,
    validate,
)

from conftest import G, one_minus

P = Partition


def build(outer, inner, content, boxes, edges=None, n=5):
    return GenomicTableau.build(
        n,
        P(outer),
        P(inner),
        P(content),
        {p: GeneLabel.parse(x) for p, x in boxes.items()},
        {p: [GeneLabel.parse(x) for x in v] for p, v in (edges or {}).items()},
    )


def conditions(tab):
    return sorted({v.condition for v in validate(tab)})


def example_tableaux():
    return enumerate_tableaux(5, P((2, 0)), P((1, 0)), P((3, 1)))


def test_small_example_four_tableaux():
    n = 5
    start = time.perf_counter()
    found = example_tableaux()
    assert time.perf_counter() - start < 1.0
    assert len(found) == 4
    assert Counter(tableau_weight(t) for t in found) == Counter([
        LaurentPoly.const(n, -1),
        one_minus(n, 3, 4),
        one_minus(n, 2, 3),
        -(one_minus(n, 3, 4) * one_minus(n, 2, 3)),
    ])
    assert [t.to_text() for t in found] == [
        "## ## 1_1\n1_1 .. ..",
        "## ##{1_1} 1_1\n1_1 .. ..",
        "## ## 1_1\n1_1* .. ..",
        "## ##{1_1} 1_1\n1_1* .. ..",
    ]


def test_small_example_sum():
    assert tableau_sum(G("01001"), G("00101"), G("10010")) == -LaurentPoly.monomial(5, {2: 1, 4: -1})


def test_factor_indices():
    found = example_tableaux()
    assert sorted(sorted((f.a, f.b) for f in tableau_factors(t)) for t in found) == [
        [], [(2, 3)], [(2, 3), (3, 4)], [(3, 4)]
    ]


def test_label_parsing():
    assert GeneLabel.parse("2_3*") == GeneLabel(2, 3, True)
    assert str(GeneLabel(1, 10)) == "1_10"
    with pytest.raises(ValueError):
        GeneLabel.parse("2-3")


@pytest.mark.parametrize(
    "args, expected",
    [
        (((3, 1), (2, 0), (1, 0), {(1, 3): "1_1", (2, 1): "1_1"}), []),
        (((3, 1), (2, 0), (1, 0), {(1, 3): "1_1", (2, 1): "1_2"}), ["content", "gene-order"]),
        (((3, 1), (2, 0), (1, 0), {(1, 3): "1_1*", (2, 1): "1_1"}), ["star"]),
        (((3, 1), (2, 0), (1, 0), {(1, 3): "1_1", (2, 1): "1_1"}, {(1, 1): ["1_1"]}), ["column-strict"]),
        (((3, 2), (1, 0), (2, 0), {(1, 2): "1_1", (1, 3): "1_1", (2, 1): "1_1", (2, 2): "1_2"}),
         ["column-strict", "gene-order", "row-strict"]),
        (((2, 1), (0, 0), (1, 1), {(1, 1): "1_1", (1, 2): "2_1", (2, 1): "2_1"}, None, 4), ["too-high"]),
        (((2, 2), (1, 0), (1, 1), {(1, 2): "1_1", (2, 1): "1_1", (2, 2): "2_1"}, None, 4), ["ballot"]),
        (((2, 2), (1, 0), (1, 1), {(1, 2): "1_1", (2, 1): "2_1", (2, 2): "2_1"}, None, 4), ["row-strict"]),
    ],
)
def test_violations(args, expected):
    assert conditions(build(*args)) == expected


def test_missing_box_is_a_shape_violation():
    tab = build((3, 1), (2, 0), (1, 0), {(1, 3): "1_1"})
    assert "shape" in conditions(tab)


def test_edge_support():
    # the lower border of the inner shape counts too, not only cells of the skew shape
    assert edge_positions(P((2, 0)), P((3, 1))) == [(1, 1), (1, 2), (1, 3), (2, 1)]


def test_ballot_checkers_agree_on_enumerated_and_mutated_tableaux():
    n, k = 5, 2
    pts = list(all_indices(n, k))
    seen = 0
    for a in pts:
        for b in pts:
            for c in pts:
                for t in enumerate_tableaux(n, a.partition(), b.partition(), c.partition()):
                    assert is_ballot(t) and is_ballot_bruteforce(t)
                    seen += 1
    assert seen > 100
    bad = build((2, 2), (1, 0), (1, 1), {(1, 2): "1_1", (2, 1): "1_1", (2, 2): "2_1"}, n=4)
    assert not is_ballot(bad) and not is_ballot_bruteforce(bad)


def test_reading_word_order():
    tab = build((3, 1), (2, 0), (1, 0), {(1, 3): "1_1", (2, 1): "1_1"}, {(1, 2): ["1_1"]})
    assert [str(x) for x in reading_word(tab)] == ["1_1", "1_1", "1_1"]


def test_json_round_trip():
    for t in example_tableaux():
        assert GenomicTableau.from_json(t.to_json()) == t


def test_large_example_validates(large_example):
    assert validate(large_example) == []
    assert starrable_cells(large_example) == [(2, 4), (3, 2), (3, 3)]
    assert large_example.star_count == 1
    assert large_example.k == 3 and large_example.n == 20


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2)])
def test_sums_with_unit_class(n, k):
    unit = next(g for g in all_indices(n, k) if g.partition().size == 0)
    for a in all_indices(n, k):
        for c in all_indices(n, k):
            assert tableau_sum(a, unit, c) == (LaurentPoly.one(n) if a == c else LaurentPoly.zero(n))


def test_enumeration_is_canonical():
    found = example_tableaux()
    assert found == sorted(found, key=GenomicTableau.key)
    assert len({t.key() for t in found}) == len(found)
