import re
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kpuzzle.grcore import all_indices, partition_to_bits
from kpuzzle.puzzle import enumerate_puzzles, enumerate_puzzles_free_bottom
from kpuzzle.tableau import validate
from kpuzzle.tracks import (
    Letter,
    TrackError,
    check_structure,
    extract_tracks,
    format_word,
    left_sequence,
    parse_track,
    parse_word,
    puzzle_to_tableau,
    puzzles_via_tableaux,
    right_sequence,
    tableau_to_puzzle,
    verify_bijection,
)

from conftest import G

GRAMMAR = re.compile(r"(A1)*A2((A3|A4|A5)*(A6|A7|A8|A9)(A1)*A2)*(A3|A4|A5)*")
LARGE_EXAMPLE_WORDS = [
    "A1.A1.A1.A2.A3.A4.A4.A3.A5.A3.A4.A4.A6.A1.A1.A2.A9.A2.A4",
    "A1.A1.A1.A1.A2.A5.A8.A2.A4.A3",
    "A1.A1.A2.A3.A4.A5",
]


def compact(word) -> str:
    return "".join(x.value for x in word)


def test_word_parsing():
    assert parse_word("A1^3 A2") == (Letter.A1,) * 3 + (Letter.A2,)
    assert format_word(parse_word("A1.A2.A4")) == "A1.A2.A4"
    with pytest.raises(TrackError):
        parse_word("A0")


def test_segmentation():
    segs = parse_track(parse_word("A1^3 A2 A3 A6 A2 A4"))
    assert [(s.role, format_word(s.letters)) for s in segs] == [
        ("boxes", "A1.A1.A1.A2"),
        ("edges", "A3"),
        ("startrow", "A6"),
        ("boxes", "A2"),
        ("edges", "A4"),
    ]


@pytest.mark.parametrize("word, pos", [("A3", 0), ("A1.A1", 2), ("A2.A6", 2), ("A2.A1", 1)])
def test_grammar_errors_name_the_position(word, pos):
    with pytest.raises(TrackError, match=f"position {pos}:"):
        parse_track(parse_word(word))


@given(st.lists(st.sampled_from(list(Letter)), max_size=10))
def test_segmentation_accepts_exactly_the_grammar(word):
    accepted = True
    try:
        segs = parse_track(word)
    except TrackError:
        accepted = False
    assert accepted == bool(GRAMMAR.fullmatch(compact(word)))
    if accepted:
        assert tuple(x for s in segs for x in s.letters) == tuple(word)


def test_large_example_round_trip(large_example):
    start = time.perf_counter()
    puz = tableau_to_puzzle(large_example)
    back = puzzle_to_tableau(puz)
    assert time.perf_counter() - start < 60
    assert back == large_example
    assert [t.word_text() for t in extract_tracks(puz)] == LARGE_EXAMPLE_WORDS


def test_large_example_boundary_chain(large_example):
    puz = tableau_to_puzzle(large_example)
    tracks = extract_tracks(puz)
    lam = partition_to_bits([12, 2, 1], 20, 3).bits
    nu = partition_to_bits([15, 8, 5], 20, 3).bits
    assert (puz.left, puz.bottom) == (lam, nu)
    assert puz.right == partition_to_bits([10, 5, 3], 20, 3).bits
    assert left_sequence(tracks[0], puz) == lam == "00000100000000001010"
    assert right_sequence(tracks[0], puz) == "00100000000000100100"
    for a, b in zip(tracks, tracks[1:]):
        assert right_sequence(a, puz) == left_sequence(b, puz)
    assert right_sequence(tracks[-1], puz) == nu
    assert check_structure(puz).problems == []


def test_anchor_round_trip():
    triple = (G("01001"), G("00101"), G("10010"))
    rep = verify_bijection(*triple)
    assert rep.ok and rep.weight_equal
    assert rep.puzzle_count == rep.tableau_count == rep.matched == 4
    assert [p.key() for p in puzzles_via_tableaux(*triple)] == [p.key() for p in enumerate_puzzles(*triple)]


@pytest.mark.parametrize("n,k", [(3, 1), (4, 2), (5, 2), (5, 3)])
def test_bijection_and_structure_small(n, k):
    pts = list(all_indices(n, k))
    for a in pts:
        for b in pts:
            free = enumerate_puzzles_free_bottom(a, b)
            for c in pts:
                puzzles = free.get(c.bits, [])
                assert verify_bijection(a, b, c, puzzles).problems == []
                for p in puzzles:
                    rep = check_structure(p)
                    assert rep.problems == []
                    assert rep.black_counts == [k - i + 1 for i in range(1, k + 1)]
                    assert validate(puzzle_to_tableau(p)) == []


def test_tracks_cover_one_per_family():
    for p in enumerate_puzzles(G("01001"), G("00101"), G("10010")):
        tracks = extract_tracks(p)
        assert len(tracks) == 2
        assert all(GRAMMAR.fullmatch(compact(t.word)) for t in tracks)
