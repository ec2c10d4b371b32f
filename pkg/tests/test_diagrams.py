import random

import pytest
from hypothesis import given, settings, strategies as st

from vassiliev.diagrams import (
    CCD,
    ChordDiagram,
    DiagramSum,
    canonical_chord_form,
    ccd_canonical_form,
    count_chord_diagrams_burnside,
    enumerate_chord_diagrams,
    enumerate_connected_ccds,
    is_connected_ccd,
    is_split,
)
from vassiliev.errors import DiagramError, ResourceGuardError


def test_canonical_examples():
    assert ChordDiagram.from_text("1122").as_text() == "1122"
    assert ChordDiagram.from_text("2121").as_text() == "1212"
    assert (ChordDiagram.from_text("122133").word
            == ChordDiagram.from_text("221331").word)


def test_malformed_words_rejected():
    with pytest.raises(DiagramError):
        ChordDiagram.from_text("1123")
    with pytest.raises(DiagramError):
        ChordDiagram.from_text("112")


@st.composite
def random_words(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    word = [lab for lab in range(1, n + 1) for _ in range(2)]
    rnd = draw(st.randoms(use_true_random=False))
    rnd.shuffle(word)
    return tuple(word)


@settings(max_examples=150, deadline=None)
@given(random_words(), st.integers(min_value=0, max_value=9))
def test_canonical_form_invariance(word, rot):
    d = ChordDiagram.from_word(word)
    assert canonical_chord_form(d) == d  # idempotent
    r = rot % len(word)
    rotated = ChordDiagram.from_word(word[r:] + word[:r])
    assert rotated == d


def test_enumeration_counts():
    # 1, 2, 5, 18, 105 diagrams for n = 1..5 (matchings modulo rotation)
    sizes = [len(enumerate_chord_diagrams(n)) for n in range(1, 6)]
    assert sizes == [1, 2, 5, 18, 105]
    for n in range(1, 6):
        assert count_chord_diagrams_burnside(n) == sizes[n - 1]
    with pytest.raises(ResourceGuardError):
        enumerate_chord_diagrams(8)


def test_is_split_basics():
    assert is_split(ChordDiagram.from_text("1122"))
    assert not is_split(ChordDiagram.from_text("1212"))
    assert is_split(ChordDiagram.from_text("112233"))
    assert is_split(ChordDiagram.from_text("11"))  # order-1 convention
    # of the five order-3 diagrams only the three with an isolated chord
    # are split; "123123" and the chain "121323" are not separable
    split3 = [d for d in enumerate_chord_diagrams(3) if is_split(d)]
    assert len(split3) == 3
    assert not is_split(ChordDiagram.from_text("121323"))


def _naive_is_split(d):
    if d.n == 1:
        return True
    size = 2 * d.n
    ch = d.chords()
    for i in range(size):
        for j in range(size):
            if i == j:
                continue
            arc = {(i + k) % size for k in range((j - i) % size)}
            if not arc or len(arc) == size:
                continue
            if all((a in arc) == (b in arc) for a, b in ch):
                has_in = any(a in arc for a, _ in ch)
                has_out = any(a not in arc for a, _ in ch)
                if has_in and has_out:
                    return True
    return False


@settings(max_examples=100, deadline=None)
@given(random_words())
def test_is_split_matches_naive_scan(word):
    d = ChordDiagram.from_word(word)
    assert is_split(d) == _naive_is_split(d)


def _theta_ccd():
    # two internal vertices joined by a double edge, one pendant each
    verts = [
        (("x", 0), ("v", 1, 2), ("v", 1, 1)),
        (("x", 1), ("v", 0, 2), ("v", 0, 1)),
    ]
    return CCD.build(2, verts)


def test_ccd_canonical_idempotent_and_signs():
    c = _theta_ccd()
    canon, sign = ccd_canonical_form(c)
    canon2, sign2 = ccd_canonical_form(canon)
    assert canon2 == canon and sign2 == 1
    # flipping one vertex orientation flips the sign
    flipped = CCD.build(2, [
        (("x", 0), ("v", 1, 1), ("v", 1, 2)),
        (("x", 1), ("v", 0, 1), ("v", 0, 2)),
    ])
    # flipping both vertices gives sign (+1) relative to itself
    canon3, sign3 = ccd_canonical_form(flipped)
    assert canon3 == canon
    assert sign3 == 1


def test_ccd_roundtrip_random_rotations():
    rnd = random.Random(7)
    for d in sorted(enumerate_chord_diagrams(3), key=lambda x: x.word):
        c = CCD.from_chord_diagram(d)
        canon, sign, null = c.canonical()
        assert sign == 1 and not null
        assert canon.to_chord_diagram() == d


def test_is_connected_ccd():
    assert is_connected_ccd(_theta_ccd())
    two_chords = CCD.from_chord_diagram(ChordDiagram.from_text("1122"))
    assert not is_connected_ccd(two_chords)
    crossing = CCD.from_chord_diagram(ChordDiagram.from_text("1212"))
    assert is_connected_ccd(crossing)


def test_diagram_sum_arithmetic():
    a = ChordDiagram.from_text("1122")
    b = ChordDiagram.from_text("1212")
    s = DiagramSum([(a, 1), (b, 2)])
    t = DiagramSum([(a, -1)])
    u = s + t
    assert u.terms == {b: 2}
    assert (u - u).is_zero()
    with pytest.raises(DiagramError):
        DiagramSum([(a, 1), (ChordDiagram.from_text("112233"), 1)])


def test_ccd_json_serialisation_is_canonical():
    import json

    a = _theta_ccd()
    # same diagram entered with the two external labels swapped (a rotation)
    b = CCD.build(2, [
        (("x", 1), ("v", 1, 2), ("v", 1, 1)),
        (("x", 0), ("v", 0, 2), ("v", 0, 1)),
    ])
    ja, jb = a.to_json_dict(), b.to_json_dict()
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)
    assert ja["order"] == 2 and len(ja["vertices"]) == 2


def test_connected_ccd_enumeration_small():
    ones = enumerate_connected_ccds(1)
    # order 1: single chord and the tadpole-with-loop diagram
    assert len(ones) >= 1
    twos = enumerate_connected_ccds(2)
    keys = {c.key() for c in twos}
    assert len(keys) == len(twos)
    assert any(c.is_chord_diagram() for c in twos)  # the crossing diagram
    theta_key = _theta_ccd().key()
    assert theta_key in keys
