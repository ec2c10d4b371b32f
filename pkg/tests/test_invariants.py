import random
from fractions import Fraction

import pytest

from vassiliev.errors import ConsistencyError
from vassiliev.gausscodes import (
    FIGURE_EIGHT,
    LEFT_TREFOIL,
    RIGHT_TREFOIL,
    GaussCode,
    Passage,
    connected_sum,
)
from vassiliev.invariants import (
    a2_gauss,
    a2_skein,
    a2_weight_calibration,
    conway_polynomial,
    fit_pair_formula,
    invariant_a2,
    invariant_v3,
    jones_h_coefficient,
    jones_polynomial,
    kauffman_bracket,
    v3_jones,
    A2_PATTERN_WEIGHTS,
)

GOLDEN_A2 = {
    "unknot": (GaussCode.from_text(""), 0),
    "3_1": (RIGHT_TREFOIL, 1),
    "m3_1": (LEFT_TREFOIL, 1),
    "4_1": (FIGURE_EIGHT, -1),
    "square": (connected_sum(RIGHT_TREFOIL, LEFT_TREFOIL), 2),
    "granny": (connected_sum(RIGHT_TREFOIL, RIGHT_TREFOIL), 2),
    "4_1#4_1": (connected_sum(FIGURE_EIGHT, FIGURE_EIGHT), -2),
}


def test_conway_basics():
    assert conway_polynomial(RIGHT_TREFOIL) == {0: 1, 2: 1}
    assert conway_polynomial(FIGURE_EIGHT) == {0: 1, 2: -1}
    assert conway_polynomial(GaussCode.from_text("")) == {0: 1}


def test_a2_goldens_both_ways():
    for name, (code, value) in GOLDEN_A2.items():
        assert a2_skein(code) == value, name
        assert a2_gauss(code) == value, name
        assert invariant_a2(code) == value, name


def test_a2_even_parity_on_ribbon_like_sums():
    # a2 is congruent to the Arf invariant mod 2: even for our ribbon sums
    assert a2_skein(GOLDEN_A2["square"][0]) % 2 == 0
    assert a2_skein(GOLDEN_A2["4_1#4_1"][0]) % 2 == 0


def _random_reidemeister_image(rnd, base):
    """Grow a code by random kink insertions, keeping it realizable."""
    code = base
    for _ in range(rnd.randint(1, 4)):
        ps = list(code.passages)
        cid = (max((p.crossing for p in ps), default=0)) + 1
        pos = rnd.randrange(len(ps) + 1)
        sign = rnd.choice((1, -1))
        over_first = rnd.choice((True, False))
        ps[pos:pos] = [Passage(cid, over_first, sign),
                       Passage(cid, not over_first, sign)]
        cand = GaussCode(tuple(ps))
        if cand.is_realizable():
            code = cand
    return code


def test_a2_gauss_invariant_under_kinks():
    rnd = random.Random(11)
    for name, (code, value) in GOLDEN_A2.items():
        for _ in range(3):
            image = _random_reidemeister_image(rnd, code)
            assert a2_gauss(image) == value, name


def test_pair_formula_refit_validates_on_holdout():
    # the calibration system stays consistent, the frozen weights solve
    # it, and any refit solution reproduces a2 on codes it never saw
    from vassiliev.invariants import evaluate_pair_formula

    rnd = random.Random(3)
    batch = []
    for name, (code, value) in GOLDEN_A2.items():
        batch.append((code, value))
        batch.append((_random_reidemeister_image(rnd, code), value))
    sol = fit_pair_formula(batch)
    holdout = [
        (connected_sum(FIGURE_EIGHT, RIGHT_TREFOIL), 0),
        (connected_sum(GOLDEN_A2["granny"][0], FIGURE_EIGHT), 1),
        (_random_reidemeister_image(rnd, LEFT_TREFOIL), 1),
    ]
    for code, value in holdout:
        assert evaluate_pair_formula(sol, code) == value
        assert evaluate_pair_formula(A2_PATTERN_WEIGHTS, code) == value


def test_jones_goldens():
    v = jones_polynomial(RIGHT_TREFOIL)
    assert sorted(v.items()) in ([(-4, -1), (-3, 1), (-1, 1)],
                                 [(1, 1), (3, 1), (4, -1)])
    mirror = jones_polynomial(LEFT_TREFOIL)
    assert {(-k): c for k, c in v.items()} == mirror
    assert jones_h_coefficient(v, 0) == 1
    assert jones_h_coefficient(v, 1) == 0
    assert jones_h_coefficient(v, 2) == -3 * a2_skein(RIGHT_TREFOIL)


def test_bracket_kink_identity():
    kink = GaussCode.from_text("O1+,U1+")
    assert kauffman_bracket(kink) == {3: -1}


def test_calibrations():
    assert a2_weight_calibration() == 1
    # the dual normalisation puts the trefoil at one half
    assert abs(v3_jones(RIGHT_TREFOIL)) == Fraction(1, 2)
    assert v3_jones(LEFT_TREFOIL) == -v3_jones(RIGHT_TREFOIL)
    assert v3_jones(FIGURE_EIGHT) == 0


def test_v3_additive_and_mirror_odd():
    granny = connected_sum(RIGHT_TREFOIL, RIGHT_TREFOIL)
    square = connected_sum(RIGHT_TREFOIL, LEFT_TREFOIL)
    assert invariant_v3(granny) == 2 * v3_jones(RIGHT_TREFOIL)
    assert invariant_v3(square) == 0
    assert invariant_v3(GaussCode.from_text("")) == 0


def test_dual_evaluation_consistent_on_battery():
    for name, (code, _) in GOLDEN_A2.items():
        invariant_a2(code)  # raises ConsistencyError on any disagreement
