import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from vassiliev.diagrams import ChordDiagram, DiagramSum, enumerate_chord_diagrams
from vassiliev.errors import DiagramError
from vassiliev.linalg import RelationSpan, WeightSystem
from vassiliev.relations import four_t_relations, split_diagram_span

PRIMES = (2147483647, 2305843009213693951)  # both > 2^31


def full_span(n):
    span = RelationSpan.over_order(n, four_t_relations(n))
    for d in split_diagram_span(n):
        span.add(DiagramSum([(d, 1)]))
    return span


def test_rank_empty_and_duplicates():
    span = RelationSpan.over_order(2)
    assert span.rank == 0
    assert span.quotient_dim() == 2
    row = {0: Fraction(1), 1: Fraction(-2)}
    span.add(row).add(row).add(dict(row))
    assert span.rank == 1


def test_member_basics():
    span = RelationSpan.over_order(3, four_t_relations(3))
    assert span.member({})
    for rel in four_t_relations(3):
        assert span.member(rel)
    nonsplit = ChordDiagram.from_text("123123")
    assert not span.member(DiagramSum([(nonsplit, 1)]))


def test_member_dimension_mismatch():
    span = RelationSpan.over_order(2)
    with pytest.raises(DiagramError):
        span.member({5: 1})


def test_quotient_dims_small():
    assert full_span(3).quotient_dim() == 1
    assert full_span(4).quotient_dim() == 2


def test_dual_basis_annihilates_and_counts():
    for n in (2, 3, 4):
        span = full_span(n)
        duals = span.dual_basis()
        assert len(duals) == span.quotient_dim()
        for w in duals:
            assert w.annihilates(span)
            assert w.is_primitive()


def test_dual_basis_order2():
    span = full_span(2)
    (w,) = span.dual_basis()
    w = w.normalized_at(ChordDiagram.from_text("1212"))
    assert w(ChordDiagram.from_text("1212")) == 1
    assert w(ChordDiagram.from_text("1122")) == 0


def test_full_rank_span_has_empty_dual():
    span = RelationSpan.over_order(2)
    span.add({0: 1})
    span.add({1: 1})
    assert span.dual_basis() == []


def test_mod_p_agreement():
    rnd = random.Random(5)
    for n in (3, 4):
        span = full_span(n)
        for p in PRIMES:
            assert span.rank_mod_p(p) == span.rank
    # random integer matrices
    for trial in range(20):
        cols = rnd.randint(1, 8)
        span = RelationSpan(tuple(range(cols)))
        for _ in range(rnd.randint(1, 10)):
            row = {c: rnd.randint(-9, 9) for c in range(cols)
                   if rnd.random() < 0.6}
            span.add({c: v for c, v in row.items() if v})
        for p in PRIMES:
            assert span.rank_mod_p(p) == span.rank


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(min_value=-4, max_value=4),
                         min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_matches_dense_oracle(rows):
    span = RelationSpan(tuple(range(4)))
    for r in rows:
        span.add({i: v for i, v in enumerate(r) if v})
    # dense Gaussian elimination over Fraction as the oracle
    mat = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    for col in range(4):
        pivot = None
        for i in range(rank, len(mat)):
            if mat[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pr = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / pr[col]
                mat[i] = [a - f * b for a, b in zip(mat[i], pr)]
        rank += 1
    assert span.rank == rank
    assert span.quotient_dim() + span.rank == 4


def test_matrix_market_dump():
    span = RelationSpan.over_order(2)
    span.add({0: 1, 1: -1})
    buf = io.StringIO()
    span.dump_matrix_market(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("%%MatrixMarket")
    assert lines[1] == "1 2 2"
    assert lines[2:] == ["1 1 1", "1 2 -1"]
