from fractions import Fraction
from math import factorial

import pytest

from vassiliev.bounds import (
    bound_report,
    bound_table,
    brute_force_class_count,
    brute_force_x_size,
    brute_force_xtilde,
    comparison_rows,
    divisors,
    euler_phi,
    half_factorial,
    partition_sum_upper,
    primitive_bound,
    tail_estimate_rhs,
    total_bound,
    x_size,
    xtilde_count,
)
from vassiliev.errors import ResourceGuardError

PUBLISHED = {3: 1, 4: 2, 5: 4, 6: 14, 7: 54, 8: 332, 9: 2246}


def test_euler_phi():
    assert euler_phi(1) == 1
    assert euler_phi(6) == 2
    assert euler_phi(12) == 4
    with pytest.raises(ValueError):
        euler_phi(0)


def test_x_size_examples():
    assert x_size(4, 4) == 3
    assert x_size(4, 2) == 3
    assert x_size(6, 2) == 3
    with pytest.raises(ValueError):
        x_size(6, 4)


def test_bound_sequence():
    for n, v in PUBLISHED.items():
        assert xtilde_count(n) == v
        assert primitive_bound(n) == v


def test_triple_agreement():
    for n in range(3, 10):
        assert primitive_bound(n) == xtilde_count(n) == brute_force_xtilde(n)


def test_class_count():
    assert brute_force_class_count(5) == 12  # (5-1)!/2
    assert brute_force_class_count(9) == 20160


def test_fixed_class_oracle():
    for n in range(3, 8):
        for d in divisors(n):
            assert x_size(n, d) == brute_force_x_size(n, d), (n, d)


def test_brute_guard():
    with pytest.raises(ResourceGuardError):
        brute_force_xtilde(10)


def test_total_bounds():
    assert total_bound(4) == 3
    assert total_bound(6) == 18
    assert total_bound(7) == 61
    assert total_bound(8) == 358


def test_comparison_rows():
    rows = {r["n"]: r for r in comparison_rows(16)}
    assert not rows[6]["holds"] and rows[6]["total_bound"] == 18
    assert not rows[7]["holds"] and rows[7]["total_bound"] == 61
    for n in range(8, 17):
        assert rows[n]["holds"]
    assert rows[12]["tail_holds_for_primitive"]
    for n in range(6, 17):
        assert rows[n]["partition_sum"] <= 2 * factorial(n - 4)


def test_bound_report_fields():
    rep = bound_report(6)
    assert rep.primitive_bound == rep.xtilde == 14
    assert rep.total_bound == 18
    assert rep.factorial_ceiling == Fraction(12)
    assert not rep.cor53_holds
    assert rep.per_divisor[6] == 60  # (6-1)!/2


def test_bound_asymptotics_sane():
    for n in range(10, 21):
        ratio = Fraction(primitive_bound(n), factorial(n - 2))
        assert 0 < ratio <= 1


def test_bound_vs_actual_primitive_dims():
    # the bound dominates the exactly computed dimensions 1, 2, 3
    from vassiliev.diagrams import DiagramSum
    from vassiliev.linalg import RelationSpan
    from vassiliev.relations import four_t_relations, split_diagram_span
    actual = {}
    for n in (3, 4, 5):
        span = RelationSpan.over_order(n, four_t_relations(n))
        for d in split_diagram_span(n):
            span.add(DiagramSum([(d, 1)]))
        actual[n] = span.quotient_dim()
    assert actual == {3: 1, 4: 2, 5: 3}
    for n in (3, 4, 5):
        assert primitive_bound(n) >= actual[n]
