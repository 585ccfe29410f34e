from fractions import Fraction as Q

import pytest

from secondkind.cech import is_cocycle
from secondkind.forms import OneFormScalar
from secondkind.laurent import Chart, DELTA, GradedLaurent, ZERO
from secondkind.second_kind import (
    BadIndex,
    canonical_basis,
    cusp_dimension,
    dim_modular,
    eliminate_bad_terms,
    enumerate_obstructions,
    holomorphic_cocycle,
    modular_monomials,
    second_kind_pairs,
)

L = GradedLaurent.term


def one_form(c, a, b):
    return OneFormScalar(L(c, a, b), ZERO)


def test_enumerate_obstructions_small():
    assert enumerate_obstructions(5) == [BadIndex(1, 1, 10, 0)]
    assert enumerate_obstructions(2) == []
    assert enumerate_obstructions(7) == [BadIndex(1, 1, 12, 2), BadIndex(2, 1, 14, 0)]


def test_cusp_dimensions():
    assert cusp_dimension(12) == 1
    assert cusp_dimension(4) == 0
    assert cusp_dimension(26) == 1
    assert cusp_dimension(24) == 2
    with pytest.raises(ValueError):
        cusp_dimension(13)


def test_pair_count_matches_cusp_dimension_through_weight_60():
    for weight in range(12, 61, 2):
        n = (weight - 2) // 2
        assert len(second_kind_pairs(n)) == cusp_dimension(weight)


def test_weight12_class_exact():
    c = eliminate_bad_terms(1, 1)
    assert c.n == 5
    assert dict(c.cochain.inter.slots()) == {(10, 0): L(1, -1, -1)}
    assert dict(c.cochain.chart0.slots()) == {(10, 0): one_form(9, -2, 0)}
    assert dict(c.cochain.chart1.slots()) == {
        (10, 0): one_form(Q(-1, 2), 1, -2),
        (9, 1): one_form(Q(-5, 4), 0, -1),
    }


def test_weight16_class_exact():
    c = eliminate_bad_terms(2, 1)
    assert c.n == 7
    assert dict(c.cochain.inter.slots()) == {
        (14, 0): L(1, -2, -1),
        (12, 2): L(Q(7, 12), -1, -1),
    }
    assert dict(c.cochain.chart0.slots()) == {
        (14, 0): one_form(18, -3, 0),
        (12, 2): one_form(Q(21, 4), -2, 0),
    }
    assert dict(c.cochain.chart1.slots()) == {
        (14, 0): one_form(Q(-1, 2), 0, -2),
        (12, 2): one_form(Q(-7, 24), 1, -2),
        (11, 3): one_form(Q(-7, 8), 0, -1),
    }


def test_weight20_class_closed_with_leading_term():
    c = eliminate_bad_terms(3, 1)
    assert c.n == 9
    assert is_cocycle(c.cochain)
    assert c.cochain.inter.get(18, 0) == L(1, -3, -1)
    assert c.l_trail[0] == (18, (3, 1), 1)


def test_holomorphic_cocycles():
    c = holomorphic_cocycle(DELTA, 5)
    assert dict(c.cochain.chart0.slots()) == {(0, 10): OneFormScalar(DELTA, ZERO)}
    assert c.cochain.inter.is_zero()

    cu = holomorphic_cocycle(L(1, 1, 0), 1)
    assert is_cocycle(cu.cochain)

    cz = holomorphic_cocycle(ZERO, 5)
    assert cz.cochain.is_zero()

    with pytest.raises(ValueError):
        holomorphic_cocycle(L(1, -1, 0), 1)
    with pytest.raises(ValueError):
        holomorphic_cocycle(L(1, 1, 0) + L(1, 0, 1), 1)


def test_canonical_basis_counts():
    b5 = canonical_basis(5)
    assert len(b5) == 3
    assert sorted(c.label[0] for c in b5) == ["holo", "holo", "jk"]

    assert len(canonical_basis(1)) == 1
    b7 = canonical_basis(7)
    assert len(b7) == 3
    assert [c.label for c in b7 if not c.is_holomorphic] == [("jk", 2, 1)]


def test_canonical_basis_leading_monomials_distinct():
    for n in range(5, 16):
        leading = []
        for c in canonical_basis(n):
            if c.is_holomorphic:
                continue
            trail = c.l_trail[0]
            assert trail[0] == 2 * n and trail[2] == 1
            leading.append(trail[1])
        assert len(set(leading)) == len(leading)


def test_elimination_termination_order():
    # whenever an appended term exists below the top, the last order is n + 5
    for n in range(5, 21):
        for j, k in second_kind_pairs(n):
            c = eliminate_bad_terms(j, k)
            orders = [o for o, _, _ in c.l_trail]
            assert orders[0] == 2 * n
            if len(orders) > 1:
                assert min(orders) >= n + 5
                had_order_n6_bad = any(o == n + 5 for o in orders)
                if had_order_n6_bad:
                    assert orders[-1] == n + 5


def test_all_cocycles_closed_through_weight_30():
    for n in range(1, 15):
        for c in canonical_basis(n):
            assert is_cocycle(c.cochain)


def test_modular_monomials():
    weights = {12: [(3, 0), (0, 2)], 16: [(4, 0), (1, 2)], 4: [(1, 0)]}
    for w, expect in weights.items():
        got = [next(iter([(a, b) for a, b, _ in m.terms()])) for m in modular_monomials(w)]
        assert got == expect
    assert dim_modular(2) == 0
