import random
from fractions import Fraction as Q

import pytest

from secondkind.cech import (
    CechCochain,
    cech_delta,
    cochain_from_json,
    cochain_to_json,
    is_cocycle,
    make_pairing_contract,
    pairing_bruteforce,
    pairing_contract,
    total_D,
    wedge_cochains,
)
from secondkind.forms import FUNCTION, ONEFORM, OneFormScalar, SymSection
from secondkind.laurent import Chart, DELTA, GradedLaurent, ZERO, laurent
from secondkind.second_kind import eliminate_bad_terms, holomorphic_cocycle

L = GradedLaurent.term


def fn(n, chart, coeffs, weight=0):
    return SymSection(n, chart, FUNCTION, coeffs, weight)


def test_delta_of_equal_restrictions():
    x = L(3, 1, 0)
    c = CechCochain(2, 0, fn(2, Chart.U0, {(0, 4): x}), fn(2, Chart.U1, {(0, 4): x}))
    assert cech_delta(c).is_zero()


def test_delta_plain_difference():
    # restriction difference is plain subtraction in the Laurent ring; the
    # chart data here are weight-8 functions u^2 and u^5/v^2
    c = CechCochain(
        0,
        0,
        fn(0, Chart.U0, {(0, 0): L(1, 2, 0)}, weight=8),
        fn(0, Chart.U1, {(0, 0): L(1, 5, -2)}, weight=8),
        weight=8,
    )
    assert cech_delta(c).get(0, 0) == L(1, 5, -2) - L(1, 2, 0)
    # the same subtraction semantics at the ring level, mixing chart poles
    assert L(1, -1, 2) - L(1, 1, 0) == GradedLaurent({(-1, 2): 1, (1, 0): -1})


def test_first_obstruction_cocycle_closed_and_delta_split():
    c = eliminate_bad_terms(1, 1)
    assert is_cocycle(c.cochain)
    from secondkind.forms import nabla0_fun

    grad = nabla0_fun(c.cochain.inter)
    assert cech_delta(c.cochain) == grad.restrict(Chart.U01)


def test_total_D_on_global_closed_form():
    c = holomorphic_cocycle(DELTA, 5)
    assert total_D(c.cochain).is_zero()


def test_total_D_constant_pair():
    c = CechCochain(0, 0, fn(0, Chart.U0, {(0, 0): L(7, 0, 0)}), fn(0, Chart.U1, {(0, 0): L(7, 0, 0)}))
    assert total_D(c).is_zero()


def test_total_D_rejects_degree2():
    z = CechCochain.zero(1, 2)
    with pytest.raises(ValueError):
        total_D(z)


def test_D_squared_zero_random():
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(0, 10)
        coeffs0, coeffs1 = {}, {}
        for _ in range(2):
            s = rng.randint(0, 2 * n)
            t = 2 * n - s
            w = t - s
            for a in range(-5, 6):
                if (w - 4 * a) % 6 == 0 and abs((w - 4 * a) // 6) <= 5:
                    b = (w - 4 * a) // 6
                    if b >= 0:
                        coeffs0[(s, t)] = coeffs0.get((s, t), ZERO) + L(rng.randint(-9, 9), a, b)
                    if a >= 0:
                        coeffs1[(s, t)] = coeffs1.get((s, t), ZERO) + L(rng.randint(-9, 9), a, b)
        c = CechCochain(n, 0, fn(n, Chart.U0, coeffs0), fn(n, Chart.U1, coeffs1))
        assert total_D(total_D(c)).is_zero()


# --- pairing -------------------------------------------------------------------


def test_pairing_top_value():
    assert pairing_contract(5, (0, 10), (10, 0)) == 1
    assert pairing_contract(5, (0, 10), (9, 1)) == 0


def test_pairing_symmetric_transpose_only():
    for n in (1, 2, 5):
        for s in range(0, 2 * n + 1):
            for s2 in range(0, 2 * n + 1):
                x, y = (s, 2 * n - s), (s2, 2 * n - s2)
                assert pairing_contract(n, x, y) == pairing_contract(n, y, x)
                if s2 != 2 * n - s:
                    assert pairing_contract(n, x, y) == 0


def test_pairing_ST_ST():
    assert pairing_contract(1, (1, 1), (1, 1)) == Q(-1, 2)


def test_pairing_against_bruteforce():
    for n in (1, 2):
        for s in range(0, 2 * n + 1):
            for s2 in range(0, 2 * n + 1):
                x, y = (s, 2 * n - s), (s2, 2 * n - s2)
                assert pairing_contract(n, x, y) == pairing_bruteforce(n, x, y)


# --- wedge of cochains -----------------------------------------------------------


def test_pairing_wedge_of_the_two_weight12_classes():
    a = holomorphic_cocycle(DELTA, 5).cochain
    b = eliminate_bad_terms(1, 1).cochain
    prod = wedge_cochains(a, b, make_pairing_contract(5))
    assert prod.chart0.is_zero() and prod.chart1.is_zero()
    m = prod.inter.get(0, 0)
    # -alpha/(uv), written over Delta: c_alpha = -Delta/(uv)
    assert m.c_alpha == -(DELTA * L(1, -1, -1))
    assert m.c_dlog.is_zero()


def test_wedge_needs_chart_form_factors():
    l_only = CechCochain(
        0,
        1,
        SymSection.zero(0, Chart.U0, ONEFORM),
        SymSection.zero(0, Chart.U1, ONEFORM),
        fn(0, Chart.U01, {(0, 0): L(1, 3, -2)}),
    )
    assert wedge_cochains(l_only, l_only).is_zero()


def test_wedge_self_zero_without_gluing():
    w0 = OneFormScalar(laurent([(2, 0, 0)]), laurent([(5, -2, 1)]))
    w1 = OneFormScalar(laurent([(3, 0, 0)]), laurent([(7, 1, -1)]))
    a = CechCochain(
        0,
        1,
        SymSection(0, Chart.U0, ONEFORM, {(0, 0): w0}, weight=-2),
        SymSection(0, Chart.U1, ONEFORM, {(0, 0): w1}, weight=-2),
        SymSection.zero(0, Chart.U01, FUNCTION, weight=-2),
        weight=-2,
    )
    assert wedge_cochains(a, a).is_zero()


def test_cocycle_wedge_is_closed():
    # with D a = D b = 0 the product (paired) lands in closed degree-2 data:
    # both chart parts vanish and the middle slot obeys the cocycle algebra
    a = holomorphic_cocycle(DELTA, 5).cochain
    b = eliminate_bad_terms(1, 1).cochain
    prod = wedge_cochains(a, b, make_pairing_contract(5))
    # degree-2 closedness cannot be probed by D (complex truncates); instead the
    # wedge of cocycles must again be expressible with flat chart data
    assert prod.chart0.is_zero() and prod.chart1.is_zero()


# --- serialization ----------------------------------------------------------------


def test_json_round_trip():
    c = eliminate_bad_terms(2, 1).cochain
    doc = cochain_to_json(c)
    back = cochain_from_json(doc)
    assert back == c
    assert doc["n"] == 7
    assert [t["s"] for t in doc["l"]] == [12, 14]
