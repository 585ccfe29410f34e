from fractions import Fraction as Q

import pytest

from secondkind.laurent import DELTA, GradedLaurent
from secondkind.qseries import (
    QSeries,
    bernoulli,
    discriminant_q,
    eisenstein,
    eta_product_24,
    g2g3,
    poly_from_qexpansion,
)


def test_bernoulli_values():
    assert bernoulli(2) == Q(1, 6)
    assert bernoulli(4) == Q(-1, 30)
    assert bernoulli(6) == Q(1, 42)
    assert bernoulli(12) == Q(-691, 2730)
    assert bernoulli(3) == 0


def test_eisenstein_constant_terms():
    assert eisenstein(4, 10)[0] == Q(1, 240)
    assert eisenstein(6, 10)[0] == Q(-1, 504)
    assert eisenstein(2, 10)[0] == Q(-1, 24)
    assert eisenstein(4, 10)[1] == 1  # sigma_3(1)
    with pytest.raises(ValueError):
        eisenstein(5, 10)


def test_g2_g3_normalisation():
    g2, g3 = g2g3(8)
    assert g2[0] == Q(1, 12)
    assert g3[0] == Q(-1, 216)
    assert g2[1] == 20


def test_discriminant_expansion():
    d = discriminant_q(30)
    assert d[0] == 0
    assert d[1] == 1
    assert d[2] == -24
    assert d[3] == 252
    assert d[5] == 4830
    assert d[5] == eta_product_24(30)[5]


def test_discriminant_identity_to_order_200():
    assert discriminant_q(200) == eta_product_24(200)


def test_poly_from_qexpansion_delta():
    assert poly_from_qexpansion(discriminant_q(30), 12) == DELTA


def test_poly_from_qexpansion_g2():
    g2, _ = g2g3(10)
    assert poly_from_qexpansion(g2, 4) == GradedLaurent.term(1, 1, 0)


def test_poly_from_qexpansion_G12_roundtrip():
    h = poly_from_qexpansion(eisenstein(12, 30), 12)
    g2, g3 = g2g3(30)
    acc = QSeries.zero(30)
    for a, b, c in h.terms():
        acc = acc + c * ((g2 ** a) * (g3 ** b))
    assert acc == eisenstein(12, 30)


def test_poly_round_trip_isobaric_weights():
    import random

    rng = random.Random(17)
    for weight in range(4, 61, 2):
        if weight % 12 == 2 and weight < 14:
            continue
        g2, g3 = g2g3(12)
        target = QSeries.zero(12)
        terms = {}
        for a in range(weight // 4, -1, -1):
            rem = weight - 4 * a
            if rem % 6 == 0:
                c = rng.randint(-20, 20)
                if c:
                    terms[(a, rem // 6)] = Q(c)
                    target = target + c * ((g2 ** a) * (g3 ** (rem // 6)))
        if not terms:
            continue
        assert poly_from_qexpansion(target, weight) == GradedLaurent(terms)


def test_poly_from_qexpansion_rejects_nonmodular():
    g2, _ = g2g3(10)
    broken = g2 + QSeries([0] * 9 + [1], 10)
    with pytest.raises(ArithmeticError):
        poly_from_qexpansion(broken, 4)
