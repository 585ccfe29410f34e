"""The two-chart Cech-de Rham complex with S^2n H coefficients.

A cochain of total degree q collects chart data and intersection data:

    degree 0:  (f0, f1)            functions on U0, U1
    degree 1:  (w0, w1; l)         1-forms on U0, U1, a function on U01
    degree 2:  (b0, b1; m)         2-forms on U0, U1, a 1-form on U01

There is no (2,1)-slot because forms stop at degree 2, and no Cech degree 2
because the cover has two opens.  The total differential is

    D(f0, f1)    = (nabla f0, nabla f1; f1 - f0)
    D(w0, w1; l) = (nabla w0, nabla w1; (w1 - w0) - nabla l)

so a degree-1 cochain is closed iff both chart forms are flat and their
difference is nabla of the gluing function.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .forms import (
    FUNCTION,
    ONEFORM,
    TWOFORM,
    OneFormScalar,
    SymSection,
    TwoFormScalar,
    nabla0,
    wedge_scalars,
)
from .laurent import Chart, GradedLaurent, Q

_DEGREE_FIELDS = {
    0: ((FUNCTION, Chart.U0), (FUNCTION, Chart.U1), None),
    1: ((ONEFORM, Chart.U0), (ONEFORM, Chart.U1), (FUNCTION, Chart.U01)),
    2: ((TWOFORM, Chart.U0), (TWOFORM, Chart.U1), (ONEFORM, Chart.U01)),
}


class CechCochain:
    """A cochain (chart0, chart1; inter) of the given total degree."""

    __slots__ = ("n", "degree", "weight", "chart0", "chart1", "inter")

    def __init__(self, n, degree, chart0, chart1, inter=None, weight: int = 0):
        if degree not in _DEGREE_FIELDS:
            raise ValueError("total degree must be 0, 1 or 2")
        (k0, c0), (k1, c1), ki = _DEGREE_FIELDS[degree]
        if inter is None and ki is not None:
            inter = SymSection.zero(n, ki[1], ki[0], weight)
        for sec, (kind, chart) in ((chart0, (k0, c0)), (chart1, (k1, c1))):
            if sec.kind != kind or sec.chart != chart or sec.n != n or sec.weight != weight:
                raise ValueError(f"component mismatch: want {kind}@{chart}, n={n}, weight={weight}")
        if ki is not None:
            if inter.kind != ki[0] or inter.chart != ki[1] or inter.n != n or inter.weight != weight:
                raise ValueError("intersection component mismatch")
        elif inter is not None:
            raise ValueError("degree-0 cochains have no intersection slot")
        self.n = n
        self.degree = degree
        self.weight = weight
        self.chart0 = chart0
        self.chart1 = chart1
        self.inter = inter

    @classmethod
    def zero(cls, n: int, degree: int, weight: int = 0) -> "CechCochain":
        (k0, c0), (k1, c1), ki = _DEGREE_FIELDS[degree]
        return cls(
            n,
            degree,
            SymSection.zero(n, c0, k0, weight),
            SymSection.zero(n, c1, k1, weight),
            SymSection.zero(n, ki[1], ki[0], weight) if ki else None,
            weight,
        )

    @classmethod
    def of_degree1(cls, n, w0, w1, l, weight: int = 0) -> "CechCochain":
        return cls(n, 1, w0, w1, l, weight)

    def is_zero(self) -> bool:
        return (
            self.chart0.is_zero()
            and self.chart1.is_zero()
            and (self.inter is None or self.inter.is_zero())
        )

    def __add__(self, o: "CechCochain") -> "CechCochain":
        if (self.n, self.degree, self.weight) != (o.n, o.degree, o.weight):
            raise ValueError("incompatible cochains")
        return CechCochain(
            self.n,
            self.degree,
            self.chart0 + o.chart0,
            self.chart1 + o.chart1,
            self.inter + o.inter if self.inter is not None else None,
            self.weight,
        )

    def __neg__(self) -> "CechCochain":
        return CechCochain(
            self.n,
            self.degree,
            -self.chart0,
            -self.chart1,
            -self.inter if self.inter is not None else None,
            self.weight,
        )

    def __sub__(self, o: "CechCochain") -> "CechCochain":
        return self + (-o)

    def scale(self, x) -> "CechCochain":
        return CechCochain(
            self.n,
            self.degree,
            self.chart0.scale(x),
            self.chart1.scale(x),
            self.inter.scale(x) if self.inter is not None else None,
            self.weight,
        )

    def __eq__(self, o) -> bool:
        if not isinstance(o, CechCochain):
            return NotImplemented
        return (
            (self.n, self.degree, self.weight) == (o.n, o.degree, o.weight)
            and self.chart0 == o.chart0
            and self.chart1 == o.chart1
            and self.inter == o.inter
        )

    def __str__(self) -> str:
        if self.degree == 0:
            return f"({self.chart0}, {self.chart1})"
        return f"({self.chart0}, {self.chart1}; {self.inter})"

    def __repr__(self) -> str:
        return f"CechCochain(n={self.n}, deg={self.degree}, {self})"


def cech_delta(c: CechCochain) -> SymSection:
    """The Cech differential: restriction difference (chart1 - chart0) on U01."""
    return c.chart1.restrict(Chart.U01) - c.chart0.restrict(Chart.U01)


def total_D(c: CechCochain) -> CechCochain:
    """Total differential delta + (-1)^q nabla of the double complex."""
    if c.degree == 0:
        return CechCochain(
            c.n, 1, nabla0(c.chart0), nabla0(c.chart1), cech_delta(c), c.weight
        )
    if c.degree == 1:
        return CechCochain(
            c.n,
            2,
            nabla0(c.chart0),
            nabla0(c.chart1),
            cech_delta(c) - nabla0(c.inter),
            c.weight,
        )
    raise ValueError("the total complex truncates: no differential out of degree 2")


def is_cocycle(c: CechCochain) -> bool:
    return total_D(c).is_zero()


# ---------------------------------------------------------------------------
# Wedge product of degree-1 cochains.
# ---------------------------------------------------------------------------


def scalar_contract(slot_a, slot_b):
    """Multiplication rule for untwisted (n = 0) coefficients."""
    return [((0, 0), Q(1))]


def make_pairing_contract(n: int):
    """Contract S^2n H x S^2n H -> Q with the inner product of pairing_contract."""

    def contract(slot_a, slot_b):
        val = pairing_contract(n, slot_a, slot_b)
        return [((0, 0), val)] if val else []

    return contract


def wedge_cochains(a: CechCochain, b: CechCochain, contract=None):
    """Wedge (w0^w0', w1^w1'; l.w1' - w0.l') of two degree-1 cochains.

    `contract` maps a pair of frame slots to [(output slot, rational)], and
    defaults to the plain product rule for untwisted coefficients.  The
    output is a degree-2 cochain; its n and weight are inferred from the
    first contraction performed, so the rule must be weight-consistent.
    """
    if a.degree != 1 or b.degree != 1:
        raise ValueError("wedge_cochains wants degree-1 cochains")
    if contract is None:
        if a.n or b.n:
            raise ValueError("twisted cochains need an explicit contraction rule")
        contract = scalar_contract
        out_n = 0
    else:
        out_n = 0  # every supplied rule in this package lands in scalars
    out_weight = a.weight + b.weight

    b0: dict = {}
    b1: dict = {}
    m: dict = {}

    def bump(target, slot, val, zero):
        if val.is_zero():
            return
        target[slot] = target.get(slot, zero) + val

    for (sa, ta), fa in a.chart0.slots():
        for (sb, tb), fb in b.chart0.slots():
            for slot, coef in contract((sa, ta), (sb, tb)):
                bump(b0, slot, wedge_scalars(fa, fb).scale(coef), TwoFormScalar.zero())
    for (sa, ta), fa in a.chart1.slots():
        for (sb, tb), fb in b.chart1.slots():
            for slot, coef in contract((sa, ta), (sb, tb)):
                bump(b1, slot, wedge_scalars(fa, fb).scale(coef), TwoFormScalar.zero())
    for (sa, ta), la in a.inter.slots():
        for (sb, tb), fb in b.chart1.slots():
            for slot, coef in contract((sa, ta), (sb, tb)):
                bump(m, slot, fb.scale(la * coef), OneFormScalar.zero())
    for (sa, ta), fa in a.chart0.slots():
        for (sb, tb), lb in b.inter.slots():
            for slot, coef in contract((sa, ta), (sb, tb)):
                bump(m, slot, fa.scale(lb * (-coef)), OneFormScalar.zero())

    return CechCochain(
        out_n,
        2,
        SymSection(out_n, Chart.U0, TWOFORM, b0, out_weight),
        SymSection(out_n, Chart.U1, TWOFORM, b1, out_weight),
        SymSection(out_n, Chart.U01, ONEFORM, m, out_weight),
        out_weight,
    )


# ---------------------------------------------------------------------------
# The symmetric-power pairing.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def pairing_contract(n: int, slot_x: tuple[int, int], slot_y: tuple[int, int]) -> Fraction:
    """<S^a T^b, S^s T^t> for a+b = s+t = 2n, normalised by <T^2n, S^2n> = 1.

    Induced from the skew product <S,T> = -<T,S> = -1 on the rank-two bundle
    by symmetrisation; the closed form is (-1)^a a! b! / (2n)! when (s, t) is
    the transpose (b, a) and zero otherwise.
    """
    a, b = slot_x
    s, t = slot_y
    if a + b != 2 * n or s + t != 2 * n:
        raise ValueError("pairing slots must match n")
    if (s, t) != (b, a):
        return Q(0)
    return Q((-1) ** a * math.factorial(a) * math.factorial(b), math.factorial(2 * n))


def pairing_bruteforce(n: int, slot_x, slot_y) -> Fraction:
    """Independent oracle: symmetrised sum over permutations (small n only)."""
    a, b = slot_x
    s, t = slot_y
    xs = ["S"] * a + ["T"] * b
    ys = ["S"] * s + ["T"] * t
    base = {("S", "T"): Q(-1), ("T", "S"): Q(1), ("S", "S"): Q(0), ("T", "T"): Q(0)}
    total = Q(0)
    for perm in permutations(range(2 * n)):
        prod = Q(1)
        for i, j in enumerate(perm):
            prod *= base[(xs[i], ys[j])]
            if not prod:
                break
        total += prod
    return total / math.factorial(2 * n)


# ---------------------------------------------------------------------------
# JSON serialization.
# ---------------------------------------------------------------------------

def _section_terms(sec: SymSection) -> list[dict]:
    out = []
    for (s, t), val in sec.slots():
        if sec.kind == FUNCTION:
            comps = ((("fun"), val),)
        elif sec.kind == ONEFORM:
            comps = (("alphaOverDelta", val.c_alpha), ("dlogDelta", val.c_dlog))
        else:
            comps = (("vol", val.c_vol),)
        for name, lau in comps:
            if not lau.is_zero():
                out.append({"s": s, "t": t, "basis": name, "monomials": lau.json_terms()})
    return out


def cochain_to_json(c: CechCochain) -> dict:
    doc = {
        "n": c.n,
        "degree": c.degree,
        "omega0": _section_terms(c.chart0),
        "omega1": _section_terms(c.chart1),
        "l": _section_terms(c.inter) if c.inter is not None else [],
    }
    if c.weight:
        doc["weight"] = c.weight
    return doc


def _section_from_terms(n, chart, kind, terms, weight):
    coeffs: dict = {}
    for term in terms:
        lau = GradedLaurent(
            {(m["a"], m["b"]): Fraction(m["num"], m["den"]) for m in term["monomials"]}
        )
        slot = (term["s"], term["t"])
        if kind == FUNCTION:
            cur = coeffs.get(slot, GradedLaurent.zero())
            coeffs[slot] = cur + lau
        elif kind == ONEFORM:
            cur = coeffs.get(slot, OneFormScalar.zero())
            if term["basis"] == "alphaOverDelta":
                coeffs[slot] = cur + OneFormScalar(lau, GradedLaurent.zero())
            else:
                coeffs[slot] = cur + OneFormScalar(GradedLaurent.zero(), lau)
        else:
            cur = coeffs.get(slot, TwoFormScalar.zero())
            coeffs[slot] = cur + TwoFormScalar(lau)
    return SymSection(n, chart, kind, coeffs, weight)


def cochain_from_json(doc: dict) -> CechCochain:
    n = doc["n"]
    degree = doc.get("degree", 1)
    weight = doc.get("weight", 0)
    (k0, c0), (k1, c1), ki = _DEGREE_FIELDS[degree]
    chart0 = _section_from_terms(n, c0, k0, doc["omega0"], weight)
    chart1 = _section_from_terms(n, c1, k1, doc["omega1"], weight)
    inter = _section_from_terms(n, ki[1], ki[0], doc.get("l", []), weight) if ki else None
    return CechCochain(n, degree, chart0, chart1, inter, weight)
