"""Modular forms of the second kind: cocycle representatives of H^1.

Holomorphic modular forms of weight 2n+2 embed as global 1-forms
h(u,v) (alpha/Delta) T^2n.  The remaining classes are indexed by positive
integer pairs (j, k) with 4j + 6k = 2n, one per cusp form, and are produced
by the bad-term elimination: starting from the gluing function
l = u^-j v^-k S^2n, monomials of lower frame order are appended until
nabla(l) contains no term whose Laurent monomial has negative exponents in
both u and v; the result then splits across the two charts as a closed
cochain (w0, w1; l).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cech import CechCochain, is_cocycle, total_D
from .forms import FUNCTION, ONEFORM, OneFormScalar, SymSection, nabla0_form, nabla0_fun
from .laurent import Chart, GradedLaurent, Q, ZERO


@dataclass(frozen=True)
class BadIndex:
    """An obstruction class [u^-p v^-q S^s T^t] on the chart intersection."""

    p: int
    q: int
    s: int
    t: int


def enumerate_obstructions(n: int) -> list[BadIndex]:
    """All (p, q, s, t) with p, q >= 1, 4p + 6q <= 2n, s = n+2p+3q, t = n-2p-3q."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for p in range(1, n // 2 + 1):
        for q in range(1, n // 3 + 1):
            if 4 * p + 6 * q <= 2 * n:
                out.append(BadIndex(p, q, n + 2 * p + 3 * q, n - 2 * p - 3 * q))
    out.sort(key=lambda b: (b.p, b.q))
    return out


def dim_modular(weight: int) -> int:
    """dim M_weight for level one (equivalently, #{(a,b) >= 0 : 4a + 6b = weight})."""
    if weight % 2:
        raise ValueError("weight must be even")
    if weight < 0:
        return 0
    if weight % 12 == 2:
        return weight // 12
    return weight // 12 + 1


def cusp_dimension(weight: int) -> int:
    """dim S_weight for level one, cross-checked against the (j, k) count."""
    if weight % 2 or weight < 4:
        raise ValueError("weight must be even and at least 4")
    dim = dim_modular(weight) - 1
    pairs = sum(
        1
        for j in range(1, weight)
        for k in range(1, weight)
        if 4 * j + 6 * k == weight - 2
    )
    assert pairs == dim, (weight, pairs, dim)
    return dim


@dataclass
class SecondKindCocycle:
    """A closed degree-1 cochain with its construction trail.

    label is ("jk", j, k) for eliminated classes and ("holo", h) for global
    holomorphic representatives.  l_trail records the appended gluing terms
    as (frame order, (p, q), coefficient).
    """

    label: tuple
    n: int
    cochain: CechCochain
    l_trail: list[tuple[int, tuple[int, int], Fraction]] = field(default_factory=list)

    @property
    def is_holomorphic(self) -> bool:
        return self.label[0] == "holo"

    def name(self) -> str:
        if self.is_holomorphic:
            h = self.label[1]
            if len(h) == 1:
                ((a, b, _),) = h.terms()
                return f"e{2 * self.n + 2}_u{a}v{b}"
            return f"e{2 * self.n + 2}_[{h}]".replace(" ", "")
        _, j, k = self.label
        return f"e{2 * self.n + 2}_p{j}q{k}"


def _bad_terms(sec: SymSection):
    """Yield (order s, (s,t), (a,b), coeff) for alpha-basis monomials negative in both."""
    for (s, t), form in sec.coeffs.items():
        for a, b, c in form.c_alpha.terms():
            if a < 0 and b < 0:
                yield s, (s, t), (a, b), c
        for a, b, c in form.c_dlog.terms():
            if a < 0 and b < 0:
                raise AssertionError("unexpected bad dDelta/Delta term")


def eliminate_bad_terms(j: int, k: int) -> SecondKindCocycle:
    """Build the (j, k) cocycle by descending-order cancellation of bad terms."""
    if j < 1 or k < 1:
        raise ValueError("j, k must be positive")
    n = (4 * j + 6 * k) // 2
    two_n = 2 * n

    l_coeffs: dict[tuple[int, int], GradedLaurent] = {
        (two_n, 0): GradedLaurent.term(1, -j, -k)
    }
    trail = [(two_n, (j, k), Q(1))]

    while True:
        l_sec = SymSection(n, Chart.U01, FUNCTION, l_coeffs)
        grad = nabla0_fun(l_sec)
        bad = sorted(_bad_terms(grad), key=lambda item: (-item[0], item[2]))
        if not bad:
            break
        top = bad[0][0]
        for s, (ss, tt), (a, b), c in bad:
            if s != top:
                continue
            t_new = two_n - s + 1
            if t_new == 0:
                raise ArithmeticError(
                    f"cancellation at order {s} needs division by t = 0; "
                    "the descending-order schedule is broken"
                )
            coeff = Q(-2, 3) * c / t_new
            slot = (s - 1, t_new)
            cur = l_coeffs.get(slot, ZERO)
            l_coeffs[slot] = cur + GradedLaurent.term(coeff, a, b)
            trail.append((s - 1, (-a, -b), coeff))

    grad = nabla0_fun(SymSection(n, Chart.U01, FUNCTION, l_coeffs))
    w0: dict[tuple[int, int], OneFormScalar] = {}
    w1: dict[tuple[int, int], OneFormScalar] = {}
    for (s, t), form in grad.coeffs.items():
        for part, is_alpha in ((form.c_alpha, True), (form.c_dlog, False)):
            for a, b, c in part.terms():
                mono = GradedLaurent.term(c, a, b)
                piece = OneFormScalar(mono, ZERO) if is_alpha else OneFormScalar(ZERO, mono)
                if a < 0:
                    # u-negative terms are regular on U0; they enter with a minus
                    w0[(s, t)] = w0.get((s, t), OneFormScalar.zero()) - piece
                else:
                    # v-negative terms, and terms regular on both charts, go to U1
                    w1[(s, t)] = w1.get((s, t), OneFormScalar.zero()) + piece

    cochain = CechCochain(
        n,
        1,
        SymSection(n, Chart.U0, ONEFORM, w0),
        SymSection(n, Chart.U1, ONEFORM, w1),
        SymSection(n, Chart.U01, FUNCTION, l_coeffs),
    )
    if not nabla0_form(cochain.chart0).is_zero() or not nabla0_form(cochain.chart1).is_zero():
        raise ArithmeticError(
            f"chart split of nabla(l_{j},{k}) is not flat; the tie-break for "
            "terms regular on both charts must be revisited"
        )
    assert is_cocycle(cochain)
    return SecondKindCocycle(("jk", j, k), n, cochain, trail)


def holomorphic_cocycle(h: GradedLaurent, n: int) -> SecondKindCocycle:
    """The global cocycle (h (alpha/Delta) T^2n restricted to both charts; 0)."""
    if not h.fits_chart(Chart.U1) or not h.fits_chart(Chart.U0):
        raise ValueError("h must be a polynomial")
    if not h.is_homogeneous(2 * n + 2):
        raise ValueError(f"h must be weight-homogeneous of weight {2 * n + 2}")
    slot = {(0, 2 * n): OneFormScalar(h, ZERO)} if h else {}
    cochain = CechCochain(
        n,
        1,
        SymSection(n, Chart.U0, ONEFORM, dict(slot)),
        SymSection(n, Chart.U1, ONEFORM, dict(slot)),
        SymSection(n, Chart.U01, FUNCTION, {}),
    )
    assert is_cocycle(cochain)
    return SecondKindCocycle(("holo", h), n, cochain, [])


def modular_monomials(weight: int) -> list[GradedLaurent]:
    """The monomial basis u^a v^b of M_weight, a descending."""
    out = []
    for a in range(weight // 4, -1, -1):
        rem = weight - 4 * a
        if rem % 6 == 0:
            out.append(GradedLaurent.term(1, a, rem // 6))
    assert len(out) == dim_modular(weight)
    return out


def second_kind_pairs(n: int) -> list[tuple[int, int]]:
    """The defining pairs (j, k), both positive, with 4j + 6k = 2n, in lex order."""
    return [(j, (2 * n - 4 * j) // 6) for j in range(1, n // 2 + 1)
            if (2 * n - 4 * j) % 6 == 0 and (2 * n - 4 * j) // 6 >= 1]


def canonical_basis(n: int, jobs: int = 1) -> list[SecondKindCocycle]:
    """Holomorphic monomial classes of weight 2n+2 plus all (j, k) classes."""
    if n < 1:
        raise ValueError("n must be positive")
    basis = [holomorphic_cocycle(h, n) for h in modular_monomials(2 * n + 2)]
    pairs = second_kind_pairs(n)
    if jobs > 1 and len(pairs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            basis.extend(pool.map(_eliminate_pair, pairs))
    else:
        basis.extend(_eliminate_pair(pq) for pq in pairs)
    assert len(basis) == dim_modular(2 * n + 2) + cusp_dimension(2 * n + 2)
    return basis


def _eliminate_pair(pq: tuple[int, int]) -> SecondKindCocycle:
    return eliminate_bad_terms(*pq)
