"""Exact q-expansions: Eisenstein series, the discriminant, isobaric fits.

Normalisations: G_k = -B_k/(2k) + sum_{m>=1} sigma_{k-1}(m) q^m, and the
coordinates of the weighted cover are matched by u = g2 = 20 G_4 and
v = g3 = (7/3) G_6, so that u^3 - 27 v^2 is the discriminant cusp form
q prod (1 - q^m)^24.  No floating point enters this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .laurent import GradedLaurent, Q


class QSeries:
    """A truncated series sum a_m q^m, m = 0..order, with exact coefficients."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        coeffs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) < order + 1:
            coeffs = coeffs + [Q(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs[: order + 1]
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls([], order)

    @classmethod
    def const(cls, c, order: int) -> "QSeries":
        return cls([c], order)

    def __getitem__(self, m: int) -> Fraction:
        return self.coeffs[m]

    def __add__(self, o: "QSeries") -> "QSeries":
        order = min(self.order, o.order)
        return QSeries([self.coeffs[m] + o.coeffs[m] for m in range(order + 1)], order)

    def __sub__(self, o: "QSeries") -> "QSeries":
        order = min(self.order, o.order)
        return QSeries([self.coeffs[m] - o.coeffs[m] for m in range(order + 1)], order)

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.order)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return QSeries([c * o for c in self.coeffs], self.order)
        order = min(self.order, o.order)
        out = [Q(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if not a:
                continue
            for j in range(0, order + 1 - i):
                b = o.coeffs[j]
                if b:
                    out[i + j] += a * b
        return QSeries(out, order)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        out = QSeries.const(1, self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, o) -> bool:
        if not isinstance(o, QSeries):
            return NotImplemented
        order = min(self.order, o.order)
        return self.coeffs[: order + 1] == o.coeffs[: order + 1]

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"QSeries([{head}, ...], order={self.order})"

    def evaluate(self, q):
        """Horner evaluation at numeric q (exact or mpmath)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * q + (c.numerator if c.denominator == 1 else c)
        return acc


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = -1/2, by the defining recursion."""
    if k == 0:
        return Q(1)
    # sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1
    from math import comb

    total = Q(0)
    for j in range(k):
        total += comb(k + 1, j) * bernoulli(j)
    return -total / (k + 1)


@lru_cache(maxsize=None)
def _sigma_table(exp: int, order: int) -> tuple:
    sig = [0] * (order + 1)
    for d in range(1, order + 1):
        pd = d ** exp
        for m in range(d, order + 1, d):
            sig[m] += pd
    return tuple(sig)


def eisenstein(k: int, order: int) -> QSeries:
    """G_k = -B_k/(2k) + sum sigma_{k-1}(m) q^m for even k >= 2."""
    if k % 2 or k < 2:
        raise ValueError("k must be even and at least 2")
    sig = _sigma_table(k - 1, order)
    coeffs = [-bernoulli(k) / (2 * k)] + [Q(s) for s in sig[1:]]
    return QSeries(coeffs, order)


def g2g3(order: int) -> tuple[QSeries, QSeries]:
    return 20 * eisenstein(4, order), Q(7, 3) * eisenstein(6, order)


def eta_product_24(order: int) -> QSeries:
    """q prod_{m>=1} (1 - q^m)^24 via the pentagonal-number series."""
    euler = [Q(0)] * (order + 1)
    euler[0] = Q(1)
    g = 1
    while True:
        done = True
        for gp in (g * (3 * g - 1) // 2, g * (3 * g + 1) // 2):
            if gp <= order:
                euler[gp] += Q((-1) ** g)
                done = False
        if done:
            break
        g += 1
    series = QSeries(euler, order) ** 24
    shifted = [Q(0)] + series.coeffs[:order]
    return QSeries(shifted, order)


def discriminant_q(order: int) -> QSeries:
    """g2^3 - 27 g3^2; rejects any mismatch with the eta-product expansion."""
    g2, g3 = g2g3(order)
    delta = g2 ** 3 - 27 * (g3 ** 2)
    if delta != eta_product_24(order):
        raise ArithmeticError("discriminant disagrees with the eta product")
    return delta


@lru_cache(maxsize=None)
def _isobaric_expansions(weight: int, order: int):
    """q-expansions of the monomials g2^a g3^b with 4a + 6b = weight."""
    g2, g3 = g2g3(order)
    out = []
    for a in range(weight // 4, -1, -1):
        rem = weight - 4 * a
        if rem % 6 == 0:
            b = rem // 6
            out.append(((a, b), (g2 ** a) * (g3 ** b)))
    return out


def poly_from_qexpansion(f: QSeries, weight: int) -> GradedLaurent:
    """Solve f = sum c_ab g2^a g3^b exactly; the residual must vanish to f.order.

    Raises if the system is inconsistent (f not modular of this weight) or if
    f.order is too small to determine the coefficients.
    """
    monos = _isobaric_expansions(weight, f.order)
    dim = len(monos)
    if f.order + 1 < dim:
        raise ValueError(f"need at least {dim} coefficients, got order {f.order}")
    # solve on the first `dim` coefficients, verify on the rest
    rows = [[series[m] for (_, series) in monos] + [f[m]] for m in range(dim)]
    sol = _solve_square(rows, dim)
    if sol is None:
        raise ArithmeticError("isobaric fit is singular; input is not modular of this weight")
    for m in range(f.order + 1):
        acc = Q(0)
        for c, (_, series) in zip(sol, monos):
            acc += c * series[m]
        if acc != f[m]:
            raise ArithmeticError(f"isobaric fit fails at q^{m}; not modular of weight {weight}")
    terms = {}
    for c, ((a, b), _) in zip(sol, monos):
        if c:
            terms[(a, b)] = c
    return GradedLaurent(terms)


def _solve_square(rows, dim):
    for col in range(dim):
        piv = next((r for r in range(col, dim) if rows[r][col]), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(dim):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][dim] for r in range(dim)]
