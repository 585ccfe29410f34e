"""Exact Laurent arithmetic in u, v with the multiplicative grading deg u = 4, deg v = 6.

Everything symbolic in this package has coefficients in Q[u, v, u^-1, v^-1].
The two affine charts of the weighted cover are Q[u, v, u^-1] (where v may not
appear with negative exponent) and Q[u, v, v^-1]; their intersection is the
full Laurent ring.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Iterator

Q = Fraction


class Chart(enum.Enum):
    """One of the two cover charts, or their intersection."""

    U0 = "U0"   # u invertible: monomials u^a v^b with b >= 0
    U1 = "U1"   # v invertible: monomials with a >= 0
    U01 = "U01"  # both invertible: all of Z^2

    def admits(self, a: int, b: int) -> bool:
        if self is Chart.U0:
            return b >= 0
        if self is Chart.U1:
            return a >= 0
        return True


def _as_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class GradedLaurent:
    """A Laurent polynomial sum(c_ab * u^a * v^b), kept free of zero terms.

    The monomial u^a v^b has weight 4a + 6b.  Instances are immutable by
    convention: no method mutates self after construction.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        t = {}
        if terms:
            for (a, b), c in terms.items():
                c = _as_q(c)
                if c:
                    t[(int(a), int(b))] = c
        self._t = t

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "GradedLaurent":
        return cls()

    @classmethod
    def term(cls, c, a: int = 0, b: int = 0) -> "GradedLaurent":
        return cls({(a, b): _as_q(c)})

    @classmethod
    def const(cls, c) -> "GradedLaurent":
        return cls.term(c, 0, 0)

    # -- queries ----------------------------------------------------------

    def terms(self) -> Iterator[tuple[int, int, Fraction]]:
        """Terms in the canonical order: lexicographic on (a, b)."""
        for (a, b) in sorted(self._t):
            yield a, b, self._t[(a, b)]

    def coefficient(self, a: int, b: int) -> Fraction:
        return self._t.get((a, b), Q(0))

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def weight(self) -> int | None:
        """The common weight of all terms; None for 0, ValueError if mixed."""
        w = None
        for (a, b) in self._t:
            wab = 4 * a + 6 * b
            if w is None:
                w = wab
            elif w != wab:
                raise ValueError(f"not weight-homogeneous: {self}")
        return w

    def is_homogeneous(self, w: int) -> bool:
        return all(4 * a + 6 * b == w for (a, b) in self._t)

    def fits_chart(self, chart: Chart) -> bool:
        return all(chart.admits(a, b) for (a, b) in self._t)

    def exponent_bound(self) -> int:
        """max |a|, |b| over all terms (0 for the zero element)."""
        m = 0
        for (a, b) in self._t:
            m = max(m, abs(a), abs(b))
        return m

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "GradedLaurent") -> "GradedLaurent":
        if not isinstance(other, GradedLaurent):
            return NotImplemented
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = s
            else:
                t.pop(k, None)
        out = GradedLaurent()
        out._t = t
        return out

    def __neg__(self) -> "GradedLaurent":
        out = GradedLaurent()
        out._t = {k: -c for k, c in self._t.items()}
        return out

    def __sub__(self, other: "GradedLaurent") -> "GradedLaurent":
        return self + (-other)

    def __mul__(self, other) -> "GradedLaurent":
        if isinstance(other, (int, Fraction)):
            c = _as_q(other)
            if not c:
                return GradedLaurent()
            out = GradedLaurent()
            out._t = {k: c * v for k, v in self._t.items()}
            return out
        if not isinstance(other, GradedLaurent):
            return NotImplemented
        t: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self._t.items():
            for (a2, b2), c2 in other._t.items():
                k = (a1 + a2, b1 + b2)
                s = t.get(k, 0) + c1 * c2
                if s:
                    t[k] = s
                else:
                    t.pop(k, None)
        out = GradedLaurent()
        out._t = t
        return out

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GradedLaurent":
        if e < 0:
            if len(self._t) == 1:
                ((a, b), c), = self._t.items()
                return GradedLaurent({(a * e, b * e): c ** e})
            raise ValueError("negative powers only for monomials")
        out = GradedLaurent.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def du(self) -> "GradedLaurent":
        """Partial derivative with respect to u."""
        return GradedLaurent({(a - 1, b): a * c for (a, b), c in self._t.items() if a})

    def dv(self) -> "GradedLaurent":
        return GradedLaurent({(a, b - 1): b * c for (a, b), c in self._t.items() if b})

    # -- comparison / rendering --------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GradedLaurent.const(other)
        if not isinstance(other, GradedLaurent):
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def evaluate(self, u, v):
        """Evaluate at numeric u, v (exact for Fractions, works with mpmath)."""
        total = 0
        for (a, b), c in sorted(self._t.items()):
            total += (c.numerator * u ** a * v ** b) / c.denominator
        return total

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for a, b, c in self.terms():
            mono = "*".join(
                ([f"u^{a}" if a != 1 else "u"] if a else [])
                + ([f"v^{b}" if b != 1 else "v"] if b else [])
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"GradedLaurent({self})"

    def json_terms(self) -> list[dict]:
        return [
            {"a": a, "b": b, "num": c.numerator, "den": c.denominator}
            for a, b, c in self.terms()
        ]


def laurent(terms: Iterable[tuple] | dict) -> GradedLaurent:
    """Convenience builder from {(a, b): coeff} or [(coeff, a, b), ...]."""
    if isinstance(terms, dict):
        return GradedLaurent(terms)
    out = GradedLaurent()
    for c, a, b in terms:
        out = out + GradedLaurent.term(c, a, b)
    return out


ZERO = GradedLaurent.zero()
ONE = GradedLaurent.const(1)
U = GradedLaurent.term(1, 1, 0)
V = GradedLaurent.term(1, 0, 1)
# The discriminant u^3 - 27 v^2, of weight 12; its zero locus is the cusp.
DELTA = laurent([(1, 3, 0), (-27, 0, 2)])
