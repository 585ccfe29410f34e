"""Logarithmic forms on the weighted cover and the flat connection on S^2n H.

Conventions used throughout:

    alpha  = 2u dv - 3v du                (weight 10)
    Delta  = u^3 - 27 v^2                 (weight 12)
    dDelta = 3u^2 du - 54 v dv

Every logarithmic 1-form is stored in the basis {alpha/Delta, dDelta/Delta},
every logarithmic 2-form as a multiple of du^dv/Delta.  The frame S, T of the
rank-two bundle has weights +1, -1, and the connection acts on frame monomials
by

    nabla0(S^s T^t) = (3t/2) (alpha/Delta) S^{s+1} T^{t-1}
                      + ((s-t)/12) (dDelta/Delta) S^s T^t
                      - (s u/8) (alpha/Delta) S^{s-1} T^{t+1}

extended to coefficient functions by the Leibniz rule.  Useful exact facts,
all derivable from the definitions above:

    du = 9v (alpha/Delta) + (u/3) (dDelta/Delta)
    dv = (u^2/2) (alpha/Delta) + (v/2) (dDelta/Delta)
    alpha ^ dDelta = -6 Delta du^dv
    d(alpha/Delta) = -du^dv/Delta          (and d(dDelta/Delta) = 0)

The last identity is not an axiom here; it is re-derived in the test-suite by
expanding alpha back into du, dv and differentiating.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .laurent import Chart, GradedLaurent, Q, ZERO, ONE, U, V, DELTA

Kind = str  # "function" | "oneform" | "twoform"

FUNCTION = "function"
ONEFORM = "oneform"
TWOFORM = "twoform"


class SliceId(enum.Enum):
    """Transverse slice used for residue extraction.

    v_eq_1 fixes v = 1 and uses u as the local coordinate around the orbit
    u = 0; u_eq_1 fixes u = 1 with local coordinate v around the orbit v = 0.
    """

    v_eq_1 = "v_eq_1"
    u_eq_1 = "u_eq_1"


class OneFormScalar:
    """c_alpha * alpha/Delta + c_dlog * dDelta/Delta with Laurent coefficients."""

    __slots__ = ("c_alpha", "c_dlog")

    def __init__(self, c_alpha: GradedLaurent = ZERO, c_dlog: GradedLaurent = ZERO):
        self.c_alpha = c_alpha
        self.c_dlog = c_dlog

    @classmethod
    def zero(cls) -> "OneFormScalar":
        return cls(ZERO, ZERO)

    def is_zero(self) -> bool:
        return self.c_alpha.is_zero() and self.c_dlog.is_zero()

    def __add__(self, o: "OneFormScalar") -> "OneFormScalar":
        return OneFormScalar(self.c_alpha + o.c_alpha, self.c_dlog + o.c_dlog)

    def __sub__(self, o: "OneFormScalar") -> "OneFormScalar":
        return OneFormScalar(self.c_alpha - o.c_alpha, self.c_dlog - o.c_dlog)

    def __neg__(self) -> "OneFormScalar":
        return OneFormScalar(-self.c_alpha, -self.c_dlog)

    def scale(self, x) -> "OneFormScalar":
        """Multiply by a Laurent polynomial or rational scalar."""
        return OneFormScalar(self.c_alpha * x, self.c_dlog * x)

    def fits_chart(self, chart: Chart) -> bool:
        return self.c_alpha.fits_chart(chart) and self.c_dlog.fits_chart(chart)

    def __eq__(self, o) -> bool:
        if not isinstance(o, OneFormScalar):
            return NotImplemented
        return self.c_alpha == o.c_alpha and self.c_dlog == o.c_dlog

    def __str__(self) -> str:
        parts = []
        if self.c_alpha:
            parts.append(f"({self.c_alpha})*alpha/Delta")
        if self.c_dlog:
            parts.append(f"({self.c_dlog})*dDelta/Delta")
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"OneFormScalar({self})"


class TwoFormScalar:
    """c_vol * du^dv/Delta."""

    __slots__ = ("c_vol",)

    def __init__(self, c_vol: GradedLaurent = ZERO):
        self.c_vol = c_vol

    @classmethod
    def zero(cls) -> "TwoFormScalar":
        return cls(ZERO)

    def is_zero(self) -> bool:
        return self.c_vol.is_zero()

    def __add__(self, o: "TwoFormScalar") -> "TwoFormScalar":
        return TwoFormScalar(self.c_vol + o.c_vol)

    def __sub__(self, o: "TwoFormScalar") -> "TwoFormScalar":
        return TwoFormScalar(self.c_vol - o.c_vol)

    def __neg__(self) -> "TwoFormScalar":
        return TwoFormScalar(-self.c_vol)

    def scale(self, x) -> "TwoFormScalar":
        return TwoFormScalar(self.c_vol * x)

    def fits_chart(self, chart: Chart) -> bool:
        return self.c_vol.fits_chart(chart)

    def __eq__(self, o) -> bool:
        if not isinstance(o, TwoFormScalar):
            return NotImplemented
        return self.c_vol == o.c_vol

    def __str__(self) -> str:
        return f"({self.c_vol})*du^dv/Delta" if self.c_vol else "0"

    def __repr__(self) -> str:
        return f"TwoFormScalar({self})"


ALPHA_OVER_DELTA = OneFormScalar(ONE, ZERO)
DLOG_DELTA = OneFormScalar(ZERO, ONE)
# alpha as a logarithmic form: alpha = Delta * (alpha/Delta).
ALPHA = OneFormScalar(DELTA, ZERO)


def duv_to_basis(cu: GradedLaurent, cv: GradedLaurent) -> OneFormScalar:
    """Rewrite cu*du + cv*dv in the {alpha/Delta, dDelta/Delta} basis.

    From Delta*du = 9v*alpha + (u/3)*dDelta and Delta*dv = (u^2/2)*alpha
    + (v/2)*dDelta; the conversion is exact and total.
    """
    c_alpha = 9 * V * cu + Q(1, 2) * U * U * cv
    c_dlog = Q(1, 3) * U * cu + Q(1, 2) * V * cv
    return OneFormScalar(c_alpha, c_dlog)


def duv_numerators(form: OneFormScalar) -> tuple[GradedLaurent, GradedLaurent]:
    """Inverse expansion: form = (pu*du + pv*dv)/Delta; returns (pu, pv)."""
    pu = -3 * V * form.c_alpha + 3 * U * U * form.c_dlog
    pv = 2 * U * form.c_alpha - 54 * V * form.c_dlog
    return pu, pv


def d_laurent(x: GradedLaurent) -> OneFormScalar:
    """Exterior derivative of a Laurent function, in the logarithmic basis."""
    return duv_to_basis(x.du(), x.dv())


def wedge_scalars(x: OneFormScalar, y: OneFormScalar) -> TwoFormScalar:
    """Wedge of two scalar 1-forms; (alpha/Delta)^(dDelta/Delta) = -6 du^dv/Delta."""
    return TwoFormScalar(-6 * (x.c_alpha * y.c_dlog - x.c_dlog * y.c_alpha))


def d_oneform(form: OneFormScalar) -> TwoFormScalar:
    """Exterior derivative of a scalar 1-form.

    d(f alpha/Delta + g dDelta/Delta) = (6 Df - f - 6 Ag) du^dv/Delta, where
    Df is the dDelta/Delta-part of df and Ag the alpha/Delta-part of dg.
    """
    df = d_laurent(form.c_alpha)
    dg = d_laurent(form.c_dlog)
    return TwoFormScalar(6 * df.c_dlog - form.c_alpha - 6 * dg.c_alpha)


_KIND_SCALAR = {FUNCTION: GradedLaurent, ONEFORM: OneFormScalar, TWOFORM: TwoFormScalar}


def _zero_scalar(kind: Kind):
    if kind == FUNCTION:
        return ZERO
    return _KIND_SCALAR[kind].zero()


class SymSection:
    """A section of (forms of the given kind) twisted by S^2n H on one chart.

    coeffs maps a frame slot (s, t), s + t = 2n, to its scalar coefficient.
    `weight` is the total multiplicative weight of the section; invariant
    sections (the default, weight 0) descend to the quotient stack.  Per slot
    the stored scalar must be weight-homogeneous of

        t - s + weight          (functions, the dDelta/Delta part of 1-forms)
        t - s + weight + 2      (the alpha/Delta part of 1-forms, 2-forms)

    and every coefficient must lie in the chart's ring.  Violations raise at
    construction time.
    """

    __slots__ = ("n", "chart", "kind", "weight", "coeffs")

    def __init__(self, n: int, chart: Chart, kind: Kind, coeffs=None, weight: int = 0):
        if kind not in _KIND_SCALAR:
            raise ValueError(f"bad kind {kind!r}")
        self.n = n
        self.chart = chart
        self.kind = kind
        self.weight = weight
        cleaned = {}
        for (s, t), val in (coeffs or {}).items():
            if s + t != 2 * n or s < 0 or t < 0:
                raise ValueError(f"slot ({s},{t}) invalid for n={n}")
            if isinstance(val, (int, Fraction)) and kind == FUNCTION:
                val = GradedLaurent.const(val)
            if not isinstance(val, _KIND_SCALAR[kind]):
                raise TypeError(f"slot ({s},{t}): expected {kind} scalar, got {type(val).__name__}")
            if not val.is_zero():
                cleaned[(s, t)] = val
        self.coeffs = cleaned
        self._validate()

    def _validate(self):
        for (s, t), val in self.coeffs.items():
            w = t - s + self.weight
            if self.kind == FUNCTION:
                ok = val.is_homogeneous(w) and val.fits_chart(self.chart)
            elif self.kind == ONEFORM:
                ok = (
                    val.c_alpha.is_homogeneous(w + 2)
                    and val.c_dlog.is_homogeneous(w)
                    and val.fits_chart(self.chart)
                )
            else:
                ok = val.c_vol.is_homogeneous(w + 2) and val.fits_chart(self.chart)
            if not ok:
                raise ValueError(
                    f"slot ({s},{t}) violates weight/chart invariants on "
                    f"{self.chart.value} (section weight {self.weight}): {val}"
                )

    # -- builders -----------------------------------------------------------

    @classmethod
    def zero(cls, n: int, chart: Chart, kind: Kind, weight: int = 0) -> "SymSection":
        return cls(n, chart, kind, {}, weight)

    def replace(self, chart: Chart | None = None) -> "SymSection":
        return SymSection(self.n, chart or self.chart, self.kind, dict(self.coeffs), self.weight)

    def restrict(self, chart: Chart) -> "SymSection":
        """Restriction along a chart inclusion (the coefficients are reused)."""
        return self.replace(chart=chart)

    # -- algebra --------------------------------------------------------------

    def _check_compatible(self, o: "SymSection"):
        if (self.n, self.kind, self.chart, self.weight) != (o.n, o.kind, o.chart, o.weight):
            raise ValueError("incompatible sections")

    def __add__(self, o: "SymSection") -> "SymSection":
        self._check_compatible(o)
        coeffs = dict(self.coeffs)
        for k, val in o.coeffs.items():
            coeffs[k] = coeffs[k] + val if k in coeffs else val
        return SymSection(self.n, self.chart, self.kind, coeffs, self.weight)

    def __neg__(self) -> "SymSection":
        return SymSection(
            self.n, self.chart, self.kind, {k: -v for k, v in self.coeffs.items()}, self.weight
        )

    def __sub__(self, o: "SymSection") -> "SymSection":
        return self + (-o)

    def scale(self, x) -> "SymSection":
        """Multiply every coefficient by a rational scalar."""
        if isinstance(x, Fraction) and not x:
            return SymSection.zero(self.n, self.chart, self.kind, self.weight)
        return SymSection(
            self.n, self.chart, self.kind,
            {k: (v * x if self.kind == FUNCTION else v.scale(x)) for k, v in self.coeffs.items()},
            self.weight,
        )

    def is_zero(self) -> bool:
        return not self.coeffs

    def get(self, s: int, t: int):
        return self.coeffs.get((s, t), _zero_scalar(self.kind))

    def slots(self):
        """Slots in canonical order: s ascending."""
        for (s, t) in sorted(self.coeffs):
            yield (s, t), self.coeffs[(s, t)]

    def __eq__(self, o) -> bool:
        if not isinstance(o, SymSection):
            return NotImplemented
        return (
            (self.n, self.chart, self.kind, self.weight) == (o.n, o.chart, o.kind, o.weight)
            and self.coeffs == o.coeffs
        )

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for (s, t), val in self.slots():
            frame = "".join(
                ([f"S^{s}" if s != 1 else "S"] if s else [])
                + ([f"T^{t}" if t != 1 else "T"] if t else [])
            ) or "1"
            parts.append(f"[{val}] {frame}")
        return "  +  ".join(parts)

    def __repr__(self) -> str:
        return f"SymSection(n={self.n}, {self.chart.value}, {self.kind}, {self})"


def nabla0_fun(sec: SymSection) -> SymSection:
    """Flat connection on functions twisted by S^2n H."""
    if sec.kind != FUNCTION:
        raise ValueError("nabla0_fun wants a function section")
    out: dict[tuple[int, int], OneFormScalar] = {}

    def add(slot, contrib: OneFormScalar):
        s, t = slot
        if s < 0 or t < 0 or contrib.is_zero():
            return
        out[slot] = out.get(slot, OneFormScalar.zero()) + contrib

    for (s, t), x in sec.coeffs.items():
        add((s, t), d_laurent(x) + OneFormScalar(ZERO, Q(s - t, 12) * x))
        add((s + 1, t - 1), OneFormScalar(Q(3 * t, 2) * x, ZERO))
        add((s - 1, t + 1), OneFormScalar(Q(-s, 8) * U * x, ZERO))
    return SymSection(sec.n, sec.chart, ONEFORM, out, sec.weight)


def nabla0_form(sec: SymSection) -> SymSection:
    """Leibniz extension of the connection to 1-forms: nabla(h w) = dh w - h ^ nabla w."""
    if sec.kind != ONEFORM:
        raise ValueError("nabla0_form wants a 1-form section")
    out: dict[tuple[int, int], TwoFormScalar] = {}

    def add(slot, contrib: TwoFormScalar):
        s, t = slot
        if s < 0 or t < 0 or contrib.is_zero():
            return
        out[slot] = out.get(slot, TwoFormScalar.zero()) + contrib

    for (s, t), eta in sec.coeffs.items():
        f, g = eta.c_alpha, eta.c_dlog
        # d(eta) plus the wedge against the diagonal dDelta/Delta connection term
        add((s, t), d_oneform(eta) + TwoFormScalar(Q(s - t, 2) * f))
        add((s + 1, t - 1), TwoFormScalar(Q(-9 * t, 1) * g))
        add((s - 1, t + 1), TwoFormScalar(Q(3 * s, 4) * U * g))
    return SymSection(sec.n, sec.chart, TWOFORM, out, sec.weight)


def nabla0(sec: SymSection) -> SymSection:
    if sec.kind == FUNCTION:
        return nabla0_fun(sec)
    if sec.kind == ONEFORM:
        return nabla0_form(sec)
    raise ValueError("the complex stops at 2-forms")


# ---------------------------------------------------------------------------
# Residues on the two transverse slices.
# ---------------------------------------------------------------------------


def _restrict_to_slice(form: OneFormScalar, slice_id: SliceId):
    """Return (num, den) of the rational function h(x) with form|slice = h(x) dx.

    Polynomials are dicts exponent -> Fraction in the slice coordinate x.
    """
    pu, pv = duv_numerators(form)
    num: dict[int, Fraction] = {}
    if slice_id is SliceId.v_eq_1:
        for a, b, c in pu.terms():  # v = 1, dv = 0
            num[a] = num.get(a, Q(0)) + c
        den = {3: Q(1), 0: Q(-27)}  # Delta(u, 1)
    else:
        for a, b, c in pv.terms():  # u = 1, du = 0
            num[b] = num.get(b, Q(0)) + c
        den = {0: Q(1), 2: Q(-27)}  # Delta(1, v)
    return {k: v for k, v in num.items() if v}, den


def _laurent_series(num: dict[int, Fraction], den: dict[int, Fraction], upto: int):
    """Laurent expansion of num/den at x = 0 up to and including x^upto."""
    if not num:
        return {}
    vden = min(den)
    unit = {k - vden: v for k, v in den.items()}
    c0 = unit[0]
    vnum = min(num)
    order = vnum - vden
    nshift = {k - vnum: v for k, v in num.items()}
    # recurrence: c_k = (n_k - sum_{j>=1} unit_j c_{k-j}) / unit_0
    coeffs: dict[int, Fraction] = {}
    for k in range(0, upto - order + 1):
        acc = nshift.get(k, Q(0))
        for j, uj in unit.items():
            if j >= 1 and (k - j) in coeffs:
                acc -= uj * coeffs[k - j]
        coeffs[k] = acc / c0
    return {k + order: v for k, v in coeffs.items() if v}


def residue_on_slice(omega: OneFormScalar, eta: OneFormScalar, slice_id: SliceId) -> Fraction:
    """Residue at the slice origin of F * eta|slice where dF = omega|slice.

    omega|slice must admit a rational primitive near 0 (no residue of its
    own), which holds for every logarithmic form paired in this package.
    """
    onum, oden = _restrict_to_slice(omega, slice_id)
    enum_, eden = _restrict_to_slice(eta, slice_id)
    if not onum or not enum_:
        return Q(0)
    val_omega = min(onum) - min(oden)
    val_eta = min(enum_) - min(eden)
    # F has valuation val_omega + 1 (log-free primitive); the residue of F*eta
    # needs F through x^(-1 - val_eta) and eta through x^(-1 - val_omega - 1).
    upto_omega = max(-1 - val_eta - 1, val_omega)
    upto_eta = max(-1 - (val_omega + 1), val_eta)
    omega_series = _laurent_series(onum, oden, upto_omega)
    if omega_series.get(-1):
        raise ValueError("omega restricted to the slice has a residue; no rational primitive")
    primitive = {k + 1: c / (k + 1) for k, c in omega_series.items()}
    eta_series = _laurent_series(enum_, eden, upto_eta)
    res = Q(0)
    for k, c in primitive.items():
        res += c * eta_series.get(-1 - k, Q(0))
    return res
