"""High-precision periods: Eichler-type integrals of cocycles and projection.

The upper half plane maps to the weighted cover by tau -> (g2(tau), g3(tau)).
Under this map the two basis 1-forms pull back to

    alpha/Delta   ->  (2/3) (2 pi i) dtau
    dDelta/Delta  ->  (2 pi i) (-24 G2(tau)) dtau

and the frame rewrites in the flat Betti frame X, Y as

    T = 2 pi i (tau Y - X),      S = Y - 2 G2(tau) T.

Group cocycles are assembled at a finite base point tau0 = t*i:

    c(gamma) = integral from gamma^-1 tau0 to tau0 of the pulled-back form,

valued in S^10 H tensor C with coordinates X^a Y^(10-a), a = 0..10.  The
action making c a cocycle (c(g1 g2) = c(g1) + rho(g1) c(g2)) was validated
numerically through the coboundary-shift identity against the cusp-based
cocycle and is

    rho(gamma): X -> a X + b Y,   Y -> c X + d Y     for gamma = (a b; c d).

Periods are read off by solving  c = a P+ + b P- + lambda c_E + (rho - 1) x
jointly over the generators S and T; the projection absorbs every
base-point dependence into the coboundary unknowns x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath as mp
from mpmath.calculus.quadrature import GaussLegendre

from .forms import OneFormScalar, SymSection
from .laurent import Chart, GradedLaurent
from .qseries import eisenstein, g2g3, poly_from_qexpansion
from .second_kind import SecondKindCocycle, eliminate_bad_terms, holomorphic_cocycle

GEN_S = "S"
GEN_T = "T"

# P+ and P- on the generator S (values on T vanish): the real-Frobenius
# compatible cuspidal cocycle basis in weight 12, coordinates X^a Y^(10-a).
P_PLUS_S = [Fraction(0)] * 11
P_PLUS_S[0] += Fraction(36, 691)
P_PLUS_S[10] -= Fraction(36, 691)
for _i in range(4):  # X^2 Y^2 (X^2 - Y^2)^3
    P_PLUS_S[2 + 2 * _i] += comb(3, _i) * (-1) ** (3 - _i)
P_MINUS_S = [Fraction(0)] * 11
for _idx, _c in ((9, 4), (7, -25), (5, 42), (3, -25), (1, 4)):
    P_MINUS_S[_idx] = Fraction(_c)


@dataclass
class Config:
    """Numeric configuration; invariants: P >= 20, M >= 40, t > 1."""

    precision: int = 50
    q_order: int = 80
    basepoint: Fraction = Fraction(2)
    tolerance: float | None = None  # defaults to 10^(1 - P/2)
    jobs: int = 1

    def __post_init__(self):
        if self.precision < 20:
            raise ValueError("precision must be at least 20 digits")
        if self.q_order < 40:
            raise ValueError("q_order must be at least 40")
        if not self.basepoint > 1:
            raise ValueError("basepoint height must exceed 1")

    @property
    def quad_tolerance(self):
        return self.tolerance if self.tolerance is not None else mp.mpf(10) ** (1 - self.precision // 2)


class PeriodContext:
    """Caches q-expansions and their floating images at a working precision."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.dps = cfg.precision + 15
        order = cfg.q_order
        self.series = {
            "g2": g2g3(order)[0],
            "g3": g2g3(order)[1],
            "G2": eisenstein(2, order),
        }
        self._float_coeffs: dict[str, list] = {}
        self._nodes: dict[int, list] = {}

    def _floats(self, name: str):
        cached = self._float_coeffs.get(name)
        if cached is None:
            with mp.workdps(self.dps):
                cached = [mp.mpf(c.numerator) / c.denominator for c in self.series[name].coeffs]
            self._float_coeffs[name] = cached
        return cached

    def eval_series(self, name: str, q):
        acc = mp.mpf(0)
        for c in reversed(self._floats(name)):
            acc = acc * q + c
        return acc

    def nodes(self, degree: int):
        """Gauss-Legendre nodes and weights on [-1, 1] at the working precision."""
        cached = self._nodes.get(degree)
        if cached is None:
            with mp.workdps(self.dps):
                bits = mp.mp.prec + 30
                cached = GaussLegendre(mp.mp).calc_nodes(degree, bits)
            self._nodes[degree] = cached
        return cached


def pullback_scalar(form: OneFormScalar, tau, ctx: PeriodContext):
    """Coefficient of dtau of the pulled-back 1-form at tau."""
    with mp.workdps(ctx.dps):
        q = mp.exp(2j * mp.pi * tau)
        u = ctx.eval_series("g2", q)
        v = ctx.eval_series("g3", q)
        two_pi_i = 2j * mp.pi
        total = mp.mpc(0)
        if not form.c_alpha.is_zero():
            total += form.c_alpha.evaluate(u, v) * two_pi_i * mp.mpf(2) / 3
        if not form.c_dlog.is_zero():
            total += form.c_dlog.evaluate(u, v) * two_pi_i * (-24 * ctx.eval_series("G2", q))
        return total


def frame_vector(s: int, t: int, tau, g2_value, n: int = 5):
    """S^s T^t expanded over X^a Y^(2n-a), as a list of 2n+1 complex numbers."""
    two_pi_i = 2j * mp.pi
    tx, ty = -two_pi_i, two_pi_i * tau          # T = 2 pi i (tau Y - X)
    sx, sy = -2 * g2_value * tx, 1 - 2 * g2_value * ty   # S = Y - 2 G2 T
    out = [mp.mpc(0)] * (2 * n + 1)
    for p in range(s + 1):
        cs = comb(s, p) * sx ** p * sy ** (s - p)
        for r in range(t + 1):
            out[p + r] += cs * comb(t, r) * tx ** r * ty ** (t - r)
    return out


def frame_change(n: int, tau, ctx: PeriodContext):
    """Matrix whose column for S^s T^(2n-s) is frame_vector(s, 2n-s)."""
    with mp.workdps(ctx.dps):
        q = mp.exp(2j * mp.pi * tau)
        g2v = ctx.eval_series("G2", q)
        return [frame_vector(s, 2 * n - s, tau, g2v, n) for s in range(2 * n + 1)]


@dataclass
class HPath:
    """Straight segments in the upper half plane, integrable on one chart."""

    segments: list[tuple]
    chart: Chart = Chart.U0

    def __post_init__(self):
        for z0, z1 in self.segments:
            if not (mp.im(z0) > 0 and mp.im(z1) > 0):
                raise ValueError("path leaves the upper half plane")


def default_path(gamma: str, tau0) -> HPath:
    if gamma == GEN_S:
        return HPath([(-1 / tau0, tau0)], Chart.U0)
    if gamma == GEN_T:
        return HPath([(tau0 - 1, tau0)], Chart.U0)
    raise ValueError("gamma must be 'S' or 'T'")


def _integrate_sections(sections: list[SymSection], path: HPath, ctx: PeriodContext):
    """Integrate several 1-form sections along one path, sharing node work.

    Returns one (2n+1)-vector per section.  Adaptive Gauss-Legendre: the
    degree rises until two consecutive levels agree within the configured
    absolute tolerance.  Raises if the path's chart coordinate gets within
    1e-6 of its forbidden zero at any node (pole risk) or if the quadrature
    fails to settle.
    """
    n = sections[0].n
    dim = 2 * n + 1
    tol = ctx.cfg.quad_tolerance
    slots = sorted({slot for sec in sections for slot, _ in sec.slots()})

    with mp.workdps(ctx.dps):
        results_prev = None
        for degree in range(3, 11):
            nodes = ctx.nodes(degree)
            totals = [[mp.mpc(0)] * dim for _ in sections]
            for z0, z1 in path.segments:
                mid, half = (z0 + z1) / 2, (z1 - z0) / 2
                for x, w in nodes:
                    tau = mid + half * x
                    q = mp.exp(2j * mp.pi * tau)
                    u = ctx.eval_series("g2", q)
                    v = ctx.eval_series("g3", q)
                    g2v = ctx.eval_series("G2", q)
                    if path.chart is Chart.U0 and abs(u) < 1e-6:
                        raise ArithmeticError("path passes too close to the g2 = 0 orbit")
                    if path.chart is Chart.U1 and abs(v) < 1e-6:
                        raise ArithmeticError("path passes too close to the g3 = 0 orbit")
                    two_pi_i = 2j * mp.pi
                    frames = {slot: frame_vector(slot[0], slot[1], tau, g2v, n) for slot in slots}
                    for si, sec in enumerate(sections):
                        acc = mp.mpc(0)
                        for slot, form in sec.slots():
                            scal = mp.mpc(0)
                            if not form.c_alpha.is_zero():
                                scal += form.c_alpha.evaluate(u, v) * two_pi_i * mp.mpf(2) / 3
                            if not form.c_dlog.is_zero():
                                scal += form.c_dlog.evaluate(u, v) * two_pi_i * (-24 * g2v)
                            wf = w * half * scal
                            vec = frames[slot]
                            row = totals[si]
                            for a in range(dim):
                                row[a] += wf * vec[a]
            if results_prev is not None:
                err = max(
                    abs(totals[si][a] - results_prev[si][a])
                    for si in range(len(sections))
                    for a in range(dim)
                )
                if err < tol:
                    return totals
            results_prev = totals
        raise ArithmeticError("quadrature did not reach the requested tolerance")


@dataclass
class GroupCocycle:
    """Values of a cocycle on the generators S and T, in X^a Y^b coordinates."""

    value_on_S: list
    value_on_T: list
    n: int = 5


def integrate_cocycle_value(
    cocycle: SecondKindCocycle, gamma: str, tau0, ctx: PeriodContext, path: HPath | None = None
):
    """The cocycle value c(gamma) of a second-kind class at base point tau0."""
    path = path or default_path(gamma, tau0)
    sec = cocycle.cochain.chart0 if path.chart is Chart.U0 else cocycle.cochain.chart1
    if sec.is_zero():
        return [mp.mpc(0)] * (2 * cocycle.n + 1)
    return _integrate_sections([sec], path, ctx)[0]


def group_cocycle(cocycle: SecondKindCocycle, tau0, ctx: PeriodContext) -> GroupCocycle:
    secs = [cocycle.cochain.chart0]
    if cocycle.cochain.chart0.is_zero():
        z = [mp.mpc(0)] * (2 * cocycle.n + 1)
        return GroupCocycle(list(z), list(z), cocycle.n)
    vS = _integrate_sections(secs, default_path(GEN_S, tau0), ctx)[0]
    vT = _integrate_sections(secs, default_path(GEN_T, tau0), ctx)[0]
    return GroupCocycle(vS, vT, cocycle.n)


def rho_matrix(a: int, b: int, c: int, d: int, n: int = 5):
    """rho(gamma) on X^i Y^(2n-i): X -> aX + bY, Y -> cX + dY, exact integers."""
    dim = 2 * n + 1
    mat = [[0] * dim for _ in range(dim)]
    for i in range(dim):
        for p in range(i + 1):
            ci = comb(i, p) * a ** p * b ** (i - p)
            for s in range(dim - i):
                mat[p + s][i] += ci * comb(dim - 1 - i, s) * c ** s * d ** (dim - 1 - i - s)
    return mat

def _mat_vec(mat, vec):
    return [sum(mat[r][j] * vec[j] for j in range(len(vec)) if mat[r][j]) for r in range(len(mat))]


RHO_S = rho_matrix(0, -1, 1, 0)
RHO_T = rho_matrix(1, 1, 0, 1)


def cocycle_relation_check(c: GroupCocycle, dps: int = 80) -> mp.mpf:
    """Max componentwise defect of the S^4, (ST)^6 and S^2 = (ST)^3 relations.

    The action matrices are exact integers, so the defect is limited only by
    the precision of the cocycle values and of this evaluation.
    """
    dim = 2 * c.n + 1
    if c.n != 5:
        raise ValueError("relation check is wired for 2n = 10")
    with mp.workdps(dps):
        vS, vT = c.value_on_S, c.value_on_T

        def madd(x, y):
            return [a + b for a, b in zip(x, y)]

        # c(S^2) = (1 + S) c_S, then S^4
        c_s2 = madd(vS, _mat_vec(RHO_S, vS))
        rho_s2 = [
            [sum(RHO_S[r][k] * RHO_S[k][j] for k in range(dim)) for j in range(dim)]
            for r in range(dim)
        ]
        defect1 = madd(c_s2, _mat_vec(rho_s2, c_s2))  # c(S^4) via c(S^2) twice

        c_st = madd(vS, _mat_vec(RHO_S, vT))
        rho_st = [
            [sum(RHO_S[r][k] * RHO_T[k][j] for k in range(dim)) for j in range(dim)]
            for r in range(dim)
        ]
        vals = [c_st]
        m = rho_st
        for _ in range(5):
            vals.append(_mat_vec(m, c_st))
            m = [
                [sum(m[r][k] * rho_st[k][j] for k in range(dim)) for j in range(dim)]
                for r in range(dim)
            ]
        defect2 = [sum(v[r] for v in vals) for r in range(dim)]

        # S^2 = (ST)^3
        c_st3 = madd(vals[0], madd(vals[1], vals[2]))
        defect3 = [x - y for x, y in zip(c_s2, c_st3)]

        return max(abs(x) for x in defect1 + defect2 + defect3)


@dataclass
class PeriodReport:
    omega_plus: mp.mpc
    omega_minus: mp.mpc
    eta_plus: mp.mpc
    eta_minus: mp.mpc
    eisenstein_coefficient: mp.mpc
    coboundary: list
    residual_norm: mp.mpf
    determinant: mp.mpc
    precision: int = 50

    def to_json(self) -> dict:
        def cstr(z):
            return {"re": mp.nstr(mp.re(z), self.precision), "im": mp.nstr(mp.im(z), self.precision)}

        return {
            "omegaPlus": cstr(self.omega_plus),
            "omegaMinus": cstr(self.omega_minus),
            "etaPlus": cstr(self.eta_plus),
            "etaMinus": cstr(self.eta_minus),
            "eisensteinCoefficient": cstr(self.eisenstein_coefficient),
            "coboundary": [cstr(z) for z in self.coboundary],
            "residualNorm": mp.nstr(self.residual_norm, 8),
            "determinant": cstr(self.determinant),
            "precision": self.precision,
        }


def _project_one(c: GroupCocycle, c_eis: GroupCocycle, ctx: PeriodContext):
    """Solve c = a P+ + b P- + lambda c_E + (rho(gamma) - 1) x over gamma in {S, T}.

    22 equations, 14 unknowns; returns (a, b, lambda, x, residual)."""
    with mp.workdps(ctx.dps):
        rows, rhs = [], []
        for gi, (vec, R) in enumerate(((c.value_on_S, RHO_S), (c.value_on_T, RHO_T))):
            for r in range(11):
                row = [
                    mp.mpc(P_PLUS_S[r].numerator) / P_PLUS_S[r].denominator if gi == 0 else mp.mpc(0),
                    mp.mpc(P_MINUS_S[r].numerator) / P_MINUS_S[r].denominator if gi == 0 else mp.mpc(0),
                    (c_eis.value_on_S if gi == 0 else c_eis.value_on_T)[r],
                ]
                row += [mp.mpc(R[r][j] - (1 if r == j else 0)) for j in range(11)]
                rows.append(row)
                rhs.append(vec[r])
        # column scaling keeps the normal equations well conditioned
        ncols = 14
        scales = []
        for j in range(ncols):
            s = max(abs(rows[r][j]) for r in range(22))
            scales.append(s if s > 0 else mp.mpf(1))
        A = mp.matrix([[rows[r][j] / scales[j] for j in range(ncols)] for r in range(22)])
        y = mp.matrix(rhs)
        AH = A.H
        sol_scaled = mp.lu_solve(AH * A, AH * y)
        sol = [sol_scaled[j] / scales[j] for j in range(ncols)]
        resid = max(abs(x) for x in (A * sol_scaled - y))
        rhs_norm = max(abs(x) for x in rhs)
        rel = resid / rhs_norm if rhs_norm > 0 else resid
        return sol[0], sol[1], sol[2], sol[3:], rel


def project_periods(
    c_delta: GroupCocycle, c_11: GroupCocycle, c_eis: GroupCocycle, ctx: PeriodContext
) -> PeriodReport:
    with mp.workdps(ctx.dps):
        a_d, b_d, lam_d, _, res_d = _project_one(c_delta, c_eis, ctx)
        a_e, b_e, lam_e, cob, res_e = _project_one(c_11, c_eis, ctx)
        if abs(lam_d) > mp.mpf("1e-10"):
            raise ArithmeticError(
                f"the holomorphic cusp class picked up an Eisenstein component {lam_d}"
            )
        i = mp.mpc(0, 1)
        omega_p, omega_m = a_d, b_d / i
        eta_p, eta_m = a_e, b_e / i
        det = eta_p * (i * omega_m) - omega_p * (i * eta_m)
        return PeriodReport(
            omega_plus=omega_p,
            omega_minus=omega_m,
            eta_plus=eta_p,
            eta_minus=eta_m,
            eisenstein_coefficient=lam_e,
            coboundary=cob,
            residual_norm=max(res_d, res_e),
            determinant=det,
            precision=ctx.cfg.precision,
        )


def eisenstein_weight12_class(ctx: PeriodContext) -> SecondKindCocycle:
    """The holomorphic class of the weight-12 Eisenstein series, via its
    isobaric polynomial in (u, v)."""
    h = poly_from_qexpansion(eisenstein(12, max(ctx.cfg.q_order, 40)), 12)
    return holomorphic_cocycle(h, 5)


def compute_periods(cfg: Config) -> tuple[PeriodReport, dict]:
    """End-to-end: build the three weight-12 cocycles and project the periods."""
    ctx = PeriodContext(cfg)
    with mp.workdps(ctx.dps):
        tau0 = mp.mpc(0, 1) * (mp.mpf(cfg.basepoint.numerator) / cfg.basepoint.denominator)
        delta_class = holomorphic_cocycle(GradedLaurent({(3, 0): 1, (0, 2): -27}), 5)
        second = eliminate_bad_terms(1, 1)
        eis = eisenstein_weight12_class(ctx)
        cocycles = {
            name: group_cocycle(cls, tau0, ctx)
            for name, cls in (("delta", delta_class), ("second", second), ("eis", eis))
        }
        report = project_periods(cocycles["delta"], cocycles["second"], cocycles["eis"], ctx)
        return report, cocycles
