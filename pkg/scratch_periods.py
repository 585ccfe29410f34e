"""Scratch: validate cocycle conventions against the known periods of Delta."""
import mpmath as mp
from secondkind.qseries import discriminant_q, eisenstein, g2g3, poly_from_qexpansion

mp.mp.dps = 40
M = 60

delta = discriminant_q(M)
G2 = eisenstein(2, M)
g12_poly = poly_from_qexpansion(eisenstein(12, M), 12)
g2s, g3s = g2g3(M)
print("G12 as isobaric polynomial:", g12_poly)

TWO_PI_I = 2 * mp.pi * mp.mpc(0, 1)


def qval(tau):
    return mp.exp(TWO_PI_I * tau)


def binom_vec(tau):
    # (tau Y - X)^10 in basis X^a Y^(10-a), a = 0..10
    from math import comb
    return [mp.mpf(comb(10, a)) * (-1) ** a * tau ** (10 - a) for a in range(11)]


def integrate_vec(f, z0, z1):
    comps = []
    for a in range(11):
        comps.append(mp.quad(lambda x, a=a: f(z0 + x * (z1 - z0))[a] * (z1 - z0), [0, 1]))
    return comps


def cocycle_for_series(series):
    # integrand (2/3)(2pi i)^11 f(tau) (tau Y - X)^10 dtau
    def f(tau):
        q = qval(tau)
        val = mp.mpf(2) / 3 * TWO_PI_I ** 11 * series.evaluate(q)
        bv = binom_vec(tau)
        return [val * b for b in bv]

    tau0 = mp.mpc(0, 2)
    cS = integrate_vec(f, -1 / tau0, tau0)
    cT = integrate_vec(f, tau0 - 1, tau0)
    return cS, cT


def act_matrix(a, b, c, d):
    # rho(gamma): X -> aX + cY, Y -> bX + dY on monomials X^i Y^(10-i)
    from math import comb
    mat = [[mp.mpf(0)] * 11 for _ in range(11)]
    for i in range(11):  # X^i Y^(10-i)
        # (aX + cY)^i (bX + dY)^(10-i): coefficient of X^r Y^(10-r)
        for p in range(i + 1):
            for s in range(10 - i + 1):
                coef = comb(i, p) * a ** p * c ** (i - p) * comb(10 - i, s) * b ** s * d ** (10 - i - s)
                r = p + s
                mat[r][i] += coef
    return mp.matrix(mat)


RS = act_matrix(0, -1, 1, 0)
RT = act_matrix(1, 1, 0, 1)

cS_delta, cT_delta = cocycle_for_series(delta)
cS_g12, cT_g12 = cocycle_for_series(eisenstein(12, M))

# relation defects
vS = mp.matrix(cS_delta)
one = mp.eye(11)
defect1 = (one + RS + RS ** 2 + RS ** 3) * vS
print("S^4 defect:", max(abs(x) for x in defect1))
RST = RS * RT
cST = vS + RS * mp.matrix(cT_delta)
acc = mp.matrix([0] * 11)
P = mp.eye(11)
for i in range(6):
    acc += P * cST
    P = P * RST
print("(ST)^6 defect:", max(abs(x) for x in acc))

# P+- on S (X^aY^b coordinates, index = power of X)
from math import comb
Pp = [mp.mpf(0)] * 11
# 36/691 (Y^10 - X^10) + X^2Y^2(X^2-Y^2)^3
Pp[0] += mp.mpf(36) / 691
Pp[10] -= mp.mpf(36) / 691
for i in range(4):  # (X^2 - Y^2)^3 = sum C(3,i) X^(2i) (-1)^(3-i) Y^(6-2i)
    Pp[2 + 2 * i] += comb(3, i) * (-1) ** (3 - i)
Pm = [mp.mpf(0)] * 11
Pm[9], Pm[7], Pm[5], Pm[3], Pm[1] = 4, -25, 42, -25, 4

# least squares: unknowns a,b,lam + 11 coboundary
import itertools

def solve_projection(cS, cT, cES, cET):
    rows = []
    rhs = []
    for gi, (c, R) in enumerate(((cS, RS), (cT, RT))):
        for r in range(11):
            row = []
            row.append(Pp[r] if gi == 0 else mp.mpf(0))
            row.append(Pm[r] if gi == 0 else mp.mpf(0))
            row.append((cES if gi == 0 else cET)[r])
            for j in range(11):
                row.append(R[r, j] - (1 if r == j else 0))
            rows.append(row)
            rhs.append(c[r])
    A = mp.matrix(rows)
    y = mp.matrix(rhs)
    AH = A.H
    sol = mp.lu_solve(AH * A, AH * y)
    resid = A * sol - y
    return sol, max(abs(x) for x in resid)


sol, resid = solve_projection(cS_delta, cT_delta, cS_g12, cT_g12)
print("residual:", resid)
print("a = omega+ ?", sol[0])
print("b:", sol[1], " b/i:", sol[1] / mp.mpc(0, 1))
print("lambda:", sol[2])
print("target omega+ = -45944515.206396796502, omega- = -3723343.5862069345779")
