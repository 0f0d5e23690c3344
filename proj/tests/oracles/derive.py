"""Independent derivations of the closed-form values frozen in the C++ tests.

Run with `python3 tests/oracles/derive.py`; every line prints the quantity,
the derived value and the literal used in the tests.
"""

import sympy as sp
from scipy.integrate import solve_ivp

r, th, ph = sp.symbols("r theta phi", positive=True)
x = (r, th, ph)


def christoffel(g):
    ginv = g.inv()
    return [[[sp.simplify(sum(ginv[a, d] * (sp.diff(g[d, b], x[c]) + sp.diff(g[d, c], x[b]) - sp.diff(g[b, c], x[d]))
                              for d in range(3)) / 2) for c in range(3)] for b in range(3)] for a in range(3)]


def scalar_curvature(g):
    G = christoffel(g)
    ginv = g.inv()
    ric = sp.zeros(3)
    for b in range(3):
        for c in range(3):
            ric[b, c] = sum(sp.diff(G[a][b][c], x[a]) - sp.diff(G[a][b][a], x[c])
                            + sum(G[a][a][d] * G[d][b][c] - G[a][c][d] * G[d][b][a] for d in range(3))
                            for a in range(3))
    return sp.simplify(sum(ginv[b, c] * ric[b, c] for b in range(3) for c in range(3)))


def show(name, value, frozen):
    print(f"{name:58s} {sp.nsimplify(value)!s:>14s}   tests use {frozen}")


b = sp.diag(1 / (1 + r**2), r**2, r**2 * sp.sin(th)**2)
G = christoffel(b)
show("hyperbolic Gamma^r_rr at r = 1", G[0][0][0].subs(r, 1), "-0.5")
show("hyperbolic Gamma^r_thth at r = 2", G[0][1][1].subs(r, 2), "-10")
show("Scal of b", scalar_curvature(b), "-6")

# Round sphere block and Schwarzschild form.
a, m = sp.symbols("a m", positive=True)
show("Scal of dr^2 + a^2 sigma", scalar_curvature(sp.diag(1, a**2, a**2 * sp.sin(th)**2)), "2/a^2")
p4 = (1 + m / (2 * r))**4
show("Scal of (1 + m/2r)^4 (dr^2 + r^2 sigma)", scalar_curvature(sp.diag(p4, p4 * r**2, p4 * r**2 * sp.sin(th)**2)), "0")

# Barrier ODE with C = 0, alpha = 0 along k = r / sqrt(1 + r^2).
k = r / sp.sqrt(1 + r**2)
q = sp.sqrt(1 + r**2)
show("k-form residual of the hyperbolic profile", sp.simplify(sp.diff(k, r) + 2 / r * (k - r / q) - (1 - k**2) / q), "0")

# Energy (1/16 pi) int (tr m + 2 tr p) with m = c sigma: tr^sigma m = 2c.
c_m, c_p = sp.symbols("c_m c_p")
E = sp.Rational(1, 16) / sp.pi * 4 * sp.pi * (2 * c_m + 2 * 2 * c_p)
show("E for m = sigma, p = 0", E.subs({c_m: 1, c_p: 0}), "0.5")
show("E for m = 0, p = sigma", E.subs({c_m: 0, c_p: 1}), "1.0")

# Laplacian on S^2 of an l = 2 harmonic.
Y21 = sp.sin(th) * sp.cos(th) * sp.cos(ph)
lap = sp.diff(sp.sin(th) * sp.diff(Y21, th), th) / sp.sin(th) + sp.diff(Y21, ph, 2) / sp.sin(th)**2
show("Delta^{-1} applied to Y_21 (coefficient)", 1 / sp.simplify(lap / Y21), "-1/6")

# Conformal factor with Scal = 0.5 r^-4 on flat space: shooting reference value.
s0, R = 0.5, 1e3
sol = solve_ivp(lambda t, y: [y[1], -2 * y[1] / t + s0 * y[0] / (8 * t**4)], (1.0, R), [1.0, 0.0],
                rtol=1e-13, atol=1e-14)
c = (1 / R) / (sol.y[1, -1] + sol.y[0, -1] / R)
print(f"{'u(1) for Scal = 0.5 r^-4 on [1, 1e3] (Robin end)':58s} {c:14.10f}   tests compare against odeint")
