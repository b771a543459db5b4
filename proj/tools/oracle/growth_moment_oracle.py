#!/usr/bin/env python3
"""First-principles oracle for the analytic growth-moment formulas.

Builds the biennial income/consumption growth expressions directly from
primitive annual shocks (symbolically), takes expectations using only
independence and the per-shock moment tables, and prints numeric moment
values at pinned parameter points.  The C++ closed forms are tested
against these frozen numbers, so a transcription slip in either place
shows up as a mismatch.

Run:  python3 tools/oracle/growth_moment_oracle.py
"""
import sympy as sp
from fractions import Fraction

# ---------------------------------------------------------------- symbols
s2z, g3z, k4z = sp.symbols("s2z g3z k4z")   # permanent shock zeta
s2v, g3v, k4v = sp.symbols("s2v g3v k4v")   # transitory shock v
s2uy = sp.symbols("s2uy")                    # income meas. error (Gaussian)
s2x, g3x, k4x = sp.symbols("s2x g3x k4x")   # taste xi
s2uc, g3uc, k4uc = sp.symbols("s2uc g3uc k4uc")  # consumption meas. error
f1, p1, f2, p2, w22 = sp.symbols("f1 p1 f2 p2 w22")  # phi1 psi1 phi2 psi2 omega22

MOM = {}  # primitive symbol -> (E[x^2], E[x^3], E[x^4]); E[x]=0 for all


def prim(name, m2, m3, m4):
    x = sp.Symbol(name)
    MOM[x] = (m2, m3, m4)
    return x


# Annual years, anchor wave at year 0; waves every 2 years.
zeta = {a: prim(f"z{a}", s2z, g3z, k4z) for a in range(-3, 3)}
xi = {a: prim(f"x{a}", s2x, g3x, k4x) for a in range(-3, 3)}
v = {a: prim(f"v{a}", s2v, g3v, k4v) for a in (-4, -2, 0, 2)}
uy = {a: prim(f"uy{a}", s2uy, 0, 3 * s2uy**2) for a in (-4, -2, 0, 2)}
uc = {a: prim(f"uc{a}", s2uc, g3uc, k4uc) for a in (-4, -2, 0, 2)}


def expectation(expr):
    """E[expr] for a polynomial in the primitives (independent, mean zero)."""
    expr = sp.expand(expr)
    out = sp.Integer(0)
    for term in sp.Add.make_args(expr):
        coeff, val = sp.Integer(1), sp.Integer(1)
        for base, k in term.as_powers_dict().items():
            if base in MOM:
                if k == 1:
                    val = sp.Integer(0)
                    break
                if k > 4:
                    raise ValueError(f"moment order {k} not tabulated")
                val *= MOM[base][int(k) - 2]
            else:
                coeff *= base**k
        out += coeff * val
    return sp.expand(out)


def Z(t):  # biennial permanent increment
    return zeta[t] + zeta[t - 1]


def Xi(t):
    return xi[t] + xi[t - 1]


def d2y(t):
    return Z(t) + v[t] - v[t - 2] + uy[t] - uy[t - 2]


def d2c_lin(t):
    return Xi(t) + f1 * Z(t) + p1 * v[t] + uc[t] - uc[t - 2]


def d2c_quad(t):
    return (Xi(t) + f1 * Z(t) + p1 * v[t]
            + f2 * Z(t)**2 + p2 * v[t]**2 + w22 * Z(t) * v[t]
            + uc[t] - uc[t - 2])


# ------------------------------------------------- moment key definitions
# Term grammar used across the project: series y/c, lead -2/+2 suffix,
# power ^k; terms joined by '*'; y-terms before c-terms, leads ascending.
Y0, Ym2, Yp2 = d2y(0), d2y(-2), d2y(2)

INCOME_KEYS = [
    ("y^2", Y0**2),
    ("y*y-2", Y0 * Ym2),
    ("y^3", Y0**3),
    ("y^2*y-2", Y0**2 * Ym2),
    ("y*y-2^2", Y0 * Ym2**2),
    ("y^4", Y0**4),
    ("y^2*y-2^2", Y0**2 * Ym2**2),
    ("y^3*y-2", Y0**3 * Ym2),
    ("y*y-2^3", Y0 * Ym2**3),
]


def cons_keys(c):
    C0, Cm2, Cp2 = c(0), c(-2), c(2)
    return [
        ("c^2", C0**2),
        ("c*c-2", C0 * Cm2),
        ("y*c", Y0 * C0),
        ("y*c-2", Y0 * Cm2),
        ("c^3", C0**3),
        ("c^2*c-2", C0**2 * Cm2),
        ("c*c-2^2", C0 * Cm2**2),
        ("y^2*c", Y0**2 * C0),
        ("y*c^2", Y0 * C0**2),
        ("y^2*c-2", Y0**2 * Cm2),
        ("y*c-2^2", Y0 * Cm2**2),
        ("y-2^2*c", Ym2**2 * C0),
        ("y*y+2*c", Y0 * Yp2 * C0),
        ("y*y+2*c-2", Y0 * Yp2 * Cm2),
        ("y*y+2*c+2", Y0 * Yp2 * Cp2),
        ("c^4", C0**4),
        ("c^2*c-2^2", C0**2 * Cm2**2),
        ("c^3*c-2", C0**3 * Cm2),
        ("c*c-2^3", C0 * Cm2**3),
        ("y^2*c^2", Y0**2 * C0**2),
        ("y^3*c", Y0**3 * C0),
        ("y*c^3", Y0 * C0**3),
        ("y^2*c-2^2", Y0**2 * Cm2**2),
        ("y-2^2*c^2", Ym2**2 * C0**2),
        ("y^3*c-2", Y0**3 * Cm2),
        ("y*c-2^3", Y0 * Cm2**3),
    ]


LINEAR_KEYS = cons_keys(d2c_lin)
QUAD_SUBSET = ["c^2", "c*c-2", "y*c", "y*c-2", "y^2*c",
               "y^2*c-2", "y-2^2*c", "y*y+2*c", "y*y+2*c-2", "y*y+2*c+2"]
QUAD_KEYS = [(k, e) for (k, e) in cons_keys(d2c_quad) if k in QUAD_SUBSET]

# ------------------------------------------- closed forms (transcribed)
sbar = s2z + s2v + s2uy
CLOSED_INCOME = {
    "y^2": 2 * s2z + 2 * s2v + 2 * s2uy,
    "y*y-2": -s2v - s2uy,
    "y^3": 2 * g3z,
    "y^2*y-2": g3v,
    "y*y-2^2": -g3v,
    "y^4": 2 * k4z + 2 * k4v + 6 * s2z**2 + 6 * s2v**2 + 12 * s2uy**2
           + 24 * s2z * s2v + 24 * s2v * s2uy + 24 * s2z * s2uy,
    "y^2*y-2^2": k4v + 4 * s2z**2 + 3 * s2v**2 + 6 * s2uy**2
                 + 8 * s2z * s2v + 8 * s2z * s2uy + 12 * s2v * s2uy,
    "y^3*y-2": -k4v - 3 * s2v**2 - 6 * s2uy**2 - 6 * s2z * s2v
               - 6 * s2z * s2uy - 12 * s2v * s2uy,
    "y*y-2^3": -k4v - 3 * s2v**2 - 6 * s2uy**2 - 6 * s2z * s2v
               - 6 * s2z * s2uy - 12 * s2v * s2uy,
}
CLOSED_LINEAR = {
    "c^2": 2 * s2x + 2 * f1**2 * s2z + p1**2 * s2v + 2 * s2uc,
    "c*c-2": -s2uc,
    "y*c": 2 * f1 * s2z + p1 * s2v,
    "y*c-2": -p1 * s2v,
    "c^3": 2 * g3x + 2 * f1**3 * g3z + p1**3 * g3v,
    "c^2*c-2": g3uc,
    "c*c-2^2": -g3uc,
    "y^2*c": 2 * f1 * g3z + p1 * g3v,
    "y*c^2": 2 * f1**2 * g3z + p1**2 * g3v,
    "y^2*c-2": p1 * g3v,
    "y*c-2^2": -p1**2 * g3v,
    "y-2^2*c": 0,
    "y*y+2*c": -p1 * g3v,
    "y*y+2*c-2": 0,
    "y*y+2*c+2": 0,
    "c^4": 2 * k4x + 2 * f1**4 * k4z + p1**4 * k4v + 2 * k4uc
           + 6 * s2x**2 + 6 * f1**4 * s2z**2 + 6 * s2uc**2
           + 24 * f1**2 * s2x * s2z + 12 * p1**2 * s2x * s2v
           + 24 * s2x * s2uc + 12 * f1**2 * p1**2 * s2z * s2v
           + 24 * f1**2 * s2z * s2uc + 12 * p1**2 * s2v * s2uc,
    "c^2*c-2^2": 4 * s2x**2 + 8 * f1**2 * s2x * s2z + 4 * p1**2 * s2x * s2v
                 + 8 * s2x * s2uc + 4 * f1**4 * s2z**2
                 + 4 * f1**2 * p1**2 * s2z * s2v + 8 * f1**2 * s2z * s2uc
                 + p1**4 * s2v**2 + 4 * p1**2 * s2v * s2uc
                 + k4uc + 3 * s2uc**2,
    "c^3*c-2": -k4uc - 3 * s2uc**2 - 6 * s2x * s2uc
               - 6 * f1**2 * s2z * s2uc - 3 * p1**2 * s2v * s2uc,
    "c*c-2^3": -k4uc - 3 * s2uc**2 - 6 * s2x * s2uc
               - 6 * f1**2 * s2z * s2uc - 3 * p1**2 * s2v * s2uc,
    "y^2*c^2": 4 * s2z * s2x + 2 * f1**2 * k4z + 6 * f1**2 * s2z**2
               + 2 * p1**2 * s2z * s2v + 4 * s2z * s2uc + 4 * s2v * s2x
               + 4 * f1**2 * s2v * s2z + p1**2 * k4v + p1**2 * s2v**2
               + 4 * s2v * s2uc + 4 * s2uy * s2x + 4 * f1**2 * s2uy * s2z
               + 2 * p1**2 * s2uy * s2v + 4 * s2uy * s2uc
               + 8 * f1 * p1 * s2z * s2v,
    "y^3*c": 2 * f1 * k4z + 6 * f1 * s2z**2 + p1 * k4v + 3 * p1 * s2v**2
             + 6 * p1 * s2z * s2v + 12 * f1 * s2z * s2v
             + 12 * f1 * s2z * s2uy + 6 * p1 * s2v * s2uy,
    "y*c^3": 2 * f1**3 * k4z + 6 * f1**3 * s2z**2 + p1**3 * k4v
             + 12 * f1 * s2x * s2z + 6 * p1 * s2x * s2v
             + 6 * f1 * p1**2 * s2z * s2v + 6 * f1**2 * p1 * s2z * s2v
             + 12 * f1 * s2z * s2uc + 6 * p1 * s2v * s2uc,
    "y^2*c-2^2": 4 * s2z * s2x + 4 * f1**2 * s2z**2 + 2 * p1**2 * s2z * s2v
                 + 4 * s2z * s2uc + 4 * s2v * s2x + 4 * f1**2 * s2v * s2z
                 + p1**2 * k4v + p1**2 * s2v**2 + 4 * s2v * s2uc
                 + 4 * s2uy * s2x + 4 * f1**2 * s2uy * s2z
                 + 2 * p1**2 * s2uy * s2v + 4 * s2uy * s2uc,
    "y-2^2*c^2": 4 * s2z * s2x + 4 * f1**2 * s2z**2 + 2 * p1**2 * s2z * s2v
                 + 4 * s2z * s2uc + 4 * s2v * s2x + 4 * f1**2 * s2v * s2z
                 + 2 * p1**2 * s2v**2 + 4 * s2v * s2uc
                 + 4 * s2uy * s2x + 4 * f1**2 * s2uy * s2z
                 + 2 * p1**2 * s2uy * s2v + 4 * s2uy * s2uc,
    "y^3*c-2": -p1 * k4v - 3 * p1 * s2v**2 - 6 * p1 * s2z * s2v
               - 6 * p1 * s2v * s2uy,
    "y*c-2^3": -p1**3 * k4v - 6 * p1 * s2v * s2x
               - 6 * f1**2 * p1 * s2v * s2z - 6 * p1 * s2v * s2uc,
}
CLOSED_QUAD = {
    "c^2": 2 * s2x + 2 * f1**2 * s2z + p1**2 * s2v
           + 2 * f2**2 * (k4z + 3 * s2z**2) + p2**2 * k4v
           + 2 * w22**2 * s2z * s2v + 2 * s2uc
           + 4 * f1 * f2 * g3z + 2 * p1 * p2 * g3v + 4 * f2 * p2 * s2z * s2v,
    "c*c-2": 4 * f2**2 * s2z**2 + 4 * f2 * p2 * s2z * s2v
             + p2**2 * s2v**2 - s2uc,
    "y*c": 2 * f1 * s2z + p1 * s2v + 2 * f2 * g3z + p2 * g3v,
    "y*c-2": -p1 * s2v - p2 * g3v,
    "y^2*c": 2 * f1 * g3z + p1 * g3v
             + 2 * f2 * (k4z + 3 * s2z**2 + 2 * s2z * s2v + 2 * s2z * s2uy)
             + p2 * (k4v + s2v**2 + 2 * s2z * s2v + 2 * s2v * s2uy)
             + 4 * w22 * s2z * s2v,
    "y^2*c-2": p1 * g3v + 4 * f2 * s2z * sbar
               + p2 * (k4v + s2v * (2 * s2z + s2v + 2 * s2uy)),
    "y-2^2*c": 4 * f2 * s2z * sbar + 2 * p2 * s2v * sbar,
    "y*y+2*c": -p1 * g3v - 2 * f2 * s2z * (s2v + s2uy)
               - p2 * (k4v + s2v * s2uy) - 2 * w22 * s2z * s2v,
    "y*y+2*c-2": -2 * f2 * s2z * (s2v + s2uy) - p2 * s2v * (s2v + s2uy),
    "y*y+2*c+2": -2 * f2 * s2z * (s2v + s2uy) - p2 * s2v * (s2v + s2uy),
}

# -------------------------------------------------------- parameter points
R = lambda x: sp.Rational(Fraction(str(x)))
P0 = {  # estimated-baseline magnitudes
    s2z: R("0.030"), g3z: R("-0.004"), k4z: R("0.039"),
    s2v: R("0.031"), g3v: R("-0.008"), k4v: R("0.048"), s2uy: R("0.006"),
    f1: R("0.134"), p1: R("-0.003"),
    f2: R("-0.040"), p2: R("0.015"), w22: R("0.320"),
    s2x: R("0.019"), g3x: R("-0.001"), k4x: R("0.005"),
    s2uc: R("0.044"), g3uc: R("0.002"), k4uc: R("0.013"),
}
P1 = {  # generic interior point, mixed signs
    s2z: R("0.05"), g3z: R("0.01"), k4z: R("0.09"),
    s2v: R("0.02"), g3v: R("-0.003"), k4v: R("0.02"), s2uy: R("0.01"),
    f1: R("0.3"), p1: R("0.1"),
    f2: R("0.05"), p2: R("-0.04"), w22: R("-0.2"),
    s2x: R("0.03"), g3x: R("0.004"), k4x: R("0.01"),
    s2uc: R("0.02"), g3uc: R("-0.001"), k4uc: R("0.005"),
}
P2 = {  # Gaussian shocks, no income measurement error
    s2z: R("0.04"), g3z: 0, k4z: R("0.0048"),
    s2v: R("0.06"), g3v: 0, k4v: R("0.0108"), s2uy: 0,
    f1: R("0.152"), p1: R("-0.006"),
    f2: R("0.02"), p2: R("-0.01"), w22: R("0.1"),
    s2x: R("0.019"), g3x: R("-0.001"), k4x: R("0.005"),
    s2uc: R("0.044"), g3uc: R("0.002"), k4uc: R("0.013"),
}


def feasible(pt):
    for (a, b, c) in ((s2z, g3z, k4z), (s2v, g3v, k4v), (s2x, g3x, k4x),
                      (s2uc, g3uc, k4uc)):
        s, g, k = pt[a], pt[b], pt[c]
        assert k - (g**2 / s + s**2) >= 0, f"infeasible {a}"


def check(keys, closed, label):
    bad = 0
    for name, expr in keys:
        diff = sp.simplify(expectation(expr) - closed[name])
        if diff != 0:
            bad += 1
            print(f"  MISMATCH {label} {name}: oracle - closed = {diff}")
    print(f"  {label}: {len(keys) - bad}/{len(keys)} closed forms match")
    return bad


def dump(keys, pts, label):
    print(f"// frozen by tools/oracle/growth_moment_oracle.py : {label}")
    exprs = [(n, expectation(e)) for n, e in keys]
    for i, pt in enumerate(pts):
        print(f"// point {i}")
        for name, ex in exprs:
            val = float(sp.Float(ex.subs(pt), 30))
            print(f'{{"{name}", {val!r}}},')
    return exprs


def main():
    for pt in (P0, P1, P2):
        feasible(pt)
    bad = 0
    bad += check(INCOME_KEYS, CLOSED_INCOME, "income")
    bad += check(LINEAR_KEYS, CLOSED_LINEAR, "linear")
    bad += check(QUAD_KEYS, CLOSED_QUAD, "quadratic")
    if bad:
        raise SystemExit(f"{bad} closed-form mismatches")
    for name, keys in (("income", INCOME_KEYS), ("linear", LINEAR_KEYS),
                       ("quadratic", QUAD_KEYS)):
        dump(keys, (P0, P1, P2), name)
    # raw mean of quadratic growth (nonzero; used by simulator tests)
    mean_q = expectation(d2c_quad(0))
    print("// E[d2c quadratic] =", sp.simplify(mean_q))
    for i, pt in enumerate((P0, P1, P2)):
        print(f"//   point {i}: {sp.Float(mean_q.subs(pt), 22)}")


if __name__ == "__main__":
    main()
