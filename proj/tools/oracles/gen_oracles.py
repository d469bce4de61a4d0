#!/usr/bin/env python3
"""Reference values for the C++ tests, computed with mpmath at 40 digits.

The routes here avoid the library's code paths: Mellin values come from
quadrature, q_j from the Leibniz expansion of (1/j!) d^j [x^j w(x)], the
conditional density from mpmath determinants and numerical differentiation.

Usage: python3 tools/oracles/gen_oracles.py > tests/oracle_values.hpp
"""

import sys

import mpmath as mp

mp.mp.dps = 40


class Model:
    def __init__(self, family, n, alpha, beta=None):
        self.family, self.n = family, n
        self.alpha = mp.mpf(alpha)
        self.beta = None if beta is None else mp.mpf(beta)
        self.mellin = [self.mellin_w(c + 1) for c in range(n)]

    @property
    def gamma(self):
        return self.beta + self.n - 1

    def weight(self, x):
        if self.family == "laguerre":
            return x ** self.alpha * mp.exp(-x)
        return x ** self.alpha * (1 - x) ** self.gamma if x < 1 else mp.mpf(0)

    def upper(self):
        return mp.inf if self.family == "laguerre" else mp.mpf(1)

    def mellin_w(self, s):
        return mp.quad(lambda u: u ** (s - 1) * self.weight(u), [0, 1, self.upper()] if self.family == "laguerre" else [0, 1])

    def incomplete_mellin_w(self, x, s):
        return mp.quad(lambda u: u ** (s - 1) * self.weight(u), [0, x])

    def p(self, j, x):
        return mp.fsum(mp.binomial(j, c) * (-x) ** c / self.mellin[c] for c in range(j + 1))

    def q(self, j, x):
        # Leibniz: d^j [x^{j+alpha} f(x)] with f = e^{-x} or (1-x)^gamma
        a = self.alpha
        terms = []
        for k in range(j + 1):
            dx = mp.ff(j + a, j - k) * x ** (a + k)
            if self.family == "laguerre":
                df = (-1) ** k * mp.exp(-x)
            else:
                df = (-1) ** k * mp.ff(self.gamma, k) * (1 - x) ** (self.gamma - k)
            terms.append(mp.binomial(j, k) * dx * df)
        return mp.fsum(terms) / mp.factorial(j)

    def kernel(self, x, y):
        return mp.fsum(self.q(b, x) * self.p(b, y) for b in range(self.n))

    def kernel_coeffs(self, x):
        # K(x, y) = sum_c k_c y^c
        n = self.n
        return [mp.fsum(self.q(b, x) * mp.binomial(b, c) * (-1) ** c / self.mellin[c] for b in range(c, n)) for c in range(n)]


def phi_parts(n, x):
    # phi(x, t) = (1+t)^{-(n+1)} A(x) - (1+t)^{-(n+2)} B(x)
    base = x * (1 - x) ** (n - 2)
    return base * (1 - x / n), base * (1 - x) * (1 + mp.mpf(1) / n)


def t_moment(c, m):
    # int_0^inf t^c (1+t)^{-m} dt
    return mp.beta(c + 1, m - c - 1)


def rho_sv(m, a):
    return m.kernel(a, a) / m.n


def rho_ev_polya(m, r):
    return m.weight(r) / m.n * mp.fsum(r ** c / m.mellin[c] for c in range(m.n))


def rho_ev_integral(m, r):
    # n int dt int_0^r dv/v phi(v/r, t) K(v, -rt), t-integral done exactly
    n = m.n

    def inner(v):
        A, B = phi_parts(n, v / r)
        k = m.kernel_coeffs(v)
        s = mp.fsum(k[c] * (-r) ** c * (A * t_moment(c, n + 1) - B * t_moment(c, n + 2)) for c in range(n))
        return s / v

    return n * mp.quad(inner, [0, r])


def cov(m, r, a):
    n = m.n

    def part(idx):
        def f(v):
            return phi_parts(n, v / r)[idx] * m.kernel(v, a) / v

        pts = [0, a, r] if a < r else [0, r]
        s = mp.quad(f, pts)
        if r >= a:
            s -= phi_parts(n, a / r)[idx] / a
        return s

    oa, ob = part(0), part(1)
    k = m.kernel_coeffs(a)
    ta = mp.fsum(k[c] * (-r) ** c * t_moment(c, n + 1) for c in range(n))
    tb = mp.fsum(k[c] * (-r) ** c * t_moment(c, n + 2) for c in range(n))
    return -(oa * ta - ob * tb)


def conditional_density(r, a):
    n = len(a)

    def ratio(x):
        M = mp.matrix(n, n)
        N = mp.matrix(n + 1, n + 1)
        for b in range(n):
            g = (1 - a[b] / x) ** (n - 1) if x >= a[b] else mp.mpf(0)
            N[0, b + 1] = -g
            for c in range(n):
                M[c, b] = mp.binomial(n - 1, c) * (-a[b] / x) ** c
                N[c + 1, b + 1] = M[c, b]
        for c in range(n):
            N[c + 1, 0] = 1
        return mp.det(N) / mp.det(M)

    return mp.diff(ratio, r) / n


def f_sv(m, a):
    K = mp.matrix(len(a), len(a))
    for i, x in enumerate(a):
        for j, y in enumerate(a):
            K[i, j] = m.kernel(x, y)
    return mp.det(K) / mp.factorial(m.n)


def n2_f12(m, r, a1, a2):
    if r < min(a1, a2) or r > max(a1, a2):
        return mp.mpf(0)
    return f_sv(m, [a1, a2]) / (2 * abs(a1 - a2)) * (1 + a1 * a2 / r ** 2)


def n2_f11(m, r, a):
    f = lambda a2: n2_f12(m, r, a, a2)
    if a > r:
        return mp.quad(f, [0, r])
    return mp.quad(f, [r, 2 * r, mp.inf])


def qtilde(m, x, c):
    return mp.quad(lambda u: u ** c * m.q(m.n, u), [0, x])


# ---- emit


def num(v):
    # shortest repr that round-trips the nearest double
    return repr(float(v))


def model_literal(m):
    fam = "svev::Family::Laguerre" if m.family == "laguerre" else "svev::Family::Jacobi"
    beta = float(m.beta) if m.beta is not None else 1.0
    return f"{{{fam}, {m.n}, {num(m.alpha)}, {num(beta)}}}"


def emit_table(out, struct, name, fields, rows):
    out.append(f"struct {struct} {{ {' '.join(f'{t} {f};' for t, f in fields)} }};")
    out.append(f"inline const {struct} {name}[] = {{")
    for r in rows:
        out.append("    {" + ", ".join(r) + "},")
    out.append("};\n")


def main():
    out = [
        "// Generated by tools/oracles/gen_oracles.py (mpmath, 40 digits). Do not edit.",
        "#pragma once\n",
        '#include "svev/ensembles.hpp"\n',
        "namespace oracle {\n",
        "struct Model { svev::Family family; int n; double alpha; double beta; };\n",
        "inline svev::ModelParams params(const Model& m) {",
        "    svev::ModelParams p;",
        "    p.family = m.family;",
        "    p.n = m.n;",
        "    p.alpha = m.alpha;",
        "    p.beta = m.beta;",
        "    return p;",
        "}\n",
    ]

    # specfun
    emit_table(out, "LnGamma", "ln_gamma", [("double", "x"), ("double", "value")],
               [[num(x), num(mp.loggamma(x))] for x in map(mp.mpf, ["0.1", "0.5", "1.5", "3.7", "12.25", "60.5"])])
    emit_table(out, "LowerGamma", "lower_gamma", [("double", "s"), ("double", "x"), ("double", "value")],
               [[num(s), num(x), num(mp.gammainc(s, 0, x))] for s, x in
                [(1.5, 2.0), (0.5, 0.1), (3.5, 1.0), (2.5, 10.0), (7.25, 3.0), (1.0, 1.0)]])
    emit_table(out, "IncBeta", "inc_beta", [("double", "x"), ("double", "a"), ("double", "b"), ("double", "value")],
               [[num(x), num(a), num(b), num(mp.betainc(a, b, 0, x))] for x, a, b in
                [(0.5, 2, 3), (0.3, 0.5, 1.5), (0.9, 3.5, 4), (0.05, 1.5, 6), (0.75, 1, 1)]])
    emit_table(out, "Laguerre", "laguerre", [("int", "j"), ("double", "alpha"), ("double", "x"), ("double", "value")],
               [[str(j), num(a), num(x), num(mp.laguerre(j, a, x))] for j, a, x in
                [(1, 0.5, 1.0), (4, 0.5, 2.0), (7, 0, 3.3), (10, 0.5, 12.0), (12, 1.5, 0.7)]])
    emit_table(out, "Jacobi", "jacobi",
               [("int", "j"), ("double", "alpha"), ("double", "beta"), ("double", "x"), ("double", "value")],
               [[str(j), num(a), num(b), num(x), num(mp.jacobi(j, a, b, x))] for j, a, b, x in
                [(3, 0.5, 1.5, -0.3), (6, 0, 3, 0.4), (10, 0.5, 4.5, -0.8), (12, 0, 1, 0.95)]])
    hyp_cases = [([1.5, 2.0], [3.0, 0.5], -2.0), ([2.0, 3.5], [4.5, 1.5], -9.0), ([-2.0, 1.5, 2.0], [3.0, 2.5], 0.7),
                 ([1.0, 2.5, 0.5], [3.5, 4.0], 0.95)]
    rows = []
    for up, lo, x in hyp_cases:
        cell = lambda v: "{" + ", ".join(num(t) for t in v) + "}"
        rows.append([cell(up), cell(lo), num(x), num(mp.hyper(up, lo, x))])
    emit_table(out, "Hyp", "hyp", [("std::vector<double>", "upper"), ("std::vector<double>", "lower"),
                                   ("double", "x"), ("double", "value")], rows)

    # ensembles
    models = [Model("laguerre", 3, "0.5"), Model("laguerre", 5, 0), Model("jacobi", 3, 0, 1),
              Model("jacobi", 4, "0.5", "1.5")]
    out.append("inline const Model models[] = {" + ", ".join(model_literal(m) for m in models) + "};\n")
    mel, inc, pr, qr, kr, qt = [], [], [], [], [], []
    for i, m in enumerate(models):
        lag = m.family == "laguerre"
        xs = [mp.mpf("0.7"), mp.mpf("2.3")] if lag else [mp.mpf("0.15"), mp.mpf("0.6")]
        for c in range(m.n):
            mel.append([str(i), num(c + 1), num(m.mellin[c])])
        for x in xs:
            inc.append([str(i), num(x), num(2), num(m.incomplete_mellin_w(x, 2))])
            pr.append([str(i), str(m.n - 1), num(x), num(m.p(m.n - 1, x))])
            for j in (1, m.n):
                # cross-check the Leibniz form against numerical differentiation
                ref = mp.diff(lambda u: u ** j * m.weight(u), x, j) / mp.factorial(j)
                assert abs(ref - m.q(j, x)) < mp.mpf(10) ** -20 * (1 + abs(ref))
                qr.append([str(i), str(j), num(x), num(m.q(j, x))])
            for y in (x, mp.mpf("-1.7"), mp.mpf("3.1")):
                kr.append([str(i), num(x), num(y), num(m.kernel(x, y))])
            for c in range(m.n):
                qt.append([str(i), str(c), num(x), num(qtilde(m, x, c))])
    emit_table(out, "Mellin", "mellin", [("int", "model"), ("double", "s"), ("double", "value")], mel)
    emit_table(out, "IncMellin", "inc_mellin", [("int", "model"), ("double", "x"), ("double", "s"), ("double", "value")], inc)
    emit_table(out, "PolyP", "poly_p", [("int", "model"), ("int", "j"), ("double", "x"), ("double", "value")], pr)
    emit_table(out, "FuncQ", "func_q", [("int", "model"), ("int", "j"), ("double", "x"), ("double", "value")], qr)
    emit_table(out, "Kernel", "kernel", [("int", "model"), ("double", "x"), ("double", "y"), ("double", "value")], kr)
    emit_table(out, "QTilde", "qtilde", [("int", "model"), ("int", "c"), ("double", "x"), ("double", "value")], qt)

    # correlations
    cmodels = [Model("laguerre", 3, "0.5"), Model("laguerre", 4, 0), Model("jacobi", 3, "0.5", "1.5"),
               Model("jacobi", 4, 0, 1)]
    out.append("inline const Model cov_models[] = {" + ", ".join(model_literal(m) for m in cmodels) + "};\n")
    sv, ev, cv = [], [], []
    for i, m in enumerate(cmodels):
        lag = m.family == "laguerre"
        pts = [mp.mpf("0.6"), mp.mpf("2.2")] if lag else [mp.mpf("0.2"), mp.mpf("0.55")]
        for x in pts:
            sv.append([str(i), num(x), num(rho_sv(m, x))])
            e1, e2 = rho_ev_polya(m, x), rho_ev_integral(m, x)
            assert abs(e1 - e2) < mp.mpf(10) ** -20, (e1, e2)
            ev.append([str(i), num(x), num(e1)])
        pairs = [(mp.mpf("0.6"), mp.mpf("1.4")), (mp.mpf("2.2"), mp.mpf("1.1")), (mp.mpf("3.5"), mp.mpf("0.4"))] if lag \
            else [(mp.mpf("0.2"), mp.mpf("0.45")), (mp.mpf("0.55"), mp.mpf("0.3")), (mp.mpf("0.8"), mp.mpf("0.75"))]
        for r, a in pairs:
            c = cov(m, r, a)
            cv.append([str(i), num(r), num(a), num(c), num(rho_ev_polya(m, r) * rho_sv(m, a) + c)])
    emit_table(out, "RhoSV", "rho_sv", [("int", "model"), ("double", "a"), ("double", "value")], sv)
    emit_table(out, "RhoEV", "rho_ev", [("int", "model"), ("double", "r"), ("double", "value")], ev)
    emit_table(out, "Cov", "cov", [("int", "model"), ("double", "r"), ("double", "a"), ("double", "value"),
                                   ("double", "f11")], cv)

    cond = []
    for a, rs in [(["0.5", "1", "2"], ["0.7", "1.3", "1.9"]), (["0.3", "0.8", "1.1", "2.5"], ["0.5", "1.0", "2.0"]),
                  (["0.4", "1.6"], ["0.5", "1.2"])]:
        av = [mp.mpf(x) for x in a]
        for r in rs:
            cond.append(["{" + ", ".join(num(x) for x in av) + "}", num(r), num(conditional_density(mp.mpf(r), av))])
    emit_table(out, "Conditional", "conditional", [("std::vector<double>", "a"), ("double", "r"), ("double", "value")], cond)

    n2 = []
    for alpha in (0, "0.5"):
        m = Model("laguerre", 2, alpha)
        a1, a2 = mp.mpf("0.4"), mp.mpf("1.6")
        n2.append([num(m.alpha), "0", num(1.0), num(a1), num(a2), num(n2_f12(m, mp.mpf(1), a1, a2))])
        n2.append([num(m.alpha), "1", num(a1), num(a2), "0.0", num(f_sv(m, [a1, a2]))])
        for r, a in [(mp.mpf("0.8"), mp.mpf("1.5")), (mp.mpf("1.7"), mp.mpf("0.6"))]:
            n2.append([num(m.alpha), "2", num(r), num(a), "0.0", num(n2_f11(m, r, a))])
    emit_table(out, "N2", "n2", [("double", "alpha"), ("int", "kind"), ("double", "x0"), ("double", "x1"),
                                 ("double", "x2"), ("double", "value")], n2)
    out.append("// kind: 0 f12(x0; x1, x2), 1 f_SV(x0, x1), 2 f11(x0; x1)\n")
    out.append("}  // namespace oracle")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
