"""Symbolic reference values for the C++ tests.

Builds the fixture metrics directly in sympy (no shared code with the C++
library), differentiates symbolically and prints the numbers that the tests
freeze. Run: python3 tools/derive_values.py
"""

import sympy as sp


def christoffel(g, xs):
    n = len(xs)
    ginv = g.inv()
    G = [[[0] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                G[k][i][j] = sp.simplify(
                    sum(ginv[k, h] * (sp.diff(g[i, h], xs[j]) + sp.diff(g[h, j], xs[i]) - sp.diff(g[i, j], xs[h]))
                        for h in range(n)) / 2)
    return G


def contactization(alpha):
    x1, x2, y1, y2, t = xs = sp.symbols("x1 x2 y1 y2 t")
    omega = [0, 0, -x1 / 2, -x2 / 2, 0]
    eta = [alpha * w for w in omega]
    eta[4] = sp.Rational(1, 2)
    g = sp.zeros(5, 5)
    for i in range(5):
        for j in range(5):
            g[i, j] = (sp.Rational(1, 4) if i == j and i < 4 else 0) + eta[i] * eta[j]
    return xs, g


def warped(a, warp):
    x1, x2, y1, y2, x, y, z = xs = sp.symbols("x1 x2 y1 y2 x y z")
    omega = [0, 0, -x1 / 2, -x2 / 2]
    eta2 = [-y / 2, 0, sp.Rational(1, 2)]
    g2 = sp.Matrix([[sp.Rational(1, 4) + y**2 / 4, 0, -y / 4], [0, sp.Rational(1, 4), 0], [-y / 4, 0, sp.Rational(1, 4)]])
    f = warp(x1)
    etab = [a * w for w in omega] + eta2
    g = sp.zeros(7, 7)
    for i in range(7):
        for j in range(7):
            v = etab[i] * etab[j]
            if i < 4 and j < 4 and i == j:
                v += sp.Rational(1, 4)
            if i >= 4 and j >= 4:
                v += f**2 * (g2[i - 4, j - 4] - eta2[i - 4] * eta2[j - 4])
            g[i, j] = v
    return xs, g


def dump(label, xs, g, point):
    subs = dict(zip(xs, point))
    G = christoffel(g, xs)
    print(f"== {label} at {point}")
    for k in range(len(xs)):
        for i in range(len(xs)):
            for j in range(i, len(xs)):
                v = sp.N(G[k][i][j].subs(subs), 17)
                if v != 0:
                    print(f"  G[{k}][{i}][{j}] = {float(v)!r}")


if __name__ == "__main__":
    p = [sp.Rational(3, 10), sp.Rational(-1, 5), sp.Rational(1, 2), sp.Rational(1, 10), sp.Rational(1, 5)]
    for alpha in (1, 2):
        xs, g = contactization(alpha)
        dump(f"contactization alpha={alpha}", xs, g, p)
    q = [sp.Rational(3, 10), sp.Rational(-1, 5), sp.Rational(1, 2), sp.Rational(1, 10),
         sp.Rational(1, 5), sp.Rational(-2, 5), sp.Rational(3, 10)]
    xs, g = warped(1, lambda x1: sp.exp(x1 / 4))
    dump("warped a=1 f=exp(x1/4)", xs, g, q)
    # round sphere
    u, v = sp.symbols("u v")
    dump("sphere", [u, v], sp.Matrix([[1, 0], [0, sp.sin(u) ** 2]]), [sp.pi / 4, 0])
