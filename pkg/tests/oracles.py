"""Independent reference implementations used to derive expected values.

Everything here is written with plain Python loops over explicit world
lists, sharing no code with the package's vectorised operators.
"""

import math


def godel_imp(a, b):
    return 1.0 if a <= b else b


def product_imp(a, b):
    return 1.0 if a <= b else b / a


def luk_imp(a, b):
    return min(1.0, 1.0 - a + b)


IMPL = {"godel_min": godel_imp, "product": product_imp, "lukasiewicz": luk_imp}
TNORM = {
    "godel_min": min,
    "product": lambda a, b: a * b,
    "lukasiewicz": lambda a, b: max(0.0, a + b - 1.0),
}


def box(gamma, p, pkg="godel_min"):
    imp = IMPL[pkg]
    n = len(p)
    return [min(imp(gamma[w][v], p[v]) for v in range(n)) for w in range(n)]


def diamond(gamma, p, pkg="godel_min"):
    t = TNORM[pkg]
    n = len(p)
    return [max(t(gamma[w][v], p[v]) for v in range(n)) for w in range(n)]


def crisp_box(neigh, p):
    """Conjunction over each evidence set (empty set gives 1)."""
    return [min((p[v] for v in nb), default=1.0) for nb in neigh]


def crisp_diamond(neigh, p):
    return [max((p[v] for v in nb), default=0.0) for nb in neigh]


def ball_neighbourhoods(xs, ys, ax, ay, beta):
    """Brute-force neighbour lists on a 2-D grid (C order, x outer)."""
    pts = [(x, y) for x in xs for y in ys]
    out = []
    for (x, y) in pts:
        out.append([j for j, (u, v) in enumerate(pts)
                    if ax * (x - u) ** 2 + ay * (y - v) ** 2 <= beta**2 * (1 + 1e-12) + 1e-15])
    return out


def boolean_eval(node, env):
    """Reference evaluator for the !/&/| fragment over Python bools."""
    kind = type(node).__name__
    if kind == "Atom":
        return env[node.name]
    if kind == "Not":
        return not boolean_eval(node.arg, env)
    if kind == "And":
        return boolean_eval(node.left, env) and boolean_eval(node.right, env)
    if kind == "Or":
        return boolean_eval(node.left, env) or boolean_eval(node.right, env)
    raise TypeError(kind)


def lognormal_mc(mu, sigma, alpha, draws=10_000_000, seed=12345):
    """Monte Carlo VaR and ES of Lognormal(mu, sigma^2) from sorted samples."""
    import numpy as np

    rng = np.random.default_rng(seed)
    x = np.exp(mu + sigma * rng.standard_normal(draws))
    var = float(np.quantile(x, alpha))
    es = float(x[x >= var].mean())
    return var, es


def flood_F(x, y):
    return (0.95 * x * x + 0.75 * y * y + 0.85 * x * y
            + 0.10 * math.sin(2.5 * math.pi * x) * math.sin(2 * math.pi * y))


def neighbourhood_fraction(cx, cy, xs, ys, beta, c, ax=1.0, ay=1.0):
    """Fraction of grid nodes in the tolerance ball around (cx, cy) where F >= c."""
    inside = total = 0
    for x in xs:
        for y in ys:
            if ax * (x - cx) ** 2 + ay * (y - cy) ** 2 <= beta**2 * (1 + 1e-12) + 1e-15:
                total += 1
                inside += flood_F(x, y) >= c
    return inside / total, total
