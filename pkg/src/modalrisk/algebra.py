"""Truth-degree algebra.

Degrees live in [0, 1]. A package bundles a t-norm with its residuated
implication and the standard negation ``1 - x``. All operations accept
scalars or numpy arrays and broadcast.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

LAW_TOL = 1e-12


class Degree(float):
    """A float constrained to the unit interval."""

    def __new__(cls, value):
        v = float(value)
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"degree {value!r} outside [0, 1]")
        return super().__new__(cls, v)


def check_degrees(values, what: str = "degrees") -> np.ndarray:
    """Return ``values`` as a float array, rejecting anything outside [0, 1]."""
    arr = np.asarray(values, dtype=float)
    if arr.size and (np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{what} must lie in [0, 1]")
    return arr


def _godel_tnorm(a, b):
    return np.minimum(a, b)


def _godel_implies(a, b):
    return np.where(a <= b, 1.0, b)


def _product_tnorm(a, b):
    return np.multiply(a, b)


def _product_implies(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    # a <= b gives 1; otherwise a > b >= 0, so the division is safe
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a <= b, 1.0, b / a)


def _luk_tnorm(a, b):
    return np.maximum(0.0, np.add(a, b) - 1.0)


def _luk_implies(a, b):
    return np.minimum(1.0, 1.0 - np.asarray(a, dtype=float) + b)


_TNORMS = {
    "godel_min": (_godel_tnorm, _godel_implies),
    "product": (_product_tnorm, _product_implies),
    "lukasiewicz": (_luk_tnorm, _luk_implies),
}


@dataclass(frozen=True)
class AlgebraPackage:
    """A t-norm together with its residuum and standard negation."""

    tnorm_id: str = "godel_min"
    implication_id: str = "residuum"
    negation_id: str = "standard"

    def __post_init__(self):
        if self.tnorm_id not in _TNORMS:
            raise ValueError(f"unknown t-norm {self.tnorm_id!r}; choose from {sorted(_TNORMS)}")
        if self.implication_id != "residuum":
            raise ValueError("only the residuated implication is supported")
        if self.negation_id != "standard":
            raise ValueError("only standard negation 1-x is supported")

    def tnorm(self, a, b):
        return _TNORMS[self.tnorm_id][0](a, b)

    def implies(self, a, b):
        return _TNORMS[self.tnorm_id][1](a, b)

    def negate(self, a):
        return 1.0 - np.asarray(a, dtype=float)


GODEL = AlgebraPackage("godel_min")
PRODUCT = AlgebraPackage("product")
LUKASIEWICZ = AlgebraPackage("lukasiewicz")
PACKAGES = {"godel_min": GODEL, "product": PRODUCT, "lukasiewicz": LUKASIEWICZ}

# short aliases accepted on the command line
_ALIASES = {"godel": "godel_min", "min": "godel_min", "goedel": "godel_min", "luk": "lukasiewicz"}


def get_package(name: str) -> AlgebraPackage:
    key = _ALIASES.get(name, name)
    try:
        return PACKAGES[key]
    except KeyError:
        raise ValueError(f"unknown algebra package {name!r}") from None


def _out(x):
    # scalars in, plain floats out
    return float(x) if np.ndim(x) == 0 else x


def tnorm(a, b, pkg: AlgebraPackage = GODEL):
    return _out(pkg.tnorm(a, b))


def implies(a, b, pkg: AlgebraPackage = GODEL):
    return _out(pkg.implies(a, b))


def negate(a):
    return _out(1.0 - np.asarray(a, dtype=float))


def _same_shape(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"propositions over different world sets: {p.shape} vs {q.shape}")
    return p, q


def meet(p, q) -> np.ndarray:
    """Pointwise minimum of two propositions over the same worlds."""
    p, q = _same_shape(p, q)
    return np.minimum(p, q)


def join(p, q) -> np.ndarray:
    p, q = _same_shape(p, q)
    return np.maximum(p, q)


def structural_uncertainty(p) -> np.ndarray:
    """Overlap of ``p`` with its negation, ``min(p, 1 - p)``."""
    p = np.asarray(p, dtype=float)
    return np.minimum(p, 1.0 - p)


def global_uncertainty(props: Iterable, w: int | None = None):
    """Sup of structural uncertainty over a finite registered family.

    Returns the whole proposition when ``w`` is None, else the value at
    world index ``w``. An empty family gives 0.
    """
    props = [np.asarray(p, dtype=float) for p in props]
    if not props:
        return 0.0 if w is not None else np.zeros(0)
    u = np.max([structural_uncertainty(p) for p in props], axis=0)
    return float(u[w]) if w is not None else u


def is_crisp(values) -> bool:
    arr = np.asarray(values, dtype=float)
    return bool(np.all((arr == 0.0) | (arr == 1.0)))
