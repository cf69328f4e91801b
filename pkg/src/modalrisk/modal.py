"""Support, possibility and the derived epistemic statuses over a frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import GODEL, AlgebraPackage, check_degrees
from .frame import BallRelation, Frame, FrameError

PROB_TOL = 1e-9


def _prop(f: Frame, p) -> np.ndarray:
    if isinstance(p, str):
        return f.prop(p)
    arr = np.asarray(p, dtype=float)
    if arr.shape != (f.size,):
        raise FrameError(f"proposition must have {f.size} values, got shape {arr.shape}")
    return arr


def box(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """``(Mp)(w) = inf_v gamma(w, v) => p(v)``."""
    return f.relation(std).box(_prop(f, p), pkg)


def diamond(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """``(<>p)(w) = sup_v gamma(w, v) (x) p(v)``."""
    return f.relation(std).diamond(_prop(f, p), pkg)


def dual(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """Non-exclusion ``not M not p``. Kept distinct from :func:`diamond`."""
    return 1.0 - box(f, std, 1.0 - _prop(f, p), pkg)


def inconsistency(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    p = _prop(f, p)
    return np.minimum(box(f, std, p, pkg), box(f, std, 1.0 - p, pkg))


@dataclass(frozen=True, eq=False)
class StatusBundle:
    box: np.ndarray
    diamond: np.ndarray
    dual: np.ndarray
    hesitation: np.ndarray
    inconsistency: np.ndarray
    raw_gap: np.ndarray  # dual - box before clipping; negative entries are diagnostic only

    def at(self, i: int) -> dict[str, float]:
        return {k: float(getattr(self, k)[i]) for k in ("box", "diamond", "dual", "hesitation", "inconsistency")}


def statuses(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> StatusBundle:
    p = _prop(f, p)
    mp = box(f, std, p, pkg)
    m_neg = box(f, std, 1.0 - p, pkg)
    dual_p = 1.0 - m_neg
    gap = dual_p - mp
    return StatusBundle(
        box=mp,
        diamond=diamond(f, std, p, pkg),
        dual=dual_p,
        hesitation=np.maximum(0.0, gap),
        inconsistency=np.minimum(mp, m_neg),
        raw_gap=gap,
    )


REFINEMENTS = ("moore", "anti", "unsup", "conf")


@dataclass(frozen=True)
class RefinementKind:
    kind: str = "moore"
    support: str | None = None  # the supporting standard E for unsup/conf

    def __post_init__(self):
        if self.kind not in REFINEMENTS:
            raise ValueError(f"unknown refinement {self.kind!r}")
        if self.kind in ("unsup", "conf") and self.support is None:
            raise ValueError(f"{self.kind} refinement needs a supporting standard")


def refine(f: Frame, std: str, p, kind: RefinementKind | str = "moore",
           pkg: AlgebraPackage = GODEL, support: str | None = None) -> np.ndarray:
    """Epistemic-risk refinements of ``p`` relative to standard ``std``.

    ``moore``: p and not Mp; ``anti``: p and M not p; ``unsup``: Ep and not Mp;
    ``conf``: Ep and M not p, where E is the ``support`` standard.
    """
    if isinstance(kind, str):
        kind = RefinementKind(kind, support)
    p = _prop(f, p)
    if kind.kind == "moore":
        return np.minimum(p, 1.0 - box(f, std, p, pkg))
    if kind.kind == "anti":
        return np.minimum(p, box(f, std, 1.0 - p, pkg))
    if kind.support == std:
        raise ValueError("mixed refinements need two distinct standards")
    ep = box(f, kind.support, p, pkg)
    if kind.kind == "unsup":
        return np.minimum(ep, 1.0 - box(f, std, p, pkg))
    return np.minimum(ep, box(f, std, 1.0 - p, pkg))


def _dense_gamma(f: Frame, std: str) -> np.ndarray:
    return np.asarray(f.relation(std).matrix(), dtype=float)


def box_agg(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """Expectation of ``gamma(w, v) => p(v)`` under ``mu_w``."""
    p = _prop(f, p)
    rel = f.relation(std)
    if f.measures is None and isinstance(rel, BallRelation):
        # off-ball worlds carry no mass; on-ball terms are 1 => p(v) = p(v)
        return rel.local_mean(p)
    mu = f.local_measures(std)
    return np.sum(mu * pkg.implies(_dense_gamma(f, std), p[None, :]), axis=1)


def diamond_agg(f: Frame, std: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """Expectation of ``gamma(w, v) (x) p(v)`` under ``mu_w``."""
    p = _prop(f, p)
    rel = f.relation(std)
    if f.measures is None and isinstance(rel, BallRelation):
        return rel.local_mean(p)
    mu = f.local_measures(std)
    return np.sum(mu * pkg.tnorm(_dense_gamma(f, std), p[None, :]), axis=1)


def local_probability(f: Frame, std: str, p, w: str | int | None = None):
    """``rho_p(w) = sum_v p(v) mu_w(v)``; all worlds when ``w`` is None."""
    p = _prop(f, p)
    rel = f.relation(std)
    if f.measures is None and isinstance(rel, BallRelation):
        rho = rel.local_mean(p)
    else:
        rho = f.local_measures(std) @ p
    if w is None:
        return rho
    i = f.index(w) if isinstance(w, str) else int(w)
    return float(rho[i])


def _check_measure(mu, n: int | None = None) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    if n is not None and mu.shape != (n,):
        raise ValueError(f"measure must have {n} entries")
    if np.any(mu < 0) or abs(mu.sum() - 1.0) > PROB_TOL:
        raise ValueError("measure must be nonnegative and sum to 1")
    return mu


def fuzzy_event_probability(p, mu) -> float:
    """Probability of a graded event as the expectation of its degrees."""
    p = check_degrees(p, "proposition")
    return float(np.dot(p, _check_measure(mu, p.shape[0])))


def level_probability(p, mu, eta: float) -> float:
    """``mu({w : p(w) >= eta})``."""
    p = check_degrees(p, "proposition")
    mu = _check_measure(mu, p.shape[0])
    return float(mu[p >= eta].sum())
