"""Worked scenarios: two-world tables, lognormal model risk, flood geometry, contagion."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from statistics import NormalDist

import numpy as np

from . import modal
from .algebra import GODEL, AlgebraPackage
from .frame import BallRelation, DenseRelation, Frame, FrameError, ball_relation, classify_frame, grid_axes

_STD_NORMAL = NormalDist()

# -- lognormal tail measures ----------------------------------------------


@dataclass(frozen=True)
class LognormalModelState:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


def lognormal_var_es(state: LognormalModelState, alpha: float) -> tuple[float, float]:
    """Closed-form VaR and expected shortfall of ``Lognormal(mu, sigma^2)`` at level ``alpha``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    z = _STD_NORMAL.inv_cdf(alpha)
    var = math.exp(state.mu + state.sigma * z)
    es = math.exp(state.mu + state.sigma**2 / 2) * _STD_NORMAL.cdf(state.sigma - z) / (1.0 - alpha)
    return var, es


def lognormal_es_grid(mu: np.ndarray, sigma: np.ndarray, alpha: float) -> np.ndarray:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    z = _STD_NORMAL.inv_cdf(alpha)
    phi = np.vectorize(_STD_NORMAL.cdf, otypes=[float])(sigma - z)
    return np.exp(mu + sigma**2 / 2) * phi / (1.0 - alpha)


def exponential_model_relation(data_dist: np.ndarray, model_ids, thetas: np.ndarray,
                               lam_data: float, lam_model: float, lam_theta: float) -> DenseRelation:
    """Graded relation between model-evaluation states ``(D, model, theta)``.

    ``gamma(w, v) = exp(-lam_data * d_D - lam_model * [model differs] - lam_theta * |theta - theta'|^2)``
    with ``data_dist`` the pairwise dataset distance matrix.
    """
    if min(lam_data, lam_model, lam_theta) < 0:
        raise ValueError("sensitivity weights must be non-negative")
    model_ids = np.asarray(model_ids)
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    if thetas.shape[0] != model_ids.shape[0]:
        thetas = thetas.T
    diff_model = (model_ids[:, None] != model_ids[None, :]).astype(float)
    sq = ((thetas[:, None, :] - thetas[None, :, :]) ** 2).sum(axis=-1)
    return DenseRelation(np.exp(-lam_data * np.asarray(data_dist, dtype=float) - lam_model * diff_model - lam_theta * sq))


# -- region grids ----------------------------------------------------------

LABELS = ("robust", "moore", "possible_only", "excluded")
ROBUST, MOORE, POSSIBLE_ONLY, EXCLUDED = range(4)


@dataclass(eq=False)
class RegionGrid:
    axes: tuple[tuple[str, float, float, int], tuple[str, float, float, int]]
    p: np.ndarray  # 2-D, indexed [i_x, i_y]
    box: np.ndarray
    diamond: np.ndarray
    relation: BallRelation
    rho: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    @property
    def labels(self) -> np.ndarray:
        lab = np.full(self.p.shape, EXCLUDED, dtype=int)
        lab[(self.diamond == 1) & (self.p == 0)] = POSSIBLE_ONLY
        lab[(self.p == 1) & (self.box == 0)] = MOORE
        lab[self.box == 1] = ROBUST
        return lab

    def counts(self) -> dict[str, int]:
        lab = self.labels
        return {name: int((lab == k).sum()) for k, name in enumerate(LABELS)}

    def hesitation_count(self) -> int:
        return int(((self.diamond == 1) & (self.box == 0)).sum())

    def nested(self) -> bool:
        return bool(np.all(self.box <= self.p) and np.all(self.p <= self.diamond))

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        xs, ys = grid_axes([a[1:] for a in self.axes])
        return xs, ys

    def to_csv(self, path=None) -> str:
        xs, ys = self.coordinates()
        rho = self.rho if self.rho is not None else self.relation.local_mean(self.p.ravel()).reshape(self.p.shape)
        lab = self.labels
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "p", "Kp", "DiaKp", "label", "rho"])
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                w.writerow([f"{x:.6f}", f"{y:.6f}", int(self.p[i, j]), int(self.box[i, j]),
                            int(self.diamond[i, j]), LABELS[lab[i, j]], f"{rho[i, j]:.6f}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_pgm(self, path=None) -> bytes:
        """Binary PGM of the labels: robust black through excluded white, y increasing upward."""
        shade = np.array([0, 85, 170, 255], dtype=np.uint8)
        img = shade[self.labels].T[::-1]  # rows = y from top
        h, w = img.shape
        data = f"P5\n{w} {h}\n255\n".encode() + img.tobytes()
        if path is not None:
            Path(path).write_bytes(data)
        return data


def _region_grid(values: np.ndarray, axes, weights, beta, params) -> RegionGrid:
    grid = [a[1:] for a in axes]
    rel = ball_relation(grid, weights, beta)
    p = values.astype(float)
    box = rel.box(p.ravel()).reshape(p.shape)
    dia = rel.diamond(p.ravel()).reshape(p.shape)
    return RegionGrid(axes, p, box, dia, rel, None, params)


def _check_axis(lo, hi, steps):
    if not hi > lo or int(steps) < 2:
        raise ValueError(f"invalid grid axis ({lo}, {hi}, {steps})")


MODEL_RISK_WINDOW = ((1.0, 4.0, 201), (0.2, 1.2, 201))


def model_risk_grid(alpha: float = 0.99, c: float = 100.0, beta_mu: float = 0.10, beta_sigma: float = 0.045,
                    mu_axis=MODEL_RISK_WINDOW[0], sigma_axis=MODEL_RISK_WINDOW[1]) -> RegionGrid:
    """Breach regions of ``ES_alpha(mu, sigma) >= c`` under the elliptical parameter neighborhood."""
    if not (beta_mu > 0 and beta_sigma > 0):
        raise ValueError("parameter tolerances must be positive")
    _check_axis(*mu_axis)
    _check_axis(*sigma_axis)
    if sigma_axis[0] <= 0:
        raise ValueError("sigma axis must be positive")
    mus, sigmas = grid_axes([mu_axis, sigma_axis])
    M, S = np.meshgrid(mus, sigmas, indexing="ij")
    es = lognormal_es_grid(M, S, alpha)
    p = (es >= c).astype(float)
    # ((dmu/beta_mu)^2 + (dsigma/beta_sigma)^2) <= 1
    weights = (1.0 / beta_mu**2, 1.0 / beta_sigma**2)
    axes = (("mu", *mu_axis), ("sigma", *sigma_axis))
    params = dict(alpha=alpha, c=c, beta_mu=beta_mu, beta_sigma=beta_sigma)
    return _region_grid(p, axes, weights, 1.0, params)


def flood_stress(x, y):
    return 0.95 * x**2 + 0.75 * y**2 + 0.85 * x * y + 0.10 * np.sin(2.5 * np.pi * x) * np.sin(2 * np.pi * y)


FLOOD_DEFAULTS = dict(c=0.8, a_x=1.0, a_y=1.0, beta=0.08, steps=201)


def flood_grid(c: float = 0.8, a_x: float = 1.0, a_y: float = 1.0, beta: float = 0.08,
               steps: int = 201) -> RegionGrid:
    """Flood-critical region ``F >= c`` on ``[0, 1]^2`` with a weighted tolerance ball."""
    if not (a_x > 0 and a_y > 0):
        raise ValueError("metric weights must be positive")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _check_axis(0.0, 1.0, steps)
    xs, ys = grid_axes([(0.0, 1.0, steps), (0.0, 1.0, steps)])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    p = (flood_stress(X, Y) >= c).astype(float)
    axes = (("x", 0.0, 1.0, steps), ("y", 0.0, 1.0, steps))
    grid = _region_grid(p, axes, (a_x, a_y), beta, dict(c=c, a_x=a_x, a_y=a_y, beta=beta))
    grid.rho = grid.relation.local_mean(p.ravel()).reshape(p.shape)
    return grid


QUADRANTS = ("robust_likely", "robust_unlikely", "likely_fragile", "unlikely_unsupported")
FLOOD_ACTIONS = ("endorse", "escalate_inspect_defend", "review", "monitor", "close_with_audit_justification")


@dataclass(eq=False)
class QuadrantMap:
    box: np.ndarray
    diamond: np.ndarray
    rho: np.ndarray
    quadrant: np.ndarray  # index into QUADRANTS
    action: np.ndarray  # index into FLOOD_ACTIONS
    rho_high: float
    rho_low: float

    def label(self, i: int, j: int) -> dict:
        return {"modal": bool(self.box[i, j]), "local_prob": float(self.rho[i, j]),
                "quadrant": QUADRANTS[self.quadrant[i, j]], "action": FLOOD_ACTIONS[self.action[i, j]]}

    def counts(self) -> dict[str, int]:
        return {q: int((self.quadrant == k).sum()) for k, q in enumerate(QUADRANTS)}


def flood_quadrants(grid: RegionGrid, beta: float | None = None, rho_high: float = 0.9,
                    rho_low: float = 0.1) -> QuadrantMap:
    """Cross-classify modal status with the local flood probability.

    Quadrants split on ``Kp`` and ``rho >= rho_high``. Actions: endorse when
    robust and likely; escalate when likely but fragile; close with audit
    justification when ``<>p = 0``; monitor when live with ``rho < rho_low``;
    review for the remaining live, intermediate-probability states.
    """
    if not (0 < rho_low < 1 and 0 < rho_high < 1):
        raise ValueError("probability thresholds must lie in (0, 1)")
    if rho_low >= rho_high:
        raise ValueError("rho_low must be below rho_high")
    if beta is not None and beta != grid.relation.beta:
        rel = BallRelation(grid.relation.shape, grid.relation.spacing, grid.relation.weights, beta)
        p = grid.p.ravel()
        box = rel.box(p).reshape(grid.p.shape)
        dia = rel.diamond(p).reshape(grid.p.shape)
        rho = rel.local_mean(p).reshape(grid.p.shape)
    else:
        box, dia = grid.box, grid.diamond
        rho = grid.rho if grid.rho is not None else grid.relation.local_mean(grid.p.ravel()).reshape(grid.p.shape)
    high = rho >= rho_high
    robust = box == 1
    quad = np.where(robust, np.where(high, 0, 1), np.where(high, 2, 3))
    action = np.full(box.shape, 2, dtype=int)
    action[(dia == 1) & (rho < rho_low) & ~robust] = 3
    action[dia == 0] = 4
    action[~robust & high] = 1
    action[robust & high] = 0
    return QuadrantMap(box, dia, rho, quad, action, rho_high, rho_low)


# -- two-world tables ------------------------------------------------------

W2 = ("w0", "w1")
EVIDENCE_SETS = {"{}": (0, 0), "{w0}": (1, 0), "{w1}": (0, 1), "{w0,w1}": (1, 1)}


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "yes" if v else "no"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6f}"
    return str(v)


def _two_world(row0, row1=(0, 1), **props) -> Frame:
    return Frame(W2, {"M": DenseRelation([list(row0), list(row1)])},
                 {k: np.asarray(v, dtype=float) for k, v in props.items()})


def two_world_catalog(pkg: AlgebraPackage = GODEL, fuzzy: tuple = (1.0, 0.6, 0.0, 1.0, 0.0, 0.9),
                      es_values: tuple = (112.0, 96.0), threshold: float = 100.0) -> list[Table]:
    """All two-world tables; ``fuzzy`` is ``(a, b, c, d, x, y)`` for the graded case."""
    tables = []

    rows = []
    for gname, row in EVIDENCE_SETS.items():
        for p0 in (0, 1):
            for p1 in (0, 1):
                f = _two_world(row, p=(p0, p1))
                b = modal.statuses(f, "M", "p", pkg)
                rows.append([gname, p0, p1, b.box[0], b.diamond[0], b.dual[0]])
    tables.append(Table("evidence_sets", ["Gamma(w0)", "p0", "p1", "Mp", "DiaMp", "barMp"], rows))

    rows = []
    for p0 in (0, 1):
        for p1 in (0, 1):
            f = _two_world((1, 1), (1, 1), p=(p0, p1))
            b = modal.statuses(f, "M", "p", pkg)
            moore = modal.refine(f, "M", "p", "moore", pkg)
            rows.append([p0, p1, b.box[0], b.diamond[0], moore[0]])
    tables.append(Table("knowledge_universal", ["p0", "p1", "Kp", "DiaKp", "moore"], rows))

    rows = []
    for p0, p1 in ((0, 1), (1, 0)):
        f = _two_world((0, 1), (0, 1), p=(p0, p1))
        b = modal.statuses(f, "M", "p", pkg)
        moore = modal.refine(f, "M", "p", "moore", pkg)
        rows.append([p0, p1, b.box[0], b.diamond[0], moore[0], bool(b.box[0] > p0)])
    tables.append(Table("belief_stress", ["p0", "p1", "Bp", "DiaBp", "moore", "nonfactive"], rows))

    frames = [
        ("S5", "identity", ((1, 0), (0, 1))),
        ("S5", "universal", ((1, 1), (1, 1))),
        ("KD45", "anchored_w0", ((1, 0), (1, 0))),
        ("KD45", "anchored_w1", ((0, 1), (0, 1))),
        ("KD45", "identity", ((1, 0), (0, 1))),
        ("KD45", "universal", ((1, 1), (1, 1))),
    ]
    rows = []
    for system, name, (r0, r1) in frames:
        prof = classify_frame(_two_world(r0, r1), "M", pkg)
        rows.append([system, name, prof.reflexive, prof.serial, prof.transitive, prof.euclidean,
                     prof.symmetric, prof.equivalence, prof.reflexive])
    tables.append(Table("frames", ["system", "frame", "reflexive", "serial", "transitive", "euclidean",
                                   "symmetric", "equivalence", "factive"], rows))

    p = tuple(float(e >= threshold) for e in es_values)
    f = _two_world((1, 1), (1, 1), p=p)
    b = modal.statuses(f, "M", "p", pkg)
    moore = modal.refine(f, "M", "p", "moore", pkg)
    tables.append(Table("es_breach", ["ES(w0)", "ES(w1)", "p0", "p1", "Kp", "DiaKp", "barKp", "moore"],
                        [[es_values[0], es_values[1], p[0], p[1], b.box[0], b.diamond[0], b.dual[0], moore[0]]]))

    f = _two_world((0, 1), (0, 1), q=(0, 1))
    b = modal.statuses(f, "M", "q", pkg)
    tables.append(Table("cascade", ["q0", "q1", "Bq", "DiaBq", "barBq"],
                        [[0, 1, b.box[0], b.diamond[0], b.dual[0]]]))

    a, bb, c, d, x, y = fuzzy
    f = Frame(W2, {"K": DenseRelation([[a, bb], [c, d]]), "B": DenseRelation([[0, 1], [0, 1]])},
              {"r": np.array([x, y], dtype=float)})
    st = modal.statuses(f, "K", "r", pkg)
    rows = [[x, y, st.box[0], st.diamond[0], st.dual[0], st.hesitation[0],
             modal.refine(f, "K", "r", "moore", pkg)[0], modal.refine(f, "K", "r", "anti", pkg)[0],
             st.inconsistency[0], modal.box(f, "B", "r", pkg)[0]]]
    tables.append(Table("fuzzy", ["r0", "r1", "Kr", "DiaKr", "barKr", "H_K", "moore", "anti", "I_K", "Br"], rows))
    return tables


def fuzzy_surface(pkg: AlgebraPackage = GODEL, steps: int = 11, k_row=(1.0, 0.6), b_row=(0.0, 1.0)) -> Table:
    """Diagnostics at ``w0`` over the ``(p0, p1)`` unit square for fixed ``gamma_K`` and ``gamma_B`` rows."""
    if steps < 2:
        raise ValueError("steps must be at least 2")
    grid = np.linspace(0.0, 1.0, steps)
    p0, p1 = (a.ravel() for a in np.meshgrid(grid, grid, indexing="ij"))
    n = p0.size
    # one frame per point would be slow; evaluate the w0 formulas directly
    ka, kb = k_row
    ba, bb = b_row
    imp, tn = pkg.implies, pkg.tnorm
    kp = np.minimum(imp(ka, p0), imp(kb, p1))
    kneg = np.minimum(imp(ka, 1 - p0), imp(kb, 1 - p1))
    dia = np.maximum(tn(ka, p0), tn(kb, p1))
    bar = 1 - kneg
    bp = np.minimum(imp(ba, p0), imp(bb, p1))
    cols = ["p0", "p1", "Kp", "DiaKp", "barKp", "H_K", "moore_K", "anti_K", "I_K", "Bp", "moore_B", "nonfactive_gap"]
    data = np.column_stack([p0, p1, kp, dia, bar, np.maximum(0, bar - kp), np.minimum(p0, 1 - kp),
                            np.minimum(p0, kneg), np.minimum(kp, kneg), bp, np.minimum(p0, 1 - bp),
                            np.maximum(0, bp - p0)])
    return Table("fuzzy_surface", cols, [list(map(float, r)) for r in data[:n]])


# -- contagion ---------------------------------------------------------------


def contagion_frame(include_actual: bool = False) -> Frame:
    row0 = [1, 1, 1] if include_actual else [0, 1, 1]
    return Frame(("w0", "w1", "w2"),
                 {"B": DenseRelation([row0, [0, 1, 1], [0, 1, 1]]),
                  "K": DenseRelation(np.ones((3, 3)))},
                 {"p": np.array([0.0, 1.0, 1.0])})


@dataclass(frozen=True)
class ContagionReport:
    bp_w0: float
    p_w0: float
    nonfactive: bool
    witness: tuple[str, str, float] | None

    def line(self) -> str:
        return f"Bp(w0)={self.bp_w0:g} p(w0)={self.p_w0:g} nonfactive={'true' if self.nonfactive else 'false'}"


def contagion_scenario(pkg: AlgebraPackage = GODEL, include_actual: bool = False) -> ContagionReport:
    f = contagion_frame(include_actual)
    bp = modal.box(f, "B", "p", pkg)
    p = f.prop("p")
    gap = bp - p
    i = int(np.argmax(gap))
    nonfactive = bool(gap[i] > 0)
    witness = ("p", f.worlds[i], float(gap[i])) if nonfactive else None
    return ContagionReport(float(bp[0]), float(p[0]), nonfactive, witness)
