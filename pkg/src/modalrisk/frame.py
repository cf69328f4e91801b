"""Evidence frames: worlds, graded evidence relations, propositions, local measures."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import jsonschema
import numpy as np

from .algebra import GODEL, AlgebraPackage, check_degrees

MEASURE_TOL = 1e-9

FRAME_SCHEMA = {
    "type": "object",
    "required": ["worlds", "relations"],
    "additionalProperties": False,
    "properties": {
        "worlds": {"type": "array", "minItems": 1, "items": {"type": "string"}, "uniqueItems": True},
        "relations": {
            "type": "object",
            "minProperties": 1,
            "additionalProperties": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "number"}},
            },
        },
        "propositions": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "number"}},
        },
        "measures": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "number"}},
        },
    },
}


class FrameError(ValueError):
    """Raised for malformed frame documents or invalid frame queries."""


class DenseRelation:
    """A graded relation stored as an explicit ``n x n`` matrix, rows = source world."""

    def __init__(self, matrix):
        m = check_degrees(matrix, "relation degrees")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise FrameError(f"relation matrix must be square, got shape {m.shape}")
        self._m = m
        self._m.setflags(write=False)

    @property
    def size(self) -> int:
        return self._m.shape[0]

    @property
    def is_crisp(self) -> bool:
        return bool(np.all((self._m == 0.0) | (self._m == 1.0)))

    def matrix(self) -> np.ndarray:
        return self._m

    def box(self, p, pkg: AlgebraPackage) -> np.ndarray:
        return np.min(pkg.implies(self._m, p[None, :]), axis=1)

    def diamond(self, p, pkg: AlgebraPackage) -> np.ndarray:
        return np.max(pkg.tnorm(self._m, p[None, :]), axis=1)

    def neighborhood(self, i: int) -> np.ndarray:
        return np.flatnonzero(self._m[i] == 1.0)

    def uniform_measures(self) -> np.ndarray:
        if not self.is_crisp:
            raise FrameError("uniform local measures need a crisp relation")
        counts = self._m.sum(axis=1)
        if np.any(counts == 0):
            raise FrameError("uniform local measure undefined on an empty neighborhood")
        return self._m / counts[:, None]

    def __repr__(self):
        return f"DenseRelation({self._m.tolist()!r})"


class BallRelation:
    """Crisp tolerance-ball relation on a regular grid, evaluated by stencil.

    ``gamma(w, v) = 1`` iff ``sum_i a_i (x_i - y_i)^2 <= beta^2``, restricted
    to grid nodes. Worlds are the grid nodes in C order.
    """

    def __init__(self, shape: Sequence[int], spacing: Sequence[float], weights: Sequence[float], beta: float):
        self.shape = tuple(int(s) for s in shape)
        self.spacing = tuple(float(h) for h in spacing)
        self.weights = tuple(float(a) for a in weights)
        self.beta = float(beta)
        if not (len(self.shape) == len(self.spacing) == len(self.weights)):
            raise FrameError("shape, spacing and weights must have equal length")
        if any(a <= 0 for a in self.weights):
            raise FrameError("metric weights must be positive")
        if self.beta < 0:
            raise FrameError("radius must be non-negative")
        self.offsets = self._stencil()

    def _stencil(self) -> list[tuple[int, ...]]:
        # relative slack keeps nodes lying exactly on the ball boundary inside
        limit = self.beta**2 * (1 + 1e-12) + 1e-15
        reach = []
        for h, a, n in zip(self.spacing, self.weights, self.shape):
            k = int(np.floor(self.beta / (np.sqrt(a) * h) + 1e-9)) if h > 0 else 0
            reach.append(min(k, n - 1))
        offs = []
        for off in itertools.product(*(range(-k, k + 1) for k in reach)):
            d2 = sum(a * (o * h) ** 2 for o, h, a in zip(off, self.spacing, self.weights))
            if d2 <= limit:
                offs.append(off)
        return offs

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    is_crisp = True

    def _shifted(self, grid: np.ndarray, fill: float):
        pad = [(max(-min(o[i] for o in self.offsets), 0), max(max(o[i] for o in self.offsets), 0))
               for i in range(len(self.shape))]
        padded = np.pad(grid, pad, constant_values=fill)
        for off in self.offsets:
            sl = tuple(slice(lo + o, lo + o + n) for (lo, _), o, n in zip(pad, off, self.shape))
            yield padded[sl]

    def box(self, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
        # crisp relation: box is the min over the ball for any boundary-law package
        g = np.asarray(p, dtype=float).reshape(self.shape)
        out = np.ones(self.shape)
        for view in self._shifted(g, 1.0):
            np.minimum(out, view, out=out)
        return out.ravel()

    def diamond(self, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
        g = np.asarray(p, dtype=float).reshape(self.shape)
        out = np.zeros(self.shape)
        for view in self._shifted(g, 0.0):
            np.maximum(out, view, out=out)
        return out.ravel()

    def neighbor_sum(self, values) -> np.ndarray:
        g = np.asarray(values, dtype=float).reshape(self.shape)
        out = np.zeros(self.shape)
        for view in self._shifted(g, 0.0):
            out += view
        return out.ravel()

    def neighbor_count(self) -> np.ndarray:
        return self.neighbor_sum(np.ones(self.size))

    def local_mean(self, values) -> np.ndarray:
        """Average of ``values`` under the uniform measure on each ball."""
        return self.neighbor_sum(values) / self.neighbor_count()

    def neighborhood(self, i: int) -> np.ndarray:
        idx = np.unravel_index(i, self.shape)
        out = []
        for off in self.offsets:
            j = tuple(a + o for a, o in zip(idx, off))
            if all(0 <= x < n for x, n in zip(j, self.shape)):
                out.append(np.ravel_multi_index(j, self.shape))
        return np.array(sorted(out), dtype=int)

    def matrix(self) -> np.ndarray:
        n = self.size
        if n > 5000:
            raise FrameError(f"refusing to densify a {n}-world grid relation")
        m = np.zeros((n, n))
        for i in range(n):
            m[i, self.neighborhood(i)] = 1.0
        return m

    def uniform_measures(self) -> np.ndarray:
        m = self.matrix()
        return m / m.sum(axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class Frame:
    worlds: tuple[str, ...]
    relations: Mapping[str, DenseRelation | BallRelation]
    propositions: Mapping[str, np.ndarray] = field(default_factory=dict)
    measures: np.ndarray | None = None  # row w is mu_w over worlds
    coords: np.ndarray | None = None  # grid frames: node coordinates

    def __post_init__(self):
        n = len(self.worlds)
        for name, rel in self.relations.items():
            if rel.size != n:
                raise FrameError(f"relation {name!r} has size {rel.size}, expected {n}")
        for name, p in self.propositions.items():
            if np.shape(p) != (n,):
                raise FrameError(f"proposition {name!r} must have {n} values")
        if self.measures is not None:
            _check_measure_rows(self.measures, n)

    @property
    def size(self) -> int:
        return len(self.worlds)

    def relation(self, std: str):
        try:
            return self.relations[std]
        except KeyError:
            raise FrameError(f"unknown standard {std!r}; frame has {sorted(self.relations)}") from None

    def prop(self, name: str) -> np.ndarray:
        try:
            return self.propositions[name]
        except KeyError:
            raise FrameError(f"unknown proposition {name!r}") from None

    def index(self, world: str) -> int:
        try:
            return self.worlds.index(world)
        except ValueError:
            raise FrameError(f"unknown world {world!r}") from None

    def local_measures(self, std: str | None = None) -> np.ndarray:
        """Measures mu_w as a row-stochastic matrix.

        Falls back to the uniform measure on the crisp neighborhood of
        ``std`` when the frame carries no explicit measures.
        """
        if self.measures is not None:
            return self.measures
        if std is None:
            raise FrameError("frame has no local measures")
        return self.relation(std).uniform_measures()

    def with_relation(self, std: str, rel) -> "Frame":
        rels = dict(self.relations)
        rels[std] = rel if not isinstance(rel, (list, np.ndarray)) else DenseRelation(rel)
        return Frame(self.worlds, rels, dict(self.propositions), self.measures, self.coords)

    def with_propositions(self, **props) -> "Frame":
        merged = dict(self.propositions)
        merged.update({k: check_degrees(v, f"proposition {k!r}") for k, v in props.items()})
        return Frame(self.worlds, dict(self.relations), merged, self.measures, self.coords)

    def with_measures(self, measures) -> "Frame":
        return Frame(self.worlds, dict(self.relations), dict(self.propositions),
                     np.asarray(measures, dtype=float), self.coords)


def _check_measure_rows(m, n):
    m = np.asarray(m, dtype=float)
    if m.shape != (n, n):
        raise FrameError(f"measures must be {n} x {n}")
    if np.any(m < 0):
        raise FrameError("measures must be nonnegative")
    if np.any(np.abs(m.sum(axis=1) - 1.0) > MEASURE_TOL):
        raise FrameError("each local measure must sum to 1")


def build_finite_frame(doc) -> Frame:
    """Build a frame from a JSON document (text, path-free dict)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise FrameError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, FRAME_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise FrameError(f"schema violation at {list(exc.absolute_path)}: {exc.message}") from exc

    worlds = tuple(doc["worlds"])
    n = len(worlds)
    rels = {}
    for name, rows in doc["relations"].items():
        if len(rows) != n or any(len(r) != n for r in rows):
            raise FrameError(f"relation {name!r} must be a {n} x {n} matrix")
        try:
            rels[name] = DenseRelation(rows)
        except ValueError as exc:
            raise FrameError(f"relation {name!r}: {exc}") from exc
    props = {}
    for name, vals in doc.get("propositions", {}).items():
        if len(vals) != n:
            raise FrameError(f"proposition {name!r} must have {n} values")
        try:
            props[name] = check_degrees(vals, f"proposition {name!r}")
        except ValueError as exc:
            raise FrameError(str(exc)) from exc
    measures = None
    if doc.get("measures"):
        mdoc = doc["measures"]
        missing = [w for w in worlds if w not in mdoc]
        unknown = [w for w in mdoc if w not in worlds]
        if missing or unknown:
            raise FrameError(f"measures must cover exactly the worlds (missing {missing}, unknown {unknown})")
        measures = np.array([mdoc[w] for w in worlds], dtype=float)
        _check_measure_rows(measures, n)
    return Frame(worlds, rels, props, measures)


def load_frame(path) -> Frame:
    return build_finite_frame(Path(path).read_text())


def frame_to_doc(f: Frame) -> dict:
    doc = {
        "worlds": list(f.worlds),
        "relations": {k: r.matrix().tolist() for k, r in f.relations.items()},
        "propositions": {k: np.asarray(v).tolist() for k, v in f.propositions.items()},
    }
    if f.measures is not None:
        doc["measures"] = {w: row.tolist() for w, row in zip(f.worlds, f.measures)}
    return doc


@dataclass(frozen=True)
class MetricFrameSpec:
    weights: tuple[float, ...]
    beta: float
    grid: tuple[tuple[float, float, int], ...]  # (lo, hi, steps) per axis
    std: str = "K"

    def __post_init__(self):
        if len(self.weights) != len(self.grid) or not self.grid:
            raise FrameError("one weight per grid axis is required")
        if any(a <= 0 for a in self.weights):
            raise FrameError("metric weights must be positive")
        if not self.beta > 0:
            raise FrameError("radius beta must be positive")
        for lo, hi, steps in self.grid:
            if steps < 2 or not hi > lo:
                raise FrameError("each axis needs hi > lo and at least 2 steps")

    @property
    def dimension(self) -> int:
        return len(self.grid)


def grid_axes(grid) -> list[np.ndarray]:
    return [np.linspace(lo, hi, int(steps)) for lo, hi, steps in grid]


def ball_relation(grid, weights, beta) -> BallRelation:
    shape = [int(s) for _, _, s in grid]
    spacing = [(hi - lo) / (s - 1) for lo, hi, s in grid]
    return BallRelation(shape, spacing, weights, beta)


def build_metric_frame(spec: MetricFrameSpec) -> Frame:
    axes = grid_axes(spec.grid)
    mesh = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=1)
    worlds = tuple(f"g{i}" for i in range(len(coords)))
    rel = ball_relation(spec.grid, spec.weights, spec.beta)
    return Frame(worlds, {spec.std: rel}, {}, None, coords)


@dataclass(frozen=True)
class FrameProfile:
    reflexive: bool
    serial: bool
    symmetric: bool
    transitive: bool
    euclidean: bool
    equivalence: bool
    fuzzy_transitive: bool
    crisp: bool


def fuzzy_transitive(m: np.ndarray, pkg: AlgebraPackage, tol: float = 1e-12) -> bool:
    """``gamma(w,u) (x) gamma(u,v) <= gamma(w,v)`` for all triples."""
    for u in range(m.shape[0]):
        if np.any(pkg.tnorm(m[:, u, None], m[None, u, :]) > m + tol):
            return False
    return True


def classify_frame(f: Frame, std: str, pkg: AlgebraPackage = GODEL) -> FrameProfile:
    """Frame conditions of the relation at ``std``.

    Reflexivity means ``gamma(w, w) = 1``; seriality, transitivity and
    Euclideanness are read off the core relation ``{gamma = 1}`` (exactly
    the relation itself when it is crisp); symmetry is exact equality of
    the matrix with its transpose.
    """
    m = np.asarray(f.relation(std).matrix(), dtype=float)
    core = m == 1.0
    ci = core.astype(int)
    reflexive = bool(np.all(np.diag(m) == 1.0))
    serial = bool(np.all(core.any(axis=1)))
    symmetric = bool(np.array_equal(m, m.T))
    two_step = (ci @ ci) > 0
    transitive = bool(np.all(~two_step | core))
    # wRu and wRv => uRv
    shared = (ci.T @ ci) > 0
    euclidean = bool(np.all(~shared | core))
    crisp = bool(np.all((m == 0.0) | (m == 1.0)))
    return FrameProfile(
        reflexive=reflexive,
        serial=serial,
        symmetric=symmetric,
        transitive=transitive,
        euclidean=euclidean,
        equivalence=reflexive and symmetric and transitive,
        fuzzy_transitive=fuzzy_transitive(m, pkg),
        crisp=crisp,
    )


def crisp_neighborhood(f: Frame, std: str, w: str | int) -> set[str]:
    rel = f.relation(std)
    if not rel.is_crisp:
        raise FrameError(f"relation {std!r} is not crisp")
    i = f.index(w) if isinstance(w, str) else int(w)
    return {f.worlds[j] for j in rel.neighborhood(i)}


def identity_relation(n: int) -> DenseRelation:
    return DenseRelation(np.eye(n))
