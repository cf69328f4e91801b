"""Executable checks of the standing assumptions, package laws and collapse bounds.

Every bound is a pointwise inequality ``lhs <= rhs`` between propositions,
checked at tolerance ``TOL`` (exactly on crisp frames). A bound whose
hypotheses fail on a frame is reported as skipped, never as failed.

Global structural uncertainty and inconsistency are suprema over the
*registered family*: the risk set closed under the Moorean and
anti-Moorean refinements, their boxes, and the frame's own propositions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import modal
from .algebra import GODEL, PACKAGES, AlgebraPackage, is_crisp, structural_uncertainty
from .frame import DenseRelation, Frame, classify_frame, fuzzy_transitive

TOL = 1e-9
LATTICE = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
MIN_WORLDS, MAX_WORLDS = 2, 6

PRINCIPLES = ("RMP", "RRP", "factivity", "introspection", "monotonicity", "meet", "bottom", "separation")
BOUND_IDS = ("thm_factive_pressure", "cor_moore", "cor_collapse", "cor_conflict",
             "thm_belief_internal", "thm_belief_reach", "cor_belief_collapse")


@dataclass
class PrincipleReport:
    principle: str
    holds: bool
    witness: tuple[str, str, float] | None = None  # (proposition, world, gap)

    def __post_init__(self):
        if not self.holds and (self.witness is None or not self.witness[2] > TOL):
            raise ValueError("a failing principle needs a witness with a positive gap")


@dataclass
class BoundReport:
    bound_id: str
    lhs: np.ndarray | None
    rhs: np.ndarray | None
    satisfied: bool | None
    max_violation: float | None
    skipped: bool = False
    reason: str = ""

    @classmethod
    def skip(cls, bound_id: str, reason: str) -> "BoundReport":
        return cls(bound_id, None, None, None, None, True, reason)


def _worst(lhs, rhs, tol=TOL) -> tuple[float, int]:
    gap = np.asarray(lhs, dtype=float) - np.asarray(rhs, dtype=float)
    i = int(np.argmax(gap))
    return float(gap[i]), i


def _bound(bound_id: str, pairs: list[tuple[np.ndarray, np.ndarray]], exact: bool = False) -> BoundReport:
    """Fold several ``lhs <= rhs`` instances into one report (worst instance kept)."""
    tol = 0.0 if exact else TOL
    worst, keep = -np.inf, (None, None)
    for lhs, rhs in pairs:
        v, _ = _worst(lhs, rhs)
        if v > worst:
            worst, keep = v, (lhs, rhs)
    if not pairs:
        return BoundReport.skip(bound_id, "empty risk set")
    viol = max(worst, 0.0)
    return BoundReport(bound_id, keep[0], keep[1], bool(viol <= tol), viol)


# -- registered family ------------------------------------------------------


def _named(f: Frame, risk) -> dict[str, np.ndarray]:
    if isinstance(risk, dict):
        return {k: np.asarray(v, dtype=float) for k, v in risk.items()}
    out = {}
    for i, p in enumerate(risk):
        if isinstance(p, str):
            out[p] = f.prop(p)
        else:
            out[f"p{i}"] = np.asarray(p, dtype=float)
    return out


def rmp_closure(f: Frame, std: str, risk, pkg: AlgebraPackage = GODEL) -> dict[str, np.ndarray]:
    """The risk set plus the Moorean and anti-Moorean refinement of each member."""
    risk = _named(f, risk)
    out = dict(risk)
    for name, p in risk.items():
        out[f"moore({name})"] = modal.refine(f, std, p, "moore", pkg)
        out[f"anti({name})"] = modal.refine(f, std, p, "anti", pkg)
    return out


def registered_family(f: Frame, std: str, risk, pkg: AlgebraPackage = GODEL) -> dict[str, np.ndarray]:
    fam = dict(f.propositions)
    closure = rmp_closure(f, std, risk, pkg)
    fam.update(closure)
    for name, p in closure.items():
        fam[f"[{std}]{name}"] = modal.box(f, std, p, pkg)
    return fam


def family_uncertainty(family: dict[str, np.ndarray], n: int) -> np.ndarray:
    if not family:
        return np.zeros(n)
    return np.max([structural_uncertainty(p) for p in family.values()], axis=0)


def family_inconsistency(f: Frame, std: str, family: dict[str, np.ndarray], pkg: AlgebraPackage = GODEL) -> np.ndarray:
    if not family:
        return np.zeros(f.size)
    return np.max([modal.inconsistency(f, std, p, pkg) for p in family.values()], axis=0)


# -- principles --------------------------------------------------------------


def _first_violation(f: Frame, named: dict[str, np.ndarray], lhs_fn, rhs_fn, tol=TOL):
    for name, p in named.items():
        gap, i = _worst(lhs_fn(p), rhs_fn(p))
        if gap > tol:
            return (name, f.worlds[i], gap)
    return None


def check_rmp(f: Frame, std: str, risk, pkg: AlgebraPackage = GODEL) -> PrincipleReport:
    """Whether the risk set already contains the refinements of its members."""
    risk = _named(f, risk)
    members = list(risk.values())
    for name, p in risk.items():
        for kind in ("moore", "anti"):
            r = modal.refine(f, std, p, kind, pkg)
            if not any(np.allclose(r, q, atol=TOL, rtol=0) for q in members):
                # gap: distance to the nearest member
                gap = min(float(np.max(np.abs(r - q))) for q in members)
                return PrincipleReport("RMP", False, (f"{kind}({name})", f.worlds[0], gap))
    return PrincipleReport("RMP", True)


def check_rrp(f: Frame, std: str, risk_props, pkg: AlgebraPackage = GODEL) -> PrincipleReport:
    """``p <= <M>[M]p`` for every member of the risk set."""
    named = _named(f, risk_props)
    w = _first_violation(f, named, lambda p: p,
                         lambda p: modal.diamond(f, std, modal.box(f, std, p, pkg), pkg))
    return PrincipleReport("RRP", w is None, w)


def _probes(f: Frame, std: str) -> dict[str, np.ndarray]:
    """Propositions that are 1 everywhere but one world, where they take a low value."""
    diag = np.diag(np.asarray(f.relation(std).matrix(), dtype=float))
    out = {}
    for i, w in enumerate(f.worlds):
        for x in sorted({0.0, 0.25, 0.5, 0.75, float(diag[i])} - {1.0}):
            p = np.ones(f.size)
            p[i] = x
            out[f"probe({w}={x:g})"] = p
    return out


def check_package_laws(f: Frame, std: str, pkg: AlgebraPackage = GODEL, props=None,
                       samples: int = 64, seed: int = 0) -> list[PrincipleReport]:
    """Factivity, introspection, monotonicity and the standing assumptions on ``f``.

    Checks run on the frame's propositions (or ``props``), their negations,
    single-world probes, and ``samples`` random lattice propositions.
    """
    rng = np.random.default_rng(seed)
    named = _named(f, props) if props is not None else dict(f.propositions)
    named.update({f"!{k}": 1.0 - v for k, v in list(named.items())})
    named.update(_probes(f, std))
    for k in range(samples):
        named[f"sample{k}"] = rng.choice(LATTICE, f.size)

    box = lambda p: modal.box(f, std, p, pkg)  # noqa: E731
    dia = lambda p: modal.diamond(f, std, p, pkg)  # noqa: E731
    out = []

    w = _first_violation(f, named, box, lambda p: p)
    out.append(PrincipleReport("factivity", w is None, w))

    w = _first_violation(f, named, box, lambda p: box(box(p)))
    out.append(PrincipleReport("introspection", w is None, w))

    names = list(named)
    mono = None
    for k in range(samples):
        p = named[names[rng.integers(len(names))]]
        q = np.maximum(p, rng.choice(LATTICE, f.size))
        for op, label in ((box, "box"), (dia, "diamond")):
            gap, i = _worst(op(p), op(q))
            if gap > TOL and mono is None:
                mono = (f"{label} sample{k}", f.worlds[i], gap)
    out.append(PrincipleReport("monotonicity", mono is None, mono))

    meet_w = None
    for k in range(samples):
        p, q, r = (named[names[rng.integers(len(names))]] for _ in range(3))
        m = np.minimum(p, q)
        below = np.minimum(r, m)  # an r below both p and q
        for lhs, rhs in ((m, p), (m, q), (below, m)):
            gap, i = _worst(lhs, rhs)
            if gap > TOL and meet_w is None:
                meet_w = (f"meet sample{k}", f.worlds[i], gap)
    out.append(PrincipleReport("meet", meet_w is None, meet_w))

    gap, i = _worst(dia(np.zeros(f.size)), np.zeros(f.size))
    out.append(PrincipleReport("bottom", gap <= TOL, None if gap <= TOL else ("0", f.worlds[i], gap)))

    sep = None
    for a in names:
        for b in names:
            p, q = named[a], named[b]
            if np.max(np.minimum(p, 1.0 - q)) <= 0.0:
                gap, i = _worst(p, q)
                if gap > TOL and sep is None:
                    sep = (f"{a}, {b}", f.worlds[i], gap)
        if len(names) > 40:
            break
    out.append(PrincipleReport("separation", sep is None, sep))
    return out


def laws_by_name(reports: list[PrincipleReport]) -> dict[str, PrincipleReport]:
    return {r.principle: r for r in reports}


# -- collapse bounds ----------------------------------------------------------


def check_factive_bounds(f: Frame, std: str, risk_props, pkg: AlgebraPackage = GODEL,
                         factive: bool | None = None, rrp: bool | None = None) -> list[BoundReport]:
    """Factive pressure, its Moorean and conflict corollaries, and the collapse.

    Gates: factivity of the operator and RRP over the refinement closure of
    the risk set. The collapse additionally needs zero global uncertainty.
    ``factive`` and ``rrp`` accept gate results the caller already computed.
    """
    risk = _named(f, risk_props)
    ids = ("thm_factive_pressure", "cor_moore", "cor_conflict", "cor_collapse")
    if factive is None:
        factive = laws_by_name(check_package_laws(f, std, pkg, risk, samples=0))["factivity"].holds
    if not factive:
        return [BoundReport.skip(b, "operator not factive") for b in ids]
    if rrp is None:
        rrp = check_rrp(f, std, rmp_closure(f, std, risk, pkg), pkg).holds
    if not rrp:
        return [BoundReport.skip(b, "RRP fails on the refinement closure") for b in ids]

    box = lambda p: modal.box(f, std, p, pkg)  # noqa: E731
    dia = lambda p: modal.diamond(f, std, p, pkg)  # noqa: E731
    family = registered_family(f, std, risk, pkg)
    u = family_uncertainty(family, f.size)
    i_glob = family_inconsistency(f, std, family, pkg)
    pressure, moore, conflict, collapse = [], [], [], []
    for p in risk.values():
        mp = box(p)
        for kind in ("moore", "anti"):
            r = modal.refine(f, std, p, kind, pkg)
            pressure.append((r, dia(np.minimum(mp, r))))
        d = np.minimum(p, 1.0 - mp)
        mid = dia(np.minimum(mp, 1.0 - mp))
        moore += [(d, mid), (mid, dia(u))]
        a = np.minimum(p, box(1.0 - p))
        mid = dia(modal.inconsistency(f, std, p, pkg))
        conflict += [(a, mid), (mid, dia(i_glob))]
        collapse += [(p, mp), (mp, p)]
    reports = [_bound("thm_factive_pressure", pressure), _bound("cor_moore", moore),
               _bound("cor_conflict", conflict)]
    if np.max(u) > 0:
        reports.append(BoundReport.skip("cor_collapse", "global structural uncertainty is nonzero"))
    else:
        reports.append(_bound("cor_collapse", collapse, exact=True))
    return reports


def check_belief_bounds(f: Frame, std: str, risk_props, pkg: AlgebraPackage = GODEL,
                        rrp: bool | None = None) -> list[BoundReport]:
    """Internal non-factive pressure, the reach bound and the coherent-register collapse.

    Gate: fuzzy transitivity of the relation (positive introspection). The
    reach bound also needs RRP on the refinement closure; the collapse also
    needs zero global inconsistency.
    """
    risk = _named(f, risk_props)
    ids = ("thm_belief_internal", "thm_belief_reach", "cor_belief_collapse")
    m = np.asarray(f.relation(std).matrix(), dtype=float)
    if not fuzzy_transitive(m, pkg, TOL):
        return [BoundReport.skip(b, "relation not fuzzy-transitive") for b in ids]
    box = lambda p: modal.box(f, std, p, pkg)  # noqa: E731
    dia = lambda p: modal.diamond(f, std, p, pkg)  # noqa: E731
    family = registered_family(f, std, risk, pkg)
    i_glob = family_inconsistency(f, std, family, pkg)

    closure = rmp_closure(f, std, risk, pkg)
    internal = []
    for name, p in family.items():
        mp = box(p)
        i_mp = modal.inconsistency(f, std, mp, pkg)
        internal.append((box(np.minimum(p, 1.0 - mp)), i_mp))
        if name in closure:
            # the global sup only covers I(Mp) when Mp itself is registered
            internal.append((i_mp, i_glob))
    reports = [_bound("thm_belief_internal", internal)]

    if rrp is None:
        rrp = check_rrp(f, std, closure, pkg).holds
    if not rrp:
        reports += [BoundReport.skip(b, "RRP fails on the refinement closure") for b in ids[1:]]
        return reports
    reach, collapse = [], []
    for p in risk.values():
        mp = box(p)
        mid = dia(modal.inconsistency(f, std, mp, pkg))
        reach += [(np.minimum(p, 1.0 - mp), mid), (mid, dia(i_glob))]
        collapse.append((p, mp))
    reports.append(_bound("thm_belief_reach", reach))
    if np.max(i_glob) > 0:
        reports.append(BoundReport.skip("cor_belief_collapse", "global inconsistency is nonzero"))
    else:
        reports.append(_bound("cor_belief_collapse", collapse, exact=is_crisp(m)))
    return reports


# -- aggregated-operator counterexamples ---------------------------------------


@dataclass
class Counterexample:
    bound_id: str
    values: dict
    reproduced: bool


def aggregated_counterexamples(pkg: AlgebraPackage = GODEL) -> list[Counterexample]:
    """Fixed frames on which averaged operators lose the modal structure."""
    out = []

    # factivity: W = {w, u}, gamma = 1, uniform mu_w, p = (0, 1)
    f = Frame(("w", "u"), {"M": DenseRelation(np.ones((2, 2)))}, {"p": np.array([0.0, 1.0])},
              measures=np.full((2, 2), 0.5))
    agg = float(modal.box_agg(f, "M", "p", pkg)[0])
    out.append(Counterexample("agg_factivity", {"box_agg": agg, "p": 0.0, "box": float(modal.box(f, "M", "p", pkg)[0])},
                              agg > 0.0))

    # non-exclusion: the only p-world v* carries no mass under mu_w
    f = Frame(("w", "v*"), {"M": DenseRelation(np.ones((2, 2)))}, {"p": np.array([0.0, 1.0])},
              measures=np.array([[1.0, 0.0], [0.0, 1.0]]))
    dia = float(modal.diamond(f, "M", "p", pkg)[0])
    dagg = float(modal.diamond_agg(f, "M", "p", pkg)[0])
    out.append(Counterexample("agg_non_exclusion", {"diamond": dia, "diamond_agg": dagg}, dia > 0 and dagg == 0))

    # lottery: three tickets, "ticket i loses" has probability 2/3 each
    mu = np.full(3, 1 / 3)
    events = [np.array([float(k != i) for k in range(3)]) for i in range(3)]
    threshold = 2 / 3
    singles = [modal.fuzzy_event_probability(e, mu) for e in events]
    pairs = [modal.fuzzy_event_probability(np.minimum(events[i], events[j]), mu)
             for i in range(3) for j in range(i + 1, 3)]
    ok = all(s >= threshold - TOL for s in singles) and all(q < threshold - TOL for q in pairs)
    out.append(Counterexample("agg_conjunction_closure",
                              {"threshold": threshold, "singles": singles, "pairs": pairs}, ok))
    return out


# -- random frames -------------------------------------------------------------


def transitive_closure(m: np.ndarray, pkg: AlgebraPackage) -> np.ndarray:
    """Smallest fuzzy-transitive relation above ``m`` (sup-t-norm closure)."""
    m = np.array(m, dtype=float)
    while True:
        comp = np.max(pkg.tnorm(m[:, :, None], m[None, :, :]), axis=1)
        nxt = np.maximum(m, comp)
        if np.array_equal(nxt, m):
            return m
        m = nxt


def random_relation(rng: np.random.Generator, n: int, pkg: AlgebraPackage = GODEL, *, crisp: bool = False,
                    reflexive: bool = False, transitive: bool = False, serial: bool = False,
                    density: float = 0.5) -> np.ndarray:
    if crisp:
        m = (rng.random((n, n)) < density).astype(float)
    else:
        m = rng.choice(LATTICE, (n, n))
    if serial:
        for i in np.flatnonzero(~(m == 1.0).any(axis=1)):
            m[i, rng.integers(n)] = 1.0
    if reflexive:
        np.fill_diagonal(m, 1.0)
    if transitive:
        m = transitive_closure(m, pkg)
    return m


def random_props(rng: np.random.Generator, n: int, k: int, crisp: bool = False) -> list[np.ndarray]:
    vals = np.array([0.0, 1.0]) if crisp else LATTICE
    return [rng.choice(vals, n) for _ in range(k)]


def _frame(m: np.ndarray) -> Frame:
    n = m.shape[0]
    return Frame(tuple(f"w{i}" for i in range(n)), {"M": DenseRelation(m)})


def _candidates(f: Frame, pkg, rng, crisp: bool, k: int = 4) -> dict[str, np.ndarray]:
    """Random propositions plus their boxes (boxes are often reach-stable)."""
    out = {}
    for i, q in enumerate(random_props(rng, f.size, k, crisp)):
        out[f"q{i}"] = q
        out[f"[M]q{i}"] = modal.box(f, "M", q, pkg)
    return out


def _reach_stable(f: Frame, pkg, cands: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Candidates whose own refinement closure satisfies RRP."""
    return {k: p for k, p in cands.items()
            if check_rrp(f, "M", rmp_closure(f, "M", {k: p}, pkg), pkg).holds}


@dataclass
class SuiteEntry:
    bound_id: str
    package: str
    satisfied: bool
    max_violation: float
    frames: int
    nontrivial: int = 0
    seed: int = 0
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"bound_id": self.bound_id, "package": self.package, "satisfied": self.satisfied,
             "max_violation": self.max_violation, "seed": self.seed, "frames": self.frames,
             "nontrivial": self.nontrivial}
        if self.values:
            d["values"] = self.values
        return d


class _Tally:
    def __init__(self):
        self.frames = {}
        self.worst = {}
        self.nontrivial = {}

    def add(self, bid: str, viol: float, nontrivial: bool = False):
        self.frames[bid] = self.frames.get(bid, 0) + 1
        self.worst[bid] = max(self.worst.get(bid, 0.0), viol)
        self.nontrivial[bid] = self.nontrivial.get(bid, 0) + int(nontrivial)

    def add_report(self, r: BoundReport):
        if r.skipped:
            return False
        self.add(r.bound_id, r.max_violation, bool(r.lhs is not None and np.max(r.lhs) > 0))
        return True

    def entries(self, pkg_name: str, seed: int, order, exact=()) -> list[SuiteEntry]:
        out = []
        for bid in order:
            v = self.worst.get(bid, 0.0)
            tol = 0.0 if bid in exact else TOL
            out.append(SuiteEntry(bid, pkg_name, bool(v <= tol), v, self.frames.get(bid, 0),
                                  self.nontrivial.get(bid, 0), seed))
        return out


def _gap(lhs, rhs) -> float:
    return max(_worst(lhs, rhs)[0], 0.0)


LAW_IDS = ("law_factivity", "law_introspection", "law_monotonicity", "law_crisp_reduction",
           "law_crisp_duality", "law_factive_inconsistency", "law_bottom", "law_separation", "law_meet")


def laws_suite(pkg: AlgebraPackage, seed: int = 0, frames: int = 1000) -> list[SuiteEntry]:
    """Package laws on random frames meeting each law's frame condition."""
    rng = np.random.default_rng(seed)
    t = _Tally()
    for _ in range(frames):
        n = int(rng.integers(MIN_WORLDS, MAX_WORLDS + 1))
        p, q = random_props(rng, n, 2)
        hi = np.maximum(p, q)

        f = _frame(random_relation(rng, n, pkg, reflexive=True))
        t.add("law_factivity", _gap(modal.box(f, "M", p, pkg), p), True)
        t.add("law_factive_inconsistency", _gap(modal.inconsistency(f, "M", p, pkg), structural_uncertainty(p)),
              bool(np.max(modal.inconsistency(f, "M", p, pkg)) > 0))

        f = _frame(random_relation(rng, n, pkg, transitive=True))
        mp = modal.box(f, "M", p, pkg)
        t.add("law_introspection", _gap(mp, modal.box(f, "M", mp, pkg)), True)

        f = _frame(random_relation(rng, n, pkg))
        t.add("law_monotonicity", max(_gap(modal.box(f, "M", p, pkg), modal.box(f, "M", hi, pkg)),
                                      _gap(modal.diamond(f, "M", p, pkg), modal.diamond(f, "M", hi, pkg))), True)
        t.add("law_bottom", _gap(modal.diamond(f, "M", np.zeros(n), pkg), np.zeros(n)), True)
        m = np.minimum(p, q)
        t.add("law_meet", max(_gap(m, p), _gap(m, q), _gap(np.minimum(hi, m), m)), True)

        cm = random_relation(rng, n, pkg, crisp=True)
        f = _frame(cm)
        core = cm == 1.0
        conj = np.array([p[row].min() if row.any() else 1.0 for row in core])
        disj = np.array([p[row].max() if row.any() else 0.0 for row in core])
        t.add("law_crisp_reduction", float(max(np.max(np.abs(modal.box(f, "M", p, pkg) - conj)),
                                               np.max(np.abs(modal.diamond(f, "M", p, pkg) - disj)))), True)
        cp = rng.choice([0.0, 1.0], n)
        st = modal.statuses(f, "M", cp, pkg)
        t.add("law_crisp_duality", float(np.max(np.abs(st.dual - st.diamond))), True)

        # separation: force meet(p, !q) = 0 by raising q to 1 wherever p > 0
        qs = np.where(p > 0, 1.0, q)
        t.add("law_separation", _gap(p, qs), bool(np.max(p) > 0))
    exact = ("law_crisp_reduction", "law_crisp_duality")
    return t.entries(pkg.tnorm_id, seed, LAW_IDS, exact)


FACTIVE_IDS = ("thm_factive_pressure", "cor_moore", "cor_conflict", "cor_collapse")
BELIEF_IDS = ("thm_belief_internal", "thm_belief_reach", "cor_belief_collapse")


def factive_suite(pkg: AlgebraPackage, seed: int = 0, frames: int = 1000, max_attempts: int = 50) -> list[SuiteEntry]:
    """Factive bounds on random reflexive frames whose risk set passes the RRP gate.

    Sampling repeats until every bound has been checked on ``frames``
    hypothesis-satisfying frames (or the attempt budget runs out).
    """
    rng = np.random.default_rng(seed)
    t = _Tally()
    attempts = 0
    while min(t.frames.get(b, 0) for b in FACTIVE_IDS) < frames and attempts < frames * max_attempts:
        attempts += 1
        need_collapse = t.frames.get("cor_collapse", 0) < frames
        need_fuzzy = min(t.frames.get(b, 0) for b in FACTIVE_IDS[:3]) < frames
        crisp = need_collapse and (not need_fuzzy or attempts % 2 == 0)
        n = int(rng.integers(MIN_WORLDS, MAX_WORLDS + 1))
        m = random_relation(rng, n, pkg, crisp=crisp, reflexive=True, transitive=bool(rng.random() < 0.5))
        f = _frame(m)
        risk = _reach_stable(f, pkg, _candidates(f, pkg, rng, crisp))
        if not risk:
            continue
        for r in check_factive_bounds(f, "M", risk, pkg, factive=True, rrp=True):
            if r.bound_id == "cor_collapse" and not need_collapse:
                continue
            if r.bound_id != "cor_collapse" and not need_fuzzy:
                continue
            t.add_report(r)
    return t.entries(pkg.tnorm_id, seed, FACTIVE_IDS, exact=("cor_collapse",))


def belief_suite(pkg: AlgebraPackage, seed: int = 0, frames: int = 1000, max_attempts: int = 50) -> list[SuiteEntry]:
    """Non-factive bounds on random fuzzy-transitive frames."""
    rng = np.random.default_rng(seed)
    t = _Tally()
    attempts = 0
    while min(t.frames.get(b, 0) for b in BELIEF_IDS) < frames and attempts < frames * max_attempts:
        attempts += 1
        need_collapse = t.frames.get("cor_belief_collapse", 0) < frames
        crisp = need_collapse and attempts % 2 == 0
        n = int(rng.integers(MIN_WORLDS, MAX_WORLDS + 1))
        m = random_relation(rng, n, pkg, crisp=crisp, serial=crisp, transitive=True)
        f = _frame(m)
        cands = _candidates(f, pkg, rng, crisp)
        risk = _reach_stable(f, pkg, cands)
        reports = check_belief_bounds(f, "M", risk or cands, pkg, rrp=bool(risk) or None)
        for r in reports:
            if r.bound_id == "thm_belief_internal" and t.frames.get(r.bound_id, 0) >= frames:
                continue
            if r.bound_id != "thm_belief_internal" and not risk:
                continue
            t.add_report(r)
    return t.entries(pkg.tnorm_id, seed, BELIEF_IDS, exact=("cor_belief_collapse",))


def aggregated_suite(pkg: AlgebraPackage = GODEL, seed: int = 0) -> list[SuiteEntry]:
    # a reproduced counterexample is the expected (satisfied) outcome
    return [SuiteEntry(c.bound_id, pkg.tnorm_id, c.reproduced, 0.0 if c.reproduced else 1.0, 1, 1, seed, c.values)
            for c in aggregated_counterexamples(pkg)]


SUITES = ("laws", "factive", "belief", "aggregated", "all")


def run_suite(name: str, seed: int = 0, frames: int = 1000, packages=None) -> list[SuiteEntry]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    pkgs = [PACKAGES[k] for k in (packages or sorted(PACKAGES))]
    out = []
    for pkg in pkgs:
        if name in ("laws", "all"):
            out += laws_suite(pkg, seed, frames)
        if name in ("factive", "all"):
            out += factive_suite(pkg, seed, frames)
        if name in ("belief", "all"):
            out += belief_suite(pkg, seed, frames)
    if name in ("aggregated", "all"):
        out += aggregated_suite(GODEL, seed)
    return out


def report_json(entries: list[SuiteEntry]) -> str:
    return json.dumps([e.to_dict() for e in entries], indent=2, sort_keys=True) + "\n"


def all_satisfied(entries: list[SuiteEntry]) -> bool:
    return all(e.satisfied for e in entries)
