"""Meta-level governance: threshold rule, audit register, typed reachability,
commitment revision and cross-unit diagnostics.

The audit degree of a diagnostic is the degree recorded for it (0 when it
was never recorded). Records are never removed, and re-recording can only
raise the stored degree, which gives the monotone and persistent behaviour
required of the audit operator.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import modal
from .algebra import GODEL, AlgebraPackage, Degree
from .frame import DenseRelation, Frame, FrameError

ENDORSE = "endorse"
MONITOR = "monitor_or_escalate"
REVIEW = "record_hesitation_require_review"
AUDIT_ITEM = "open_meta_audit_item"
ACTION_ORDER = (ENDORSE, MONITOR, REVIEW, AUDIT_ITEM)

STATUSES = ("open", "reviewed", "escalated", "closed_with_justification")


@dataclass(frozen=True)
class GovernanceThresholds:
    alpha: float = 0.8  # endorse
    beta: float = 0.2  # monitor
    eta: float = 0.5  # hesitation review
    delta: float = 0.5  # audit item
    iota: float = 0.5  # revision trigger

    def __post_init__(self):
        for name in ("alpha", "beta", "eta", "delta", "iota"):
            Degree(getattr(self, name))


def apply_rule(bundle, moore_degree: float, th: GovernanceThresholds, w: int | None = None) -> frozenset[str]:
    """Governance actions for one world.

    ``bundle`` is a :class:`~modalrisk.modal.StatusBundle` (indexed by ``w``)
    or a mapping with scalar ``box``, ``diamond`` and ``hesitation``.
    """
    if isinstance(bundle, modal.StatusBundle):
        vals = bundle.at(w if w is not None else 0)
    else:
        vals = bundle
    box, dia, hes = vals["box"], vals["diamond"], vals["hesitation"]
    actions = set()
    if box >= th.alpha:
        actions.add(ENDORSE)
    if dia >= th.beta and box < th.alpha:
        actions.add(MONITOR)
    if hes >= th.eta:
        actions.add(REVIEW)
    if moore_degree > 0 and moore_degree >= th.delta:  # degree-0 diagnostics never open items
        actions.add(AUDIT_ITEM)
    return frozenset(actions)


def format_actions(actions: Iterable[str]) -> str:
    ordered = [a for a in ACTION_ORDER if a in actions]
    return ", ".join(ordered) if ordered else "-"


@dataclass(frozen=True)
class DiagnosticRecord:
    kind: str
    proposition: str
    standard: str | None
    world: str
    degree: float

    @property
    def key(self) -> tuple:
        return (self.kind, self.proposition, self.standard, self.world)


@dataclass
class AuditItem:
    kind: str
    proposition: str
    standard: str | None
    world: str
    degree: float
    status: str = "open"
    history: list[dict] = field(default_factory=list)

    @property
    def key(self) -> tuple:
        return (self.kind, self.proposition, self.standard, self.world)


class LogicalClock:
    """Deterministic timestamps: 1, 2, 3, ..."""

    def __init__(self, start: int = 0):
        self.t = start

    def __call__(self) -> int:
        self.t += 1
        return self.t


class AuditRegister:
    """Append-only register of diagnostics, backed by an event log.

    Every state change is an event dict; :meth:`replay` rebuilds an equal
    register from the events alone.
    """

    def __init__(self, clock: Callable[[], object] | None = None):
        self._items: dict[tuple, AuditItem] = {}
        self.events: list[dict] = []
        self._clock = clock or LogicalClock()

    def __len__(self):
        return len(self._items)

    def __contains__(self, key):
        return tuple(key) in self._items

    def keys(self) -> list[tuple]:
        return list(self._items)

    def items(self) -> list[AuditItem]:
        return list(self._items.values())

    def get(self, key) -> AuditItem | None:
        return self._items.get(tuple(key))

    def degree(self, kind: str, proposition: str, standard: str | None, world: str) -> float:
        item = self._items.get((kind, proposition, standard, world))
        return item.degree if item is not None else 0.0

    def _emit(self, event: dict) -> None:
        event = {"seq": len(self.events) + 1, "ts": self._clock(), **event}
        self._apply(event)
        self.events.append(event)

    def _apply(self, ev: dict) -> None:
        key = (ev["kind"], ev["proposition"], ev["standard"], ev["world"])
        entry = {"seq": ev["seq"], "ts": ev["ts"], "event": ev["event"]}
        if ev["event"] == "record":
            item = AuditItem(ev["kind"], ev["proposition"], ev["standard"], ev["world"], ev["degree"])
            entry.update(status="open", degree=ev["degree"])
            item.history.append(entry)
            self._items[key] = item
        elif ev["event"] == "raise":
            item = self._items[key]
            item.degree = ev["degree"]
            entry.update(degree=ev["degree"])
            item.history.append(entry)
        elif ev["event"] == "status":
            item = self._items[key]
            item.status = ev["status"]
            entry.update(status=ev["status"], note=ev.get("note", ""))
            item.history.append(entry)
        else:
            raise ValueError(f"unknown event type {ev['event']!r}")

    def record(self, d: DiagnosticRecord) -> "AuditRegister":
        """Record ``d``; idempotent per key, and only ever raises the degree."""
        deg = float(Degree(d.degree))
        base = {"kind": d.kind, "proposition": d.proposition, "standard": d.standard, "world": d.world}
        item = self._items.get(d.key)
        if item is None:
            self._emit({"event": "record", **base, "degree": deg})
        elif deg > item.degree:
            self._emit({"event": "raise", **base, "degree": deg})
        return self

    def transition(self, key, status: str, note: str = "") -> "AuditRegister":
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        item = self._items.get(tuple(key))
        if item is None:
            raise KeyError(f"no audit item {key!r}")
        if status == "closed_with_justification" and not note:
            raise ValueError("closing an item requires a justification note")
        kind, prop, std, world = item.key
        self._emit({"event": "status", "kind": kind, "proposition": prop, "standard": std,
                    "world": world, "status": status, "note": note})
        return self

    def snapshot(self) -> list[dict]:
        return [asdict(self._items[k]) for k in self._items]

    # event-log persistence: newline-delimited JSON, one event per line

    def dump_events(self, start: int = 0) -> str:
        return "".join(json.dumps(e, sort_keys=True) + "\n" for e in self.events[start:])

    def save(self, path) -> None:
        Path(path).write_text(self.dump_events())

    def append_to(self, path, start: int) -> int:
        """Append events from index ``start`` onward to ``path``; returns how many."""
        new = self.events[start:]
        if new:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(self.dump_events(start))
        return len(new)

    @classmethod
    def replay(cls, events: Iterable[dict]) -> "AuditRegister":
        reg = cls()
        last_ts = 0
        for ev in events:
            if ev["seq"] != len(reg.events) + 1:
                raise ValueError(f"event log out of order at seq {ev['seq']}")
            reg._apply(ev)
            reg.events.append(dict(ev))
            if isinstance(ev["ts"], int):
                last_ts = max(last_ts, ev["ts"])
        reg._clock = LogicalClock(last_ts)
        return reg

    @classmethod
    def load(cls, path) -> "AuditRegister":
        p = Path(path)
        if not p.exists():
            return cls()
        lines = [ln for ln in p.read_text().splitlines() if ln.strip()]
        return cls.replay(json.loads(ln) for ln in lines)


def audit_record(reg: AuditRegister, d: DiagnosticRecord) -> AuditRegister:
    return reg.record(d)


def audit_proposition(f: Frame, reg: AuditRegister, kind: str, prop: str, std: str | None) -> np.ndarray:
    """``A d`` as a proposition: recorded degree of the diagnostic at each world."""
    return np.array([reg.degree(kind, prop, std, w) for w in f.worlds])


@dataclass(frozen=True)
class Obligation:
    """A reachability obligation: ``target`` should be reachable under ``operator``."""

    operator: str
    level: int
    target: tuple  # (kind, proposition, standard)


@dataclass
class ReachReport:
    reach0: dict[str, dict] = field(default_factory=dict)
    reach1: dict[str, dict] = field(default_factory=dict)
    obligations: list[Obligation] = field(default_factory=list)

    @property
    def reach0_holds(self) -> bool:
        return all(r["holds"] for r in self.reach0.values())

    @property
    def reach1_holds(self) -> bool:
        return all(r["holds"] for r in self.reach1.values())

    def object_level_obligations_on_diagnostics(self, object_standards: Iterable[str]) -> list[Obligation]:
        stds = set(object_standards)
        return [o for o in self.obligations if o.operator in stds and o.target[0] != "object"]


def _violation(lhs, rhs, worlds) -> dict:
    gap = np.asarray(lhs) - np.asarray(rhs)
    i = int(np.argmax(gap)) if gap.size else 0
    worst = float(gap[i]) if gap.size else 0.0
    return {"holds": bool(worst <= 1e-9), "max_gap": max(worst, 0.0), "world": worlds[i] if gap.size else None}


def typed_reach_check(f: Frame, std: str, audit_std: str, risk0: dict[str, np.ndarray] | Iterable[str],
                      pkg: AlgebraPackage = GODEL, register: AuditRegister | None = None) -> ReachReport:
    """Object-level reach for ``Risk_0`` and audit-level reach for its Moorean diagnostics.

    Each object risk ``p`` yields an obligation ``std: p`` checked as
    ``p <= <std>[std]p``. Its diagnostic ``d = p & ![std]p`` is recorded in
    the audit register and yields an obligation ``audit_std: d`` checked as
    ``d <= <audit_std> A d``. No obligation ever places ``d`` under ``std``.
    The audit relation defaults to the identity when ``audit_std`` is absent.
    """
    if not isinstance(risk0, dict):
        risk0 = {name: f.prop(name) for name in risk0}
    if audit_std not in f.relations:
        f = f.with_relation(audit_std, DenseRelation(np.eye(f.size)))
    reg = register if register is not None else AuditRegister()
    report = ReachReport()
    for name, p in risk0.items():
        p = np.asarray(p, dtype=float)
        reach = modal.diamond(f, std, modal.box(f, std, p, pkg), pkg)
        report.reach0[name] = _violation(p, reach, f.worlds)
        report.obligations.append(Obligation(std, 0, ("object", name, None)))

        d = modal.refine(f, std, p, "moore", pkg)
        for w, deg in zip(f.worlds, d):
            if deg > 0:
                reg.record(DiagnosticRecord("moore", name, std, w, float(deg)))
        ad = audit_proposition(f, reg, "moore", name, std)
        reach1 = modal.diamond(f, audit_std, ad, pkg)
        report.reach1[f"moore({name},{std})"] = _violation(d, reach1, f.worlds)
        report.obligations.append(Obligation(audit_std, 1, ("moore", name, std)))
    return report


# -- commitment timeline --------------------------------------------------


@dataclass(frozen=True)
class Epoch:
    t: int
    degree: float  # B_t p
    neg_degree: float  # B_t not p
    relation_version: int
    change: str  # "initial", "*" (revision) or "<>" (update)
    note: str = ""
    review: bool = False
    actions: tuple[str, ...] = ()


@dataclass(frozen=True)
class Revision:
    """New evidence ``e`` conflicting with the register."""

    evidence: str


@dataclass(frozen=True)
class Update:
    """Environment change ``c``; optionally carries the new frame."""

    change: str
    frame: Frame | None = None


class CommitmentTimeline:
    def __init__(self):
        self.epochs: dict[str, list[Epoch]] = {}

    def start(self, prop: str, degree: float, neg_degree: float = 0.0, t: int = 0, note: str = "") -> Epoch:
        if prop in self.epochs:
            raise ValueError(f"timeline for {prop!r} already started")
        ep = Epoch(t, float(Degree(degree)), float(Degree(neg_degree)), 0, "initial", note)
        self.epochs[prop] = [ep]
        return ep

    def latest(self, prop: str) -> Epoch:
        return self.epochs[prop][-1]

    def append(self, prop: str, ep: Epoch) -> None:
        last = self.latest(prop)
        if ep.t <= last.t:
            raise ValueError(f"epoch {ep.t} does not follow {last.t}")
        self.epochs[prop].append(ep)


def commitment_statuses(f: Frame, std: str, p, w: str | int = 0, pkg: AlgebraPackage = GODEL) -> dict[str, float]:
    i = f.index(w) if isinstance(w, str) else int(w)
    b = modal.statuses(f, std, p, pkg)
    p_arr = modal._prop(f, p)
    out = b.at(i)
    out["neg_box"] = 1.0 - out["dual"]
    out["moore"] = float(min(p_arr[i], 1.0 - out["box"]))
    return out


def revise_commitments(tl: CommitmentTimeline, prop: str, statuses: dict[str, float],
                       th: GovernanceThresholds, event: Revision | Update, t: int | None = None,
                       std: str = "B", p=None, w: str | int = 0, pkg: AlgebraPackage = GODEL) -> Epoch:
    """Append the next epoch for ``prop``.

    Rule order: an inconsistency at or above ``iota`` withdraws both
    ``B p`` and ``B not p`` first; hesitation at or above ``eta`` flags a
    review; live possibility at or above ``beta`` with ``B p`` below
    ``alpha`` then adopts a precautionary commitment at the possibility
    degree. With no trigger the degrees carry over unchanged.

    An :class:`Update` carrying a frame recomputes ``statuses`` on that
    frame (``std``, ``p`` and ``w`` select what to evaluate).
    """
    last = tl.latest(prop)
    t = last.t + 1 if t is None else t
    if t <= last.t:
        raise ValueError(f"epoch {t} does not follow {last.t}")
    version = last.relation_version
    if isinstance(event, Update):
        change, note = "<>", event.change
        if event.frame is not None:
            if p is None:
                p = prop
            statuses = commitment_statuses(event.frame, std, p, w, pkg)
            version += 1
    elif isinstance(event, Revision):
        change, note = "*", event.evidence
    else:
        raise TypeError("event must be a Revision or an Update")

    if isinstance(event, Update) and event.frame is not None:
        deg, neg = statuses["box"], statuses["neg_box"]
    else:
        deg, neg = last.degree, last.neg_degree
    actions = []
    if statuses["inconsistency"] >= th.iota:
        deg, neg = 0.0, 0.0
        actions.append("withdraw")
    review = statuses["hesitation"] >= th.eta
    if review:
        actions.append("review")
    if statuses["diamond"] >= th.beta and statuses["box"] < th.alpha:
        deg = statuses["diamond"]
        actions.append("adopt_precautionary")
    ep = Epoch(t, float(deg), float(neg), version, change, note, review, tuple(actions))
    tl.append(prop, ep)
    return ep


# -- fragmented institutions ----------------------------------------------


CROSS_KINDS = ("disagreement", "mistaken_reliance", "mistaken_higher_order")


def cross_term(f: Frame, kind: str, i: str, j: str, p, pkg: AlgebraPackage = GODEL) -> np.ndarray:
    """One cross-operator diagnostic as a proposition.

    disagreement ``B_i p & !B_j p``; mistaken_reliance ``B_i K_j p & !K_j p``;
    mistaken_higher_order ``B_i B_j p & !B_j p``. Identical operators give 0.
    """
    p = modal._prop(f, p)
    if i == j:
        return np.zeros(f.size)
    jp = modal.box(f, j, p, pkg)
    if kind == "disagreement":
        return np.minimum(modal.box(f, i, p, pkg), 1.0 - jp)
    if kind in ("mistaken_reliance", "mistaken_higher_order"):
        return np.minimum(modal.box(f, i, jp, pkg), 1.0 - jp)
    raise ValueError(f"unknown cross diagnostic {kind!r}")


def _split_standards(stds: Iterable[str]) -> tuple[list[str], list[str]]:
    beliefs = [s for s in stds if s.startswith("B")]
    knowledges = [s for s in stds if s.startswith("K")]
    return beliefs, knowledges


def cross_diagnostics(f: Frame, p, pkg: AlgebraPackage = GODEL, prop_name: str | None = None,
                      beliefs: list[str] | None = None, knowledges: list[str] | None = None,
                      delta: float = 0.5, register: AuditRegister | None = None) -> list[DiagnosticRecord]:
    """Cross-unit diagnostics at every world, kept when ``>= delta`` and positive.

    Belief-like operators default to the standards named ``B...``, knowledge-like
    ones to ``K...``.
    """
    if beliefs is None and knowledges is None:
        beliefs, knowledges = _split_standards(f.relations)
    beliefs = list(beliefs or [])
    knowledges = list(knowledges or [])
    if len(beliefs) + len(knowledges) < 2:
        raise ValueError("cross diagnostics need at least two standards")
    name = prop_name or (p if isinstance(p, str) else "p")
    terms = []
    for i, j in itertools.permutations(beliefs, 2):
        terms.append(("disagreement", i, j))
        terms.append(("mistaken_higher_order", i, j))
    for i, j in itertools.product(beliefs, knowledges):
        terms.append(("mistaken_reliance", i, j))
    out = []
    for kind, i, j in terms:
        vals = cross_term(f, kind, i, j, p, pkg)
        for w, deg in zip(f.worlds, vals):
            if deg > 0 and deg >= delta:
                rec = DiagnosticRecord(kind, name, f"{i}|{j}", w, float(deg))
                out.append(rec)
                if register is not None:
                    register.record(rec)
    return out
