import json

import numpy as np
import pytest

from modalrisk import properties as P
from modalrisk.algebra import GODEL, LUKASIEWICZ, PACKAGES
from modalrisk.frame import DenseRelation, Frame, classify_frame

from conftest import two_world


def by_name(reports):
    return {r.principle: r for r in reports}


def test_contagion_factivity_witness(contagion):
    laws = by_name(P.check_package_laws(contagion, "B"))
    assert not laws["factivity"].holds
    assert laws["factivity"].witness == ("p", "w0", 1.0)
    assert laws["bottom"].holds and laws["monotonicity"].holds and laws["separation"].holds


def test_reflexive_fuzzy_frame_is_factive():
    f = two_world((1, 0.5), (0.25, 1), p=(0.3, 0.7))
    for pkg in PACKAGES.values():
        assert by_name(P.check_package_laws(f, "M", pkg))["factivity"].holds


def test_fuzzy_transitive_frame_introspective():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        m = P.random_relation(rng, n, GODEL, transitive=True)
        f = Frame(tuple(f"w{i}" for i in range(n)), {"M": DenseRelation(m)})
        assert by_name(P.check_package_laws(f, "M", GODEL, samples=32))["introspection"].holds


def test_failing_principle_requires_witness():
    with pytest.raises(ValueError):
        P.PrincipleReport("RRP", False, None)


def test_rrp_examples():
    f = two_world((1, 1), (1, 1), p=(1, 1))
    assert P.check_rrp(f, "M", ["p"]).holds
    f = two_world((1, 1), (1, 1), p=(1, 0))
    rep = P.check_rrp(f, "M", ["p"])
    assert not rep.holds and rep.witness == ("p", "w0", 1.0)
    # Mp = p on a reflexive frame
    f = two_world((1, 0), (0, 1), p=(0.4, 0.8))
    assert P.check_rrp(f, "M", ["p"]).holds


def test_rmp_closure_and_check():
    f = two_world((1, 1), (1, 1), p=(1, 0))
    closed = P.rmp_closure(f, "M", ["p"])
    assert set(closed) == {"p", "moore(p)", "anti(p)"}
    assert not P.check_rmp(f, "M", ["p"]).holds
    # closure of a box-fixed crisp p: refinements are 0 and must be present
    g = two_world((1, 1), (1, 1), p=(1, 1))
    assert P.check_rmp(g, "M", {"p": np.ones(2), "z": np.zeros(2)}).holds


def test_factive_collapse_on_equivalence_frame():
    f = Frame(("a", "b", "c", "d"), {"M": DenseRelation(np.kron(np.eye(2), np.ones((2, 2))))})
    risk = {"p": np.array([1.0, 1, 0, 0]), "q": np.zeros(4), "t": np.ones(4)}
    reports = {r.bound_id: r for r in P.check_factive_bounds(f, "M", risk)}
    assert reports["cor_collapse"].satisfied and not reports["cor_collapse"].skipped
    assert reports["cor_collapse"].max_violation == 0.0


def test_factive_bounds_skip_when_rrp_fails():
    f = two_world((1, 1), (1, 1), p=(1, 0))
    reports = P.check_factive_bounds(f, "M", ["p"])
    assert all(r.skipped and r.satisfied is None for r in reports)


def test_factive_bounds_skip_when_not_factive(contagion):
    assert all(r.skipped for r in P.check_factive_bounds(contagion, "B", ["p"]))


def test_cor_moore_with_uncertainty():
    # fuzzy reflexive frame, box-fixed fuzzy p: RRP holds and U > 0
    f = two_world((1, 0), (0, 1), p=(0.5, 0.25))
    reports = {r.bound_id: r for r in P.check_factive_bounds(f, "M", ["p"])}
    assert reports["cor_moore"].satisfied
    assert reports["cor_collapse"].skipped


def test_belief_internal_on_fuzzy_transitive():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(2, 6))
        m = P.random_relation(rng, n, GODEL, transitive=True)
        f = Frame(tuple(f"w{i}" for i in range(n)), {"M": DenseRelation(m)})
        r = P.check_belief_bounds(f, "M", {"p": rng.choice(P.LATTICE, n)})[0]
        assert r.bound_id == "thm_belief_internal" and r.satisfied


def test_belief_collapse_kd45():
    f = two_world((0, 1), (0, 1), p=(1, 1))
    reports = {r.bound_id: r for r in P.check_belief_bounds(f, "M", ["p"])}
    assert reports["cor_belief_collapse"].satisfied and not reports["cor_belief_collapse"].skipped
    assert np.all(reports["cor_belief_collapse"].lhs <= reports["cor_belief_collapse"].rhs)


def test_belief_reach_with_fuzzy_uncertainty():
    # identity frame, p = (0, 0.5): U = I = 0.5 so the reach bound is tight at w1
    f = Frame(("w0", "w1"), {"M": DenseRelation(np.eye(2))}, {"p": np.array([0.0, 0.5])})
    reports = {r.bound_id: r for r in P.check_belief_bounds(f, "M", ["p"])}
    reach = reports["thm_belief_reach"]
    assert reach.satisfied and np.allclose(reach.lhs, [0, 0.5]) and np.allclose(reach.rhs, [0, 0.5])
    assert reports["cor_belief_collapse"].skipped  # I = 0.5 at w1


def test_belief_skip_when_rrp_fails():
    # w0 sees nothing, so anti(p) = 1 there and its box is 1 at w0 only
    f = Frame(("w0", "w1"), {"M": DenseRelation([[0, 0], [0, 1]])}, {"p": np.array([1.0, 1.0])})
    reports = {r.bound_id: r for r in P.check_belief_bounds(f, "M", ["p"])}
    assert reports["thm_belief_internal"].satisfied
    assert reports["thm_belief_reach"].skipped


def test_belief_skip_without_transitivity():
    f = Frame(("a", "b", "c"), {"M": DenseRelation([[0, 1, 0], [0, 0, 1], [1, 0, 0]])}, {"p": np.ones(3)})
    assert all(r.skipped for r in P.check_belief_bounds(f, "M", ["p"]))


def test_aggregated_counterexamples():
    ce = {c.bound_id: c for c in P.aggregated_counterexamples()}
    assert ce["agg_factivity"].values["box_agg"] == 0.5 and ce["agg_factivity"].values["p"] == 0.0
    assert ce["agg_non_exclusion"].values == {"diamond": 1.0, "diamond_agg": 0.0}
    assert ce["agg_conjunction_closure"].values["pairs"] == [pytest.approx(1 / 3)] * 3
    assert all(c.reproduced for c in ce.values())


def test_transitive_closure_is_fuzzy_transitive():
    rng = np.random.default_rng(1)
    for pkg in PACKAGES.values():
        for _ in range(50):
            m = P.transitive_closure(rng.choice(P.LATTICE, (4, 4)), pkg)
            f = Frame(tuple("abcd"), {"M": DenseRelation(m)})
            assert classify_frame(f, "M", pkg).fuzzy_transitive


def test_suite_small_and_deterministic():
    a = P.report_json(P.run_suite("all", seed=3, frames=30))
    b = P.report_json(P.run_suite("all", seed=3, frames=30))
    assert a == b
    entries = json.loads(a)
    assert all({"bound_id", "satisfied", "max_violation", "seed"} <= set(e) for e in entries)
    assert all(e["satisfied"] for e in entries)
    with pytest.raises(ValueError):
        P.run_suite("everything")
