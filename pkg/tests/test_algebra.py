import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalrisk.algebra import (
    GODEL, LUKASIEWICZ, PACKAGES, PRODUCT, AlgebraPackage, Degree, get_package, global_uncertainty,
    implies, is_crisp, meet, negate, structural_uncertainty, tnorm,
)

import oracles

unit = st.floats(0.0, 1.0, allow_nan=False)
pkgs = st.sampled_from(sorted(PACKAGES))


def test_degree_rejects_out_of_range():
    assert Degree(0.3) == 0.3
    for bad in (-0.01, 1.2, float("nan")):
        with pytest.raises(ValueError):
            Degree(bad)


def test_unknown_package_rejected():
    with pytest.raises(ValueError):
        AlgebraPackage("drastic")
    with pytest.raises(ValueError):
        AlgebraPackage("godel_min", implication_id="kleene")
    with pytest.raises(ValueError):
        get_package("nope")
    assert get_package("luk") is LUKASIEWICZ
    assert get_package("godel") is GODEL


def test_tnorm_examples():
    assert tnorm(0.6, 0.9) == 0.6
    assert tnorm(1.0, 0.3) == 0.3
    assert tnorm(0.0, 0.7) == 0.0


def test_implies_examples():
    assert implies(0.6, 0.9) == 1.0
    assert implies(0.6, 0.1) == 0.1
    assert implies(1.0, 0.4) == 0.4


def test_negate_examples():
    assert negate(0.1) == pytest.approx(0.9)
    assert negate(0) == 1.0
    assert negate(negate(0.37)) == pytest.approx(0.37, abs=1e-15)


@pytest.mark.parametrize("name", sorted(PACKAGES))
def test_implication_matches_oracle(name):
    pkg = PACKAGES[name]
    vals = np.linspace(0, 1, 21)
    for a in vals:
        for b in vals:
            assert pkg.implies(a, b) == pytest.approx(oracles.IMPL[name](a, b), abs=1e-12)
            assert pkg.tnorm(a, b) == pytest.approx(oracles.TNORM[name](a, b), abs=1e-12)


@pytest.mark.parametrize("name", sorted(PACKAGES))
def test_boundary_laws_on_grid(name):
    pkg = PACKAGES[name]
    a = np.round(np.arange(0, 101) / 100, 2)
    assert np.allclose(pkg.implies(1.0, a), a, atol=1e-12)
    assert np.all(pkg.implies(0.0, a) == 1.0)
    assert np.allclose(pkg.tnorm(1.0, a), a, atol=1e-12)
    assert np.all(pkg.tnorm(0.0, a) == 0.0)


@pytest.mark.parametrize("name", sorted(PACKAGES))
def test_residuation_random_triples(name):
    pkg = PACKAGES[name]
    rng = np.random.default_rng(7)
    # quarter-lattice values hit the equality cases, uniform ones the generic case
    a, b, c = (np.concatenate([rng.random(5000), rng.choice(np.linspace(0, 1, 5), 5000)]) for _ in range(3))
    left = pkg.tnorm(a, c) <= b + 1e-12
    right = c <= pkg.implies(a, b) + 1e-12
    assert np.array_equal(left, right)


@given(pkgs, unit, unit, unit)
def test_tnorm_commutative_associative_monotone(name, a, b, c):
    pkg = PACKAGES[name]
    assert pkg.tnorm(a, b) == pytest.approx(pkg.tnorm(b, a), abs=1e-12)
    assert pkg.tnorm(pkg.tnorm(a, b), c) == pytest.approx(pkg.tnorm(a, pkg.tnorm(b, c)), abs=1e-12)
    hi = max(b, c)
    assert pkg.tnorm(a, b) <= pkg.tnorm(a, hi) + 1e-12


def test_meet_examples():
    assert meet([1, 0], [1, 1]).tolist() == [1, 0]
    assert meet([0.9, 0.2], [0.5, 0.5]).tolist() == [0.5, 0.2]
    with pytest.raises(ValueError):
        meet([1, 0], [1, 0, 1])


@given(st.lists(st.tuples(unit, unit, unit), min_size=1, max_size=6))
def test_meet_laws(rows):
    p, q, r = (np.array(c) for c in zip(*rows))
    assert np.array_equal(meet(p, q), meet(q, p))
    assert np.array_equal(meet(meet(p, q), r), meet(p, meet(q, r)))
    assert np.array_equal(meet(p, p), p)


def test_structural_uncertainty_examples():
    assert structural_uncertainty([1, 0]).tolist() == [0, 0]
    assert structural_uncertainty([0.5]).tolist() == [0.5]
    assert np.allclose(structural_uncertainty([0.9, 0.2]), [0.1, 0.2])


def test_uncertainty_zero_iff_crisp_exhaustive():
    lattice = [0.0, 0.25, 0.5, 0.75, 1.0]
    for n in range(1, 7):
        for combo in itertools.product(lattice, repeat=n):
            p = np.array(combo)
            assert (np.max(structural_uncertainty(p)) == 0.0) == is_crisp(p)


def test_global_uncertainty():
    assert global_uncertainty([[1, 0], [0, 1]], 0) == 0.0
    assert global_uncertainty([[0.5, 1.0]], 0) == 0.5
    assert global_uncertainty([[0.9, 0.0], [0.3, 0.0]], 0) == pytest.approx(0.3)
    assert global_uncertainty([], 0) == 0.0


def test_product_implication_at_zero():
    assert PRODUCT.implies(0.0, 0.0) == 1.0
    assert PRODUCT.implies(0.5, 0.0) == 0.0
