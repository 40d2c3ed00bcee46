import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helly_select.exceptions import PreconditionError, SpanDeficientError
from helly_select.lower_bound import (StripFamily, conjecture2_probe, covering_radius,
                                      diameter_gap_experiment, sphere_family, witness)


def brute_strip_max(U):
    """Largest norm over all sign patterns of d-subsets of the strip constraints."""
    d = U.shape[1]
    best = 0.0
    for rows in itertools.combinations(range(len(U)), d):
        M = U[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        for signs in itertools.product([-1.0, 1.0], repeat=d):
            x = np.linalg.solve(M, np.array(signs))
            if np.all(np.abs(U @ x) <= 1 + 1e-9):
                best = max(best, np.linalg.norm(x))
    return best


def test_axes_preset():
    fam = sphere_family(2, 4, preset="axes")
    np.testing.assert_array_equal(fam.vectors, [[1, 0], [0, 1], [-1, 0], [0, -1]])


def test_planar_covering_radius():
    fam = sphere_family(2, 360, seed=3)
    assert fam.covering_radius <= 2 * np.pi / 360 + 1e-12
    assert fam.covering_radius == pytest.approx(np.pi / 360)


def test_covering_radius_exact_matches_sampling():
    U = sphere_family(3, 40, seed=1).vectors
    exact = covering_radius(U)
    X = np.random.default_rng(0).normal(size=(200_000, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    sampled = np.arccos(np.clip((X @ U.T).max(axis=1), -1, 1)).max()
    assert sampled <= exact + 1e-12
    assert sampled == pytest.approx(exact, abs=0.02)


def test_unit_norms():
    for d, n in [(3, 200), (4, 60), (5, 40)]:
        fam = sphere_family(d, n, seed=0)
        np.testing.assert_allclose(np.linalg.norm(fam.vectors, axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(sphere_family(3, 50, 7).vectors, sphere_family(3, 50, 7).vectors)


def test_witness_equality_case():
    fam = StripFamily(np.eye(2))
    w = witness(fam, (0, 1))
    np.testing.assert_allclose(w.A, np.eye(2))
    np.testing.assert_allclose(np.abs(w.q), [1.0, 1.0])
    assert w.norm == pytest.approx(np.sqrt(2), abs=1e-12)
    assert w.bound == pytest.approx(np.sqrt(2))
    assert w.trace_bound == pytest.approx(2.0)


def test_identity_gram_trace():
    fam = StripFamily(np.eye(4))
    assert witness(fam, range(4)).trace_bound == pytest.approx(4.0)


@pytest.mark.parametrize("seed", range(8))
def test_witness_d3_random_subfamily(seed):
    fam = sphere_family(3, 200, seed=0)
    rng = np.random.default_rng(seed)
    sigma = rng.choice(200, size=6, replace=False)
    w = witness(fam, sigma)
    assert w.norm >= 3 / np.sqrt(6) - 1e-6
    U = fam.vectors[list(w.sigma)]
    assert w.norm == pytest.approx(brute_strip_max(U), rel=1e-9)
    # random points of the strip body never beat the vertex maximum
    X = rng.uniform(-3, 3, size=(200_000, 3))
    inside = X[np.all(np.abs(X @ U.T) <= 1, axis=1)]
    assert np.linalg.norm(inside, axis=1).max() <= w.norm + 1e-12


@settings(max_examples=40)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_witness_invariants(d, seed):
    rng = np.random.default_rng(seed)
    U = rng.normal(size=(2 * d, d))
    fam = StripFamily(U)
    sigma = tuple(range(2 * d))
    w = witness(fam, sigma)
    assert np.trace(w.A) == pytest.approx(2 * d, abs=1e-9)
    assert w.feasibility <= 1 + 1e-9
    assert w.p_form_value == pytest.approx(w.norm**2, rel=1e-9)
    assert w.p_form_value >= w.trace_bound - 1e-6
    assert w.trace_bound >= d * d / (2 * d) - 1e-9
    assert w.norm >= d / np.sqrt(2 * d) - 1e-6
    assert witness(StripFamily(-U), sigma).norm == pytest.approx(w.norm, abs=1e-9)


def test_span_deficient():
    fam = StripFamily([[1.0, 0.0], [1.0, 1e-14], [-1.0, 0.0]])
    with pytest.raises(SpanDeficientError):
        witness(fam, (0, 1, 2))


def test_probe_axes():
    r = conjecture2_probe(np.vstack([np.eye(2), -np.eye(2)]))
    assert r["status"] == "bounded"
    assert r["max_norm"] == pytest.approx(np.sqrt(2))
    assert r["reaches_sqrt_d"]


def test_probe_rotated_square():
    theta = np.pi / 4 + np.pi / 2 * np.arange(4)
    U = np.column_stack([np.cos(theta), np.sin(theta)])
    r = conjecture2_probe(U)
    # the body is the square |x| + |y| <= sqrt(2), rotated; vertices at distance sqrt(2)
    assert r["max_norm"] == pytest.approx(np.sqrt(2), rel=1e-12)
    V = np.array([[np.sqrt(2), 0], [0, np.sqrt(2)], [-np.sqrt(2), 0], [0, -np.sqrt(2)]])
    assert np.all(V @ U.T <= 1 + 1e-12)


def test_probe_unbounded_and_size():
    U = np.array([[1.0, 0.0], [0.0, 1.0], [0.6, 0.8], [0.8, 0.6]])
    assert conjecture2_probe(U)["status"] == "unbounded"
    with pytest.raises(PreconditionError):
        conjecture2_probe(np.eye(2))


def test_experiment_small():
    exp = diameter_gap_experiment(2, 60, 10, seed=1)
    assert exp["all_ok"] and exp["diameter_ok"]
    assert exp["min_norm"] >= 1 - 1e-6
    assert len(exp["trials_detail"]) == 10
    assert exp == diameter_gap_experiment(2, 60, 10, seed=1)


def test_experiment_resamples_deficient_draws(monkeypatch):
    import helly_select.lower_bound as lb

    real, calls = lb.witness, []

    def flaky(fam, sigma, cap=lb.WITNESS_CAP):
        calls.append(sigma)
        if len(calls) % 2:
            raise SpanDeficientError("forced")
        return real(fam, sigma, cap)

    monkeypatch.setattr(lb, "witness", flaky)
    exp = lb.diameter_gap_experiment(2, 40, 3, seed=0)
    assert exp["deficient_draws"] == 3 and len(exp["trials_detail"]) == 3


def test_experiment_parameter_validation():
    with pytest.raises(PreconditionError):
        diameter_gap_experiment(2, 3, 1)
    with pytest.raises(PreconditionError):
        diameter_gap_experiment(2, 40, 0)
