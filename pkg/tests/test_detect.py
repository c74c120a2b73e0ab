"""Detection-layer checks: binary closed forms, M-ary optimizer, duality."""

import numpy as np
import pytest

import oracles
from qbclab import detect, qstate
from qbclab.detect import BinaryPOM, HypothesisSet, MaryPOM
from qbclab.rng import make_generator, random_density, random_ket


def test_helstrom_matches_grid_oracle():
    rng = make_generator(301)
    worst = 0.0
    for _ in range(100):
        r0 = random_density(rng, 2)
        r1 = random_density(rng, 2)
        p0 = float(rng.uniform(0.05, 0.95))
        pbar, _ = detect.helstrom_binary(r0, r1, p0)
        worst = max(worst, abs(pbar - oracles.bloch_grid_pbar(r0, r1, p0)))
    assert worst < 1e-6


def test_helstrom_pom_consistency():
    rng = make_generator(302)
    for _ in range(60):
        dim = int(rng.integers(2, 6))
        r0 = random_density(rng, dim)
        r1 = random_density(rng, dim)
        p0 = float(rng.uniform(0.0, 1.0))
        pbar, pom = detect.helstrom_binary(r0, r1, p0)
        achieved = p0 * np.trace(pom.pi0 @ r0).real \
            + (1 - p0) * np.trace(pom.pi1 @ r1).real
        assert abs(achieved - pbar) < 1e-10
        assert np.abs(pom.pi0 + pom.pi1 - np.eye(dim)).max() < 1e-10
        for pi in (pom.pi0, pom.pi1):
            assert np.linalg.eigvalsh(pi).min() > -1e-10
    with pytest.raises(ValueError):
        detect.helstrom_binary(np.eye(2) / 2, np.eye(2) / 2, 1.2)


def test_helstrom_determinism():
    rng = make_generator(303)
    r0 = random_density(rng, 3)
    r1 = random_density(rng, 3)
    first = detect.helstrom_binary(r0, r1, 0.4)
    second = detect.helstrom_binary(r0, r1, 0.4)
    assert first[0] == second[0]
    assert np.array_equal(first[1].pi0, second[1].pi0)


def test_pure_binary_closed_form():
    rng = make_generator(304)
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        a = random_ket(rng, dim)
        b = random_ket(rng, dim)
        p0 = float(rng.uniform(0.0, 1.0))
        direct = detect.pure_binary(a, b, p0)
        hel, _ = detect.helstrom_binary(np.outer(a, a.conj()),
                                        np.outer(b, b.conj()), p0)
        assert abs(direct - hel) < 1e-10
    phi = np.array([1.0, 0.0])
    phi_p = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert abs(detect.pure_binary(phi, phi_p, 0.5)
               - 0.8535533905932737) < 1e-12
    assert detect.pure_binary(phi, np.array([0.0, 1.0]), 0.5) == 1.0
    with pytest.raises(ValueError):
        detect.pure_binary(phi, phi_p, -0.1)


def test_orthogonal_support_biconditional():
    rng = make_generator(305)
    worst_gap = 1.0
    for _ in range(500):
        d0 = int(rng.integers(1, 4))
        d1 = int(rng.integers(1, 4))
        dim = d0 + d1
        r0 = np.zeros((dim, dim), dtype=complex)
        r1 = np.zeros((dim, dim), dtype=complex)
        r0[:d0, :d0] = random_density(rng, d0) if d0 > 1 else 1.0
        r1[d0:, d0:] = random_density(rng, d1) if d1 > 1 else 1.0
        lam0 = float(rng.uniform(0.1, 0.9))
        lam1 = 1.0 - lam0
        assert abs(qstate.trace_norm(lam0 * r0 - lam1 * r1)
                   - (lam0 + lam1)) < 1e-9
        g0 = random_density(rng, dim)
        g1 = random_density(rng, dim)
        if np.abs(g0 @ g1).max() > 1e-6:
            value = qstate.trace_norm(lam0 * g0 - lam1 * g1)
            worst_gap = min(worst_gap, lam0 + lam1 - value)
            assert value < lam0 + lam1 - 1e-9
    assert worst_gap > 1e-9


def test_evaluate_pom_trivial_cases():
    basis = [np.zeros(3, dtype=complex) for _ in range(3)]
    for i, v in enumerate(basis):
        v[i] = 1.0
    h = HypothesisSet(np.full(3, 1.0 / 3.0),
                      tuple(np.outer(v, v.conj()) for v in basis))
    projectors = MaryPOM([np.outer(v, v.conj()) for v in basis])
    assert abs(detect.evaluate_pom(h, projectors) - 1.0) < 1e-12
    blind = MaryPOM([np.eye(3) / 3.0] * 3)
    assert abs(detect.evaluate_pom(h, blind) - 1.0 / 3.0) < 1e-12
    with pytest.raises(ValueError):
        detect.evaluate_pom(h, MaryPOM([np.eye(3) / 2.0] * 2))
    rng = make_generator(306)
    r0 = random_density(rng, 2)
    r1 = random_density(rng, 2)
    p0 = 0.35
    pbar, pom = detect.helstrom_binary(r0, r1, p0)
    pair = HypothesisSet(np.array([p0, 1 - p0]), (r0, r1))
    assert abs(detect.evaluate_pom(pair, MaryPOM([pom.pi0, pom.pi1]))
               - pbar) < 1e-10


def test_binary_optimizer_matches_closed_form():
    rng = make_generator(307)
    for _ in range(200):
        dim = int(rng.integers(2, 5))
        r0 = random_density(rng, dim)
        r1 = random_density(rng, dim)
        p0 = float(rng.uniform(0.1, 0.9))
        closed, pom = detect.helstrom_binary(r0, r1, p0)
        h = HypothesisSet(np.array([p0, 1 - p0]), (r0, r1))
        achieved = detect.evaluate_pom(h, MaryPOM([pom.pi0, pom.pi1]))
        assert abs(achieved - closed) < 1e-9
        pcm, _, cert = detect.optimize_mary(h, tol=1e-9, max_iter=5000)
        assert pcm <= closed + 1e-9
        assert pcm >= closed - cert - 1e-9


def test_mary_optimizer_sandwich():
    rng = make_generator(308)
    for _ in range(60):
        dim = int(rng.integers(2, 5))
        count = int(rng.integers(3, 6))
        priors = rng.uniform(0.2, 1.0, count)
        priors /= priors.sum()
        states = tuple(random_density(rng, dim) for _ in range(count))
        h = HypothesisSet(priors, states)
        pgm = detect.evaluate_pom(h, detect.pretty_good_pom(h))
        pcm, pom, cert = detect.optimize_mary(h)
        assert cert >= -1e-12
        assert pcm <= 1.0 + 1e-12
        # The certified ceiling pcm + cert must dominate every feasible
        # strategy; the achieved pcm itself may sit inside the gap.
        assert pcm + cert >= priors.max() - 1e-9
        assert pcm + cert >= pgm - 1e-9
        assert pcm >= pgm - cert - 1e-9
        total = sum(pom.elements)
        assert np.abs(total - np.eye(dim)).max() < 1e-8
        for el in pom.elements:
            assert np.linalg.eigvalsh(el).min() > -1e-9


def test_mary_optimizer_orthogonal_and_checks():
    basis = np.eye(4, dtype=complex)
    states = tuple(np.outer(basis[i], basis[i].conj()) for i in range(4))
    h = HypothesisSet(np.full(4, 0.25), states)
    assert detect.perfect_discrimination_check(h)
    pcm, _, _ = detect.optimize_mary(h)
    assert abs(pcm - 1.0) < 1e-9
    tilted = np.array([1.0, 1.0, 0.0, 0.0], dtype=complex) / np.sqrt(2.0)
    fuzzy = HypothesisSet(np.full(2, 0.5),
                          (states[0], np.outer(tilted, tilted.conj())))
    assert not detect.perfect_discrimination_check(fuzzy)
    pcm, _, _ = detect.optimize_mary(fuzzy)
    assert pcm < 1.0 - 1e-3
    with pytest.raises(ValueError):
        detect.optimize_mary(HypothesisSet(np.array([1.0]), (np.eye(2) / 2,)))
    with pytest.raises(ValueError):
        detect.optimize_mary(fuzzy, tol=0.0)


def test_hypothesis_set_validation_and_json():
    rng = make_generator(309)
    r0 = random_density(rng, 2)
    r1 = random_density(rng, 2)
    with pytest.raises(ValueError):
        HypothesisSet(np.array([0.7, 0.7]), (r0, r1))
    h = HypothesisSet(np.array([0.5, 0.5]), (r0, r1))
    payload = h.to_json()
    assert [round(p, 12) for p in payload["priors"]] == [0.5, 0.5]
    back = [qstate.from_json(s) for s in payload["states"]]
    assert np.abs(back[0] - r0).max() < 1e-15
    pbar, pom = detect.helstrom_binary(r0, r1, 0.5)
    bj = pom.to_json()
    assert np.abs(qstate.from_json(bj["pi0"]) - pom.pi0).max() < 1e-15
    mary = MaryPOM([pom.pi0, pom.pi1])
    mj = mary.to_json()
    assert len(mj["elements"]) == 2
    assert np.abs(qstate.from_json(mj["elements"][1]) - pom.pi1).max() < 1e-15
    with pytest.raises(ValueError):
        MaryPOM([np.eye(2), np.eye(2)])
    with pytest.raises(ValueError):
        BinaryPOM(np.eye(2) * 2.0, -np.eye(2))
