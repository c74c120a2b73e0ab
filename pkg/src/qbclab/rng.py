"""Seeded randomness for protocol runs, sweeps, and property suites.

All randomness flows through numpy's Philox bit generator, a counter-based
algorithm with a published specification, so 64-bit seeds are portable across
implementations and versions.  `make_generator(seed)` is the single
constructor; pinned test vectors live in the test suite.
"""

from __future__ import annotations

import numpy as np

from . import qstate


def make_generator(seed: int) -> np.random.Generator:
    """Philox-backed Generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(seed))


def spawn(seed: int, stream: int) -> np.random.Generator:
    """Independent generator for (seed, stream), e.g. one per sweep point."""
    return np.random.Generator(np.random.Philox(key=seed + (stream << 64)))


def random_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-like random ket: normalized complex Gaussian vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar random unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_density(rng: np.random.Generator, dim: int,
                   rank: int | None = None) -> np.ndarray:
    """Random density operator of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_kraus(rng: np.random.Generator, dim: int, count: int
                 ) -> list[np.ndarray]:
    """Random trace-preserving Kraus set: blocks of an isometry's QR factor."""
    z = rng.standard_normal((dim * count, dim)) \
        + 1j * rng.standard_normal((dim * count, dim))
    q, _ = np.linalg.qr(z)
    return [q[i * dim:(i + 1) * dim] for i in range(count)]


def random_ensemble(rng: np.random.Generator, size: int, dim: int
                    ) -> qstate.StateEnsemble:
    """Random ensemble with Dirichlet-uniform probabilities."""
    probs = rng.dirichlet(np.ones(size))
    states = np.stack([random_ket(rng, dim) for _ in range(size)])
    return qstate.StateEnsemble(probs, states)
