"""Quantum detection theory: binary and M-ary state discrimination.

Closed-form binary (Helstrom) discrimination, the pure-state special case,
POM evaluation, and an M-ary optimizer built on the square-root (pretty-good)
measurement seed with a fixed-point iteration on the optimality conditions.
The optimizer reports a duality-gap certificate instead of trusting
convergence silently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qstate


@dataclass(frozen=True)
class BinaryPOM:
    """Two-outcome measurement {pi0, pi1} with pi0 + pi1 = I, both PSD."""

    pi0: np.ndarray
    pi1: np.ndarray

    def __post_init__(self):
        d = self.pi0.shape[0]
        if np.abs(self.pi0 + self.pi1 - np.eye(d)).max() > 1e-9:
            raise ValueError("binary POM does not resolve the identity")
        for pi in (self.pi0, self.pi1):
            if np.linalg.eigvalsh(pi).min() < -1e-9:
                raise ValueError("binary POM element is not PSD")

    def to_json(self) -> dict:
        return {"pi0": qstate.to_json(self.pi0), "pi1": qstate.to_json(self.pi1)}


@dataclass(frozen=True)
class MaryPOM:
    """M-outcome measurement: PSD elements resolving the identity."""

    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        d = self.elements[0].shape[0]
        total = sum(self.elements)
        if np.abs(total - np.eye(d)).max() > 1e-9:
            raise ValueError("M-ary POM does not resolve the identity")
        for pi in self.elements:
            if np.linalg.eigvalsh(pi).min() < -1e-9:
                raise ValueError("M-ary POM element is not PSD")

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {"elements": [qstate.to_json(pi) for pi in self.elements]}


@dataclass(frozen=True)
class HypothesisSet:
    """Equally-dimensioned density operators rho_i with prior probabilities p_i."""

    priors: np.ndarray
    states: tuple

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float)
        priors.setflags(write=False)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", tuple(self.states))
        if abs(priors.sum() - 1.0) > 1e-10 or priors.min() < -1e-12:
            raise ValueError("priors must be nonnegative and sum to 1")
        if len(priors) != len(self.states):
            raise ValueError("one prior per state required")
        d = self.states[0].shape[0]
        for rho in self.states:
            if rho.shape != (d, d):
                raise ValueError("hypothesis states must share one dimension")
            if np.abs(rho - rho.conj().T).max() > 1e-9:
                raise ValueError("hypothesis state is not Hermitian")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def to_json(self) -> dict:
        return {"priors": self.priors.tolist(),
                "states": [qstate.to_json(r) for r in self.states]}


def helstrom_binary(r0: np.ndarray, r1: np.ndarray, p0: float
                    ) -> tuple[float, BinaryPOM]:
    """Optimal binary discrimination of r0 (prior p0) vs r1 (prior 1 - p0).

    Returns
    -------
    pbar : 1/2 + ||p0 r0 - p1 r1||_1 / 2, the optimal correct-decision
        probability.
    pom : projector onto the positive eigenspace of (p0 r0 - p1 r1) as pi0;
        the zero-eigenvalue subspace goes to pi1 so the construction is
        deterministic.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"prior {p0} outside [0, 1]")
    gamma = p0 * r0 - (1.0 - p0) * r1
    vals, vecs = np.linalg.eigh(gamma)
    pbar = 0.5 + 0.5 * np.abs(vals).sum()
    plus = vecs[:, vals > 1e-12]
    pi0 = plus @ plus.conj().T
    pom = BinaryPOM(pi0, np.eye(gamma.shape[0]) - pi0)
    return float(pbar), pom


def pure_binary(psi0: np.ndarray, psi1: np.ndarray, p0: float) -> float:
    """Optimal correct-decision probability for two pure states.

    Evaluates 1/2 + sqrt(1 - 4 p0 p1 |<psi0|psi1>|^2) / 2.
    """
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"prior {p0} outside [0, 1]")
    overlap2 = abs(np.vdot(psi0, psi1)) ** 2
    arg = max(1.0 - 4.0 * p0 * (1.0 - p0) * overlap2, 0.0)
    return 0.5 + 0.5 * float(np.sqrt(arg))


def evaluate_pom(h: HypothesisSet, pom: MaryPOM) -> float:
    """Correct-decision probability sum_i p_i tr(pi_i rho_i)."""
    if len(h) != len(pom):
        raise ValueError("POM outcome count differs from hypothesis count")
    if h.dim != pom.elements[0].shape[0]:
        raise ValueError("POM dimension differs from hypothesis dimension")
    value = sum(p * np.trace(pi @ rho).real
                for p, pi, rho in zip(h.priors, pom.elements, h.states))
    return float(value)


def _inv_sqrt_psd(s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pseudo-inverse square root of a PSD matrix plus its support projector."""
    vals, vecs = np.linalg.eigh(s)
    support = vals > 1e-14 * max(vals.max(), 1e-300)
    inv = np.zeros_like(vals)
    inv[support] = 1.0 / np.sqrt(vals[support])
    on = vecs[:, support]
    return (vecs * inv) @ vecs.conj().T, on @ on.conj().T


def _complete_pom(elements: list[np.ndarray], support: np.ndarray
                  ) -> list[np.ndarray]:
    """Spread any identity deficit evenly so the elements sum to I exactly."""
    d = support.shape[0]
    deficit = np.eye(d) - support
    if np.abs(deficit).max() < 1e-14:
        return elements
    return [pi + deficit / len(elements) for pi in elements]


def pretty_good_pom(h: HypothesisSet) -> MaryPOM:
    """Square-root measurement pi_i = S^-1/2 p_i rho_i S^-1/2, S = sum p_i rho_i."""
    weighted = [p * rho for p, rho in zip(h.priors, h.states)]
    s_inv, support = _inv_sqrt_psd(sum(weighted))
    elements = [s_inv @ w @ s_inv for w in weighted]
    return MaryPOM(_complete_pom(elements, support))


def _dual_certificate(h: HypothesisSet, pom: MaryPOM, pcm: float) -> float:
    """Duality-gap estimate: lambda_max-shifted upper bound minus pcm.

    Y = sym(sum_i p_i rho_i pi_i) is feasible after shifting by
    s = max(0, max_i lambda_max(p_i rho_i - Y)); any POM value is then at most
    tr(Y) + s * dim, so the gap bounds the distance to optimal from above.
    """
    acc = np.zeros((h.dim, h.dim), dtype=complex)
    for p, rho, pi in zip(h.priors, h.states, pom.elements):
        acc += p * (rho @ pi)
    y = (acc + acc.conj().T) / 2
    shift = max(0.0, max(np.linalg.eigvalsh(p * rho - y).max()
                         for p, rho in zip(h.priors, h.states)))
    upper = np.trace(y).real + shift * h.dim
    return float(upper - pcm)


def optimize_mary(h: HypothesisSet, tol: float = 1e-8, max_iter: int = 2000
                  ) -> tuple[float, MaryPOM, float]:
    """Best M-ary correct-decision probability by fixed-point iteration.

    Seeds with the pretty-good measurement, then iterates
    pi_i <- T W_i pi_i W_i T with W_i = p_i rho_i and T the pseudo-inverse
    square root of sum_j W_j pi_j W_j, keeping the best iterate seen so the
    reported value is monotone nondecreasing.  Stops when the duality-gap
    certificate drops below `tol` (or on machine-level stagnation); hitting
    `max_iter` is not an exception, the last iterate ships with its
    certificate.

    Returns (pcm, pom, certificate).
    """
    if len(h) < 2:
        raise ValueError("need at least two hypotheses")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    weighted = [p * rho for p, rho in zip(h.priors, h.states)]
    pom = pretty_good_pom(h)
    best_pom = pom
    best = evaluate_pom(h, pom)
    certificate = _dual_certificate(h, pom, best)
    prev = best
    for _ in range(max_iter):
        if certificate < tol:
            break
        s = np.zeros((h.dim, h.dim), dtype=complex)
        for w, pi in zip(weighted, pom.elements):
            s += w @ pi @ w
        t, support = _inv_sqrt_psd((s + s.conj().T) / 2)
        elements = [t @ w @ pi @ w @ t for w, pi in zip(weighted, pom.elements)]
        pom = MaryPOM(_complete_pom(elements, support))
        value = evaluate_pom(h, pom)
        if value > best:
            best, best_pom = value, pom
        certificate = min(certificate, _dual_certificate(h, pom, best))
        if abs(value - prev) < 1e-15:
            break
        prev = value
    return best, best_pom, certificate


def perfect_discrimination_check(h: HypothesisSet) -> bool:
    """True iff every pairwise product rho_i rho_j vanishes (max entry < 1e-9)."""
    for i in range(len(h)):
        for j in range(i + 1, len(h)):
            if np.abs(h.states[i] @ h.states[j]).max() >= 1e-9:
                return False
    return True
