"""Coherent-state frames and the beam-splitter loss channel.

Weak coherent sequences over two amplitudes span a small nonorthogonal frame.
Everything here works in that frame's orthonormal embedding (columns of the
Gram square root), which turns sequence states, loss channels, and acceptance
projectors into ordinary finite matrices.  Fock-truncation helpers at the
bottom exist only to cross-check the analytic formulas in tests.
"""

from __future__ import annotations

import math

import numpy as np

from . import qstate

GRAM_RANK_TOL = 1e-12


class FrameConditioningError(ValueError):
    """Raised when the sequence Gram matrix is numerically singular."""


def pair_amplitudes(overlap: float) -> tuple[float, float]:
    """Real amplitude pair (alpha, -alpha) with |<alpha|-alpha>| = overlap."""
    if not 0.0 < overlap < 1.0:
        raise ValueError("pair overlap must lie strictly between 0 and 1")
    alpha = math.sqrt(math.log(1.0 / overlap) / 2.0)
    return alpha, -alpha


def sequence_amplitudes(n: int, alpha: complex, alpha_p: complex) -> np.ndarray:
    """Mode amplitudes of all 2^n two-letter sequences, row j = sequence j.

    Bit l of the row index selects alpha (0) or alpha_p (1) for mode l, with
    bit 0 the most significant so row order matches binary sequence order.
    """
    if n < 1:
        raise ValueError("need at least one mode")
    qstate.check_cap((2 ** n) ** 2)
    rows = np.empty((2 ** n, n), dtype=complex)
    for j in range(2 ** n):
        bits = [(j >> (n - 1 - l)) & 1 for l in range(n)]
        rows[j] = [alpha_p if b else alpha for b in bits]
    return rows


def sequence_gram(seq_amps: np.ndarray) -> np.ndarray:
    """Gram matrix G[j, k] = <seq_j|seq_k> of a coherent sequence family."""
    k, n = seq_amps.shape
    g = np.ones((k, k), dtype=complex)
    for l in range(n):
        col = seq_amps[:, l]
        g *= qstate.coherent_overlap(col[:, None], col[None, :])
    return g


def embed_frame(gram: np.ndarray) -> np.ndarray:
    """Orthonormal embedding B = G^{1/2}; column j represents frame vector j.

    Inner products are preserved exactly; a numerically singular Gram means
    the frame no longer spans its nominal dimension and the computation must
    stop rather than silently project.
    """
    vals = np.linalg.eigvalsh(gram)
    if vals.min() < GRAM_RANK_TOL:
        raise FrameConditioningError(
            f"sequence frame is numerically singular (min eigenvalue {vals.min():.3e})")
    return qstate.sqrtm_psd(gram)


def decoherence_factors(seq_amps: np.ndarray, eta: float) -> np.ndarray:
    """Entrywise factors c[j, k] the loss channel applies to |seq_j><seq_k|.

    A transmissivity-eta beam splitter sends |a><b| to
    <sqrt(1-eta) b|sqrt(1-eta) a> |sqrt(eta) a><sqrt(eta) b|; the factor
    multiplies over modes.
    """
    lost = np.sqrt(1.0 - eta) * seq_amps
    k, n = seq_amps.shape
    c = np.ones((k, k), dtype=complex)
    for l in range(n):
        col = lost[:, l]
        c *= qstate.coherent_overlap(col[None, :], col[:, None])
    return c


def loss_channel_kraus(seq_amps: np.ndarray, eta: float) -> list[np.ndarray]:
    """Kraus list of the loss channel between embedded frame coordinates.

    Input coordinates embed the original frame, output coordinates embed the
    sqrt(eta)-attenuated frame.  The map on coordinates is
    rho -> Gout^{1/2} (C * (Gin^{-1/2} rho Gin^{-1/2})) Gout^{1/2} with C the
    decoherence factors; its Choi operator is diagonalized to obtain Kraus
    operators.  Trace preservation is exact because the kept and lost
    overlaps multiply back to the original Gram entries.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("transmissivity must lie in (0, 1]")
    g_in = sequence_gram(seq_amps)
    g_out = sequence_gram(np.sqrt(eta) * seq_amps)
    c = decoherence_factors(seq_amps, eta)
    b_in = embed_frame(g_in)
    b_out = embed_frame(g_out)
    inv_in = np.linalg.inv(b_in)
    k = g_in.shape[0]
    choi = np.zeros((k * k, k * k), dtype=complex)
    for i in range(k):
        for j in range(k):
            basis = np.zeros((k, k), dtype=complex)
            basis[i, j] = 1.0
            image = b_out @ (c * (inv_in @ basis @ inv_in)) @ b_out
            choi += np.kron(basis, image)
    vals, vecs = np.linalg.eigh(choi)
    if vals.min() < -1e-9:
        raise FrameConditioningError(
            f"loss channel Choi not PSD (min eigenvalue {vals.min():.3e})")
    kraus = []
    for r in range(len(vals) - 1, -1, -1):
        if vals[r] <= 1e-12:
            continue
        # Choi index order is (input, output), so the unstacked eigenvector
        # has input as its row index; the Kraus operator is its transpose.
        kraus.append(math.sqrt(vals[r]) * vecs[:, r].reshape(k, k).T)
    total = sum(op.conj().T @ op for op in kraus)
    if np.abs(total - np.eye(k)).max() > 1e-9:
        raise FrameConditioningError("loss channel reconstruction lost trace")
    return kraus


def embedded_kets(gram: np.ndarray) -> np.ndarray:
    """Row i = embedded coordinates of frame vector i (columns of G^{1/2})."""
    return embed_frame(gram).T.copy()


# ---------------------------------------------------------------------------
# Fock-truncation oracles (test support only; never used by the protocols).

def fock_coherent(alpha: complex, cutoff: int = 60) -> np.ndarray:
    """Photon-number expansion of |alpha> truncated at `cutoff` (inclusive)."""
    ns = np.arange(cutoff + 1)
    log_fact = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, cutoff + 1)))])
    if alpha == 0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    amps = np.exp(-0.5 * abs(alpha) ** 2 + ns * np.log(complex(alpha)) - 0.5 * log_fact)
    return amps.astype(complex)


def fock_loss_kraus(eta: float, cutoff: int = 60) -> list[np.ndarray]:
    """Single-mode loss Kraus operators K_k mapping |n> to C(n,k)-weighted |n-k>."""
    dim = cutoff + 1
    ops = []
    for k in range(dim):
        op = np.zeros((dim, dim))
        for n in range(k, dim):
            op[n - k, n] = math.sqrt(math.comb(n, k) * eta ** (n - k) * (1.0 - eta) ** k)
        ops.append(op)
    return ops
