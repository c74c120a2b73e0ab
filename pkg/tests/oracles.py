"""Independent numerical oracles shared by the test modules.

Each oracle recomputes a target quantity through a route disjoint from the
package implementation (zooming grid search instead of eigendecompositions,
truncated photon-number expansions instead of closed-form frames), so that
agreement between the two routes is evidence rather than tautology.
"""

import numpy as np

from qbclab import coherent
from qbclab.protocols import common


def bloch_grid_pbar(r0: np.ndarray, r1: np.ndarray, p0: float,
                    rounds: int = 5) -> float:
    """Best binary correct-guess probability over projective qubit POMs.

    Zooming grid search over the Bloch angles of the projector axis; each
    candidate is scored with both outcome assignments.  The objective is
    quadratic around its maximum, so five zoom rounds (factor 8 each) push
    the grid error far below 1e-6.
    """
    p1 = 1.0 - p0
    t_center, t_span = np.pi / 2.0, np.pi
    f_center, f_span = np.pi, 2.0 * np.pi
    best = max(p0, p1)
    for _ in range(rounds + 1):
        thetas = np.clip(np.linspace(t_center - t_span / 2.0,
                                     t_center + t_span / 2.0, 49), 0.0, np.pi)
        phis = np.linspace(f_center - f_span / 2.0,
                           f_center + f_span / 2.0, 97)
        tt, ff = np.meshgrid(thetas, phis, indexing="ij")
        kets = np.stack([np.cos(tt / 2.0),
                         np.sin(tt / 2.0) * np.exp(1j * ff)], axis=-1)
        e0 = np.einsum("tfi,ij,tfj->tf", kets.conj(), r0, kets).real
        e1 = np.einsum("tfi,ij,tfj->tf", kets.conj(), r1, kets).real
        score = np.maximum(p0 * e0 + p1 * (1.0 - e1),
                           p0 * (1.0 - e0) + p1 * e1)
        i, j = np.unravel_index(int(np.argmax(score)), score.shape)
        best = max(best, float(score[i, j]))
        t_center, f_center = float(tt[i, j]), float(ff[i, j])
        t_span /= 8.0
        f_span /= 8.0
    return best


def fock_normed(alpha: complex, cutoff: int = 60) -> np.ndarray:
    """Truncated photon-number expansion of a coherent ket, renormalized."""
    v = coherent.fock_coherent(alpha, cutoff)
    return v / np.linalg.norm(v)


def fock_pair_scalars(overlap: float, eta: float, cutoff: int = 60
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Per-mode scalar tables for the lossy-line dual route.

    Returns (f_in, g): f_in[b, c] is the truncated-Fock overlap of the two
    input letters, and g[v, b, c] evaluates one mode of a projective
    verifier for output letter v through the binomial-damping loss channel,
    g[v, b, c] = <F_b| sum_k K_k^dag |O_v><O_v| K_k |F_c>.
    """
    alpha, alpha_p = coherent.pair_amplitudes(overlap)
    amps = (alpha, alpha_p)
    fin = [fock_normed(a, cutoff) for a in amps]
    fout = [fock_normed(np.sqrt(eta) * a, cutoff) for a in amps]
    kraus = coherent.fock_loss_kraus(eta, cutoff)
    f_in = np.array([[np.vdot(fin[b], fin[c]) for c in range(2)]
                     for b in range(2)])
    g = np.zeros((2, 2, 2), dtype=complex)
    for v in range(2):
        gmat = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        for k in kraus:
            w = k.conj().T @ fout[v]
            gmat += np.outer(w, w.conj())
        for b in range(2):
            for c in range(2):
                g[v, b, c] = np.vdot(fin[b], gmat @ fin[c])
    return f_in, g


def fock_qbc01_route(n: int, overlap: float, eta: float, ua: np.ndarray,
                     cutoff: int = 60) -> tuple[np.ndarray, float, float]:
    """Photon-number dual route for the lossy-line rotation attack.

    Everything factorizes over modes, so the n-mode quantities reduce
    exactly to products of single-mode Fock scalars: the cross Gram of the
    two committed purifications, the aligned-overlap ceiling from its
    singular values, and the verification success of the supplied rotation
    evaluated through the loss channel.  Returns (cross_gram, pac,
    predicted_ceiling); the rotation is taken as given so the comparison is
    free of gauge freedom in degenerate singular subspaces.
    """
    f_in, g = fock_pair_scalars(overlap, eta, cutoff)
    seq0 = common.sequences_of_parity(n, 0)
    seq1 = common.sequences_of_parity(n, 1)
    half = len(seq0)
    cross = np.ones((half, half), dtype=complex) / half
    for j, sj in enumerate(seq0):
        for i, si in enumerate(seq1):
            for l in range(n):
                cross[j, i] *= f_in[si[l], sj[l]]
    sv = np.linalg.svd(cross, compute_uv=False)
    pac = 0.0 + 0.0j
    for i, si in enumerate(seq1):
        for j, sj in enumerate(seq0):
            for jp, sjp in enumerate(seq0):
                term = np.conj(ua[i, j]) * ua[i, jp] / half
                for l in range(n):
                    term *= g[si[l], sj[l], sjp[l]]
                pac += term
    return cross, float(np.real(pac)), float(min(sv.sum() ** 2, 1.0))


def product_fock_gram(rows: np.ndarray, cutoff: int = 60) -> np.ndarray:
    """Gram matrix of multimode coherent products from truncated expansions.

    The inner product of tensor products is the product of per-mode inner
    products, so only single-mode Fock vectors are ever materialized.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=complex))
    count, modes = rows.shape
    gram = np.ones((count, count), dtype=complex)
    cache = {}
    for a in np.unique(rows):
        cache[a] = fock_normed(a, cutoff)
    for j in range(count):
        for k in range(count):
            for l in range(modes):
                gram[j, k] *= np.vdot(cache[rows[j, l]], cache[rows[k, l]])
    return gram


def parity_densities(n: int, overlap: float) -> tuple[np.ndarray, np.ndarray]:
    """Uniform parity-sequence mixtures built by direct real kron chains."""
    phi, phi_p = common.overlap_pair(overlap)
    letters = (np.real(phi), np.real(phi_p))
    out = []
    for bit in (0, 1):
        seqs = common.sequences_of_parity(n, bit)
        states = np.empty((len(seqs), 2 ** n))
        for r, seq in enumerate(seqs):
            v = letters[seq[0]]
            for b in seq[1:]:
                v = np.kron(v, letters[b])
            states[r] = v
        m = states / np.sqrt(len(seqs))
        out.append(m.T @ m)
    return out[0], out[1]


def herm_trace_norm(t: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix via its eigenvalue spectrum."""
    return float(np.abs(np.linalg.eigvalsh(t)).sum())


def accept_rate(transcripts) -> float:
    """Fraction of transcripts settled on an accepting verdict."""
    ts = list(transcripts)
    return sum(tr.verdict == "accept" for tr in ts) / len(ts)


def three_sigma(p: float, samples: int) -> float:
    """Three-sigma half width of a binomial rate estimate around p."""
    return 3.0 * np.sqrt(max(p * (1.0 - p), 1e-12) / samples)
