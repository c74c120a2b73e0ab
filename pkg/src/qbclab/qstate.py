"""Finite-dimensional quantum state toolbox.

Dense complex linear algebra for the rest of the package: tensor products,
partial traces, Schmidt decompositions, trace norms, fidelity, polar
decompositions, purifications, local channels, and analytic coherent-state
overlaps.  Everything is a plain numpy array; structured values are frozen
dataclasses.  All functions are pure and inputs are never mutated.

Index convention for bipartite objects: row-major over (A-index, B-index),
i.e. the joint basis ket |a>|b> sits at flat index a * dB + b.

Serialization: kets and operators round-trip through the "qstate-v1" JSON
schema, a dict {"dim": d, "re": [...], "im": [...]} with row-major flattening.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

Ket = np.ndarray
Operator = np.ndarray
DensityOperator = np.ndarray

#: Declared PSD tolerance: eigenvalues in [-PSD_TOL, 0) are clamped to zero,
#: anything more negative is a hard error.
PSD_TOL = 1e-10

#: Name of the JSON schema used by to_json / from_json.
JSON_SCHEMA = "qstate-v1"

_DEFAULT_DIM_CAP = 2**24


class DimensionCapError(ValueError):
    """Raised when a dense object would exceed the configured entry cap."""


def dim_cap() -> int:
    """Configured cap on dense entry counts (env override: QBCLAB_DIM_CAP)."""
    raw = os.environ.get("QBCLAB_DIM_CAP")
    return int(raw) if raw else _DEFAULT_DIM_CAP


def check_cap(entries: int) -> None:
    if entries > dim_cap():
        raise DimensionCapError(
            f"dense object with {entries} entries exceeds cap {dim_cap()}"
        )


@dataclass(frozen=True)
class BipartiteState:
    """Pure state on H^A (x) H^B, stored as a flat joint ket.

    Parameters
    ----------
    joint : complex vector of length dims[0] * dims[1], unit norm.
    dims : (dA, dB) factor dimensions; flat index = a * dB + b.
    """

    joint: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        da, db = self.dims
        joint = np.asarray(self.joint, dtype=complex)
        joint.setflags(write=False)
        object.__setattr__(self, "joint", joint)
        if joint.shape != (da * db,):
            raise ValueError(f"joint length {joint.shape} != {da}*{db}")
        norm = np.linalg.norm(joint)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"joint ket norm {norm} is not 1")

    def as_matrix(self) -> np.ndarray:
        """Reshape to (dA, dB): row a holds the B-components paired with |a>."""
        return self.joint.reshape(self.dims)


@dataclass(frozen=True)
class StateEnsemble:
    """Ensemble {(p_i, |s_i>)} of pure states sharing one dimension.

    `states` has one ket per row; probabilities are nonnegative and sum to 1.
    Zero-probability rows are allowed (used to pad ensembles to a common size).
    """

    probabilities: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        probs.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "states", states)
        if states.ndim != 2 or probs.shape != (states.shape[0],):
            raise ValueError("need one probability per state row")
        if probs.min() < -1e-12 or abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        norms = np.linalg.norm(states, axis=1)
        if np.abs(norms[probs > 1e-12] - 1.0).max(initial=0.0) > 1e-9:
            raise ValueError("ensemble states must be normalized")

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def density(self) -> DensityOperator:
        """Mixture sum_i p_i |s_i><s_i|."""
        return np.einsum("i,ib,ic->bc", self.probabilities, self.states,
                         self.states.conj())


@dataclass(frozen=True)
class CoherentSuperposition:
    """Superposition sum_k c_k |alpha_k1> ... |alpha_kn> of n-mode coherent products.

    `coefficients` holds the c_k, `modes` the per-term amplitude rows
    (shape (K, n)).  The norm is computed analytically from pairwise coherent
    overlaps, never by Fock truncation.
    """

    coefficients: np.ndarray
    modes: np.ndarray

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=complex)
        modes = np.atleast_2d(np.asarray(self.modes, dtype=complex))
        coeff.setflags(write=False)
        modes.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)
        object.__setattr__(self, "modes", modes)
        if modes.shape[0] != coeff.shape[0]:
            raise ValueError("one mode row per coefficient required")
        if abs(self.norm_squared() - 1.0) > 1e-8:
            raise ValueError("Gram-weighted norm is not 1")

    @property
    def mode_count(self) -> int:
        return self.modes.shape[1]

    def gram(self) -> np.ndarray:
        """Pairwise term overlaps G[j,k] = prod_l <alpha_jl|alpha_kl>."""
        out = np.ones((len(self.coefficients),) * 2, dtype=complex)
        for l in range(self.mode_count):
            col = self.modes[:, l]
            out *= coherent_overlap(col[:, None], col[None, :])
        return out

    def norm_squared(self) -> float:
        return float(np.real(self.coefficients.conj() @ self.gram()
                             @ self.coefficients))


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two kets or two operators.

    Row-major convention: for kets, (a (x) b)[i*dB + j] = a[i] * b[j]; for
    operators the usual block layout.  Errors if the result would exceed the
    configured dense entry cap.
    """
    check_cap(a.size * b.size)
    return np.kron(a, b)


def tensor_all(factors: list[np.ndarray]) -> np.ndarray:
    """Left-to-right Kronecker product of a nonempty factor list."""
    out = factors[0]
    for f in factors[1:]:
        out = tensor(out, f)
    return out


def partial_trace(state, keep: str, dims: tuple[int, int] | None = None
                  ) -> DensityOperator:
    """Trace out one factor of a bipartite pure state or joint density operator.

    Parameters
    ----------
    state : BipartiteState, or a square joint density matrix (then `dims`
        is required).
    keep : "A" or "B", the factor to keep.
    dims : (dA, dB), only for raw matrix input.

    Returns
    -------
    The reduced density operator on the kept factor.
    """
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    if isinstance(state, BipartiteState):
        m = state.as_matrix()
        if keep == "B":
            return np.einsum("ab,ac->bc", m, m.conj())
        return np.einsum("ab,cb->ac", m, m.conj())
    if dims is None:
        raise ValueError("dims required for raw joint density input")
    da, db = dims
    if state.shape != (da * db, da * db):
        raise ValueError("joint operator shape inconsistent with dims")
    r = state.reshape(da, db, da, db)
    if keep == "B":
        return np.einsum("abac->bc", r)
    return np.einsum("abcb->ac", r)


def schmidt_decompose(s: BipartiteState
                      ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition |s> = sum_k c_k |a_k>|b_k>.

    Returns
    -------
    coefficients : descending nonnegative reals with sum of squares 1;
        trailing numerically-zero coefficients are dropped.
    basis_a, basis_b : arrays with ket k in row k, orthonormal.  The global
        phase of each B ket is fixed so its largest-magnitude amplitude is
        real positive; the paired A ket absorbs the opposite phase.
    """
    u, sv, vh = np.linalg.svd(s.as_matrix())
    rank = max(1, int(np.sum(sv > 1e-12)))
    coeff = sv[:rank]
    basis_a = u[:, :rank].T.copy()
    basis_b = vh[:rank].copy()
    for k in range(rank):
        phase = _leading_phase(basis_b[k])
        basis_b[k] = basis_b[k] / phase
        basis_a[k] = basis_a[k] * phase
    return coeff, basis_a, basis_b


def _leading_phase(ket: np.ndarray) -> complex:
    """Phase of the largest-magnitude amplitude (unit modulus)."""
    lead = ket[int(np.argmax(np.abs(ket)))]
    if abs(lead) == 0.0:
        return 1.0 + 0.0j
    return lead / abs(lead)


def fix_global_phase(ket: np.ndarray) -> np.ndarray:
    """Rescale so the largest-magnitude amplitude is real positive."""
    return ket / _leading_phase(ket)


def trace_norm(t: Operator) -> float:
    """Sum of singular values of a square matrix."""
    return float(np.linalg.svd(t, compute_uv=False).sum())


def eigh_descending(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian eigendecomposition with eigenvalues sorted descending."""
    vals, vecs = np.linalg.eigh(h)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def _clamped_psd_eigs(r: np.ndarray, what: str) -> tuple[np.ndarray, np.ndarray]:
    vals, vecs = eigh_descending(r)
    if vals.min() < -PSD_TOL:
        raise ValueError(f"{what} has eigenvalue {vals.min()} below -{PSD_TOL}")
    return np.clip(vals, 0.0, None), vecs

def sqrtm_psd(r: DensityOperator) -> np.ndarray:
    """Hermitian square root of a PSD matrix via eigendecomposition."""
    vals, vecs = _clamped_psd_eigs(r, "matrix")
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(r0: DensityOperator, r1: DensityOperator) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(r0) r1 sqrt(r0)))^2.

    Evaluated as the squared sum of singular values of sqrt(r0) @ sqrt(r1),
    which is the same quantity without the outer square root.  Non-PSD input
    is rejected.
    """
    if r0.shape != r1.shape:
        raise ValueError("fidelity needs operators of one dimension")
    s0 = sqrtm_psd(r0)
    s1 = sqrtm_psd(r1)
    root = np.linalg.svd(s0 @ s1, compute_uv=False).sum()
    return float(min(max(root * root, 0.0), 1.0))


def polar_unitary(a: Operator) -> Operator:
    """Unitary factor U of the right polar decomposition a = |a| U, |a| = sqrt(a a^dag).

    On rank-deficient input the factor is completed to a full unitary through
    the SVD's singular-vector completion; the completion is non-canonical but
    deterministic for a fixed input.
    """
    p, _, qh = np.linalg.svd(a)
    return p @ qh


def purify(r: DensityOperator) -> BipartiteState:
    """Canonical purification |Psi> = sum_i sqrt(l_i) |v_i> (x) |i>.

    The system factor comes first, the ancilla second; the ancilla basis is
    the canonical basis indexed by descending eigenvalues l_i of `r`, and each
    eigenvector's global phase is fixed for reproducibility.  The ancilla
    dimension equals dim(r) (rank padded with zero amplitudes).
    """
    vals, vecs = _clamped_psd_eigs(r, "density operator")
    d = r.shape[0]
    joint = np.zeros((d, d), dtype=complex)
    for i in range(d):
        joint[:, i] = np.sqrt(vals[i]) * fix_global_phase(vecs[:, i])
    total = np.linalg.norm(joint)
    return BipartiteState(joint.reshape(-1) / total, (d, d))


def apply_local_channel(s: DensityOperator, kraus: list[np.ndarray],
                        ) -> DensityOperator:
    """Apply a CP trace-preserving map on the A factor of a joint density operator.

    The Kraus operators act on A; dB is inferred from the joint dimension.
    Rejects Kraus sets with sum K^dag K != I (within 1e-9).
    """
    da = kraus[0].shape[0]
    if s.shape[0] % da:
        raise ValueError("joint dimension not divisible by Kraus dimension")
    db = s.shape[0] // da
    complete = sum(k.conj().T @ k for k in kraus)
    if np.abs(complete - np.eye(da)).max() > 1e-9:
        raise ValueError("Kraus set is not trace preserving")
    r = s.reshape(da, db, da, db)
    out = np.zeros_like(r)
    for k in kraus:
        out += np.einsum("ij,jbkc,lk->iblc", k, r, k.conj())
    return out.reshape(da * db, da * db)


def coherent_overlap(alpha, beta):
    """Coherent-state inner product <alpha|beta> = exp(-(|a|^2+|b|^2)/2 + conj(a) b).

    Accepts scalars or broadcasting arrays; |result| <= 1 always.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    out = np.exp(-(np.abs(alpha) ** 2 + np.abs(beta) ** 2) / 2
                 + np.conj(alpha) * beta)
    if out.ndim == 0:
        return complex(out)
    return out


def to_json(arr: np.ndarray) -> dict:
    """Serialize a ket or square operator to the qstate-v1 dict."""
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 2:
        if a.shape[0] != a.shape[1]:
            raise ValueError("only square operators serialize")
        dim = a.shape[0]
    elif a.ndim == 1:
        dim = a.shape[0]
    else:
        raise ValueError("only kets and square operators serialize")
    flat = a.reshape(-1)
    return {"dim": dim, "re": flat.real.tolist(), "im": flat.imag.tolist()}


def from_json(payload: dict) -> np.ndarray:
    """Inverse of `to_json`; shape is recovered from dim vs entry count."""
    dim = int(payload["dim"])
    flat = np.asarray(payload["re"], dtype=float) \
        + 1j * np.asarray(payload["im"], dtype=float)
    if flat.size == dim:
        return flat
    if flat.size == dim * dim:
        return flat.reshape(dim, dim)
    raise ValueError("entry count matches neither a ket nor an operator")
