"""Entanglement cheating engine for bit-commitment evidence.

A committer who keeps a purifying subsystem entangled with the deposited
evidence can rotate that subsystem after committing instead of before.  This
module builds the committed purifications, constructs the optimal rotation
(a Schmidt-basis switch when the two evidence mixtures coincide, an Uhlmann
alignment when they do not), evaluates the resulting success probability
under plain projective verification and under verification preceded by a CP
map, and packages the concealing-vs-binding chain into one report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qstate
from .qstate import BipartiteState, StateEnsemble


@dataclass(frozen=True)
class CheatPlan:
    """Aligned purification pair plus the committer-side rotation.

    `ua` acts on the A factor of `phi0`; `predicted_pac` is the aligned
    overlap |<phi1|(ua (x) I)|phi0>|^2, the plan's guaranteed lower bound on
    the verification success probability.
    """

    phi0: BipartiteState
    phi1: BipartiteState
    ua: np.ndarray
    predicted_pac: float

    def __post_init__(self):
        da = self.phi0.dims[0]
        if np.abs(self.ua @ self.ua.conj().T - np.eye(da)).max() > 1e-9:
            raise ValueError("plan rotation is not unitary")

    def rotated_rows(self) -> np.ndarray:
        """Rows sqrt(p~_i) phi~_i of the rotated purification (unnormalized)."""
        return self.ua @ self.phi0.as_matrix()

    def aligned_overlap(self) -> float:
        """|<phi1|(ua (x) I)|phi0>|^2, evaluated from the stored parts."""
        amp = np.sum(self.rotated_rows() * self.phi1.as_matrix().conj())
        return float(abs(amp) ** 2)

    def to_json(self) -> dict:
        return {
            "phi0": qstate.to_json(self.phi0.joint),
            "phi1": qstate.to_json(self.phi1.joint),
            "dims": list(self.phi0.dims),
            "ua": qstate.to_json(self.ua),
            "predicted_pac": self.predicted_pac,
        }


@dataclass(frozen=True)
class VerificationModel:
    """Receiver-side CP map followed by per-claim acceptance operators.

    `channel` is a Kraus list on H^B (identity channel for plain protocols);
    `verifiers[i]` is the acceptance operator X_i for claim i, with
    0 <= X_i <= I.  `perfect` records whether every target state passes its
    own verifier with certainty after the channel.
    """

    channel: tuple
    verifiers: tuple
    targets: StateEnsemble

    def __post_init__(self):
        object.__setattr__(self, "channel", tuple(self.channel))
        object.__setattr__(self, "verifiers", tuple(self.verifiers))
        d = self.channel[0].shape[1]
        complete = sum(k.conj().T @ k for k in self.channel)
        if np.abs(complete - np.eye(d)).max() > 1e-9:
            raise ValueError("verification channel is not trace preserving")
        for x in self.verifiers:
            vals = np.linalg.eigvalsh(x)
            if vals.min() < -1e-9 or vals.max() > 1 + 1e-9:
                raise ValueError("verifier outside [0, I]")
        if len(self.verifiers) != len(self.targets):
            raise ValueError("one verifier per target state required")

    def apply_channel(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros((self.channel[0].shape[0],) * 2, dtype=complex)
        for k in self.channel:
            out += k @ rho @ k.conj().T
        return out

    @property
    def perfect(self) -> bool:
        """True iff tr X_i J(|t_i><t_i|) = 1 within 1e-9 for every target."""
        for x, t in zip(self.verifiers, self.targets.states):
            passed = np.trace(x @ self.apply_channel(np.outer(t, t.conj())))
            if abs(passed.real - 1.0) > 1e-9:
                return False
        return True


def identity_verification(targets: StateEnsemble) -> VerificationModel:
    """Plain projective verification: identity channel, X_i = |t_i><t_i|."""
    kraus = (np.eye(targets.dim),)
    verifiers = tuple(np.outer(t, t.conj()) for t in targets.states)
    return VerificationModel(kraus, verifiers, targets)


def _pad_ensemble(e: StateEnsemble, size: int) -> StateEnsemble:
    """Zero-probability basis-state padding up to a common member count."""
    if len(e) == size:
        return e
    extra = size - len(e)
    pad_states = np.zeros((extra, e.dim), dtype=complex)
    pad_states[:, 0] = 1.0
    return StateEnsemble(
        np.concatenate([e.probabilities, np.zeros(extra)]),
        np.concatenate([e.states, pad_states]),
    )


def build_purifications(e0: StateEnsemble, e1: StateEnsemble
                        ) -> tuple[BipartiteState, BipartiteState]:
    """Committed purifications |Phi_b> = sum_i sqrt(p_i) |i>_A |s_i>_B.

    The A factor is the canonical basis indexed by ensemble members; when the
    ensembles differ in size the smaller is padded with zero-probability
    dummy states so both purifications share one A dimension.
    """
    if len(e0) == 0 or len(e1) == 0:
        raise ValueError("ensembles must be nonempty")
    if e0.dim != e1.dim:
        raise ValueError("ensembles must share the B dimension")
    size = max(len(e0), len(e1))
    qstate.check_cap(size * e0.dim)
    out = []
    for e in (_pad_ensemble(e0, size), _pad_ensemble(e1, size)):
        joint = np.sqrt(e.probabilities)[:, None] * e.states
        out.append(BipartiteState(joint.reshape(-1), (size, e.dim)))
    return out[0], out[1]


def _align_purification_matrices(m0: np.ndarray, m1: np.ndarray
                                 ) -> tuple[np.ndarray, float]:
    """Rotation maximizing <Phi1|(ua (x) I)|Phi0> = tr(ua m0 m1^dag).

    The maximizing unitary is the adjoint of the polar unitary of
    m0 m1^dag, taken from one SVD so rank-deficient directions stay in a
    consistent frame; the achieved amplitude is the singular-value sum.
    """
    p, sv, qh = np.linalg.svd(m0 @ m1.conj().T)
    ua = qh.conj().T @ p.conj().T
    return ua, float(min(sv.sum() ** 2, 1.0))


def uhlmann_align(r0: np.ndarray, r1: np.ndarray) -> CheatPlan:
    """Optimal rotation between canonical purifications of two mixtures.

    Both operators are purified in their descending eigenbases with the
    canonical A basis (A factor first); the returned rotation makes the two
    purifications overlap in the Uhlmann fidelity F(r0, r1), the maximum any
    purification pair can reach.  Rank-deficient input needs no special
    casing: the SVD supplies a deterministic completion on the null
    directions.
    """
    if r0.shape != r1.shape:
        raise ValueError("operators must share a dimension")
    mats = []
    for r in (r0, r1):
        vals, vecs = qstate.eigh_descending(r)
        if vals.min() < -qstate.PSD_TOL:
            raise ValueError(f"eigenvalue {vals.min()} below PSD tolerance")
        vals = np.clip(vals, 0.0, None)
        vecs = np.stack([qstate.fix_global_phase(vecs[:, i])
                         for i in range(vecs.shape[1])], axis=1)
        mats.append(np.sqrt(vals)[:, None] * vecs.T)
    ua, overlap = _align_purification_matrices(mats[0], mats[1])
    d = r0.shape[0]
    phi0 = BipartiteState(mats[0].reshape(-1) / np.linalg.norm(mats[0]), (d, d))
    phi1 = BipartiteState(mats[1].reshape(-1) / np.linalg.norm(mats[1]), (d, d))
    return CheatPlan(phi0, phi1, ua, overlap)


def align_ensembles(e0: StateEnsemble, e1: StateEnsemble) -> CheatPlan:
    """Optimal rotation between the committed purifications of two ensembles.

    Same construction as `uhlmann_align` but on the ensemble-indexed A factor,
    so the plan can be evaluated against the member-by-member verification of
    a protocol run.  The achievable overlap is again the fidelity of the two
    mixtures.
    """
    phi0, phi1 = build_purifications(e0, e1)
    ua, overlap = _align_purification_matrices(phi0.as_matrix(),
                                               phi1.as_matrix())
    return CheatPlan(phi0, phi1, ua, overlap)


def entangle_controlled(unitaries: list[np.ndarray], amplitudes: np.ndarray,
                        input_ket: np.ndarray) -> BipartiteState:
    """Controlled product sum_i a_i |i>_A (x) (U_i |input>).

    Realizes commitment-by-rotation without knowing the rotated state: the
    A register holds the which-branch amplitude a_i = sqrt(p_i).
    """
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if abs((np.abs(amplitudes) ** 2).sum() - 1.0) > 1e-9:
        raise ValueError("branch amplitudes must have unit square sum")
    if len(unitaries) != len(amplitudes):
        raise ValueError("one unitary per branch amplitude required")
    d = input_ket.shape[0]
    rows = []
    for u in unitaries:
        if np.abs(u @ u.conj().T - np.eye(d)).max() > 1e-9:
            raise ValueError("branch operator is not unitary")
        rows.append(u @ input_ket)
    joint = amplitudes[:, None] * np.stack(rows)
    qstate.check_cap(joint.size)
    return BipartiteState(joint.reshape(-1), (len(amplitudes), d))


def cheating_probability(plan: CheatPlan, target: StateEnsemble) -> float:
    """Success probability sum_i p~_i |<phi~_i|t_i>|^2 of an aligned plan.

    The rotated purification is decomposed in the canonical A basis, pairing
    branch i with target state i (the committer announces the index he
    obtained).  Rows are kept unnormalized so zero-probability branches
    contribute zero without special casing.
    """
    if plan.phi0.dims[0] != len(target):
        raise ValueError("plan branch count differs from target ensemble size")
    if plan.phi0.dims[1] != target.dim:
        raise ValueError("plan and target differ in B dimension")
    rows = plan.rotated_rows()
    amps = np.einsum("ib,ib->i", rows.conj(), target.states)
    return float((np.abs(amps) ** 2).sum())


def cheating_probability_cp(plan: CheatPlan, vm: VerificationModel) -> float:
    """Success probability sum_i p~_i tr X_i J(|phi~_i><phi~_i|).

    Same branch pairing as `cheating_probability` but with the receiver's CP
    map applied to each presented state and acceptance measured by the model's
    verifiers instead of projectors.
    """
    if plan.phi0.dims[0] != len(vm.targets):
        raise ValueError("plan branch count differs from verifier count")
    if plan.phi0.dims[1] != vm.channel[0].shape[1]:
        raise ValueError("plan and channel differ in B dimension")
    rows = plan.rotated_rows()
    total = 0.0
    for x, w in zip(vm.verifiers, rows):
        sigma = vm.apply_channel(np.outer(w, w.conj()))
        total += np.trace(x @ sigma).real
    return float(total)


def ip_chain_report(e0: StateEnsemble, e1: StateEnsemble,
                    vm: VerificationModel | None = None) -> dict:
    """Concealing-vs-binding chain for one committed ensemble pair.

    Computes eps = ||rho0 - rho1||_1, the receiver's optimal early-guess
    probability pbc = 1/2 + eps/4, and the aligned-plan success pac, then
    checks the chain pac >= 1 - eps (plain verification) or >= 1 - 2 sqrt(eps)
    (CP-map verification), together with the intermediate bound
    sum_i p~_i ||phi~_i phi~_i^dag - t_i t_i^dag||_1^2 <= 4 eps.
    """
    rho0 = e0.density()
    rho1 = e1.density()
    eps = qstate.trace_norm(rho0 - rho1)
    pbc = 0.5 + eps / 4.0
    plan = align_ensembles(e0, e1)
    slack = 1e-9
    if vm is None:
        pac = cheating_probability(plan, _pad_ensemble(e1, plan.phi0.dims[0]))
        bound = 1.0 - eps
    else:
        pac = cheating_probability_cp(plan, vm)
        bound = 1.0 - 2.0 * np.sqrt(eps)
    chain_sum = _pure_deviation_sum(plan, _pad_ensemble(e1, plan.phi0.dims[0]))
    bounds_hold = pac >= bound - slack and chain_sum <= 4.0 * eps + slack
    return {
        "eps": float(eps),
        "pbc": float(pbc),
        "pac": float(pac),
        "bounds_hold": bool(bounds_hold),
        "overlap_sq": plan.predicted_pac,
        "deviation_sum": float(chain_sum),
    }


def _pure_deviation_sum(plan: CheatPlan, target: StateEnsemble) -> float:
    """sum_i p~_i ||phi~_i phi~_i^dag - t_i t_i^dag||_1^2 via the pure-state norm.

    For unit kets the trace norm of a projector difference is
    2 sqrt(1 - |<a|b>|^2), so each term needs only the branch overlap.
    """
    rows = plan.rotated_rows()
    weights = (np.abs(rows) ** 2).sum(axis=1)
    total = 0.0
    for w, t, p in zip(rows, target.states, weights):
        if p < 1e-15:
            continue
        overlap2 = abs(np.vdot(w / np.sqrt(p), t)) ** 2
        total += p * 4.0 * (1.0 - min(overlap2, 1.0))
    return float(total)
