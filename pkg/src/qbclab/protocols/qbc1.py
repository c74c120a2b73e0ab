"""Anonymous-state commitment: the receiver supplies the carrier qubits.

The receiver sends n qubits drawn uniformly from the real great circle; the
committer encodes a parity sequence by applying either the identity or a
fixed rotation with cos(delta) = lambda to each qubit and returns them.
Because the committer never learns the states he rotated, entangling helps
him less; the plain single-position lie passes verification with probability
lambda^2 per lied position.
"""

from __future__ import annotations

import numpy as np

from .. import cheat, qstate
from ..qstate import StateEnsemble
from ..rng import make_generator
from . import common
from .common import ProtocolParams, ProtocolTranscript, Strategy


def circle_ket(theta: float) -> np.ndarray:
    return np.array([np.cos(theta), np.sin(theta)], dtype=complex)


def rotation(delta: float) -> np.ndarray:
    c, s = np.cos(delta), np.sin(delta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def qbc1_unitaries(lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Identity and the rotation with |<psi|U1 psi>| = lam for every psi."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("rotation cosine must lie in [0, 1]")
    return np.eye(2, dtype=complex), rotation(np.arccos(lam))


def qbc1_ensembles(thetas, lam: float) -> tuple[StateEnsemble, StateEnsemble]:
    """Parity ensembles of rotated carrier sequences for fixed carriers."""
    thetas = list(thetas)
    n = len(thetas)
    us = qbc1_unitaries(lam)
    kets = [(circle_ket(th), us[1] @ circle_ket(th)) for th in thetas]
    out = []
    for bit in (0, 1):
        seqs = common.sequences_of_parity(n, bit)
        states = np.stack([
            qstate.tensor_all([kets[l][b] for l, b in enumerate(seq)])
            for seq in seqs])
        probs = np.full(len(seqs), 1.0 / len(seqs))
        out.append(StateEnsemble(probs, states))
    return out[0], out[1]


def qbc1_density(thetas, lam: float, bit: int) -> np.ndarray:
    """Evidence mixture the receiver holds for one committed bit."""
    return qbc1_ensembles(thetas, lam)[bit].density()


def qbc1_committed_acceptance(lam: float) -> float:
    """Acceptance (1 + lam) / 2 of the best fixed committed state per qubit.

    This is the committer's ceiling when he deposits one fixed state and
    later claims whichever rotation suits him, optimized over that state
    only; optimizing over entangled multi-qubit strategies is out of scope.
    """
    return (1.0 + lam) / 2.0


def qbc1_run(params: ProtocolParams, adam: Strategy, babe: Strategy
             ) -> ProtocolTranscript:
    """One round with receiver-supplied carriers.

    Committer strategies: honest; qubit-lie (params: position); matched-
    uhlmann (aligned plan for these carriers, analytic success recorded);
    mismatched-uhlmann (plan built for carriers drawn from params["plan_seed"]
    but evaluated against this run's fresh carriers).
    """
    if params.protocol != "qbc1":
        raise ValueError("params are not for qbc1")
    adam.check_protocol("qbc1")
    babe.check_protocol("qbc1")
    rng = make_generator(params.seed)
    n, lam = params.n, params.overlap
    us = qbc1_unitaries(lam)
    tr = ProtocolTranscript("qbc1", params.seed)

    thetas = [float(th) for th in rng.uniform(0.0, 2.0 * np.pi, size=n)]
    carriers = [circle_ket(th) for th in thetas]
    tr.record("B→A", "carriers", common.ket_payload(carriers))

    bit = int(adam.params.get("bit", rng.integers(0, 2)))
    tr.committed_bit = bit

    if adam.kind in ("matched-uhlmann", "mismatched-uhlmann"):
        if adam.kind == "matched-uhlmann":
            plan_thetas = thetas
        else:
            plan_seed = int(adam.params.get("plan_seed", params.seed + 1))
            plan_rng = make_generator(plan_seed)
            plan_thetas = [float(th) for th in plan_rng.uniform(0.0, 2.0 * np.pi, size=n)]
        p0, p1 = qbc1_ensembles(plan_thetas, lam)
        src, dst = (p0, p1) if bit == 0 else (p1, p0)
        plan = cheat.align_ensembles(src, dst)
        e0, e1 = qbc1_ensembles(thetas, lam)
        target = e1 if bit == 0 else e0
        pac = cheat.cheating_probability(plan, target)
        tr.opened_bit = 1 - bit
        tr.record("A→B", "open", {"bit": 1 - bit, "analytic": True})
        tr.check("aligned-cheat", True, success_probability=pac)
        tr.notes["pac"] = pac
        tr.notes["predicted_pac"] = plan.predicted_pac
        tr.settle()
        return tr

    seq = common.random_parity_sequence(rng, n, bit)
    modulated = [us[b] @ carriers[l] for l, b in enumerate(seq)]
    tr.record("A→B", "evidence", common.ket_payload(modulated))

    announced = list(seq)
    if adam.kind == "qubit-lie":
        pos = int(adam.params.get("position", rng.integers(0, n)))
        announced[pos] = 1 - announced[pos]
    tr.opened_bit = common.parity(announced)
    tr.record("A→B", "open", {"bit": tr.opened_bit, "sequence": announced})

    for l in range(n):
        expected = us[announced[l]] @ carriers[l]
        prob = abs(np.vdot(expected, modulated[l])) ** 2
        tr.check(f"position-{l}", common.bernoulli(rng, prob))
    tr.settle()
    return tr
