"""Parity-sequence commitment over a nonorthogonal qubit pair.

The committer encodes the bit in the parity of an n-letter sequence over two
fixed qubit states with inner product t, deposits the product state, and
opens by announcing the sequence.  The receiver verifies each position
projectively.  Concealment degrades exponentially: her best early-guess
probability is 1/2 + (1 - t^2)^{n/2} / 2.
"""

from __future__ import annotations

import numpy as np

from .. import cheat, detect, qstate
from ..qstate import StateEnsemble
from ..rng import make_generator
from . import common
from .common import ProtocolParams, ProtocolTranscript, Strategy


def qbc0_states(overlap: float) -> tuple[np.ndarray, np.ndarray]:
    return common.overlap_pair(overlap)


def qbc0_ensembles(n: int, overlap: float) -> tuple[StateEnsemble, StateEnsemble]:
    """Uniform parity-0 and parity-1 sequence ensembles (product kets)."""
    phi, phi_p = qbc0_states(overlap)
    letters = (phi, phi_p)
    out = []
    for bit in (0, 1):
        seqs = common.sequences_of_parity(n, bit)
        states = np.stack([
            qstate.tensor_all([letters[b] for b in seq]) for seq in seqs])
        probs = np.full(len(seqs), 1.0 / len(seqs))
        out.append(StateEnsemble(probs, states))
    return out[0], out[1]


def qbc0_concealment(n: int, overlap: float) -> float:
    """Receiver's optimal early-guess probability, in closed form.

    Per position the two letters are distinguished with error
    p_e = (1 - sqrt(1 - t^2)) / 2, and the parity of n independent guesses
    is wrong with probability 1/2 - (1 - 2 p_e)^n / 2, so the guess succeeds
    with probability 1/2 + (1 - t^2)^{n/2} / 2.
    """
    phi, phi_p = qbc0_states(overlap)
    p_e = 1.0 - detect.pure_binary(phi, phi_p, 0.5)
    return 0.5 + 0.5 * (1.0 - 2.0 * p_e) ** n


def qbc0_run(params: ProtocolParams, adam: Strategy, babe: Strategy
             ) -> ProtocolTranscript:
    """One commitment round; the committer may flip one announced letter.

    Committer strategies: honest; qubit-lie (announce one flipped position,
    params: position, default drawn); uhlmann-cheat (record the aligned-plan
    success probability instead of sampling a lie).
    """
    if params.protocol != "qbc0":
        raise ValueError("params are not for qbc0")
    adam.check_protocol("qbc0")
    babe.check_protocol("qbc0")
    rng = make_generator(params.seed)
    n, t = params.n, params.overlap
    phi, phi_p = qbc0_states(t)
    letters = (phi, phi_p)
    tr = ProtocolTranscript("qbc0", params.seed)

    bit = int(adam.params.get("bit", rng.integers(0, 2)))
    seq = common.random_parity_sequence(rng, n, bit)
    tr.committed_bit = bit
    tr.record("A→B", "evidence", common.ket_payload([letters[b] for b in seq]))

    if adam.kind == "uhlmann-cheat":
        e0, e1 = qbc0_ensembles(n, t)
        src, dst = (e0, e1) if bit == 0 else (e1, e0)
        plan = cheat.align_ensembles(src, dst)
        pac = cheat.cheating_probability(plan, dst)
        tr.opened_bit = 1 - bit
        tr.record("A→B", "open", {"bit": 1 - bit, "analytic": True})
        tr.check("aligned-cheat", True, success_probability=pac)
        tr.notes["pac"] = pac
        tr.settle()
        return tr

    announced = list(seq)
    if adam.kind == "qubit-lie":
        pos = int(adam.params.get("position", rng.integers(0, n)))
        announced[pos] = 1 - announced[pos]
    tr.opened_bit = common.parity(announced)
    tr.record("A→B", "open", {"bit": tr.opened_bit, "sequence": announced})

    for l in range(n):
        prob = abs(np.vdot(letters[announced[l]], letters[seq[l]])) ** 2
        tr.check(f"position-{l}", common.bernoulli(rng, prob))
    tr.settle()
    return tr
