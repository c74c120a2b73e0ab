"""Parity commitment over weak coherent states through a lossy line.

The committer deposits an n-mode coherent sequence over a real amplitude
pair (alpha, -alpha); the receiver taps each mode with a transmissivity-eta
beam splitter and later verifies by projecting her kept attenuated modes
onto the announced sequence.  Verification is perfect for honest openings
even though the channel is noisy, which is exactly the regime where the
rotation attack recovers success 1 - 2 sqrt(eps) instead of 1 - eps.

All protocol states live in the orthonormal embedding of the 2^n-sequence
coherent frame, so the engine is exact up to the frame conditioning.
"""

from __future__ import annotations

import numpy as np

from .. import cheat, coherent, qstate
from ..qstate import StateEnsemble
from ..rng import make_generator
from . import common
from .common import ProtocolParams, ProtocolTranscript, Strategy


def qbc01_frame(n: int, overlap: float, eta: float) -> dict:
    """Embedded frame data shared by the engine and the analysis layer.

    Returns sequence amplitudes, input/output Grams, embedded input kets
    (rows), embedded attenuated kets (rows), and the per-sequence parity.
    """
    alpha, alpha_p = coherent.pair_amplitudes(overlap)
    seq = coherent.sequence_amplitudes(n, alpha, alpha_p)
    g_in = coherent.sequence_gram(seq)
    g_out = coherent.sequence_gram(np.sqrt(eta) * seq)
    parities = np.array([common.parity((j >> (n - 1 - l)) & 1
                                       for l in range(n))
                         for j in range(2 ** n)])
    return {
        "amplitudes": seq,
        "gram_in": g_in,
        "gram_out": g_out,
        "kets_in": coherent.embedded_kets(g_in),
        "kets_out": coherent.embedded_kets(g_out),
        "parities": parities,
    }


def qbc01_ensembles(frame: dict) -> tuple[StateEnsemble, StateEnsemble]:
    """Uniform parity ensembles of embedded input-sequence kets."""
    out = []
    for bit in (0, 1):
        idx = np.flatnonzero(frame["parities"] == bit)
        states = frame["kets_in"][idx]
        out.append(StateEnsemble(np.full(len(idx), 1.0 / len(idx)), states))
    return out[0], out[1]


def qbc01_verification(frame: dict, eta: float, bit: int
                       ) -> cheat.VerificationModel:
    """Loss channel plus projective verifiers for the parity-`bit` claims."""
    kraus = coherent.loss_channel_kraus(frame["amplitudes"], eta)
    idx = np.flatnonzero(frame["parities"] == bit)
    targets = StateEnsemble(np.full(len(idx), 1.0 / len(idx)),
                            frame["kets_in"][idx])
    verifiers = tuple(np.outer(frame["kets_out"][j], frame["kets_out"][j].conj())
                      for j in idx)
    return cheat.VerificationModel(tuple(kraus), verifiers, targets)


def qbc01_run(params: ProtocolParams, adam: Strategy, babe: Strategy
              ) -> ProtocolTranscript:
    """One commitment round over the lossy line.

    Honest openings pass with certainty (the attenuated sequence matches its
    verifier exactly); the uhlmann-cheat committer records the analytic
    success probability of the aligned rotation evaluated through the loss
    channel.
    """
    if params.protocol != "qbc01":
        raise ValueError("params are not for qbc01")
    adam.check_protocol("qbc01")
    babe.check_protocol("qbc01")
    rng = make_generator(params.seed)
    n, t, eta = params.n, params.overlap, params.eta
    frame = qbc01_frame(n, t, eta)
    tr = ProtocolTranscript("qbc01", params.seed)
    tr.notes["pair_separation"] = float(
        abs(np.ptp(coherent.pair_amplitudes(t))))

    bit = int(adam.params.get("bit", rng.integers(0, 2)))
    seq_bits = common.random_parity_sequence(rng, n, bit)
    j = 0
    for b in seq_bits:
        j = (j << 1) | b
    tr.committed_bit = bit
    tr.record("A→B", "evidence",
              {"sequence": list(seq_bits),
               "state": qstate.to_json(frame["kets_in"][j])})

    if adam.kind == "uhlmann-cheat":
        e0, e1 = qbc01_ensembles(frame)
        src, dst = (e0, e1) if bit == 0 else (e1, e0)
        vm = qbc01_verification(frame, eta, 1 - bit)
        plan = cheat.align_ensembles(src, dst)
        pac = cheat.cheating_probability_cp(plan, vm)
        tr.opened_bit = 1 - bit
        tr.record("A→B", "open", {"bit": 1 - bit, "analytic": True})
        tr.check("aligned-cheat", True, success_probability=pac)
        tr.notes["pac"] = pac
        tr.notes["perfect_verification"] = vm.perfect
        tr.settle()
        return tr

    tr.opened_bit = bit
    tr.record("A→B", "open", {"bit": bit, "sequence": list(seq_bits)})
    vm = qbc01_verification(frame, eta, bit)
    idx = list(np.flatnonzero(frame["parities"] == bit))
    claim = idx.index(j)
    sigma = vm.apply_channel(np.outer(frame["kets_in"][j],
                                      frame["kets_in"][j].conj()))
    prob = float(np.trace(vm.verifiers[claim] @ sigma).real)
    tr.check("sequence-projection", common.bernoulli(rng, prob),
             pass_probability=prob)
    tr.settle()
    return tr
