"""Permutation commitment over receiver-supplied BB84 quartets.

The receiver sends n sets of four qubits, each set a secretly permuted copy
of the four BB84 states; qubits are named by their position in the set.  The
committer retains m sets (the receiver proves the rest), picks one qubit per
retained set, modulates all picks by the same bit rotation, and deposits
them; opening announces the picked names and the bit.  Per committed qubit
the receiver holds an exactly uniform mixture either way, so concealment is
perfect against product measurements, while the committer's bit flip
requires identifying permuted states he cannot reliably distinguish.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .. import detect, qstate
from ..detect import HypothesisSet
from ..rng import make_generator
from . import common
from .common import ProtocolParams, ProtocolTranscript, Strategy

ANGLES = (0.0, np.pi / 2.0, np.pi / 4.0, 3.0 * np.pi / 4.0)
PARTNER = (1, 0, 3, 2)


def bb84_ket(name: int) -> np.ndarray:
    th = ANGLES[name]
    return np.array([np.cos(th), np.sin(th)], dtype=complex)


def bit_rotation(bit: int) -> np.ndarray:
    """U_0 = identity; U_1 maps every BB84 state onto its orthogonal partner."""
    if bit == 0:
        return np.eye(2, dtype=complex)
    return np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


def _product_ket(angles) -> np.ndarray:
    return qstate.tensor_all([
        np.array([np.cos(a), np.sin(a)], dtype=complex) for a in angles])


@functools.lru_cache(maxsize=None)
def qbc2_pa_detail(tol: float = 1e-9) -> tuple[float, tuple, float]:
    """Optimal identification of the secret permutation from all four qubits.

    24 equiprobable hypotheses, one product state per permutation of the
    four BB84 states over four qubits.  Returns (p_A, POVM elements,
    optimality-gap certificate).
    """
    states = []
    for perm in itertools.permutations(range(4)):
        v = _product_ket([ANGLES[name] for name in perm])
        states.append(np.outer(v, v.conj()))
    hs = HypothesisSet(np.full(24, 1.0 / 24.0), tuple(states))
    value, pom, cert = detect.optimize_mary(hs, tol=tol, max_iter=20000)
    return value, tuple(pom.elements), cert


def qbc2_pa() -> float:
    """Per-set ceiling on the committer's bit-flip success probability."""
    return qbc2_pa_detail()[0]


@functools.lru_cache(maxsize=None)
def qbc2_partner_detail() -> tuple[float, tuple, float]:
    """Optimal identification of which kept qubit partners the picked one.

    With the picked position fixed, the three kept qubits hold the three
    remaining BB84 states in secret order; hypothesis k says the picked
    state's orthogonal partner sits at kept position k.  Returns
    (q, POVM elements, certificate); the best announced lie then succeeds
    with probability 1/2 + q/2 because a wrong guess always lands on a
    conjugate-basis state.
    """
    rhos = [np.zeros((8, 8), dtype=complex) for _ in range(3)]
    counts = [0, 0, 0]
    for perm in itertools.permutations(range(4)):
        picked, kept = perm[3], perm[:3]
        k = kept.index(PARTNER[picked])
        v = _product_ket([ANGLES[name] for name in kept])
        rhos[k] += np.outer(v, v.conj())
        counts[k] += 1
    hs = HypothesisSet(np.array(counts, dtype=float) / 24.0,
                       tuple(r / c for r, c in zip(rhos, counts)))
    value, pom, cert = detect.optimize_mary(hs, tol=1e-9, max_iter=20000)
    return value, tuple(pom.elements), cert


def qbc2_name_lie_enumeration() -> float:
    """Exact flat name-lie success: average over permutations, picks, claims.

    Claiming a uniformly random wrong name hits the orthogonal partner once
    and a conjugate-basis state twice, so each set contributes
    (1 + 1/2 + 1/2)/3.
    """
    total, count = 0.0, 0
    for perm in itertools.permutations(range(4)):
        for picked in range(4):
            for claim in range(4):
                if claim == picked:
                    continue
                delta = ANGLES[perm[claim]] - ANGLES[perm[picked]]
                total += float(np.sin(delta) ** 2)
                count += 1
    return total / count


def qbc2_measured_name_lie_value() -> float:
    """Best measured name lie, 1/2 + q/2 with q from the partner POVM."""
    return 0.5 + 0.5 * qbc2_partner_detail()[0]


def qbc2_p1(angle: float) -> float:
    """Test pass probability of an all-one-angle cheating set.

    Independent of the fabricated naming because the product runs over all
    four claimed names.
    """
    return float(np.prod([np.cos(a - angle) ** 2 for a in ANGLES]))


def qbc2_p1_general(angles, claim) -> float:
    """Test pass probability of a four-angle set under a claimed naming."""
    return float(np.prod([
        np.cos(ANGLES[claim[slot]] - angles[slot]) ** 2 for slot in range(4)]))


def qbc2_bit_mixtures(angles) -> tuple[np.ndarray, np.ndarray]:
    """Receiver-side committed-qubit mixtures (rho_0, rho_1) for a known set.

    The committer picks uniformly among the four qubits of the cheating set
    and modulates by U_b, so each mixture averages the four rotated states.
    """
    out = []
    for bit in (0, 1):
        u = bit_rotation(bit)
        rho = np.zeros((2, 2), dtype=complex)
        for a in angles:
            v = u @ np.array([np.cos(a), np.sin(a)], dtype=complex)
            rho += np.outer(v, v.conj()) / 4.0
        out.append(rho)
    return out[0], out[1]


def qbc2_identification(angles, m: int) -> float:
    """Receiver's optimal bit guess from m committed qubits of one set type.

    Helstrom value on the m-fold tensor powers of the two mixtures; the
    same bit modulates every committed qubit.
    """
    rho0, rho1 = qbc2_bit_mixtures(angles)
    r0, r1 = np.ones((1, 1)), np.ones((1, 1))
    for _ in range(m):
        r0 = np.kron(r0, rho0)
        r1 = np.kron(r1, rho1)
    value, _ = detect.helstrom_binary(r0, r1, 0.5)
    return value


def _set_states(rng: np.random.Generator, babe: Strategy, n: int,
                cheat_count: int) -> tuple[list, list, list]:
    """Receiver-side preparation: (permutations, per-set kets, cheat flags)."""
    perms, kets, flags = [], [], []
    angle = float(babe.params.get("angle", np.pi / 8.0))
    for i in range(n):
        perm = [int(x) for x in rng.permutation(4)]
        perms.append(perm)
        cheating = babe.kind == "uniform-angle" and i < cheat_count
        flags.append(cheating)
        if cheating:
            kets.append([np.array([np.cos(angle), np.sin(angle)],
                                  dtype=complex) for _ in range(4)])
        else:
            kets.append([bb84_ket(name) for name in perm])
    return perms, kets, flags


def qbc2_run(params: ProtocolParams, adam: Strategy, babe: Strategy
             ) -> ProtocolTranscript:
    """One full round: prepare, test, commit, open, verify.

    Committer strategies: honest; name-lie (claim a uniformly random wrong
    name in every retained set); measured-name-lie (claim the kept position
    the partner POVM points at); permutation-guess (measure each retained
    quartet with the 24-outcome POVM, re-prepare evidence from the guess,
    and open the flipped bit via the guessed partner name; identification
    outcomes land in notes["guesses_correct"]).  Receiver strategies:
    honest; uniform-angle (first N sets carry four copies of one angle and a
    fabricated naming; params: angle, default pi/8).
    """
    if params.protocol != "qbc2":
        raise ValueError("params are not for qbc2")
    adam.check_protocol("qbc2")
    babe.check_protocol("qbc2")
    rng = make_generator(params.seed)
    n, m = params.n, params.m
    cheat_count = params.N if params.N is not None else n
    tr = ProtocolTranscript("qbc2", params.seed)

    perms, kets, flags = _set_states(rng, babe, n, cheat_count)
    tr.record("B→A", "state-sets",
              [common.ket_payload(k) for k in kets])

    retained = sorted(int(i) for i in rng.choice(n, size=m, replace=False))
    tr.record("A→B", "retain", {"sets": retained})

    revealed = [i for i in range(n) if i not in retained]
    tr.record("B→A", "reveal",
              [{"set": i, "names": perms[i]} for i in revealed])

    aborted = False
    for i in revealed:
        ok = True
        for slot in range(4):
            prob = abs(np.vdot(bb84_ket(perms[i][slot]), kets[i][slot])) ** 2
            if not common.bernoulli(rng, prob):
                ok = False
        tr.check(f"test-set-{i}", ok)
        aborted = aborted or not ok
    if aborted:
        tr.settle()
        return tr

    bit = int(adam.params.get("bit", rng.integers(0, 2)))
    tr.committed_bit = bit
    u_commit = bit_rotation(bit)
    picks = [int(rng.integers(0, 4)) for _ in retained]

    evidence = []
    guesses = []
    if adam.kind == "permutation-guess":
        _, povm, _ = qbc2_pa_detail()
        all_perms = list(itertools.permutations(range(4)))
        for idx, i in enumerate(retained):
            v = qstate.tensor_all(kets[i])
            probs = np.array([np.vdot(v, el @ v).real for el in povm])
            guess = list(all_perms[common.born_choice(rng, probs)])
            guesses.append(guess)
            evidence.append(u_commit @ bb84_ket(guess[picks[idx]]))
        tr.notes["guesses_correct"] = [g == perms[i]
                                       for g, i in zip(guesses, retained)]
        tr.notes["all_guesses_correct"] = all(tr.notes["guesses_correct"])
    else:
        for idx, i in enumerate(retained):
            evidence.append(u_commit @ kets[i][picks[idx]])
    tr.record("A→B", "evidence", common.ket_payload(evidence))

    opened_bit = bit
    claims = list(picks)
    if adam.kind == "name-lie":
        opened_bit = 1 - bit
        claims = [int((pick + 1 + rng.integers(0, 3)) % 4) for pick in picks]
    elif adam.kind == "measured-name-lie":
        opened_bit = 1 - bit
        _, povm, _ = qbc2_partner_detail()
        claims = []
        for idx, i in enumerate(retained):
            kept = [slot for slot in range(4) if slot != picks[idx]]
            v = qstate.tensor_all([kets[i][slot] for slot in kept])
            probs = np.array([np.vdot(v, el @ v).real for el in povm])
            claims.append(kept[common.born_choice(rng, probs)])
    elif adam.kind == "permutation-guess":
        opened_bit = 1 - bit
        claims = []
        for idx, guess in enumerate(guesses):
            partner_name = PARTNER[guess[picks[idx]]]
            claims.append(guess.index(partner_name))
    tr.opened_bit = opened_bit
    tr.record("A→B", "open", {"bit": opened_bit, "names": claims})

    u_open = bit_rotation(opened_bit)
    for idx, i in enumerate(retained):
        expected = u_open @ bb84_ket(perms[i][claims[idx]])
        prob = abs(np.vdot(expected, evidence[idx])) ** 2
        tr.check(f"verify-set-{i}", common.bernoulli(rng, prob))
    tr.settle()
    return tr
