"""Shared protocol scaffolding: parameters, strategies, transcripts.

Every protocol engine consumes one `ProtocolParams`, one `Strategy` per
party, and a seed-derived generator, and emits a `ProtocolTranscript` whose
JSON-lines form is bit-identical across repeat runs with the same inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .. import qstate

PROTOCOL_FIELDS = {
    "qbc0": {"n", "overlap"},
    "qbc01": {"n", "overlap", "eta"},
    "qbc1": {"n", "overlap"},
    "qbc2": {"n", "m", "N"},
    "qbc3": {"n", "N", "overlap"},
}

OPTIONAL_FIELDS = {
    "qbc2": {"N"},
}

STRATEGY_KINDS = {
    "honest": {"qbc0", "qbc01", "qbc1", "qbc2", "qbc3"},
    "qubit-lie": {"qbc0", "qbc1", "qbc3"},
    "name-lie": {"qbc2"},
    "measured-name-lie": {"qbc2"},
    "permutation-guess": {"qbc2"},
    "uniform-angle": {"qbc2"},
    "matched-uhlmann": {"qbc1"},
    "mismatched-uhlmann": {"qbc1"},
    "uhlmann-cheat": {"qbc0", "qbc01"},
    "no-measurement-cheat": {"qbc3"},
}

COMMITTER_KINDS = {"honest", "qubit-lie", "name-lie", "measured-name-lie",
                   "permutation-guess", "matched-uhlmann",
                   "mismatched-uhlmann", "uhlmann-cheat",
                   "no-measurement-cheat"}
RECEIVER_KINDS = {"honest", "uniform-angle"}

STRATEGY_PARAM_KEYS = {
    "qubit-lie": {"position"},
    "mismatched-uhlmann": {"plan_seed"},
    "uniform-angle": {"angle"},
}


@dataclass(frozen=True)
class ProtocolParams:
    """One protocol run's public parameters.

    Fields irrelevant to the chosen protocol must stay None; each engine
    reads only its own set (`n` qubits/modes/sets, `m` retained sets, `N`
    checked positions or cheating-set count, `overlap` the two-state inner
    product or rotation cosine, `eta` the channel transmissivity).
    """

    protocol: str
    n: int
    seed: int
    m: int | None = None
    N: int | None = None
    overlap: float | None = None
    eta: float | None = None

    def __post_init__(self):
        if self.protocol not in PROTOCOL_FIELDS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        wanted = PROTOCOL_FIELDS[self.protocol]
        optional = OPTIONAL_FIELDS.get(self.protocol, set())
        for name in ("n", "m", "N", "overlap", "eta"):
            value = getattr(self, name)
            if name in wanted:
                if value is None and name not in optional:
                    raise ValueError(
                        f"{self.protocol} requires parameter {name!r}")
            elif value is not None:
                raise ValueError(
                    f"parameter {name!r} is not used by {self.protocol}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.m is not None and not 0 < self.m <= self.n:
            raise ValueError("m must lie in [1, n]")
        if self.N is not None and not 0 <= self.N <= self.n:
            raise ValueError("N must lie in [0, n]")
        if self.overlap is not None and not 0.0 <= self.overlap <= 1.0:
            raise ValueError("overlap must lie in [0, 1]")
        if self.eta is not None and not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")


@dataclass(frozen=True)
class Strategy:
    """Named behaviour of one party; params hold kind-specific knobs."""

    role: str
    kind: str = "honest"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.role not in ("committer", "receiver"):
            raise ValueError(f"unknown role {self.role!r}")
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        allowed = COMMITTER_KINDS if self.role == "committer" else RECEIVER_KINDS
        if self.kind not in allowed:
            raise ValueError(f"strategy {self.kind!r} is not a {self.role} strategy")
        known = STRATEGY_PARAM_KEYS.get(self.kind, set())
        if self.role == "committer":
            known = known | {"bit"}
        for key in self.params:
            if key not in known:
                raise ValueError(
                    f"strategy {self.kind!r} does not take parameter {key!r}")

    def check_protocol(self, protocol: str) -> None:
        if protocol not in STRATEGY_KINDS[self.kind]:
            raise ValueError(
                f"strategy {self.kind!r} does not apply to {protocol}")


def honest(role: str) -> Strategy:
    return Strategy(role, "honest")


@dataclass(frozen=True)
class Message:
    """One transmission; payload is JSON-ready (classical data or states)."""

    direction: str
    kind: str
    payload: object

    def __post_init__(self):
        if self.direction not in ("A→B", "B→A"):
            raise ValueError("direction must be A→B or B→A")


@dataclass
class ProtocolTranscript:
    """Ordered messages plus the commitment outcome of one run.

    `verdict` is "accept" only when every recorded check passed; runs aborted
    before commitment carry committed_bit/opened_bit None with verdict
    "reject".
    """

    protocol: str
    seed: int
    messages: list[Message] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    committed_bit: int | None = None
    opened_bit: int | None = None
    verdict: str = "reject"
    notes: dict = field(default_factory=dict)

    def record(self, direction: str, kind: str, payload: object) -> None:
        self.messages.append(Message(direction, kind, payload))

    def check(self, name: str, passed: bool, **extra) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        entry.update(extra)
        self.checks.append(entry)
        return bool(passed)

    def settle(self) -> None:
        """Set the verdict from the recorded checks."""
        self.verdict = "accept" if all(c["passed"] for c in self.checks) else "reject"

    def validate(self) -> None:
        if self.verdict == "accept" and any(not c["passed"] for c in self.checks):
            raise ValueError("accept verdict with a failed check")

    def to_json_lines(self) -> list[str]:
        self.validate()
        lines = []
        for msg in self.messages:
            lines.append(_dump({"dir": msg.direction, "kind": msg.kind,
                                "payload": msg.payload}))
        summary = {
            "protocol": self.protocol,
            "seed": self.seed,
            "committed_bit": self.committed_bit,
            "opened_bit": self.opened_bit,
            "checks": self.checks,
            "verdict": self.verdict,
        }
        if self.notes:
            summary["notes"] = self.notes
        lines.append(_dump(summary))
        return lines

    def render(self) -> str:
        return "\n".join(self.to_json_lines()) + "\n"


def _dump(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "),
                      ensure_ascii=False)


def ket_payload(kets) -> list[dict]:
    """qstate-v1 payload for a list of kets."""
    return [qstate.to_json(np.asarray(k, dtype=complex)) for k in kets]


def overlap_pair(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Real qubit pair (phi, phi') with <phi|phi'> = t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("overlap must lie in [0, 1]")
    phi = np.array([1.0, 0.0], dtype=complex)
    phi_p = np.array([t, np.sqrt(1.0 - t * t)], dtype=complex)
    return phi, phi_p


def parity(bits) -> int:
    out = 0
    for b in bits:
        out ^= int(b)
    return out


def sequences_of_parity(n: int, wanted: int) -> list[tuple[int, ...]]:
    """All n-bit sequences of the given parity, in ascending binary order."""
    out = []
    for j in range(2 ** n):
        bits = tuple((j >> (n - 1 - l)) & 1 for l in range(n))
        if parity(bits) == wanted:
            out.append(bits)
    return out


def random_parity_sequence(rng: np.random.Generator, n: int, bit: int
                           ) -> tuple[int, ...]:
    """Uniform parity-`bit` sequence: n-1 free bits plus the fixing bit."""
    free = [int(x) for x in rng.integers(0, 2, size=n - 1)] if n > 1 else []
    last = (bit - parity(free)) % 2
    return tuple(free + [last])


def bernoulli(rng: np.random.Generator, prob: float) -> bool:
    """One draw with success probability clipped to [0, 1]."""
    return bool(rng.random() < min(max(prob, 0.0), 1.0))


def born_choice(rng: np.random.Generator, probs: np.ndarray) -> int:
    """Sample an index from a probability vector, tolerating float dust."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    total = p.sum()
    if not 0.9 < total < 1.1:
        raise ValueError(f"outcome probabilities sum to {total}")
    return int(rng.choice(len(p), p=p / total))
