"""Bit-commitment protocol laboratory.

The package simulates a family of quantum bit-commitment protocols,
computes the exact detection-theoretic quantities that govern their
security (distinguishability of the two commitment ensembles, optimal
cheating probability via purification alignment), and cross-checks every
closed-form prediction against independent numerical routes.

Layout:

- `qstate`: state containers, tensor algebra, channels, serialization.
- `detect`: binary and m-ary quantum hypothesis testing.
- `cheat`: purification alignment and cheating-probability chains.
- `coherent`: two-amplitude coherent frames and the loss channel.
- `protocols`: the five protocol engines and their transcripts.
- `analysis`: security sweeps, combinatorics, parameter planning.
- `verify`: seeded invariant suites behind the `qbclab verify` command.
- `cli`: the `qbclab` entry point.
"""

from . import analysis, cheat, coherent, detect, qstate, rng, verify
from .protocols import ProtocolParams, ProtocolTranscript, Strategy, honest, run_protocol

__version__ = "0.1.0"

__all__ = [
    "analysis",
    "cheat",
    "coherent",
    "detect",
    "qstate",
    "rng",
    "verify",
    "ProtocolParams",
    "ProtocolTranscript",
    "Strategy",
    "honest",
    "run_protocol",
    "__version__",
]
