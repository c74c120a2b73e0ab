"""Protocol engines and their shared scaffolding."""

from __future__ import annotations

from .common import (Message, ProtocolParams, ProtocolTranscript, Strategy,
                     honest)
from .qbc0 import qbc0_concealment, qbc0_ensembles, qbc0_run, qbc0_states
from .qbc01 import (qbc01_ensembles, qbc01_frame, qbc01_run,
                    qbc01_verification)
from .qbc1 import (qbc1_committed_acceptance, qbc1_density, qbc1_ensembles,
                   qbc1_run, qbc1_unitaries)
from .qbc2 import (qbc2_bit_mixtures, qbc2_identification,
                   qbc2_measured_name_lie_value, qbc2_name_lie_enumeration,
                   qbc2_p1, qbc2_p1_general, qbc2_pa, qbc2_pa_detail,
                   qbc2_partner_detail, qbc2_run)
from .qbc3 import (qbc3_entangled_overlap, qbc3_entangled_report,
                   qbc3_lie_acceptance, qbc3_run)

_RUNNERS = {
    "qbc0": qbc0_run,
    "qbc01": qbc01_run,
    "qbc1": qbc1_run,
    "qbc2": qbc2_run,
    "qbc3": qbc3_run,
}


def run_protocol(params: ProtocolParams, adam: Strategy | None = None,
                 babe: Strategy | None = None, **kwargs) -> ProtocolTranscript:
    """Dispatch one run to the engine named by params.protocol."""
    adam = adam if adam is not None else honest("committer")
    babe = babe if babe is not None else honest("receiver")
    return _RUNNERS[params.protocol](params, adam, babe, **kwargs)


__all__ = [
    "Message", "ProtocolParams", "ProtocolTranscript", "Strategy", "honest",
    "run_protocol",
    "qbc0_concealment", "qbc0_ensembles", "qbc0_run", "qbc0_states",
    "qbc01_ensembles", "qbc01_frame", "qbc01_run", "qbc01_verification",
    "qbc1_committed_acceptance", "qbc1_density", "qbc1_ensembles",
    "qbc1_run", "qbc1_unitaries",
    "qbc2_bit_mixtures", "qbc2_identification",
    "qbc2_measured_name_lie_value", "qbc2_name_lie_enumeration",
    "qbc2_p1", "qbc2_p1_general", "qbc2_pa", "qbc2_pa_detail",
    "qbc2_partner_detail", "qbc2_run",
    "qbc3_entangled_overlap", "qbc3_entangled_report",
    "qbc3_lie_acceptance", "qbc3_run",
]
