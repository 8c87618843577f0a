"""Unruh acceleration as a qubit channel, composed with QND and SGAD bath noise."""
from .channels import (
    IDENTITY,
    KrausChannel,
    amplitude_damping,
    apply,
    choi,
    choi_rank,
    compose,
    dephasing,
    is_cptp,
    kraus_from_choi,
    qnd_channel,
    sgad_channel,
    unruh_channel,
)
from .fidelities import avg_gate_fidelity, avg_gate_fidelity_mc, channel_fidelity, holevo_kappa
from .measures import bell_B, concurrence, f_max, mid
from .relparams import QndBathParams, SgadBathParams, UnruhParams

__version__ = "0.1.0"

__all__ = [
    "amplitude_damping",
    "apply",
    "avg_gate_fidelity",
    "avg_gate_fidelity_mc",
    "bell_B",
    "channel_fidelity",
    "choi",
    "choi_rank",
    "compose",
    "concurrence",
    "dephasing",
    "f_max",
    "holevo_kappa",
    "IDENTITY",
    "is_cptp",
    "kraus_from_choi",
    "KrausChannel",
    "mid",
    "qnd_channel",
    "QndBathParams",
    "sgad_channel",
    "SgadBathParams",
    "unruh_channel",
    "UnruhParams",
]
