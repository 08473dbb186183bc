"""Channel-coding laboratory for generalized Reed-Solomon codes and their
p-ary images: exact ML erasure decoding, LC-OSD over AWGN, random-coding
bounds, and a reproducible Monte Carlo harness."""

__version__ = "0.1.0"

from .gf import Field, field_new
from .grs import GrsCode, PAryImage, grs_new
from .channel import BecOutput, SoftOutput, bec_transmit, bpsk_awgn_transmit, pam3_awgn_transmit
from .erasure import DecodeStats, decode_bec, decode_bec_dual, order_symbols
from .lcosd import ConstraintTrellis, OsdConfig, Tep, lcosd_decode, pack_bits_to_trits
from .bounds import (
    BoundCurve,
    DmcModel,
    approx_ub_bec,
    bec_capacity,
    e0,
    ensemble_union_bound,
    er,
    mutual_information,
    rcu_bound_grs,
)
from .harness import ExperimentSpec, RunResult, TrialPolicy, compare_sources, run, table1

__all__ = [
    "Field", "field_new", "GrsCode", "PAryImage", "grs_new",
    "BecOutput", "SoftOutput", "bec_transmit", "bpsk_awgn_transmit", "pam3_awgn_transmit",
    "DecodeStats", "decode_bec", "decode_bec_dual", "order_symbols",
    "ConstraintTrellis", "OsdConfig", "Tep", "lcosd_decode", "pack_bits_to_trits",
    "BoundCurve", "DmcModel", "approx_ub_bec", "bec_capacity", "e0",
    "ensemble_union_bound", "er", "mutual_information", "rcu_bound_grs",
    "ExperimentSpec", "RunResult", "TrialPolicy", "compare_sources", "run", "table1",
]
