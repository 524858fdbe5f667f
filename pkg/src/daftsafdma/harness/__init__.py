"""Configuration, Monte Carlo drivers and output writers."""

from .config import SimConfig, parse_config
from .experiments import BerResult, PaprResult, run_ber_experiment, run_papr_experiment
from .output import BER_HEADER, CCDF_HEADER, emit_outputs
from .rng import RngStream

__all__ = [
    "SimConfig",
    "parse_config",
    "RngStream",
    "PaprResult",
    "BerResult",
    "run_papr_experiment",
    "run_ber_experiment",
    "emit_outputs",
    "CCDF_HEADER",
    "BER_HEADER",
]
