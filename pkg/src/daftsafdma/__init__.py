"""Link-level simulation of DAFT-spread affine frequency division multiple access."""

from .allocation import AllocationPlan, all_plans, demap_user, map_user, offset_phases
from .channel import (
    ChannelPath,
    ChannelRealization,
    apply_time,
    awgn,
    build_channel_matrix,
    build_effective_channel,
    sample_channel,
)
from .enums import PaprMode, Scheme, Strategy
from .errors import ConfigurationError, EqualizationError, PredictorInapplicableError, SizeError
from .metrics import (
    BerPoint,
    CcdfCurve,
    ber_accumulate,
    ccdf_estimate,
    ebn0_to_n0,
    oversampled_signal,
    papr,
    papr_at_ccdf,
    papr_db,
)
from .receiver import (
    EqualizerInput,
    TimeDomainMmse,
    daft_receive,
    despread_demap,
    mmse_equalize,
    qpsk_demod,
    receive_user,
)
from .transforms import ChirpParams, chirp_phases, daft, daft_matrix, derive_params, idaft
from .waveform import (
    Frame,
    add_cpp,
    assemble_downlink,
    build_frame,
    daf_frame,
    predict_interleaved,
    predict_localized_q0,
    qpsk_modulate,
    spread_user,
    user_signals,
)

__version__ = "0.1.0"
