"""Continuous-variable unclonable encryption: simulator and bound calculator."""

from .gaussian import (
    GaussianState,
    HomodyneRecord,
    Quadrature,
    apply_beamsplitter,
    condition_on_homodyne,
    homodyne_sample,
    make_squeezed_coherent,
    marginal_variance,
    tensor,
    two_mode_squeezed,
    vacuum_state,
)
from .codec import (
    CodecSpec,
    OracleCodec,
    BchCodec,
    base_decrypt,
    base_encrypt,
    concrete_spec,
    make_codec,
)
from .protocol import (
    CipherState,
    ProtocolParams,
    QecmKey,
    RoundTripResult,
    decrypt,
    encrypt,
    key_gen,
    run_round_trip,
    sample_key_offset,
)
from .channel import ChannelParams, apply_channel, fiber_transmittance, noisy_ber, noisy_variance
from .bounds import (
    MonogamyParams,
    SecurityReport,
    asymptotic_margin,
    ber_analytic,
    binary_entropy,
    conjugate_coding_bound,
    dkl_binary,
    eps_df,
    figure_data,
    monogamy_bound_exact,
    monogamy_bound_relaxed,
    security_report,
    tau,
    win_prob_bound,
)
from .adversary import (
    GameOutcome,
    check_against_bound,
    decode_half,
    heterodyne_split,
    make_strategy,
    run_cloning_game,
)
from .ebprep import (
    EbChallengeRecord,
    RestrictedEprSpec,
    eb_prepare,
    eb_rejection_oracle,
    game_equivalence_test,
    sample_eb_mode,
)

__version__ = "0.1.0"
