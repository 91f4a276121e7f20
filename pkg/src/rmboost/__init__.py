"""Desk-scale laboratory for Reed-Muller codes on binary symmetric channels.

Exact bitwise-MAP decoding with true-tie accounting, subspace-sunflower
majority boosting, list-decoding reconstruction, biased Fourier-Walsh
spectra of error functions, and the closed-form bounds tying them
together, all at sizes where everything can be enumerated and checked.
"""

from .bounds import (
    BoundReport,
    base_case_margin,
    bhattacharyya,
    boost_step_bound,
    capacity_gap,
    conditional_tail_bound,
    list_error_log_bound,
    rate,
    weight_enum_log_bound,
)
from .channels import (
    BmsChannel,
    BmsObservation,
    binary_entropy,
    bms_transmit,
    bsc,
    bsc_transmit,
    capacity,
    format_channel,
    noise_weights,
    parse_channel,
    quantize,
)
from .decoders import (
    BitDecision,
    ErrorEstimate,
    bit_map_full,
    block_ml,
    bms_exit_bit_map,
    bms_exit_error,
    conditional_error,
    conditional_table,
    exit_bit_map,
    exit_error,
    full_bit_error,
    q_table,
    wilson_interval,
)
from .errors import FeasibilityError, ParameterError
from .fourier_lab import (
    FourierTable,
    biased_inner,
    chi,
    inverse_transform,
    l4_bound,
    l4_orbit_moment,
    orbit_containment_probability,
    orbit_symmetry_check,
    restriction_identity_check,
    subset_dim,
    subset_orbit,
    transform,
)
from .reconstruct import (
    CandidateList,
    ReconstructResult,
    bitwise_decode,
    grid_radius,
    list_within,
    reconstruction_radius,
    rm_reconstruct,
    rm_reconstruct_grid,
)
from .rm_core import (
    CoeffVector,
    RmCode,
    Subspace,
    Word,
    apply_linear,
    binom_le,
    codebook,
    encode,
    invertible_matrices,
    is_codeword,
    min_distance,
    mobius,
    monomials,
    random_codeword,
    restrict_to_slice,
    restrict_to_subspace,
)
from .sunflower import (
    Sunflower,
    boost_decode_bit,
    boost_schedule_decode,
    build_sunflower,
    l2_boost_bound,
    verify_sunflower,
)

__version__ = "0.1.0"
