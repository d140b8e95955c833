"""Non-diagonal (permuted) RIS phase-shift architecture toolkit."""

__version__ = "0.1.0"

from .channel import (ChannelRealization, FadingParams, Geometry,
                      apply_correlation, corrupt_csi, sample_channels,
                      steering_ula, steering_urpa, trial_rng)
from .phase_design import (BeamformingSolution, NonDiagonalPhase, alt_opt_miso,
                           baseline_gains, build_phi, channel_gain,
                           diag_phases_siso, mu_permutations, nondiag_siso,
                           sort_permutations, two_stage_mimo, water_filling)
from .sdp import (SdpNonConvergence, SdpProblem, brute_force_phases, recover_q,
                  solve_unit_diag_sdp)

__all__ = [
    "BeamformingSolution", "ChannelRealization", "FadingParams", "Geometry",
    "NonDiagonalPhase", "SdpNonConvergence", "SdpProblem", "alt_opt_miso",
    "apply_correlation", "baseline_gains", "brute_force_phases", "build_phi",
    "channel_gain", "corrupt_csi", "diag_phases_siso", "mu_permutations",
    "nondiag_siso", "recover_q", "sample_channels", "solve_unit_diag_sdp",
    "sort_permutations", "steering_ula", "steering_urpa", "trial_rng",
    "two_stage_mimo", "water_filling",
]
