"""Cell-free massive MIMO downlink simulator with beamformed downlink training.

Layers, bottom up: geometry (placement, path loss, shadowing, fading),
estimation (uplink/downlink MMSE chain and its closed-form moments), rates
(achievable-rate bounds), pilots (books and joint assignment), powerctl
(CD-FPT and max-min SCA/SOCP power control), clusters (user-centric AP
selection), harness (experiments, CDFs, emission), cli.
"""

from .config import ScenarioConfig
from .geometry import (
    LargeScaleState,
    Placement,
    ThreeSlopeParams,
    draw_small_scale,
    large_scale,
    path_loss_db,
    place_uniform,
    shadowing,
    snr_normalize,
    wrap_distance,
)
from .estimation import (
    DownlinkMoments,
    downlink_moments,
    downlink_receive_project,
    effective_gains,
    estimate_a,
    estimate_uplink,
    mmse_uplink,
    uplink_receive_project,
)
from .pilots import (
    PairPool,
    PilotBook,
    PilotPlan,
    SnrParams,
    advanced_greedy_assign,
    baseline_assign,
    greedy_assign,
    make_book,
    make_pair_pool,
    orthogonal_plan,
    validate_plan,
)
from .rates import (
    RateInputs,
    net_rate,
    rate_cf,
    rate_noncoherent_lb,
    rate_scsi,
    rate_ub,
    rate_unf_mc,
)
from .powerctl import (
    MaxMinData,
    MaxMinResult,
    PowerCoefficients,
    PowerControlError,
    SocpFeasibilityProblem,
    SolveOutcome,
    bisection_maxmin,
    bisection_maxmin_scsi,
    build_feasibility,
    cd_fpt,
    check_power,
    solve_feasibility,
)
from .clusters import ServingClusters, mask_power, select_largest_lsf
from .harness import (
    CdfSummary,
    ExperimentSpec,
    compute_cdf,
    emit,
    run_experiment,
    substream,
    sweep_pilot_lengths,
)

__version__ = "0.1.0"
