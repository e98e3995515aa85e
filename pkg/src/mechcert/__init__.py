"""Mechanistic-information certificates for hybrid priors in sequential dosing.

Closed-form channel-capacity and regret certificates, two-level prior
construction, burn-in and distribution-shift bounds, and the seeded
Monte Carlo bandit experiments that validate them.
"""

from .certificates import (
    CalibrationParams,
    CertificateReport,
    Regime,
    UnreachableTarget,
    canonical_sigma_f2,
    certificate_report,
    channel_capacity,
    classify_regime,
    critical_bias,
    lb_envelope,
    occupancy_bias,
    participation_ratio,
    residual_entropy,
    sample_complexity_ratio,
    solve_bias_for_capacity,
    steady_state_sensitivity,
    ub_envelope,
)
from .prior import (
    JointDistribution,
    TwoLevelPrior,
    conditional_entropy,
    joint_from_channel,
    kl_divergence,
    mutual_information,
    solve_prior_for_r_mech,
    two_level_channel,
    two_level_entropy,
)
from .burnin import BurnInParams, BurnInResult, binary_kl, burn_in_lower_bound, effective_prior_weight
from .shift import (
    ImpossibilityReport,
    Retention,
    ShiftReport,
    check_retention,
    impossibility_construction,
    r_min,
    retention_threshold,
    verify_impossibility,
)
from .sim import (
    BanditEnvironment,
    ExperimentConfig,
    RegretSummary,
    build_environment,
    run_monte_carlo,
    run_trial,
    table1_experiment,
    table2_experiment,
)
from .sweep import SweepSpec, k_sweep, linear_grid, sweep_1d, sweep_2d

__version__ = "0.1.0"
