"""Simulator and analysis toolkit for continuous-variable quantum position verification."""

from .analysis import (
    InfeasibleRegimeError,
    Region,
    SecurityVerdict,
    attacker_entropy_floor,
    attacker_mse_floor,
    entropy_gap,
    fano_mse_floor,
    g_function,
    h_gaussian,
    h_prover_given_response,
    h_prover_given_state,
    h_prover_limit,
    prover_posterior,
    rounds_for_attack_rejection,
    security_region,
)
from .attacks import (
    AttackKind,
    AttackStrategy,
    AttackerView,
    attack_response,
    epr_attack,
    guessed_angle_attack,
    heterodyne_attack,
    splitting_attack,
    verify_splitting_constraints,
)
from .harness import ExperimentConfig, ExperimentReport, run_experiment, stream, sweep_security_grid
from .measurement import (
    DegenerateMeasurementError,
    MeasurementOutcome,
    heterodyne_sample,
    homodyne_sample,
    homodyne_stats,
)
from .protocol import (
    ProtocolParams,
    RoundChallenge,
    RoundTranscript,
    VerdictReport,
    compute_verdict,
    draw_challenge,
    ebp_draw_challenge,
    gamma_threshold,
    honest_prover_respond,
    make_challenge,
)
from .states import (
    GaussianState,
    SymplecticTransform,
    apply_symplectic,
    beamsplitter,
    coherent_state,
    lossy_channel,
    rotation,
    symplectic_eigenvalue_single_mode,
    symplectic_form,
    tensor,
    tmsv,
    vacuum_state,
)

__version__ = "0.1.0"
