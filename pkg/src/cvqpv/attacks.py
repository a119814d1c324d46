"""Attack strategies for two colluding adversaries without (or with) entanglement.

Each attack sees only an AttackerView: the intercepted flying state and,
after one round of simultaneous communication, the measurement angle theta.
The challenge values (r, r_perp, x0, p0) are never exposed.  Unentangled
attackers respond with the posterior-mean estimate of r scaled by sqrt(t),
which minimises their expected score term; the teleportation attack also
adds the channel's excess noise so its responses emulate an honest prover.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .measurement import heterodyne_sample, homodyne_sample
from .protocol import ChallengeBatch, ProtocolParams
from .states import GaussianState, apply_symplectic, beamsplitter, tensor, tmsv, vacuum_state


class AttackKind(Enum):
    HETERODYNE = "heterodyne"
    SPLITTING = "splitting"
    GUESSED_ANGLE = "guessed-angle"
    EPR_TELEPORT = "epr"


@dataclass(frozen=True)
class AttackStrategy:
    """Which attack to run, with its internal parameters.

    zeta_epr is the finite squeezing of the pre-shared pair standing in for
    the ideal EPR state (response noise excess decays as exp(-2 zeta)).
    literal_epr_correction switches the teleportation correction to the
    uncompensated r' = mu - d_x cos(theta) - d_p sin(theta) variant, kept
    only for comparison; it does not reproduce honest statistics.
    """

    kind: AttackKind
    zeta_epr: float = 6.0
    literal_epr_correction: bool = False

    def __post_init__(self):
        if self.kind is AttackKind.EPR_TELEPORT and not self.zeta_epr > 0:
            raise ValueError(f"zeta_epr must be positive, got {self.zeta_epr}")


@dataclass(frozen=True)
class AttackerView:
    """Exactly the information available to the attackers in one round."""

    intercepted_state: GaussianState
    theta: float


def _posterior_gain(sigma: float) -> float:
    # posterior mean coefficient sigma^2 / (1 + sigma^2), shared by the
    # heterodyne and splitting estimators
    return sigma**2 / (1.0 + sigma**2)


def _emulate_channel(value: float, params: ProtocolParams, rng: np.random.Generator) -> float:
    scaled = value * np.sqrt(params.t)
    if params.u > 0:
        scaled += np.sqrt(params.u) * rng.standard_normal()
    return float(scaled)


def heterodyne_attack(
    view: AttackerView, params: ProtocolParams, rng: np.random.Generator
) -> float:
    """Alice heterodynes the intercepted state; both report the posterior mean.

    Raw outcomes (x', p') are centred on (x0/sqrt(2), -p0/sqrt(2)), so the
    quadrature estimators are x~ = x' sqrt(2) g and p~ = -p' sqrt(2) g with
    g = sigma^2/(1+sigma^2), and the response is x~ cos(theta) + p~ sin(theta).
    """
    if view.intercepted_state.mode_count != 1:
        raise ValueError("heterodyne attack expects a single-mode intercepted state")
    x_out, p_out = heterodyne_sample(view.intercepted_state, 0, rng).value
    gain = np.sqrt(2.0) * _posterior_gain(params.sigma)
    estimate = gain * (x_out * np.cos(view.theta) - p_out * np.sin(view.theta))
    return _emulate_channel(estimate, params, rng)


def splitting_attack_arms(
    view: AttackerView, params: ProtocolParams, rng: np.random.Generator
) -> tuple[float, float]:
    """Both arm outcomes of the splitting attack, Bob's sign already compensated.

    The intercepted state is mixed with vacuum on a balanced beamsplitter;
    Alice keeps output 1, Bob receives output 2 (which carries the
    beamsplitter minus sign and so he negates his homodyne outcome).  Each
    arm outcome is distributed N(r/sqrt(2), 1/2), and the two arms are
    independent for a coherent input.
    """
    if view.intercepted_state.mode_count != 1:
        raise ValueError("splitting attack expects a single-mode intercepted state")
    mixed = apply_symplectic(
        tensor(view.intercepted_state, vacuum_state(1)), beamsplitter(0.5)
    )
    alice = homodyne_sample(mixed, 0, view.theta, rng)
    bob = homodyne_sample(alice.post_state, 0, view.theta, rng)
    return alice.value, -bob.value


def splitting_attack(
    view: AttackerView, params: ProtocolParams, rng: np.random.Generator
) -> float:
    """Splitting attack response: the posterior-mean estimate from Alice's arm.

    The posterior for r given an arm outcome is identical to the heterodyne
    attack's, so each attacker reports sqrt(2) g u with its own arm outcome;
    Bob's report follows the same law as the returned value.
    """
    u_alice, _ = splitting_attack_arms(view, params, rng)
    estimate = np.sqrt(2.0) * _posterior_gain(params.sigma) * u_alice
    return _emulate_channel(estimate, params, rng)


def guessed_angle_attack(
    view: AttackerView, params: ProtocolParams, rng: np.random.Generator
) -> float:
    """Homodyne under a random angle phi drawn before theta is known.

    The posterior mean given outcome m is
    m cos(phi - theta) sigma^2 / (1/2 + sigma^2).
    """
    if view.intercepted_state.mode_count != 1:
        raise ValueError("guessed-angle attack expects a single-mode intercepted state")
    phi = rng.uniform(0.0, 2.0 * np.pi)
    m = homodyne_sample(view.intercepted_state, 0, phi, rng).value
    estimate = m * np.cos(phi - view.theta) * params.sigma**2 / (0.5 + params.sigma**2)
    return _emulate_channel(estimate, params, rng)


def epr_attack(
    view: AttackerView,
    params: ProtocolParams,
    strategy: AttackStrategy,
    rng: np.random.Generator,
) -> float:
    """Teleport the intercepted state to Bob through a pre-shared squeezed pair.

    Alice Bell-measures the state against her half: balanced beamsplitter,
    then x on the minus arm and p on the plus arm, giving (d_x, d_p).  Bob's
    half becomes the input state displaced by (sqrt(2) d_x, -sqrt(2) d_p)
    (exactly, in the infinite-squeezing limit).  Bob homodynes at theta and
    both correct the displacement classically:
    r' = mu - sqrt(2) d_x cos(theta) + sqrt(2) d_p sin(theta).
    """
    if strategy.kind is not AttackKind.EPR_TELEPORT:
        raise ValueError(f"strategy kind must be EPR_TELEPORT, got {strategy.kind}")
    if view.intercepted_state.mode_count != 1:
        raise ValueError("teleportation attack expects a single-mode intercepted state")
    joint = tensor(view.intercepted_state, tmsv(strategy.zeta_epr))
    mixed = apply_symplectic(joint, beamsplitter(0.5), modes=(0, 1))
    # minus arm is output 2 (mode index 1): x there, p on the plus arm
    bell_x = homodyne_sample(mixed, 1, 0.0, rng)
    d_x = bell_x.value
    bell_p = homodyne_sample(bell_x.post_state, 0, np.pi / 2.0, rng)
    d_p = bell_p.value
    mu = homodyne_sample(bell_p.post_state, 0, view.theta, rng).value
    c, s = np.cos(view.theta), np.sin(view.theta)
    if strategy.literal_epr_correction:
        response = mu - d_x * c - d_p * s
    else:
        response = mu - np.sqrt(2.0) * d_x * c + np.sqrt(2.0) * d_p * s
    return _emulate_channel(response, params, rng)


def attack_response(
    view: AttackerView,
    params: ProtocolParams,
    strategy: AttackStrategy,
    rng: np.random.Generator,
) -> float:
    """Dispatch one round of the configured attack."""
    if strategy.kind is AttackKind.HETERODYNE:
        return heterodyne_attack(view, params, rng)
    if strategy.kind is AttackKind.SPLITTING:
        return splitting_attack(view, params, rng)
    if strategy.kind is AttackKind.GUESSED_ANGLE:
        return guessed_angle_attack(view, params, rng)
    return epr_attack(view, params, strategy, rng)


def verify_splitting_constraints(transmittance: float, d2, probe_blocks=(1.0, 2.0)) -> bool:
    """Check the equal-mean and equal-variance conditions for a splitting attack.

    Evaluates, for generic isotropic covariance blocks gamma_1 != gamma_2 and
    a generic set of signal displacements, whether both beamsplitter outputs
    have equal variances and equal mean magnitudes.  Both hold simultaneously
    only for transmittance 1/2 and zero ancilla displacement.
    """
    t = float(transmittance)
    if not 0 < t < 1:
        raise ValueError(f"transmittance must lie in (0, 1), got {transmittance}")
    d2 = np.asarray(d2, dtype=float).reshape(-1)
    if d2.size != 2:
        raise ValueError("ancilla displacement must have two components")
    g1, g2 = probe_blocks
    # variance coefficients of the two output modes in the post-splitter
    # Wigner exponent: T g2 + (1-T) g1 versus T g1 + (1-T) g2
    variance_gap = (2.0 * t - 1.0) * (g2 - g1)
    if abs(variance_gap) > 1e-12:
        return False
    a, b = np.sqrt(t), np.sqrt(1.0 - t)
    for d1 in (np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0])):
        out1 = a * d1 + b * d2
        out2 = -b * d1 + a * d2
        if abs(out1 @ out1 - out2 @ out2) > 1e-12:
            return False
    return True


# --- vectorised batch paths -------------------------------------------------
#
# Closed-form samplers of the same response laws as the scalar attacks above;
# the test suite checks the two routes agree in distribution.


def _emulate_channel_batch(
    values: np.ndarray, params: ProtocolParams, rng: np.random.Generator
) -> np.ndarray:
    scaled = values * np.sqrt(params.t)
    if params.u > 0:
        scaled = scaled + np.sqrt(params.u) * rng.standard_normal(values.size)
    return scaled


def heterodyne_attack_batch(
    batch: ChallengeBatch, params: ProtocolParams, rng: np.random.Generator
) -> np.ndarray:
    n = len(batch)
    root_half = np.sqrt(0.5)
    x_out = batch.x0 / np.sqrt(2.0) + root_half * rng.standard_normal(n)
    p_out = -batch.p0 / np.sqrt(2.0) + root_half * rng.standard_normal(n)
    gain = np.sqrt(2.0) * _posterior_gain(params.sigma)
    estimate = gain * (x_out * np.cos(batch.theta) - p_out * np.sin(batch.theta))
    return _emulate_channel_batch(estimate, params, rng)


def splitting_attack_batch(
    batch: ChallengeBatch, params: ProtocolParams, rng: np.random.Generator
) -> np.ndarray:
    n = len(batch)
    u_alice = batch.r / np.sqrt(2.0) + np.sqrt(0.5) * rng.standard_normal(n)
    estimate = np.sqrt(2.0) * _posterior_gain(params.sigma) * u_alice
    return _emulate_channel_batch(estimate, params, rng)


def guessed_angle_attack_batch(
    batch: ChallengeBatch, params: ProtocolParams, rng: np.random.Generator
) -> np.ndarray:
    n = len(batch)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    m = (
        batch.x0 * np.cos(phi)
        + batch.p0 * np.sin(phi)
        + np.sqrt(0.5) * rng.standard_normal(n)
    )
    estimate = m * np.cos(phi - batch.theta) * params.sigma**2 / (0.5 + params.sigma**2)
    return _emulate_channel_batch(estimate, params, rng)


def epr_attack_batch(
    batch: ChallengeBatch,
    params: ProtocolParams,
    strategy: AttackStrategy,
    rng: np.random.Generator,
) -> np.ndarray:
    n = len(batch)
    zeta = strategy.zeta_epr
    tanh = np.tanh(zeta)
    bell_std = np.cosh(zeta) / np.sqrt(2.0)
    d_x = -batch.x0 / np.sqrt(2.0) + bell_std * rng.standard_normal(n)
    d_p = batch.p0 / np.sqrt(2.0) + bell_std * rng.standard_normal(n)
    c, s = np.cos(batch.theta), np.sin(batch.theta)
    bob_mean = (
        tanh * (batch.x0 * c + batch.p0 * s)
        + np.sqrt(2.0) * tanh * (d_x * c - d_p * s)
    )
    mu = bob_mean + np.sqrt(0.5) * rng.standard_normal(n)
    if strategy.literal_epr_correction:
        response = mu - d_x * c - d_p * s
    else:
        response = mu - np.sqrt(2.0) * d_x * c + np.sqrt(2.0) * d_p * s
    return _emulate_channel_batch(response, params, rng)


def attack_response_batch(
    batch: ChallengeBatch,
    params: ProtocolParams,
    strategy: AttackStrategy,
    rng: np.random.Generator,
) -> np.ndarray:
    if strategy.kind is AttackKind.HETERODYNE:
        return heterodyne_attack_batch(batch, params, rng)
    if strategy.kind is AttackKind.SPLITTING:
        return splitting_attack_batch(batch, params, rng)
    if strategy.kind is AttackKind.GUESSED_ANGLE:
        return guessed_angle_attack_batch(batch, params, rng)
    return epr_attack_batch(batch, params, strategy, rng)
