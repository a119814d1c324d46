"""Round lifecycle of the CV position-verification protocol.

One round: the verifiers draw an angle theta and Gaussian values (r, r_perp),
encode them in a coherent state, and accept the prover's homodyne response
stream if the normalised squared-residual score stays below the threshold
gamma.  Both the prepare-and-measure and the entanglement-based challenge
paths are implemented, plus vectorised batch samplers for Monte Carlo use.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .measurement import heterodyne_sample, homodyne_sample
from .states import (
    GaussianState,
    apply_symplectic,
    coherent_state,
    lossy_channel,
    rotation,
    tmsv,
)

#: minimal angle set closed under +pi/2 (quadrature axes repeat modulo pi)
DEFAULT_ANGLES = (0.0, np.pi / 2.0)

GEOMETRY_TOL = 1e-12


def _closed_under_quarter_turn(angles) -> bool:
    # x_{theta+pi} is the same measurement axis as x_theta up to outcome sign,
    # so closure is checked on angles modulo pi.
    axes = np.sort(np.unique(np.round(np.mod(angles, np.pi), 9)))
    shifted = np.sort(np.unique(np.round(np.mod(np.asarray(angles) + np.pi / 2, np.pi), 9)))
    return axes.size == shifted.size and bool(np.all(np.abs(axes - shifted) < 1e-9))


@dataclass(frozen=True)
class ProtocolParams:
    """Public protocol parameters shared by verifiers and prover."""

    sigma: float = 100.0
    angle_set: tuple[float, ...] = DEFAULT_ANGLES
    n_rounds: int = 1000
    epsilon_hon: float = 1e-3
    t: float = 1.0
    u: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.sigma) or self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.sigma < 10:
            warnings.warn(
                f"sigma = {self.sigma} is small; the protocol analysis assumes sigma >> 1",
                stacklevel=2,
            )
        if len(self.angle_set) == 0:
            raise ValueError("angle_set must not be empty")
        angles = tuple(float(a) for a in self.angle_set)
        if not all(np.isfinite(a) and 0 <= a < 2 * np.pi for a in angles):
            raise ValueError("angles must be finite and lie in [0, 2 pi)")
        if not _closed_under_quarter_turn(angles):
            raise ValueError("angle_set must be closed under adding pi/2")
        object.__setattr__(self, "angle_set", angles)
        if self.n_rounds < 1:
            raise ValueError(f"n_rounds must be >= 1, got {self.n_rounds}")
        if not 0 < self.epsilon_hon < 1:
            raise ValueError(f"epsilon_hon must lie in (0, 1), got {self.epsilon_hon}")
        if not np.isfinite(self.t) or not 0 < self.t <= 1:
            raise ValueError(f"t must lie in (0, 1], got {self.t}")
        if not np.isfinite(self.u) or self.u < 0:
            raise ValueError(f"u must satisfy u >= 0, got {self.u}")


@dataclass(frozen=True)
class RoundChallenge:
    """One challenge: angle theta, target value r, and the encoded quadratures."""

    theta: float
    r: float
    r_perp: float
    x0: float
    p0: float

    def __post_init__(self):
        c, s = np.cos(self.theta), np.sin(self.theta)
        if (
            abs(self.x0 - (self.r * c + self.r_perp * s)) > GEOMETRY_TOL
            or abs(self.p0 - (self.r * s - self.r_perp * c)) > GEOMETRY_TOL
        ):
            raise ValueError("challenge quadratures are inconsistent with (theta, r, r_perp)")


def make_challenge(theta: float, r: float, r_perp: float) -> RoundChallenge:
    c, s = np.cos(theta), np.sin(theta)
    return RoundChallenge(
        theta=float(theta),
        r=float(r),
        r_perp=float(r_perp),
        x0=float(r * c + r_perp * s),
        p0=float(r * s - r_perp * c),
    )


@dataclass(frozen=True)
class RoundTranscript:
    """Prover answer for one round; on_time is the abstract timing flag."""

    response: float
    on_time: bool = True

    def __post_init__(self):
        if not np.isfinite(self.response):
            raise ValueError("response must be finite")


@dataclass(frozen=True)
class VerdictReport:
    """Verifier decision: score = mean per-round term, accepted iff score < gamma."""

    score: float
    gamma: float
    accepted: bool
    per_round_terms: np.ndarray = field(repr=False)


def draw_challenge(params: ProtocolParams, rng: np.random.Generator) -> RoundChallenge:
    """Draw theta uniformly from the angle set and (r, r_perp) i.i.d. N(0, sigma^2)."""
    theta = params.angle_set[rng.integers(len(params.angle_set))]
    r, r_perp = params.sigma * rng.standard_normal(2)
    return make_challenge(theta, r, r_perp)


def honest_prover_respond(
    challenge: RoundChallenge, params: ProtocolParams, rng: np.random.Generator
) -> RoundTranscript:
    """Honest response: homodyne the channel output along theta.

    The coherent state crosses the (t, u) channel, so the outcome is
    N(r sqrt(t), 1/2 + u).
    """
    state = coherent_state(challenge.x0, challenge.p0)
    state = lossy_channel(state, 0, params.t, params.u)
    outcome = homodyne_sample(state, 0, challenge.theta, rng)
    return RoundTranscript(response=outcome.value, on_time=True)


def ebp_draw_challenge(
    params: ProtocolParams, rng: np.random.Generator
) -> tuple[RoundChallenge, GaussianState]:
    """Entanglement-based challenge: heterodyne one half of a two-mode squeezed state.

    The squeezing is tuned to sinh(zeta) = sigma so the induced displacement
    statistics match the prepare-and-measure draw.  The verifier mode is
    rotated by -theta before the heterodyne: its p-arm estimates the phase
    conjugate quadrature, and the sign flip aligns the x-arm with the
    prover's x_theta so that outcome_1 * sqrt(2) tanh(zeta) equals r exactly.
    Returns the equivalent challenge and the conditional prover-mode state,
    which is coherent at the challenge quadratures (x0, p0).
    """
    zeta = np.arcsinh(params.sigma)
    theta = params.angle_set[rng.integers(len(params.angle_set))]
    pair = tmsv(zeta)
    pair = apply_symplectic(pair, rotation(-theta, 0, 2))
    outcome = heterodyne_sample(pair, 0, rng)
    out1, out2 = outcome.value
    scale = np.sqrt(2.0) * np.tanh(zeta)
    r = scale * out1
    r_perp = -scale * out2
    return make_challenge(theta, r, r_perp), outcome.post_state


def gamma_threshold(n: int, epsilon_hon: float) -> float:
    """Acceptance threshold from the chi-square tail bound.

    gamma = 1 + (2/sqrt(n)) sqrt(ln(1/eps)) + (2/n) ln(1/eps); the honest
    failure probability P[score >= gamma] is then at most eps.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 < epsilon_hon <= 1:
        raise ValueError(f"epsilon_hon must lie in (0, 1], got {epsilon_hon}")
    log_term = np.log(1.0 / epsilon_hon)
    return float(1.0 + 2.0 / np.sqrt(n) * np.sqrt(log_term) + 2.0 / n * log_term)


def score_terms(r: np.ndarray, responses: np.ndarray, params: ProtocolParams) -> np.ndarray:
    """Per-round score terms (response - r sqrt(t))^2 / (1/2 + u)."""
    r = np.asarray(r, dtype=float)
    responses = np.asarray(responses, dtype=float)
    return (responses - r * np.sqrt(params.t)) ** 2 / (0.5 + params.u)


def compute_verdict(challenges, transcripts, params: ProtocolParams) -> VerdictReport:
    """Score a full run of rounds and decide acceptance."""
    if len(challenges) != len(transcripts):
        raise ValueError(
            f"got {len(challenges)} challenges but {len(transcripts)} transcripts"
        )
    if len(challenges) == 0:
        raise ValueError("cannot score an empty run")
    r = np.array([c.r for c in challenges])
    responses = np.array([t.response for t in transcripts])
    terms = score_terms(r, responses, params)
    score = float(terms.mean())
    gamma = gamma_threshold(len(terms), params.epsilon_hon)
    on_time = all(t.on_time for t in transcripts)
    return VerdictReport(
        score=score,
        gamma=gamma,
        accepted=bool(score < gamma and on_time),
        per_round_terms=terms,
    )


# --- vectorised batch paths -------------------------------------------------
#
# The samplers below draw from the same outcome laws as the scalar operations
# (which run through the full Gaussian machinery) and are cross-checked
# against them in the test suite.  They exist because acceptance-scale Monte
# Carlo needs 1e7+ rounds.


@dataclass(frozen=True)
class ChallengeBatch:
    """Column arrays of n independently drawn challenges."""

    theta: np.ndarray
    r: np.ndarray
    r_perp: np.ndarray
    x0: np.ndarray
    p0: np.ndarray

    def __len__(self) -> int:
        return self.theta.size


def draw_challenge_batch(
    params: ProtocolParams, n: int, rng: np.random.Generator
) -> ChallengeBatch:
    angles = np.asarray(params.angle_set)
    theta = angles[rng.integers(len(angles), size=n)]
    r = params.sigma * rng.standard_normal(n)
    r_perp = params.sigma * rng.standard_normal(n)
    c, s = np.cos(theta), np.sin(theta)
    return ChallengeBatch(theta=theta, r=r, r_perp=r_perp, x0=r * c + r_perp * s, p0=r * s - r_perp * c)


def honest_response_batch(
    batch: ChallengeBatch, params: ProtocolParams, rng: np.random.Generator
) -> np.ndarray:
    """Honest responses for a batch: N(r sqrt(t), 1/2 + u) per round."""
    std = np.sqrt(0.5 + params.u)
    return batch.r * np.sqrt(params.t) + std * rng.standard_normal(len(batch))
