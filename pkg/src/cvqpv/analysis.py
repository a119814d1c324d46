"""Closed-form entropy and security-bound calculators.

All entropies are reported in bits; the conversion to natural units happens
only inside the Fano estimation floor.  Large-sigma limits are exposed as
separate functions rather than baked-in approximations, so finite and
asymptotic forms can be compared explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

LOG2_E = float(np.log2(np.e))


class Region(str, Enum):
    INSECURE = "Insecure"
    SECURE = "Secure"
    UNKNOWN = "Unknown"


class InfeasibleRegimeError(ValueError):
    """Raised when the attack-rejection gap Delta is not positive."""


#: operating threshold on t/(1+2u) for the Secure label.  The proof needs the
#: ratio strictly above e/4 ~ 0.67957; the classifier applies the published
#: three-decimal value 0.680, which is slightly conservative.
SECURE_RATIO_THRESHOLD = 0.680


@dataclass(frozen=True)
class SecurityVerdict:
    """Classification of a channel point (t, u) with its supporting numbers."""

    region: Region
    entropy_gap_bits: float
    attacker_mse_floor: float
    honest_mse: float


def g_function(x: float) -> float:
    """Von Neumann entropy kernel g(x) = (x+1) log2(x+1) - x log2(x), g(0) = 0."""
    if not np.isfinite(x) or x < 0:
        raise ValueError(f"g is defined for x >= 0, got {x}")
    if x == 0:
        return 0.0
    return float((x + 1) * np.log2(x + 1) - x * np.log2(x))


def h_gaussian(variance: float) -> float:
    """Differential entropy of a Gaussian in bits: (1/2) log2(2 pi e v)."""
    if not np.isfinite(variance) or variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return float(0.5 * np.log2(2.0 * np.pi * np.e * variance))


def prover_posterior(sigma: float, t: float, u: float, r_prime: float) -> tuple[float, float]:
    """Posterior mean and variance of r given the honest response r'.

    Sigma^2 = (1/sigma^2 + t/(1/2+u))^-1 and the mean is
    (r'/sqrt(t)) / (1 + (1/2+u)/(t sigma^2)); for t sigma^2 >> 1 this tends
    to N(r'/sqrt(t), (1/2+u)/t).
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if u < 0:
        raise ValueError(f"u must satisfy u >= 0, got {u}")
    variance = 1.0 / (1.0 / sigma**2 + t / (0.5 + u))
    mean = (r_prime / np.sqrt(t)) / (1.0 + (0.5 + u) / (t * sigma**2))
    return float(mean), float(variance)


def h_prover_given_response(sigma: float, t: float, u: float) -> float:
    """Honest prover's entropy of r given the response, (1/2) log2(2 pi e Sigma^2)."""
    _, variance = prover_posterior(sigma, t, u, 0.0)
    return h_gaussian(variance)


def h_prover_given_state(sigma: float, t: float, u: float) -> float:
    """Entropy of r conditioned on the prover's quantum state, in bits.

    (1/2) log2(2 pi e sigma^2) + g(nu1/2 - 1/2) - g(nu2/2 - 1/2) with
    symplectic eigenvalues nu1 = sqrt(2 t sigma^2 + 2u + 1) and
    nu2 = 2 t sigma^2 + 2u + 1.  For sigma >> 1 at t=1, u=0 this approaches
    (1/2) log2(pi e).
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if u < 0:
        raise ValueError(f"u must satisfy u >= 0, got {u}")
    nu1 = np.sqrt(2.0 * t * sigma**2 + 2.0 * u + 1.0)
    return float(
        0.5 * np.log2(2.0 * np.pi * np.e * sigma**2)
        + g_function(0.5 * nu1 - 0.5)
        - g_function(t * sigma**2 + u)
    )


def h_prover_limit(t: float, u: float) -> float:
    """Large-sigma limit of the prover's conditional entropy: (1/2) log2(2 pi e (1/2+u)/t)."""
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if u < 0:
        raise ValueError(f"u must satisfy u >= 0, got {u}")
    return h_gaussian((0.5 + u) / t)


def attacker_entropy_floor(sigma: float) -> float:
    """Lower bound on any unentangled attacker's entropy of r, in bits.

    (1/2) log2(4 pi / (1 + sigma^-2)), from the entropic uncertainty
    relation applied to the entanglement-based protocol.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return float(0.5 * np.log2(4.0 * np.pi / (1.0 + sigma**-2)))


def attacker_entropy_floor_limit() -> float:
    """sigma -> infinity value of the attacker entropy floor: (1/2) log2(4 pi)."""
    return float(0.5 * np.log2(4.0 * np.pi))


def fano_mse_floor(h_bits: float) -> float:
    """Estimation floor E[(X - X~)^2] >= exp(2 h_nats) / (2 pi e).

    Exact (with equality) when X given the side information is Gaussian and
    the estimator is its mean.  Input entropy is in bits.
    """
    if not np.isfinite(h_bits):
        raise ValueError(f"entropy must be finite, got {h_bits}")
    h_nats = h_bits / LOG2_E
    return float(np.exp(2.0 * h_nats) / (2.0 * np.pi * np.e))


def attacker_mse_floor(sigma: float) -> float:
    """Squared-error floor for unentangled attackers: (2/e) / (1 + sigma^-2)."""
    return fano_mse_floor(attacker_entropy_floor(sigma))


def entropy_gap(t: float, u: float) -> float:
    """Large-sigma entropy gap attacker minus honest: (1/2) log2(4 t / (e (1 + 2u)))."""
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if u < 0:
        raise ValueError(f"u must satisfy u >= 0, got {u}")
    return float(0.5 * np.log2(4.0 * t / (np.e * (1.0 + 2.0 * u))))


def security_region(t: float, u: float) -> SecurityVerdict:
    """Classify a channel point.

    Secure when t/(1+2u) strictly exceeds the operating threshold (which
    implies a positive entropy gap); insecure for t <= 1/2 where a known
    attack exists; the remaining band is open.
    """
    gap = entropy_gap(t, u)
    if t / (1.0 + 2.0 * u) > SECURE_RATIO_THRESHOLD:
        region = Region.SECURE
    elif t <= 0.5:
        region = Region.INSECURE
    else:
        region = Region.UNKNOWN
    return SecurityVerdict(
        region=region,
        entropy_gap_bits=gap,
        attacker_mse_floor=2.0 / np.e,
        honest_mse=(0.5 + u) / t,
    )


def rounds_for_attack_rejection(
    t: float,
    u: float,
    epsilon_att: float,
    gamma: float,
    variance_proxy: float = 1.0,
) -> int:
    """Round count making the attack-acceptance probability O(epsilon_att).

    Chebyshev on the score with gap Delta = (2/e)/(1/2+u) - gamma requires
    n Delta^2 >= variance_proxy / epsilon_att.  The score variance is attack
    dependent and not pinned down analytically, hence the explicit proxy
    (default 1).
    """
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")
    if u < 0:
        raise ValueError(f"u must satisfy u >= 0, got {u}")
    if not 0 < epsilon_att < 1:
        raise ValueError(f"epsilon_att must lie in (0, 1), got {epsilon_att}")
    if variance_proxy <= 0:
        raise ValueError(f"variance_proxy must be positive, got {variance_proxy}")
    delta = (2.0 / np.e) / (0.5 + u) - gamma
    if delta <= 0:
        raise InfeasibleRegimeError(
            f"attack-rejection gap is not positive (Delta = {delta:.6g}); "
            f"requires u < 2/e - 1/2 ~ 0.2358 at gamma ~ 1"
        )
    return int(np.ceil(variance_proxy / (epsilon_att * delta**2)))
