"""Homodyne and heterodyne sampling with exact Gaussian conditioning.

Outcome distributions are the (rotated) marginals of the Wigner function,
so sampling variances are covariance entries divided by 2.  After a
measurement the unmeasured modes collapse to the classical Gaussian
conditional on the observed value (Schur complement update), which for
homodyne detection of Gaussian states is the exact quantum post-state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import GaussianState, apply_symplectic, beamsplitter, tensor, vacuum_state

#: below this outcome variance the conditional update switches to its
#: pseudo-inverse form (zero gain), protecting the infinitely squeezed limit
DEGENERACY_FLOOR = 1e-12


class DegenerateMeasurementError(ValueError):
    """Raised when a measured quadrature has non-positive variance."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """Measured value(s) plus the conditional state of the remaining modes.

    `value` is a float for homodyne and an (x, p) pair for heterodyne.
    `post_state` is None when no modes remain.
    """

    value: float | tuple[float, float]
    post_state: GaussianState | None


def homodyne_stats(state: GaussianState, mode: int, theta: float) -> tuple[float, float]:
    """Mean and variance of the homodyne outcome along x_theta of one mode.

    mean = d_x cos(theta) + d_p sin(theta); variance is the (1,1) entry of
    the rotated covariance block divided by 2.
    """
    d = state.mode_displacement(mode)
    block = state.mode_block(mode)
    c, s = np.cos(theta), np.sin(theta)
    axis = np.array([c, s])
    mean = float(axis @ d)
    variance = float(axis @ block @ axis) / 2.0
    return mean, variance


def _condition_on_quadrature(
    state: GaussianState, mode: int, theta: float, outcome: float
) -> GaussianState | None:
    """Conditional state of the remaining modes after observing x_theta = outcome."""
    n = state.displacement.size
    axis = np.zeros(n)
    axis[2 * mode] = np.cos(theta)
    axis[2 * mode + 1] = np.sin(theta)
    sigma = state.covariance / 2.0
    variance = float(axis @ sigma @ axis)
    if variance <= 0:
        raise DegenerateMeasurementError(
            f"measured quadrature has non-positive variance {variance:.3e}"
        )
    mean = float(axis @ state.displacement)
    keep = np.array([i for i in range(n) if i not in (2 * mode, 2 * mode + 1)])
    if keep.size == 0:
        return None
    cross = sigma @ axis
    if variance < DEGENERACY_FLOOR:
        gain = np.zeros(n)
    else:
        gain = cross / variance
    d_new = state.displacement + gain * (outcome - mean)
    sigma_new = sigma - np.outer(gain, cross)
    g_new = 2.0 * sigma_new[np.ix_(keep, keep)]
    return GaussianState(d_new[keep], 0.5 * (g_new + g_new.T))


def homodyne_sample(
    state: GaussianState, mode: int, theta: float, rng: np.random.Generator
) -> MeasurementOutcome:
    """Draw a homodyne outcome along x_theta and condition the other modes."""
    mean, variance = homodyne_stats(state, mode, theta)
    if variance <= 0:
        raise DegenerateMeasurementError(
            f"measured quadrature has non-positive variance {variance:.3e}"
        )
    value = mean + np.sqrt(variance) * rng.standard_normal()
    post = _condition_on_quadrature(state, mode, theta, value)
    return MeasurementOutcome(float(value), post)


def heterodyne_sample(
    state: GaussianState, mode: int, rng: np.random.Generator
) -> MeasurementOutcome:
    """Heterodyne one mode: balanced beamsplitter with vacuum, then x and p homodynes.

    The chosen mode enters the first beamsplitter port, the fresh vacuum the
    second.  Output 1 is x-homodyned, output 2 p-homodyned; output 2 carries
    the beamsplitter minus sign, so on a state displaced by (x0, p0) the raw
    pair (x', p') is centred on (x0/sqrt(2), -p0/sqrt(2)).  Values are
    reported raw; consumers apply the sign convention.
    """
    n = state.mode_count
    joint = tensor(state, vacuum_state(1))
    mixed = apply_symplectic(joint, beamsplitter(0.5), modes=(mode, n))
    first = homodyne_sample(mixed, mode, 0.0, rng)
    # ancilla slot shifts down by one after the measured mode is dropped
    second = homodyne_sample(first.post_state, n - 1, np.pi / 2.0, rng)
    return MeasurementOutcome((first.value, second.value), second.post_state)
