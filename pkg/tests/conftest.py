import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def zscore(observed, expected, stderr):
    """Distance in standard errors, guarding the degenerate zero-error case."""
    if stderr == 0:
        return 0.0 if observed == expected else float("inf")
    return abs(observed - expected) / stderr


def mean_stderr(samples):
    samples = np.asarray(samples)
    return float(samples.mean()), float(samples.std(ddof=1) / np.sqrt(samples.size))
