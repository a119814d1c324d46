"""Gaussian state algebra on quadrature phase space.

A state of N bosonic modes is described by a displacement vector
d = (x_1, p_1, ..., x_N, p_N) and a real symmetric covariance matrix G,
normalised so that the vacuum has G = identity.  The Wigner function is

    W(r) = exp(-(r - d)^T G^-1 (r - d)) / (pi^N sqrt(det G)),

i.e. as a probability density on phase space it is a multivariate normal
with covariance G/2.  Homodyne outcomes on coherent states therefore have
variance 1/2 (shot noise).  Everything downstream (measurement sampling,
protocol statistics) divides by 2 exactly once, at the marginal step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

#: tolerance for structural identities (symmetry, symplecticity)
STRUCT_TOL = 1e-10
#: base slack on the single-mode uncertainty floor det(block) >= 1
FLOOR_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form Omega for (x, p)-interleaved ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def as_displacement(values) -> np.ndarray:
    """Validate and return a displacement vector (even length, all finite)."""
    d = np.asarray(values, dtype=float).reshape(-1)
    if d.size == 0 or d.size % 2 != 0:
        raise ValueError(f"displacement length must be a positive even number, got {d.size}")
    if not np.all(np.isfinite(d)):
        raise ValueError("displacement entries must be finite")
    return d


def _floor_slack(block: np.ndarray) -> float:
    # Schur-complement updates on strongly squeezed inputs cancel entries of
    # magnitude ~ |G|, so the admissible floor error grows with |G|^2 * eps.
    scale = max(1.0, float(np.abs(block).max()))
    return FLOOR_TOL + 1e-13 * scale * scale


def _check_positive_definite(g: np.ndarray) -> None:
    try:
        np.linalg.cholesky(g)
        return
    except np.linalg.LinAlgError:
        pass
    # allow eigenvalues negative only within rounding slack of the matrix scale
    eigs = np.linalg.eigvalsh(g)
    if eigs[0] <= -STRUCT_TOL * max(1.0, float(np.abs(g).max())):
        raise ValueError(f"covariance must be positive definite, min eigenvalue {eigs[0]:.3e}")


def as_covariance(matrix) -> np.ndarray:
    """Validate and return a covariance matrix in the vacuum = identity convention.

    Checks symmetry, positive definiteness and the single-mode uncertainty
    floor det(2x2 diagonal block) >= 1 (up to numerical slack).
    """
    g = np.asarray(matrix, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"covariance must be a square matrix, got shape {g.shape}")
    n = g.shape[0]
    if n == 0 or n % 2 != 0:
        raise ValueError(f"covariance side must be a positive even number, got {n}")
    if not np.all(np.isfinite(g)):
        raise ValueError("covariance entries must be finite")
    if np.abs(g - g.T).max() > STRUCT_TOL:
        raise ValueError("covariance must be symmetric to 1e-10")
    g = 0.5 * (g + g.T)
    _check_positive_definite(g)
    for mode in range(n // 2):
        block = g[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2]
        det = block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0]
        if det < 1.0 - _floor_slack(block):
            raise ValueError(
                f"mode {mode} violates the uncertainty floor: det(block) = {det:.12g} < 1"
            )
    return g


@dataclass(frozen=True)
class GaussianState:
    """Immutable Gaussian state: displacement vector plus covariance matrix."""

    displacement: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        d = as_displacement(self.displacement)
        g = as_covariance(self.covariance)
        if g.shape[0] != d.size:
            raise ValueError(
                f"dimension mismatch: displacement {d.size}, covariance side {g.shape[0]}"
            )
        d.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "displacement", d)
        object.__setattr__(self, "covariance", g)

    @property
    def mode_count(self) -> int:
        return self.displacement.size // 2

    def mode_block(self, mode: int) -> np.ndarray:
        """2x2 covariance block of a single mode."""
        self._check_mode(mode)
        return self.covariance[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2]

    def mode_displacement(self, mode: int) -> np.ndarray:
        self._check_mode(mode)
        return self.displacement[2 * mode : 2 * mode + 2]

    def reduced(self, modes) -> "GaussianState":
        """Marginal state of the given modes (partial trace over the rest)."""
        modes = list(modes)
        for m in modes:
            self._check_mode(m)
        idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes]).astype(int)
        return GaussianState(self.displacement[idx], self.covariance[np.ix_(idx, idx)])

    def to_json(self) -> str:
        """Debug dump as JSON {displacement: [...], covariance: [[...]]}."""
        return json.dumps(
            {
                "displacement": self.displacement.tolist(),
                "covariance": self.covariance.tolist(),
            }
        )

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.mode_count:
            raise ValueError(f"mode index {mode} out of range for {self.mode_count} modes")


@dataclass(frozen=True)
class SymplecticTransform:
    """Linear phase-space transform S with S Omega S^T = Omega."""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2 != 0:
            raise ValueError(f"symplectic matrix must be square of even side, got {s.shape}")
        omega = symplectic_form(s.shape[0] // 2)
        defect = np.abs(s @ omega @ s.T - omega).max()
        if defect > STRUCT_TOL:
            raise ValueError(f"matrix is not symplectic: |S Omega S^T - Omega| = {defect:.3e}")
        s = s.copy()
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    @property
    def mode_count(self) -> int:
        return self.matrix.shape[0] // 2


def coherent_state(x0: float, p0: float) -> GaussianState:
    """Single-mode coherent state with displacement (x0, p0) and identity covariance."""
    if not (np.isfinite(x0) and np.isfinite(p0)):
        raise ValueError("coherent state displacement must be finite")
    return GaussianState(np.array([x0, p0], dtype=float), np.eye(2))


def vacuum_state(n_modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def tmsv(zeta: float) -> GaussianState:
    """Two-mode squeezed vacuum with squeezing parameter zeta >= 0.

    Covariance blocks: cosh(2 zeta) I on the diagonal, sinh(2 zeta) Z
    off-diagonal with Z = diag(1, -1).  Zero displacement.  Each mode alone
    is thermal with covariance cosh(2 zeta) I.
    """
    if not np.isfinite(zeta) or zeta < 0:
        raise ValueError(f"squeezing parameter must satisfy zeta >= 0, got {zeta}")
    ch, sh = np.cosh(2 * zeta), np.sinh(2 * zeta)
    z = np.diag([1.0, -1.0])
    g = np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
    return GaussianState(np.zeros(4), g)


def beamsplitter(transmittance: float) -> SymplecticTransform:
    """Two-mode beamsplitter of transmittance T.

    Matrix [[sqrt(T) I, sqrt(1-T) I], [-sqrt(1-T) I, sqrt(T) I]]: output 1
    carries +sqrt(1-T) of input 2, output 2 carries -sqrt(1-T) of input 1.
    """
    t = float(transmittance)
    if not np.isfinite(t) or not 0.0 <= t <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    a, b = np.sqrt(t), np.sqrt(1.0 - t)
    eye = np.eye(2)
    s = np.block([[a * eye, b * eye], [-b * eye, a * eye]])
    return SymplecticTransform(s)


def rotation(theta: float, mode: int = 0, n_modes: int = 1) -> SymplecticTransform:
    """Phase rotation of one mode: the new x quadrature is x cos(theta) + p sin(theta).

    Identity on all other modes.  Homodyning along the rotated axis x_theta is
    the same as applying this transform and homodyning plain x.
    """
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode index {mode} out of range for {n_modes} modes")
    if not np.isfinite(theta):
        raise ValueError("rotation angle must be finite")
    s = np.eye(2 * n_modes)
    c, sn = np.cos(theta), np.sin(theta)
    s[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = [[c, sn], [-sn, c]]
    return SymplecticTransform(s)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    """Product state of two independent Gaussian states (modes of `a` first)."""
    d = np.concatenate([a.displacement, b.displacement])
    na, nb = a.displacement.size, b.displacement.size
    g = np.zeros((na + nb, na + nb))
    g[:na, :na] = a.covariance
    g[na:, na:] = b.covariance
    return GaussianState(d, g)


def _embed(s: np.ndarray, modes, n_modes: int) -> np.ndarray:
    """Expand a transform acting on `modes` to the full 2 n_modes space."""
    modes = list(modes)
    if len(set(modes)) != len(modes):
        raise ValueError(f"target modes must be distinct, got {modes}")
    for m in modes:
        if not 0 <= m < n_modes:
            raise ValueError(f"mode index {m} out of range for {n_modes} modes")
    full = np.eye(2 * n_modes)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes]).astype(int)
    full[np.ix_(idx, idx)] = s
    return full


def apply_symplectic(
    state: GaussianState, transform: SymplecticTransform, modes=None
) -> GaussianState:
    """Evolve a state: d -> S d, G -> S G S^T.

    With `modes` given, the transform acts on that subset of modes and the
    identity elsewhere; otherwise its size must match the whole state.
    """
    s = transform.matrix
    if modes is not None:
        if 2 * len(list(modes)) != s.shape[0]:
            raise ValueError(
                f"transform covers {s.shape[0] // 2} modes but {len(list(modes))} were targeted"
            )
        s = _embed(s, modes, state.mode_count)
    elif s.shape[0] != state.displacement.size:
        raise ValueError(
            f"dimension mismatch: state has {state.displacement.size} quadratures, "
            f"transform side {s.shape[0]}"
        )
    return GaussianState(s @ state.displacement, s @ state.covariance @ s.T)


def lossy_channel(state: GaussianState, mode: int, t: float, u: float) -> GaussianState:
    """Attenuation/excess-noise channel on one mode.

    On the chosen mode the displacement scales by sqrt(t) and the covariance
    block maps to t G + (1 - t + 2u) I; cross-covariances scale by sqrt(t).
    For a coherent state this is exactly d -> d sqrt(t), G -> (1 + 2u) I, so a
    homodyne outcome has variance 1/2 + u.  The general-state form is the
    thermal-loss extension of that coherent-state rule (it reduces to it at
    G = I and preserves positivity).
    """
    state._check_mode(mode)
    if not np.isfinite(t) or not 0.0 < t <= 1.0:
        raise ValueError(f"transmittance must lie in (0, 1], got {t}")
    if not np.isfinite(u) or u < 0.0:
        raise ValueError(f"excess noise must satisfy u >= 0, got {u}")
    n = state.displacement.size
    block = slice(2 * mode, 2 * mode + 2)
    d = state.displacement.copy()
    d[block] *= np.sqrt(t)
    g = state.covariance.copy()
    g[block, :] *= np.sqrt(t)
    g[:, block] *= np.sqrt(t)
    # mode block written as t (G - I) + (1 + 2u) I: algebraically the same as
    # t G + (1 - t + 2u) I but exact on coherent input (G = I gives (1+2u) I
    # bit for bit, matching the stated coherent-state channel)
    g[block, block] = t * (state.covariance[block, block] - np.eye(2)) + (
        1.0 + 2.0 * u
    ) * np.eye(2)
    return GaussianState(d, g)


def symplectic_eigenvalue_single_mode(gamma) -> float:
    """Symplectic eigenvalue of a single-mode covariance matrix: sqrt(det)."""
    g = np.asarray(gamma, dtype=float)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 block, got shape {g.shape}")
    if np.abs(g - g.T).max() > STRUCT_TOL:
        raise ValueError("block must be symmetric")
    det = float(np.linalg.det(g))
    if det <= 0 or g[0, 0] <= 0:
        raise ValueError("block must be positive definite")
    return float(np.sqrt(det))
