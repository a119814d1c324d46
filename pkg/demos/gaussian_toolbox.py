"""Tour of the Gaussian toolbox underneath the protocol: states, channels,
measurements, and exact conditioning.

Run:  python demos/gaussian_toolbox.py
"""

import numpy as np

from cvqpv.measurement import heterodyne_sample, homodyne_sample, homodyne_stats
from cvqpv.states import (
    coherent_state,
    lossy_channel,
    symplectic_eigenvalue_single_mode,
    tmsv,
)

rng = np.random.default_rng(0)

print("-- coherent state through a noisy channel --")
state = coherent_state(3.0, -1.0)
print("prepared  d =", state.displacement, " homodyne(x):", homodyne_stats(state, 0, 0.0))
noisy = lossy_channel(state, 0, t=0.8, u=0.1)
print("after t=0.8, u=0.1: d =", noisy.displacement.round(4))
print("homodyne(x) mean/var:", tuple(round(v, 4) for v in homodyne_stats(noisy, 0, 0.0)),
      " (variance 1/2 + u = 0.6)")
print("signal-to-noise changed by t/(1+2u) =", round(0.8 / 1.2, 4))

print()
print("-- two-mode squeezed vacuum --")
zeta = 1.0
pair = tmsv(zeta)
print("covariance:\n", pair.covariance.round(4))
print("single-mode marginal is thermal, nu =",
      round(symplectic_eigenvalue_single_mode(pair.reduced([0]).covariance), 4),
      "= cosh(2 zeta) =", round(np.cosh(2 * zeta), 4))

print()
print("-- homodyne conditioning on one half --")
out = homodyne_sample(pair, 0, 0.0, rng)
print(f"x outcome on mode A: {out.value:+.4f}")
print("conditional B displacement:", out.post_state.displacement.round(4),
      " (gain tanh(2 zeta) =", round(np.tanh(2 * zeta), 4), ")")
print("conditional B covariance diag:", np.diag(out.post_state.covariance).round(4),
      " (x squeezed to 1/cosh(2 zeta), p thermal)")

print()
print("-- heterodyne conditioning: the entanglement-based source --")
out = heterodyne_sample(pair, 0, rng)
x_out, p_out = out.value
gain = np.sqrt(2.0) * np.tanh(zeta)
print(f"raw outcomes (x', p') = ({x_out:+.4f}, {p_out:+.4f})")
print("conditional B state: displacement", out.post_state.displacement.round(4),
      "= sqrt(2) tanh(zeta) * outcomes; covariance = identity (a coherent state)")
print("This is how the verifier steers the prover's state in the")
print("entanglement-based protocol: outcome scale", round(gain, 4))
