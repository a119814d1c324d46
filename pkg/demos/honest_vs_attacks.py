"""Walk through one verification campaign per scenario and compare each
empirical result with its closed-form prediction.

Run:  python demos/honest_vs_attacks.py
"""

import numpy as np

from cvqpv import analysis
from cvqpv.attacks import AttackKind, AttackStrategy
from cvqpv.harness import ExperimentConfig, run_experiment
from cvqpv.protocol import ProtocolParams

params = ProtocolParams(sigma=100.0, n_rounds=1000, epsilon_hon=1e-3, t=1.0, u=0.0)

scenarios = [
    ("honest prover", None),
    ("heterodyne attack", AttackStrategy(kind=AttackKind.HETERODYNE)),
    ("splitting attack", AttackStrategy(kind=AttackKind.SPLITTING)),
    ("guessed-angle attack", AttackStrategy(kind=AttackKind.GUESSED_ANGLE)),
    ("EPR teleport attack (zeta=6)", AttackStrategy(kind=AttackKind.EPR_TELEPORT, zeta_epr=6.0)),
]

print(f"protocol: sigma={params.sigma:g}, n={params.n_rounds}, eps_hon={params.epsilon_hon:g}, "
      f"t={params.t:g}, u={params.u:g}")
print(f"attacker squared-error floor (Fano): {analysis.attacker_mse_floor(params.sigma):.4f}")
print()
print(f"{'scenario':<30} {'accept':>8} {'score mean':>11} {'predicted':>10} {'mse_r':>9} {'predicted':>10}")
for label, strategy in scenarios:
    report = run_experiment(
        ExperimentConfig(params=params, strategy=strategy, trials=300, seed=1)
    )
    pred_score = report.predictions["score_mean"]
    pred_mse = report.predictions["mse_r"]
    print(
        f"{label:<30} {report.acceptance_rate:>8.3f} {report.score_mean:>11.4f} "
        f"{pred_score:>10.4f} {report.mse_r_mean:>9.4f} {pred_mse:>10.4f}"
    )

print()
print("The verifiers' threshold gamma =", f"{report.gamma:.4f}")
print("Unentangled attacks sit far above it; the teleportation attack with a")
print("strongly squeezed pair is statistically indistinguishable from honest")
print("(its score excess is about", f"{np.exp(-12.0) / 0.5:.1e}", "of shot noise).")
