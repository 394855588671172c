"""User-centric operation: serve each UE from its strongest APs only.

Selects per-UE clusters holding 95% of the large-scale gain, masks the power
coefficients accordingly, and compares rates against the all-APs baseline.
With conjugate beamforming the lost tail APs contribute little signal, so
the rate cost is small while the per-UE fronthaul footprint shrinks a lot.
"""

import numpy as np

from cfmimo import ExperimentSpec, ScenarioConfig, run_experiment

scenario = ScenarioConfig(num_aps=100, num_ues=10, ul_pilot_len=5, dl_pilot_len=5,
                          rng_seed=21)

results = {}
for alpha in (None, 0.95):
    spec = ExperimentSpec(scenario=scenario, num_placements=15, rate_set=("cf",),
                          user_centric_alpha=alpha)
    records, _ = run_experiment(spec)
    label = "all APs" if alpha is None else f"alpha={alpha}"
    rates = np.array([r["rate_cf"] for r in records])
    sizes = np.array([r["cluster_size"] for r in records])
    results[label] = rates
    print(f"{label:11s}: mean cluster {sizes.mean():6.1f} APs, "
          f"mean rate {rates.mean():.3f}, 5th pct {np.percentile(rates, 5):.3f}")

delta = results["alpha=0.95"].mean() / results["all APs"].mean() - 1
direction = "gains" if delta >= 0 else "loses"
print(f"\nkeeping ~95% of the gain {direction} {100 * abs(delta):.1f}% mean rate "
      "(full-power renormalization concentrates the budget on serving APs) "
      "while cutting the serving set per UE by an order of magnitude.")
