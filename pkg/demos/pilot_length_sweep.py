"""Sweep the uplink/downlink training lengths and report the net-rate sweet spot.

Long pilots improve both channel estimates and reduce contamination, but eat
into the coherence interval; with many UEs the net-rate optimum sits at
interior lengths. Writes the grid to out/pilot_sweep.csv (heatmap input for
the figures package).
"""

import pathlib

import numpy as np

from cfmimo import ExperimentSpec, ScenarioConfig, sweep_pilot_lengths

OUT = pathlib.Path(__file__).resolve().parent / "out"

# Desk-scale sweep scenario (at full scale, M=200,
# K=40 and hundreds of placements; scale up for the full picture).
scenario = ScenarioConfig(num_aps=60, num_ues=12, ul_pilot_len=4, dl_pilot_len=4,
                          rng_seed=42)
spec = ExperimentSpec(scenario=scenario, num_placements=20, rate_set=("cf",))

lengths = [2, 4, 7, 12, 20, 30]
result = sweep_pilot_lengths(spec, lengths, lengths)

print("mean net rate (bits/s/Hz), rows = uplink length, cols = downlink length")
header = "      " + "".join(f"{d:>8d}" for d in result.dl_lengths)
print(header)
for i, tu in enumerate(result.ul_lengths):
    row = "".join(f"{result.mean_net[i, j]:8.3f}" for j in range(len(result.dl_lengths)))
    print(f"tu={tu:3d} {row}")

best = np.unravel_index(np.nanargmax(result.mean_net), result.mean_net.shape)
print(f"\nnet-rate optimum at (ul, dl) = "
      f"({result.ul_lengths[best[0]]}, {result.dl_lengths[best[1]]})")
gross_best = np.unravel_index(np.nanargmax(result.mean_gross), result.mean_gross.shape)
print(f"gross-rate optimum at (ul, dl) = "
      f"({result.ul_lengths[gross_best[0]]}, {result.dl_lengths[gross_best[1]]}) "
      "(longer is always better without the overhead)")

OUT.mkdir(exist_ok=True)
with open(OUT / "pilot_sweep.csv", "w") as fh:
    fh.write("ul_pilot_len,dl_pilot_len,mean_gross,mean_net\n")
    for i, tu in enumerate(result.ul_lengths):
        for j, td in enumerate(result.dl_lengths):
            gross = format(float(result.mean_gross[i, j]), ".17g")
            net = format(float(result.mean_net[i, j]), ".17g")
            fh.write(f"{tu},{td},{gross},{net}\n")
print(f"wrote {OUT / 'pilot_sweep.csv'}")
