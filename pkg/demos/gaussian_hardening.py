"""Empirical distribution of the effective downlink gain vs its Gaussian fit.

The effective gain a_kk concentrates around its mean as more APs contribute
comparably (channel hardening); its fluctuation is approximately Gaussian
but carries a pseudo-variance term, so the real part is matched to
N(E[a_kk], (varsigma + sum eta gamma^2)/2). Prints KS statistics and the
hardening measure varsigma/E[a]^2 for a sparse and a dense deployment.
"""

import numpy as np
from scipy import stats

from cfmimo import ScenarioConfig, estimation, pilots, powerctl
from cfmimo.geometry import draw_cn, large_scale, place_uniform
from cfmimo.harness import substream

N_SAMPLES = 10_000


def sample_akk(cfg, n, seed):
    rng = substream(seed)
    state = large_scale(place_uniform(cfg, rng), cfg, rng)
    k = cfg.num_ues
    plan = pilots.PilotPlan(ul_book=pilots.make_book(1), dl_book=pilots.make_book(k),
                            ul_index=np.zeros(k, dtype=int), dl_index=np.arange(k))
    snr = pilots.SnrParams.from_config(cfg)
    _, gamma = estimation.mmse_uplink(state.beta, plan, snr.rho_up, 1)
    eta = powerctl.cd_fpt(gamma).eta
    m = cfg.num_aps
    gram = estimation.ul_gram(plan)
    g = np.sqrt(state.beta) * draw_cn((n, m, k), rng)
    w = draw_cn((n, m, 1), rng)[:, :, np.zeros(k, dtype=int)]
    g_hat = estimation.mmse_uplink(state.beta, plan, snr.rho_up, 1)[0] * (
        np.sqrt(snr.rho_up) * (g @ gram) + w)
    a = np.einsum("nmk,nml->nkl", g, np.sqrt(eta) * np.conj(g_hat))
    return a[:, 0, 0], gamma, eta, state.beta


for label, side in (("sparse (1 km)", 1.0), ("dense (70 m)", 0.07)):
    cfg = ScenarioConfig(num_aps=100, num_ues=2, ul_pilot_len=1, dl_pilot_len=2,
                         area_side_km=side, rng_seed=1)
    akk, gamma, eta, beta = sample_akk(cfg, N_SAMPLES, seed=5)
    vs = estimation.varsigma(beta, gamma, eta)[0, 0]
    mean = np.sum(np.sqrt(eta[:, 0]) * gamma[:, 0])
    pseudo = np.sum(eta[:, 0] * gamma[:, 0] ** 2)
    ks = stats.kstest(akk.real, "norm", args=(mean, np.sqrt((vs + pseudo) / 2))).statistic
    print(f"{label}: hardening measure varsigma/E[a]^2 = {vs / mean**2:.3f}, "
          f"KS(Re a_kk vs Gaussian) = {ks:.3f}, "
          f"strongest AP share = {beta[:, 0].max() / beta[:, 0].sum():.2f}")

print("\nThe dense deployment aggregates many comparable paths, so the channel "
      "hardens and the Gaussian fit tightens; the sparse one is dominated by "
      "its nearest AP, leaving visible non-Gaussian skew.")
