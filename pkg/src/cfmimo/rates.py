"""Achievable downlink rate expressions, in bits/s/Hz.

Closed forms: the approximate achievable rate with downlink training (kappa
in both numerator and denominator), the statistical-CSI rate (same formula
with kappa = 0), and the upper bound (kappa replaced by the full effective
gain variance). Monte Carlo bounds: the use-and-forget lower bound, whose
moments have no closed form, and the non-coherent capacity lower bound,
whose first term is simulated and whose penalty term is closed form.

The effective SINR pieces: coherent beamforming gain (sum_m sqrt(eta) gamma)^2,
downlink-estimate variance kappa_k, effective-gain variances varsigma_kk',
and the uplink pilot contamination term
  ups_kk' = |<phi_k', phi_k>|^2 (sum_m sqrt(eta_mk') gamma_mk' beta_mk/beta_mk')^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import estimation
from .geometry import draw_cn


@dataclass(frozen=True)
class RateInputs:
    """Everything the rate expressions consume, for one large-scale state.

    rho_up/tau_up are only needed by the Monte Carlo bounds, which re-simulate
    the uplink estimation chain.
    """

    beta: np.ndarray
    gamma: np.ndarray
    eta: np.ndarray
    plan: object
    rho_d: float
    rho_dp: float
    tau_dp: float
    rho_up: float | None = None
    tau_up: float | None = None

    def validate(self, slack: float = 1e-9):
        load = np.sum(self.eta * self.gamma, axis=1)
        if np.any(load > 1.0 + slack):
            raise ValueError("per-AP power constraint violated: sum_k eta*gamma > 1")


def _sinr_pieces(ri: RateInputs):
    ugram = estimation.ul_gram(ri.plan)
    vs = estimation.varsigma(ri.beta, ri.gamma, ri.eta)
    coh = np.sum(np.sqrt(ri.eta) * ri.gamma, axis=0)
    w = np.sqrt(ri.eta) * ri.gamma / ri.beta
    ups = ugram * (ri.beta.T @ w) ** 2
    return coh, vs, ups


def _cross_sum(mat: np.ndarray) -> np.ndarray:
    """Row sums excluding the diagonal."""
    return np.sum(mat, axis=1) - np.diag(mat)


def rate_cf(ri: RateInputs) -> np.ndarray:
    """Closed-form approximate achievable rate with downlink training."""
    coh, vs, ups = _sinr_pieces(ri)
    kappa = estimation.downlink_moments(ri.beta, ri.gamma, ri.eta, ri.plan,
                                        ri.rho_dp, ri.tau_dp).kappa
    vs_kk = np.diag(vs)
    num = ri.rho_d * (coh**2 + kappa)
    den = ri.rho_d * (vs_kk - kappa) + ri.rho_d * (_cross_sum(vs) + _cross_sum(ups)) + 1.0
    return np.log2(1.0 + num / den)


def rate_scsi(ri: RateInputs) -> np.ndarray:
    """Rate when the UE decodes from statistical CSI only (kappa = 0)."""
    coh, vs, ups = _sinr_pieces(ri)
    vs_kk = np.diag(vs)
    num = ri.rho_d * coh**2
    den = ri.rho_d * vs_kk + ri.rho_d * (_cross_sum(vs) + _cross_sum(ups)) + 1.0
    return np.log2(1.0 + num / den)


def rate_ub(ri: RateInputs) -> np.ndarray:
    """Upper bound: kappa at its cap (the full effective-gain variance)."""
    coh, vs, ups = _sinr_pieces(ri)
    vs_kk = np.diag(vs)
    num = ri.rho_d * (coh**2 + vs_kk)
    den = ri.rho_d * (_cross_sum(vs) + _cross_sum(ups)) + 1.0
    return np.log2(1.0 + num / den)


def _require_mc_params(ri: RateInputs):
    if ri.rho_up is None or ri.tau_up is None:
        raise ValueError("Monte Carlo bounds need rho_up and tau_up in RateInputs")


def _draw_gains(ri: RateInputs, c: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """n realizations of the effective gain matrix a, shape (n, K, K)."""
    m, k = ri.beta.shape
    ugram = estimation.ul_gram(ri.plan)
    tau = ri.plan.ul_book.length
    g = np.sqrt(ri.beta) * draw_cn((n, m, k), rng)
    # One pilot-block noise draw per AP, projected per UE (shared by co-pilots).
    w = draw_cn((n, m, tau), rng)[:, :, ri.plan.ul_index]
    y_up = np.sqrt(ri.tau_up * ri.rho_up) * (g @ ugram) + w
    g_hat = c * y_up
    return np.einsum("nmk,nml->nkl", g, np.sqrt(ri.eta) * np.conj(g_hat))


@dataclass(frozen=True)
class UnfEstimate:
    """Use-and-forget rate estimate with its Monte Carlo diagnostics."""

    rate: np.ndarray
    mean_ratio: np.ndarray
    var_ratio: np.ndarray
    excluded: np.ndarray  # per-UE count of flagged (non-finite) trials
    trials: int


def rate_unf_mc(ri: RateInputs, trials: int, rng: np.random.Generator,
                force_perfect_csi: bool = False, chunk: int = 2000) -> UnfEstimate:
    """Use-and-forget bound estimated over small-scale fading and pilot noise.

    Simulates the full chain (uplink pilots -> ghat -> a -> downlink pilots ->
    ahat) and forms the four expectations of the normalized received signal.
    Trials where a_kk/ahat_kk is non-finite are flagged and excluded, with the
    count reported. ``force_perfect_csi`` substitutes ahat = a_kk, which turns
    the ratio into 1 identically (sanity hook for tests).
    """
    _require_mc_params(ri)
    m, k = ri.beta.shape
    c, _ = estimation.mmse_uplink(ri.beta, ri.plan, ri.rho_up, ri.tau_up)
    moments = estimation.downlink_moments(ri.beta, ri.gamma, ri.eta, ri.plan,
                                          ri.rho_dp, ri.tau_dp)
    diag = np.arange(k)
    sum_r = np.zeros(k, dtype=complex)
    sum_r2 = np.zeros(k)
    sum_cross = np.zeros((k, k))
    sum_inv = np.zeros(k)
    kept = np.zeros(k, dtype=np.int64)
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        a = _draw_gains(ri, c, n, rng)
        akk = a[:, diag, diag]
        if force_perfect_csi:
            ahat = akk
        else:
            scale = np.sqrt(ri.tau_dp * ri.rho_dp)
            gram = estimation.dl_gram(ri.plan)
            y_dp = scale * np.sum(a * gram, axis=2) + draw_cn((n, k), rng)
            coef = moments.cov_a_y / np.maximum(moments.var_y, estimation.VAR_FLOOR)
            ahat = moments.mean_a + coef * (y_dp - moments.mean_y)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = akk / ahat
            cross = a / ahat[:, :, None]
            inv = 1.0 / np.abs(ahat) ** 2
        ok = np.isfinite(ratio) & np.isfinite(inv) & np.all(np.isfinite(cross), axis=2)
        kept += ok.sum(axis=0)
        sum_r += np.where(ok, ratio, 0.0).sum(axis=0)
        sum_r2 += np.where(ok, np.abs(ratio) ** 2, 0.0).sum(axis=0)
        sum_cross += np.einsum("nkl->kl", np.where(ok[:, :, None], np.abs(cross) ** 2, 0.0))
        sum_inv += np.where(ok, inv, 0.0).sum(axis=0)
        done += n
    kept_f = np.maximum(kept, 1).astype(float)
    mean_r = sum_r / kept_f
    var_r = np.maximum(sum_r2 / kept_f - np.abs(mean_r) ** 2, 0.0)
    cross_mean = sum_cross / kept_f[:, None]
    cross_term = _cross_sum(cross_mean)
    inv_mean = sum_inv / kept_f
    sinr = np.abs(mean_r) ** 2 / (var_r + cross_term + inv_mean / ri.rho_d)
    return UnfEstimate(rate=np.log2(1.0 + sinr), mean_ratio=mean_r, var_ratio=var_r,
                       excluded=(trials - kept).astype(int), trials=trials)


def rate_noncoherent_lb(ri: RateInputs, tau_dd: float, trials: int,
                        rng: np.random.Generator, chunk: int = 2000) -> np.ndarray:
    """Non-coherent capacity lower bound (may be negative).

    First term: perfect-CSI instantaneous rate averaged over realizations of
    the effective gains. Penalty: per-symbol cost of the missing CSI, from
    the closed-form gain variances.
    """
    _require_mc_params(ri)
    if tau_dd < 1:
        raise ValueError("tau_dd must be at least one symbol")
    if ri.rho_d == 0.0:
        return np.zeros(ri.beta.shape[1])
    m, k = ri.beta.shape
    c, _ = estimation.mmse_uplink(ri.beta, ri.plan, ri.rho_up, ri.tau_up)
    diag = np.arange(k)
    acc = np.zeros(k)
    done = 0
    while done < trials:
        n = min(chunk, trials - done)
        a = _draw_gains(ri, c, n, rng)
        p = np.abs(a) ** 2
        pkk = p[:, diag, diag]
        inter = p.sum(axis=2) - pkk
        acc += np.log2(1.0 + ri.rho_d * pkk / (ri.rho_d * inter + 1.0)).sum(axis=0)
        done += n
    first = acc / trials
    vs = estimation.varsigma(ri.beta, ri.gamma, ri.eta)
    penalty = np.sum(np.log2(1.0 + tau_dd * ri.rho_d * vs), axis=1) / tau_dd
    return first - penalty


def net_rate(gross: np.ndarray, config, with_dl_training: bool = True) -> np.ndarray:
    """Net rate: gross scaled by the DL data fraction and the pilot overhead.

    The overhead is the uplink pilot length, plus the downlink pilot length
    when downlink training is in use.
    """
    tau_o = config.ul_pilot_len + (config.dl_pilot_len if with_dl_training else 0)
    if tau_o >= config.coherence_length:
        raise ValueError("pilot overhead exceeds the coherence interval")
    return config.dl_data_fraction * (1.0 - tau_o / config.coherence_length) * np.asarray(gross)
