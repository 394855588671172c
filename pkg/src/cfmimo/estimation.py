"""Channel estimation chain for conjugate beamforming.

Uplink: each AP projects its received pilot block onto the known pilot
sequence and forms a linear MMSE estimate of the channel; gamma_mk is the
mean-square of that estimate and doubles as the estimation-quality measure.
Downlink: pilots are beamformed with the same precoder as data, each UE
projects and linearly MMSE-estimates its effective gain a_kk. The first and
second moments of that estimator are available in closed form under the
joint pilot-assignment constraint (co-uplink-pilot UEs get orthogonal
downlink pilots), which kills the cross terms.

Pilot plans are consumed through their index arrays; since the pilot books
are orthonormal, the inner product between two UEs' pilots is 1 when the
indices coincide and 0 otherwise, so one 0/1 matrix serves as both the Gram
matrix and its squared magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import draw_cn

VAR_FLOOR = 1e-30


def _index_gram(index: np.ndarray) -> np.ndarray:
    idx = np.asarray(index)
    return (idx[:, None] == idx[None, :]).astype(float)


def ul_gram(plan) -> np.ndarray:
    """K x K matrix of uplink pilot inner products (0/1)."""
    return _index_gram(plan.ul_index)


def dl_gram(plan) -> np.ndarray:
    """K x K matrix of downlink pilot inner products (0/1)."""
    return _index_gram(plan.dl_index)


def _require_joint_constraint(plan):
    ul = np.asarray(plan.ul_index)
    dl = np.asarray(plan.dl_index)
    k = len(ul)
    same_pair = (ul[:, None] == ul[None, :]) & (dl[:, None] == dl[None, :])
    same_pair[np.diag_indices(k)] = False
    if np.any(same_pair):
        raise ValueError(
            "pilot plan violates the joint constraint: UEs sharing an uplink "
            "pilot must use orthogonal downlink pilots"
        )


def uplink_receive_project(g: np.ndarray, plan, rho_up: float, tau_up: float,
                           rng: np.random.Generator) -> np.ndarray:
    """Projected uplink pilot observation, shape (M, K).

    y_mk = sqrt(tau*rho) * sum_k' g_mk' <phi_k, phi_k'> + w_mk; the sum only
    picks up co-pilot UEs. The noise is one physical pilot-block realization
    per AP projected onto each UE's pilot, so co-pilot UEs see the identical
    noise sample while orthogonal-pilot UEs see independent ones.
    """
    scale = np.sqrt(tau_up * rho_up)
    gram = ul_gram(plan)
    noise = draw_cn((g.shape[0], plan.ul_book.length), rng)[:, plan.ul_index]
    return scale * (g @ gram) + noise


def mmse_uplink(beta: np.ndarray, plan, rho_up: float, tau_up: float):
    """LMMSE coefficients c_mk and estimate variances gamma_mk, both (M, K)."""
    trp = tau_up * rho_up
    gram = ul_gram(plan)
    denom = trp * (beta @ gram) + 1.0
    c = np.sqrt(trp) * beta / denom
    gamma = np.sqrt(trp) * beta * c
    return c, gamma


def estimate_uplink(y_up: np.ndarray, c: np.ndarray) -> np.ndarray:
    """ghat_mk = c_mk * y_mk."""
    return c * y_up


def effective_gains(g: np.ndarray, g_hat: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Effective downlink gain matrix a, shape (K, K).

    a[k, k'] = sum_m sqrt(eta_mk') g_mk conj(ghat_mk'): the compound gain UE k
    sees on UE k''s stream after conjugate beamforming.
    """
    return g.T @ (np.sqrt(eta) * np.conj(g_hat))


def varsigma(beta: np.ndarray, gamma: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Variances of the effective gains: varsigma[k, k'] = sum_m eta_mk' beta_mk gamma_mk'."""
    return beta.T @ (eta * gamma)


def downlink_receive_project(a: np.ndarray, plan, rho_dp: float, tau_dp: float,
                             rng: np.random.Generator) -> np.ndarray:
    """Projected downlink pilot observation per UE, shape (K,)."""
    scale = np.sqrt(tau_dp * rho_dp)
    gram = dl_gram(plan)
    noise = draw_cn(a.shape[0], rng)
    return scale * np.sum(a * gram, axis=1) + noise


@dataclass(frozen=True)
class DownlinkMoments:
    """Closed-form moments of (a_kk, projected downlink observation) per UE."""

    mean_a: np.ndarray    # E[a_kk]
    cov_a_y: np.ndarray   # cov(a_kk, y_k)
    var_y: np.ndarray     # var(y_k)
    mean_y: np.ndarray    # E[y_k]
    varsigma: np.ndarray  # (K, K)
    kappa: np.ndarray     # var of the LMMSE estimate of a_kk


def downlink_moments(beta: np.ndarray, gamma: np.ndarray, eta: np.ndarray, plan,
                     rho_dp: float, tau_dp: float) -> DownlinkMoments:
    """Moments of the downlink estimation problem, all in closed form.

    Requires the joint pilot constraint; without it the cross terms of the
    pilot power expansion do not vanish and these expressions are invalid.
    """
    _require_joint_constraint(plan)
    trp = tau_dp * rho_dp
    scale = np.sqrt(trp)
    gram = dl_gram(plan)
    vs = varsigma(beta, gamma, eta)
    mean_a = np.sum(np.sqrt(eta) * gamma, axis=0)
    vs_kk = np.diag(vs).copy()
    cov_a_y = scale * vs_kk
    var_y = 1.0 + trp * np.sum(vs * gram, axis=1)
    mean_y = scale * mean_a
    kappa = trp * vs_kk**2 / var_y
    return DownlinkMoments(mean_a=mean_a, cov_a_y=cov_a_y, var_y=var_y,
                           mean_y=mean_y, varsigma=vs, kappa=kappa)


def estimate_a(y_dp: np.ndarray, moments: DownlinkMoments) -> np.ndarray:
    """LMMSE estimate of a_kk from the projected downlink observation."""
    coef = moments.cov_a_y / np.maximum(moments.var_y, VAR_FLOOR)
    return moments.mean_a + coef * (y_dp - moments.mean_y)


def mean_a_cross(beta: np.ndarray, gamma: np.ndarray, eta: np.ndarray,
                 ugram: np.ndarray) -> np.ndarray:
    """E[a_kk'] for all pairs: <phi_k, phi_k'> sum_m sqrt(eta_mk') gamma_mk' beta_mk / beta_mk'."""
    w = np.sqrt(eta) * gamma / beta
    return ugram * (beta.T @ w)


def mean_abs_a_sq(beta: np.ndarray, gamma: np.ndarray, eta: np.ndarray,
                  ugram: np.ndarray) -> np.ndarray:
    """E[|a_kk'|^2] for all pairs: |<phi_k', phi_k>|^2 (sum_m sqrt(eta) gamma beta_mk/beta_mk')^2 + varsigma_kk'."""
    w = np.sqrt(eta) * gamma / beta
    coherent = beta.T @ w
    return ugram * coherent**2 + varsigma(beta, gamma, eta)
