"""User-centric AP selection: serving clusters and power masking.

A cluster keeps, per UE, the smallest set of strongest-gain APs whose share
of the UE's total large-scale gain reaches the target fraction. Power
coefficients are zeroed outside the cluster; the surviving entries are
rescaled per AP so each AP still transmits at full power over the UEs it
keeps serving (for CD-FPT input this is exactly the cluster-restricted
CD-FPT rule).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .powerctl import PowerCoefficients


@dataclass(frozen=True)
class ServingClusters:
    """Per-UE lists of serving AP indices."""

    ap_indices: list

    def sizes(self) -> np.ndarray:
        return np.array([len(a) for a in self.ap_indices])

    def mask(self, num_aps: int) -> np.ndarray:
        """(M, K) boolean serving support."""
        out = np.zeros((num_aps, len(self.ap_indices)), dtype=bool)
        for k, aps in enumerate(self.ap_indices):
            out[aps, k] = True
        return out


def select_largest_lsf(beta: np.ndarray, alpha: float) -> ServingClusters:
    """Largest-large-scale-fading selection.

    Per UE, APs are sorted by descending gain (ties broken by AP index) and
    the shortest prefix whose cumulative share of the total gain reaches
    alpha is kept.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    m, k = beta.shape
    members = []
    for kk in range(k):
        order = np.argsort(-beta[:, kk], kind="stable")
        cum = np.cumsum(beta[order, kk])
        cum /= cum[-1]
        count = int(np.searchsorted(cum, alpha, side="left")) + 1
        members.append(np.sort(order[:count]))
    return ServingClusters(ap_indices=members)


def mask_power(power: PowerCoefficients, clusters: ServingClusters,
               gamma: np.ndarray) -> PowerCoefficients:
    """Zero eta outside the clusters, then restore full power per AP.

    Every AP row with surviving entries is scaled so that
    sum_k eta_mk gamma_mk = 1 again; APs left serving nobody stay silent.
    Meant for the CD-FPT policy (the max-min solver takes the cluster mask
    as a constraint instead).
    """
    m = gamma.shape[0]
    eta = np.where(clusters.mask(m), power.eta, 0.0)
    load = np.sum(eta * gamma, axis=1)
    scale = np.divide(1.0, load, out=np.zeros_like(load), where=load > 0)
    return PowerCoefficients(eta=eta * scale[:, None])
