"""Network geometry and fading generation for a cell-free deployment.

Positions live on a D x D km square treated as a torus (wrap-around), so the
simulated network has no border. Large-scale fading combines a three-slope
path loss with optional log-normal shadowing (spatially correlated or not);
small-scale fading is i.i.d. unit-variance circularly symmetric complex
Gaussian. Distances are in km, gains in dB unless noted otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOLTZMANN_J_PER_K = 1.380649e-23
NOISE_REF_TEMP_K = 290.0


@dataclass(frozen=True)
class ThreeSlopeParams:
    """Constants of the three-slope path loss model.

    The fixed loss term defaults to the COST231 Hata expression evaluated at
    the scenario carrier frequency; set ``fixed_loss_db`` to override it.
    """

    d0_km: float = 0.010
    d1_km: float = 0.050
    ap_height_m: float = 15.0
    ue_height_m: float = 1.65
    fixed_loss_db: float | None = None

    def fixed_loss(self, carrier_freq_ghz: float) -> float:
        if self.fixed_loss_db is not None:
            return self.fixed_loss_db
        f_mhz = 1000.0 * carrier_freq_ghz
        return (
            46.3
            + 33.9 * np.log10(f_mhz)
            - 13.82 * np.log10(self.ap_height_m)
            - (1.1 * np.log10(f_mhz) - 0.7) * self.ue_height_m
            + (1.56 * np.log10(f_mhz) - 0.8)
        )


@dataclass(frozen=True)
class Placement:
    """AP and UE coordinates in km on the [0, D) x [0, D) square."""

    ap_positions: np.ndarray  # (M, 2)
    ue_positions: np.ndarray  # (K, 2)


@dataclass(frozen=True)
class LargeScaleState:
    """Large-scale gains beta (linear, M x K) and the shadowing draw in dB."""

    beta: np.ndarray
    shadow_db: np.ndarray


def place_uniform(config, rng: np.random.Generator) -> Placement:
    """Drop M APs and K UEs i.i.d. uniformly on the deployment square."""
    side = config.area_side_km
    ap = rng.uniform(0.0, side, size=(config.num_aps, 2))
    ue = rng.uniform(0.0, side, size=(config.num_ues, 2))
    return Placement(ap_positions=ap, ue_positions=ue)


def wrap_distance(p, q, side: float):
    """Torus distance between points of the [0, side)^2 square.

    Each coordinate difference is wrapped to min(|d|, side - |d|) before
    taking the Euclidean norm, which is the quotient metric of the torus.
    Accepts stacked (..., 2) arrays.
    """
    delta = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    delta = np.minimum(delta, side - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


def pairwise_distances(a: np.ndarray, b: np.ndarray, side: float, wrap: bool = True) -> np.ndarray:
    """(len(a), len(b)) matrix of torus (or plain Euclidean) distances."""
    delta = np.abs(a[:, None, :] - b[None, :, :])
    if wrap:
        delta = np.minimum(delta, side - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


def path_loss_db(d_km, params: ThreeSlopeParams, carrier_freq_ghz: float):
    """Three-slope path loss in dB: -35 dB/decade beyond d1, -20 dB/decade
    between d0 and d1 (continuous at d1), constant below d0."""
    loss = params.fixed_loss(carrier_freq_ghz)
    d = np.asarray(d_km, dtype=float)
    d0, d1 = params.d0_km, params.d1_km
    mid_const = -loss - 15.0 * np.log10(d1)
    # np.maximum guards the log on the branch that where() discards
    outer = -loss - 35.0 * np.log10(np.maximum(d, d0))
    middle = mid_const - 20.0 * np.log10(np.maximum(d, d0))
    floor = mid_const - 20.0 * np.log10(d0)
    return np.where(d > d1, outer, np.where(d > d0, middle, floor))


def _correlated_field(positions: np.ndarray, side: float, decorr_km: float,
                      wrap: bool, rng: np.random.Generator) -> np.ndarray:
    """Zero-mean unit-variance Gaussian field with exp(-d/d_decorr) correlation."""
    dist = pairwise_distances(positions, positions, side, wrap=wrap)
    cov = np.exp(-dist / decorr_km)
    cov[np.diag_indices_from(cov)] += 1e-10
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "shadowing covariance is not positive semidefinite after jitter; "
            "degenerate geometry (coincident points?)"
        ) from exc
    return chol @ rng.standard_normal(len(positions))


def shadowing(placement: Placement, config, rng: np.random.Generator) -> np.ndarray:
    """Log-normal shadowing draw in dB, shape (M, K).

    Uncorrelated mode draws i.i.d. N(0, sigma_sh^2) per link. Correlated mode
    uses the two-component construction z_mk = sqrt(delta) a_m +
    sqrt(1-delta) b_k with exponentially correlated AP and UE fields.
    Shadowing applies only to links beyond the path-loss knee d1 (links in
    the two inner slopes are deterministic) unless configured otherwise.
    """
    m = config.num_aps
    k = config.num_ues
    sigma = config.shadowing_std_db
    if sigma < 0:
        raise ValueError("shadowing standard deviation must be nonnegative")
    if sigma == 0.0:
        return np.zeros((m, k))
    if config.shadowing_correlated:
        delta = config.shadowing_split
        a = _correlated_field(placement.ap_positions, config.area_side_km,
                              config.decorr_distance_km, config.wrap_around, rng)
        b = _correlated_field(placement.ue_positions, config.area_side_km,
                              config.decorr_distance_km, config.wrap_around, rng)
        z = np.sqrt(delta) * a[:, None] + np.sqrt(1.0 - delta) * b[None, :]
    else:
        z = rng.standard_normal((m, k))
    shadow = sigma * z
    if config.shadow_beyond_knee_only:
        dist = pairwise_distances(placement.ap_positions, placement.ue_positions,
                                  config.area_side_km, wrap=config.wrap_around)
        shadow = np.where(dist > config.pathloss_params.d1_km, shadow, 0.0)
    return shadow


def large_scale(placement: Placement, config, rng: np.random.Generator) -> LargeScaleState:
    """beta_mk = 10^((PL(d_mk) + shadow_mk)/10) with torus distances."""
    dist = pairwise_distances(placement.ap_positions, placement.ue_positions,
                              config.area_side_km, wrap=config.wrap_around)
    shadow = shadowing(placement, config, rng)
    pl = path_loss_db(dist, config.pathloss_params, config.carrier_freq_ghz)
    beta = 10.0 ** ((pl + shadow) / 10.0)
    return LargeScaleState(beta=beta, shadow_db=shadow)


def draw_small_scale(m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """(m, k) i.i.d. CN(0, 1) small-scale fading matrix."""
    return (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) / np.sqrt(2.0)


def draw_cn(shape, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) array of the given shape (total variance 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def snr_normalize(radiated_power_w: float, config) -> float:
    """Normalized transmit SNR: power over thermal noise at 290 K through the
    receiver noise figure."""
    if radiated_power_w < 0:
        raise ValueError("radiated power must be nonnegative")
    noise_w = (
        config.bandwidth_hz
        * BOLTZMANN_J_PER_K
        * NOISE_REF_TEMP_K
        * 10.0 ** (config.noise_figure_db / 10.0)
    )
    return radiated_power_w / noise_w
