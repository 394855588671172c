"""Scenario configuration: all physical and protocol parameters of one
simulated deployment, loadable from a YAML file with these exact field names.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .geometry import ThreeSlopeParams, snr_normalize


@dataclass(frozen=True)
class ScenarioConfig:
    area_side_km: float = 1.0
    num_aps: int = 100
    num_ues: int = 20
    carrier_freq_ghz: float = 2.0
    coherence_length: int = 200
    dl_data_fraction: float = 0.5
    ul_pilot_len: int = 10
    dl_pilot_len: int = 10
    dl_radiated_power_w: float = 0.2
    ul_radiated_power_w: float = 0.1
    bandwidth_hz: float = 20e6
    noise_figure_db: float = 9.0
    shadowing_std_db: float = 8.0
    shadowing_correlated: bool = False
    decorr_distance_km: float = 0.1
    shadowing_split: float = 0.5
    pathloss_params: ThreeSlopeParams = field(default_factory=ThreeSlopeParams)
    rng_seed: int = 0
    wrap_around: bool = True
    shadow_beyond_knee_only: bool = True

    def __post_init__(self):
        if self.num_aps <= self.num_ues:
            raise ValueError("need more APs than UEs (M > K)")
        if self.ul_pilot_len + self.dl_pilot_len >= self.coherence_length:
            raise ValueError("pilot lengths must leave room for data in the coherence interval")
        if self.ul_pilot_len * self.dl_pilot_len < self.num_ues:
            raise ValueError("need ul_pilot_len * dl_pilot_len >= num_ues pilot pairs")
        for name in ("area_side_km", "carrier_freq_ghz", "coherence_length", "ul_pilot_len",
                     "dl_pilot_len", "dl_radiated_power_w", "ul_radiated_power_w",
                     "bandwidth_hz"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0.0 <= self.dl_data_fraction <= 1.0:
            raise ValueError("dl_data_fraction must lie in [0, 1]")
        if not 0.0 <= self.shadowing_split <= 1.0:
            raise ValueError("shadowing_split must lie in [0, 1]")
        if self.shadowing_std_db < 0:
            raise ValueError("shadowing_std_db must be nonnegative")

    # Normalized transmit SNRs; downlink pilots reuse the downlink power budget.
    def rho_dl(self) -> float:
        return snr_normalize(self.dl_radiated_power_w, self)

    def rho_dl_pilot(self) -> float:
        return snr_normalize(self.dl_radiated_power_w, self)

    def rho_ul_pilot(self) -> float:
        return snr_normalize(self.ul_radiated_power_w, self)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        data = dict(data)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown scenario fields: {sorted(unknown)}")
        if "pathloss_params" in data and isinstance(data["pathloss_params"], dict):
            pl = data["pathloss_params"]
            pl_known = {f.name for f in dataclasses.fields(ThreeSlopeParams)}
            pl_unknown = set(pl) - pl_known
            if pl_unknown:
                raise ValueError(f"unknown pathloss fields: {sorted(pl_unknown)}")
            data["pathloss_params"] = ThreeSlopeParams(**pl)
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        with open(Path(path), "r") as fh:
            data = yaml.safe_load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"scenario file {path} must contain a mapping")
        return cls.from_dict(data)
