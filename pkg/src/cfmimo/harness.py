"""Experiment orchestration: Monte Carlo over placements, scenario sweeps,
CDF summaries and result emission.

Every placement is an isolated computation seeded by a deterministic
substream of the master seed keyed on the placement index, so results are
bit-identical regardless of execution order or worker count.

Result CSV schema, one row per (placement, UE), columns in this order:

  placement, ue, ul_pilot, dl_pilot, cluster_size, cluster_aps,
  rate_cf, rate_scsi, rate_ub, rate_unf, rate_lb,
  net_cf, net_scsi, net_ub, net_unf, net_lb,
  unf_excluded, target_sinr, socp_solves,
  pilot_policy, power_policy, seed, placement_seed

cluster_aps is a |-separated AP index list under user-centric selection.

Rates are gross/net bits/s/Hz; columns of bounds that were not requested are
empty. The JSON-lines file mirrors the same fields; a manifest records the
full configuration, seed, versions and timestamps. SCA runs additionally
emit a per-iteration trace (placement, iteration, nu, min_rate_cf).
"""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import clusters, estimation, geometry, pilots, powerctl, rates
from .config import ScenarioConfig

logger = logging.getLogger("cfmimo")

PILOT_POLICIES = ("baseline", "greedy", "advanced-greedy", "orthogonal")
POWER_POLICIES = ("cd-fpt", "mmf-sca")
RATE_KINDS = ("cf", "scsi", "ub", "unf", "lb")
# Bounds that presuppose downlink pilots; they carry the extra overhead.
DL_TRAINED_KINDS = ("cf", "ub", "unf")

CSV_COLUMNS = (
    "placement", "ue", "ul_pilot", "dl_pilot", "cluster_size", "cluster_aps",
    "rate_cf", "rate_scsi", "rate_ub", "rate_unf", "rate_lb",
    "net_cf", "net_scsi", "net_ub", "net_unf", "net_lb",
    "unf_excluded", "target_sinr", "socp_solves",
    "pilot_policy", "power_policy", "seed", "placement_seed",
)

TRACE_COLUMNS = ("placement", "iteration", "nu", "min_rate_cf")

_GEOMETRY, _PILOTS, _FADING = 1, 2, 3


def substream(seed: int, *path: int) -> np.random.Generator:
    """Deterministic, order-independent random stream keyed on (seed, path)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


@dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioConfig
    num_placements: int = 200
    num_fading_draws_per_placement: int = 2000
    pilot_policy: str = "baseline"
    power_policy: str = "cd-fpt"
    rate_set: tuple = ("cf", "scsi")
    dl_training: bool = True
    user_centric_alpha: float | None = None
    output_path: str = "out"
    sca_iterations: int = 5
    assignment_iters: int = 5
    bisection_eps: float = 1e-3
    workers: int = 1

    def __post_init__(self):
        if self.num_placements < 1 or self.num_fading_draws_per_placement < 1:
            raise ValueError("placement and fading-draw counts must be at least 1")
        if self.pilot_policy not in PILOT_POLICIES:
            raise ValueError(f"unknown pilot policy {self.pilot_policy!r}")
        if self.power_policy not in POWER_POLICIES:
            raise ValueError(f"unknown power policy {self.power_policy!r}")
        unknown = set(self.rate_set) - set(RATE_KINDS)
        if unknown:
            raise ValueError(f"unknown rate kinds: {sorted(unknown)}")
        if self.pilot_policy == "orthogonal":
            cfg = self.scenario
            if cfg.ul_pilot_len != cfg.num_ues or cfg.dl_pilot_len != cfg.num_ues:
                raise ValueError("orthogonal pilot policy needs ul/dl pilot lengths == num_ues")
        if self.user_centric_alpha is not None and not 0 < self.user_centric_alpha <= 1:
            raise ValueError("user_centric_alpha must lie in (0, 1]")


def _placement_records(spec: ExperimentSpec, p: int):
    """Run one placement end to end; returns (records, sca_trace_rows)."""
    cfg = spec.scenario
    rng_geo = substream(cfg.rng_seed, _GEOMETRY, p)
    placement = geometry.place_uniform(cfg, rng_geo)
    state = geometry.large_scale(placement, cfg, rng_geo)
    snr = pilots.SnrParams.from_config(cfg)
    k = cfg.num_ues

    rng_pilot = substream(cfg.rng_seed, _PILOTS, p)
    if spec.pilot_policy == "orthogonal":
        plan = pilots.orthogonal_plan(k)
    else:
        pool = pilots.make_pair_pool(cfg.ul_pilot_len, cfg.dl_pilot_len)
        plan = pilots.baseline_assign(pool, k, rng_pilot)
    if spec.pilot_policy in ("greedy", "advanced-greedy"):
        _, gamma0 = estimation.mmse_uplink(state.beta, plan, snr.rho_up, plan.ul_book.length)
        eta0 = powerctl.cd_fpt(gamma0).eta
        assign = (pilots.greedy_assign if spec.pilot_policy == "greedy"
                  else pilots.advanced_greedy_assign)
        plan = assign(plan, state, eta0, gamma0, snr, iters=spec.assignment_iters)
    _, gamma = estimation.mmse_uplink(state.beta, plan, snr.rho_up, plan.ul_book.length)

    mask = None
    cluster_sizes = np.full(k, cfg.num_aps)
    cluster_members = [None] * k
    if spec.user_centric_alpha is not None:
        cl = clusters.select_largest_lsf(state.beta, spec.user_centric_alpha)
        mask = cl.mask(cfg.num_aps)
        cluster_sizes = cl.sizes()
        cluster_members = ["|".join(str(a) for a in aps) for aps in cl.ap_indices]

    target_sinr = None
    solves = None
    trace_rows = []
    if spec.power_policy == "cd-fpt":
        power = powerctl.cd_fpt(gamma, mask)
    else:
        data = powerctl.MaxMinData(beta=state.beta, gamma=gamma,
                                   ul_gram=estimation.ul_gram(plan),
                                   rho_d=snr.rho_d, mask=mask)
        if spec.dl_training:
            res = powerctl.bisection_maxmin(data, eps=spec.bisection_eps,
                                            n_iters=spec.sca_iterations)
        else:
            res = powerctl.bisection_maxmin_scsi(data, eps=spec.bisection_eps)
        power = res.coefficients
        target_sinr = res.target_sinr
        solves = res.solves
        for entry in res.trace:
            ri_it = rates.RateInputs(beta=state.beta, gamma=gamma,
                                     eta=entry["zeta"] ** 2, plan=plan,
                                     rho_d=snr.rho_d, rho_dp=snr.rho_dp,
                                     tau_dp=cfg.dl_pilot_len)
            trace_rows.append({"placement": p, "iteration": entry["iteration"],
                               "nu": entry["nu"],
                               "min_rate_cf": float(np.min(rates.rate_cf(ri_it)))})

    ri = rates.RateInputs(beta=state.beta, gamma=gamma, eta=power.eta, plan=plan,
                          rho_d=snr.rho_d, rho_dp=snr.rho_dp, tau_dp=cfg.dl_pilot_len,
                          rho_up=snr.rho_up, tau_up=cfg.ul_pilot_len)
    ri.validate()

    rng_mc = substream(cfg.rng_seed, _FADING, p)
    gross = {}
    net = {}
    unf_excluded = None
    for kind in spec.rate_set:
        if kind == "cf":
            values = rates.rate_cf(ri)
        elif kind == "scsi":
            values = rates.rate_scsi(ri)
        elif kind == "ub":
            values = rates.rate_ub(ri)
        elif kind == "unf":
            est = rates.rate_unf_mc(ri, spec.num_fading_draws_per_placement, rng_mc)
            values = est.rate
            unf_excluded = est.excluded
        else:  # lb: non-coherent decoding, no downlink pilots in its TDD mode
            tau_dd = cfg.dl_data_fraction * (cfg.coherence_length - cfg.ul_pilot_len)
            values = rates.rate_noncoherent_lb(ri, tau_dd,
                                               spec.num_fading_draws_per_placement, rng_mc)
        gross[kind] = values
        dl_trained = spec.dl_training and kind in DL_TRAINED_KINDS
        net[kind] = rates.net_rate(values, cfg, with_dl_training=dl_trained)

    records = []
    for ue in range(k):
        rec = {
            "placement": p,
            "ue": ue,
            "ul_pilot": int(plan.ul_index[ue]),
            "dl_pilot": int(plan.dl_index[ue]),
            "cluster_size": int(cluster_sizes[ue]),
            "cluster_aps": cluster_members[ue],
            "unf_excluded": int(unf_excluded[ue]) if unf_excluded is not None else None,
            "target_sinr": target_sinr,
            "socp_solves": solves,
            "pilot_policy": spec.pilot_policy,
            "power_policy": spec.power_policy,
            "seed": cfg.rng_seed,
            "placement_seed": f"{cfg.rng_seed}/{p}",
        }
        for kind in RATE_KINDS:
            rec[f"rate_{kind}"] = float(gross[kind][ue]) if kind in gross else None
            rec[f"net_{kind}"] = float(net[kind][ue]) if kind in net else None
        records.append(rec)
    return records, trace_rows


def run_experiment(spec: ExperimentSpec):
    """Run all placements; returns (records, sca_trace_rows) in placement order.

    A failing placement is logged and skipped; the run continues.
    """
    indices = range(spec.num_placements)
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_placement_worker, [(spec, p) for p in indices]))
    else:
        results = [_placement_worker((spec, p)) for p in indices]
    records = []
    traces = []
    for recs, tr in results:
        records.extend(recs)
        traces.extend(tr)
    return records, traces


def _placement_worker(args):
    spec, p = args
    try:
        return _placement_records(spec, p)
    except Exception as exc:  # isolate the placement, keep the run going
        logger.warning("placement %d aborted: %s", p, exc)
        return [], []


@dataclass(frozen=True)
class CdfSummary:
    grid: np.ndarray
    cdf: np.ndarray
    median: float
    p05: float  # the "95%-likely" value


def compute_cdf(values, grid: int = 200) -> CdfSummary:
    """Empirical CDF on a uniform grid over [min, max], plus the median and
    the 5th percentile (95%-likely rate)."""
    vals = np.sort(np.asarray(values, dtype=float).ravel())
    if vals.size == 0:
        raise ValueError("compute_cdf needs a non-empty sample")
    pts = np.linspace(vals[0], vals[-1], grid)
    cdf = np.searchsorted(vals, pts, side="right") / vals.size
    return CdfSummary(grid=pts, cdf=cdf, median=float(np.median(vals)),
                      p05=float(np.percentile(vals, 5, method="lower")))


@dataclass(frozen=True)
class SweepResult:
    ul_lengths: np.ndarray
    dl_lengths: np.ndarray
    mean_gross: np.ndarray  # xi * mean closed-form rate, NaN where infeasible
    mean_net: np.ndarray


def sweep_pilot_lengths(base: ExperimentSpec, ul_range, dl_range) -> SweepResult:
    """Grid of per-user average (gross, net) rates over pilot-length pairs.

    Infeasible pairs (too few pilot pairs for the UEs, or no room left in the
    coherence interval) are marked NaN. Placement geometry is identical
    across cells because the geometry substream does not depend on the pilot
    lengths.
    """
    ul_lengths = np.asarray(list(ul_range), dtype=int)
    dl_lengths = np.asarray(list(dl_range), dtype=int)
    mean_gross = np.full((len(ul_lengths), len(dl_lengths)), np.nan)
    mean_net = np.full_like(mean_gross, np.nan)
    for i, tu in enumerate(ul_lengths):
        for j, td in enumerate(dl_lengths):
            try:
                cfg = dataclasses.replace(base.scenario, ul_pilot_len=int(tu),
                                          dl_pilot_len=int(td))
                spec = dataclasses.replace(base, scenario=cfg, rate_set=("cf",))
            except ValueError:
                continue
            records, _ = run_experiment(spec)
            gross = np.array([r["rate_cf"] for r in records])
            net = np.array([r["net_cf"] for r in records])
            mean_gross[i, j] = cfg.dl_data_fraction * float(np.mean(gross))
            mean_net[i, j] = float(np.mean(net))
    return SweepResult(ul_lengths=ul_lengths, dl_lengths=dl_lengths,
                       mean_gross=mean_gross, mean_net=mean_net)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _git_describe() -> str | None:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"],
                             capture_output=True, text=True, timeout=5)
        return out.stdout.strip() or None
    except (OSError, subprocess.SubprocessError):
        return None


def emit(records, out_dir, spec: ExperimentSpec | None = None, traces=None,
         formats=("csv", "jsonl")) -> dict:
    """Write records (CSV and/or JSON-lines), the SCA trace, and a manifest.

    Returns the paths written. Floats are formatted with 17 significant
    digits so the CSV round-trips exactly.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    paths = {}
    try:
        if "csv" in formats:
            paths["csv"] = out / "results.csv"
            with open(paths["csv"], "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for rec in records:
                    writer.writerow([_fmt(rec.get(c)) for c in CSV_COLUMNS])
        if "jsonl" in formats:
            paths["jsonl"] = out / "results.jsonl"
            with open(paths["jsonl"], "w") as fh:
                for rec in records:
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
        if traces:
            paths["trace"] = out / "sca_trace.csv"
            with open(paths["trace"], "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(TRACE_COLUMNS)
                for row in traces:
                    writer.writerow([_fmt(row.get(c)) for c in TRACE_COLUMNS])
        manifest = {
            "records": len(records),
            "created_unix": time.time(),
            "git": _git_describe(),
            "numpy": np.__version__,
        }
        if spec is not None:
            spec_dict = dataclasses.asdict(spec)
            spec_dict["rate_set"] = list(spec.rate_set)
            manifest["experiment"] = spec_dict
            manifest["seed"] = spec.scenario.rng_seed
        paths["manifest"] = out / "manifest.json"
        with open(paths["manifest"], "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
    except OSError as exc:
        raise OSError(f"failed writing results under {out}: {exc}") from exc
    return paths
