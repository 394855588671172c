"""Command-line entry point.

Subcommands:
  run              one experiment, records + manifest to --out
  sweep-pilots     grid of mean (gross, net) rates over pilot lengths
  compare-pc       CD-FPT vs max-min SCA power control, same placements
  compare-training max-min rates with vs without downlink training
  selftest         quick oracle suite (exit code reflects the outcome)

Scenario files are YAML mappings using the ScenarioConfig field names
verbatim (see config.py); `pathloss_params` nests the three-slope constants.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from .config import ScenarioConfig
from .harness import ExperimentSpec, compute_cdf, emit, run_experiment, sweep_pilot_lengths
from .selftest import run_selftest


def _add_common(sub):
    sub.add_argument("--config", type=Path, help="scenario YAML file")
    sub.add_argument("--seed", type=int, help="master seed (overrides the config)")
    sub.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--trials", type=int, help="fading draws per placement for MC bounds")
    sub.add_argument("--placements", type=int, help="number of placements")


def _scenario(args) -> ScenarioConfig:
    cfg = ScenarioConfig.from_file(args.config) if args.config else ScenarioConfig()
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, rng_seed=args.seed)
    return cfg


def _spec(args, cfg, **overrides) -> ExperimentSpec:
    fields = dict(scenario=cfg, workers=args.workers, output_path=str(args.out))
    if args.placements is not None:
        fields["num_placements"] = args.placements
    if args.trials is not None:
        fields["num_fading_draws_per_placement"] = args.trials
    fields.update(overrides)
    return ExperimentSpec(**fields)


def _parse_range(text: str):
    """'2:20:2' -> range(2, 21, 2); '4,8,12' -> [4, 8, 12]; '7' -> [7]."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(start, stop + 1, step))
    return [int(p) for p in text.split(",")]


def _summarize(tag, records, column):
    vals = np.array([r[column] for r in records if r[column] is not None])
    if vals.size == 0:
        print(f"{tag}: no values")
        return None
    s = compute_cdf(vals)
    print(f"{tag}: mean {vals.mean():.4f}  median {s.median:.4f}  "
          f"95%-likely {s.p05:.4f} bits/s/Hz over {vals.size} samples")
    return s


def cmd_run(args) -> int:
    cfg = _scenario(args)
    spec = _spec(args, cfg,
                 pilot_policy=args.pilot_policy,
                 power_policy=args.power_policy,
                 rate_set=tuple(args.rates.split(",")),
                 dl_training=not args.no_dl_training,
                 user_centric_alpha=args.alpha)
    records, traces = run_experiment(spec)
    paths = emit(records, args.out, spec=spec, traces=traces)
    for kind in spec.rate_set:
        _summarize(f"net {kind}", records, f"net_{kind}")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _scenario(args)
    spec = _spec(args, cfg)
    result = sweep_pilot_lengths(spec, _parse_range(args.ul), _parse_range(args.dl))
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "pilot_sweep.csv"
    with open(path, "w") as fh:
        fh.write("ul_pilot_len,dl_pilot_len,mean_gross,mean_net\n")
        for i, tu in enumerate(result.ul_lengths):
            for j, td in enumerate(result.dl_lengths):
                gross = format(float(result.mean_gross[i, j]), ".17g")
                net = format(float(result.mean_net[i, j]), ".17g")
                fh.write(f"{tu},{td},{gross},{net}\n")
    best = np.unravel_index(np.nanargmax(result.mean_net), result.mean_net.shape)
    print(f"best net rate {result.mean_net[best]:.4f} at "
          f"(ul, dl) = ({result.ul_lengths[best[0]]}, {result.dl_lengths[best[1]]})")
    print(f"wrote {path}")
    return 0


def cmd_compare_pc(args) -> int:
    cfg = _scenario(args)
    for policy in ("cd-fpt", "mmf-sca"):
        spec = _spec(args, cfg, power_policy=policy, rate_set=("cf",),
                     pilot_policy=args.pilot_policy)
        records, traces = run_experiment(spec)
        emit(records, Path(args.out) / policy, spec=spec, traces=traces)
        per_placement_min = _min_per_placement(records, "rate_cf")
        print(f"{policy}: mean min-rate {np.mean(per_placement_min):.4f} bits/s/Hz "
              f"over {len(per_placement_min)} placements")
    return 0


def cmd_compare_training(args) -> int:
    cfg = _scenario(args)
    summaries = {}
    for training, kind in ((True, "cf"), (False, "scsi")):
        label = "dl-training" if training else "no-dl-training"
        spec = _spec(args, cfg, power_policy="mmf-sca", dl_training=training,
                     rate_set=(kind,))
        records, traces = run_experiment(spec)
        emit(records, Path(args.out) / label, spec=spec, traces=traces)
        summaries[label] = _summarize(f"net {kind} ({label})", records, f"net_{kind}")
    with_t = summaries["dl-training"]
    without = summaries["no-dl-training"]
    if with_t and without and without.p05 > 0:
        gain = with_t.p05 / without.p05 - 1.0
        print(f"95%-likely net-rate gain from downlink training: {100 * gain:.1f}%")
    return 0


def _min_per_placement(records, column):
    by_placement = {}
    for r in records:
        if r[column] is None:
            continue
        by_placement.setdefault(r["placement"], []).append(r[column])
    return np.array([min(v) for v in by_placement.values()])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cfmimo", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="run one experiment")
    _add_common(p_run)
    p_run.add_argument("--pilot-policy", default="baseline",
                       choices=("baseline", "greedy", "advanced-greedy", "orthogonal"))
    p_run.add_argument("--power-policy", default="cd-fpt", choices=("cd-fpt", "mmf-sca"))
    p_run.add_argument("--rates", default="cf,scsi",
                       help="comma list from cf,scsi,ub,unf,lb")
    p_run.add_argument("--no-dl-training", action="store_true")
    p_run.add_argument("--alpha", type=float, help="user-centric selection fraction")
    p_run.set_defaults(fn=cmd_run)

    p_sweep = subs.add_parser("sweep-pilots", help="sweep pilot lengths")
    _add_common(p_sweep)
    p_sweep.add_argument("--ul", default="5:20:5", help="uplink lengths, a:b[:s] or list")
    p_sweep.add_argument("--dl", default="5:20:5", help="downlink lengths")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_pc = subs.add_parser("compare-pc", help="CD-FPT vs max-min power control")
    _add_common(p_pc)
    p_pc.add_argument("--pilot-policy", default="baseline",
                      choices=("baseline", "greedy", "advanced-greedy", "orthogonal"))
    p_pc.set_defaults(fn=cmd_compare_pc)

    p_tr = subs.add_parser("compare-training", help="with vs without downlink pilots")
    _add_common(p_tr)
    p_tr.set_defaults(fn=cmd_compare_training)

    p_self = subs.add_parser("selftest", help="run the built-in oracle suite")
    p_self.set_defaults(fn=lambda args: run_selftest())

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
