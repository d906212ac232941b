"""Run the reference Monte Carlo campaigns into an output directory."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path


def _ensure_path() -> None:
    backend = Path(__file__).resolve().parent.parent / "backend"
    if str(backend) not in sys.path:
        sys.path.insert(0, str(backend))


_ensure_path()

from polarkit.coding.channel import ChannelParams
from polarkit.coding.io import campaign_path, write_json, write_sim_result
from polarkit.coding.kernel import permutation_kernel, standard_kernel
from polarkit.coding.polar import PolarCodeConfig, StageAssignment, placement_comparison
from polarkit.coding.presets import parse_snr_grid
from polarkit.coding.signal_set import psk
from polarkit.coding.sim import crossing_snr, overlay_bounds, simulate_bad_channel, simulate_fer, simulate_good_channel
from polarkit.coding.spectrum import report
from polarkit.config import DEFAULT_SEED, LOG_FORMAT, LOG_LEVEL, OUTPUT_DIR
from polarkit.models import PlacementComparisonModel, ReliabilityTableModel

log = logging.getLogger("run_campaigns")

PI_Q5 = (0, 2, 4, 1, 3)
PI_Q4 = (0, 2, 1, 3)
PI_Q8 = (0, 3, 6, 1, 4, 7, 2, 5)
# Gray labelling: not equidistant on 8-PSK
PI_Q8_ALT = (0, 1, 3, 2, 6, 7, 5, 4)


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Reproduce the one-step SER, FER and placement campaigns")
    parser.add_argument("--out", type=Path, default=OUTPUT_DIR, help=f"output directory (default: {OUTPUT_DIR})")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--trials", type=int, default=1_000_000, help="trials per point for the q=5 campaigns")
    parser.add_argument("--fer-trials", type=int, default=20_000)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--only", choices=["ser", "fer", "placement"], default=None)
    return parser.parse_args()


def run_ser(out: Path, seed: int, trials: int, threads) -> None:
    signal_set = psk(5)
    grid = parse_snr_grid("0:14:0.5")
    for name, kernel in (("q5-standard", standard_kernel(5)), ("q5-pi1", permutation_kernel(5, PI_Q5))):
        for role, simulate in (("good", simulate_good_channel), ("bad", simulate_bad_channel)):
            result = simulate(signal_set, kernel, grid, trials, seed, threads=threads)
            result = overlay_bounds(result, report(signal_set, kernel, role).worst)
            write_sim_result(result, campaign_path(out, name, role))
            log.info("%s %s crosses 1e-3 at %s dB", name, role, crossing_snr(result, 1e-3))


def run_fer(out: Path, seed: int, trials: int, threads) -> None:
    signal_set = psk(4)
    grid = parse_snr_grid("0.5:4:0.5")
    placements = {
        "q4-n256-pi": StageAssignment.channel_stage_only(permutation_kernel(4, PI_Q4)),
        "q4-n256-standard": StageAssignment.all_standard(4),
    }
    for name, assignment in placements.items():
        config = PolarCodeConfig.build(signal_set, 8, assignment)
        result = simulate_fer(config, 128, grid, trials, seed, threads=threads, early_stop=None)
        write_sim_result(result, campaign_path(out, name, "fer"))


def run_placement(out: Path, seed: int, threads) -> None:
    comparison = placement_comparison(
        psk(8), 6, permutation_kernel(8, PI_Q8), permutation_kernel(8, PI_Q8_ALT), ChannelParams(8.0), 20_000, seed, threads=threads
    )
    write_json(
        PlacementComparisonModel(
            special="pi:" + ",".join(map(str, PI_Q8)),
            alternative="pi:" + ",".join(map(str, PI_Q8_ALT)),
            agreement_ab=comparison.agreement("A", "B"),
            agreement_cd=comparison.agreement("C", "D"),
            tables={k: ReliabilityTableModel.from_table(t) for k, t in comparison.tables.items()},
        ),
        campaign_path(out, "q8-n64", "placement", "json"),
    )


def main() -> None:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
    args = parse_args()
    if args.only in (None, "ser"):
        run_ser(args.out, args.seed, args.trials, args.threads)
    if args.only in (None, "fer"):
        run_fer(args.out, args.seed, args.fer_trials, args.threads)
    if args.only in (None, "placement"):
        run_placement(args.out, args.seed, args.threads)
    log.info("campaigns written to %s", args.out)


if __name__ == "__main__":
    main()
