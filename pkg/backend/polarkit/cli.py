"""Command-line entry point: ``polarkit <subcommand> [flags]``.

Values come from built-in defaults, then the ``--config`` JSON document,
then explicit flags; the merged document is validated before any work.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar

from pydantic import ValidationError

from . import __version__
from .coding.channel import ChannelParams
from .coding.io import campaign_path, write_bound, write_json, write_reliabilities, write_sim_result, write_spectrum
from .coding.kernel import Kernel, gamma_notes, is_permutation_kernel, permutation_kernel, validate
from .coding.polar import (
    PolarCodeConfig,
    StageAssignment,
    genie_reliabilities,
    placement_comparison,
    select_information_set,
)
from .coding.presets import (
    load_code_config,
    load_kernel,
    parse_permutation,
    parse_signal_set,
    parse_snr_grid,
    resolve_kernel,
)
from .coding.search import optimize_pam3_shift, optimize_quad_rotation, search_permutations
from .coding.signal_set import SignalSet, min_distance
from .coding.sim import overlay_bounds, simulate_bad_channel, simulate_fer, simulate_good_channel
from .coding.spectrum import bad_spectrum, bound_curve, equidistant_bound, good_spectrum, report
from .config import CONSTRUCTION_TRIALS, EARLY_STOP_ERRORS, LOG_FORMAT, LOG_LEVEL, SEED_ENV_VAR
from .constants import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, ROLE_BAD, ROLE_FER, ROLE_GOOD
from .env import get_int_env
from .errors import DomainError, PolarkitError, SearchRefusedError
from .models import (
    BoundPointModel,
    BoundResponse,
    CampaignConfig,
    DesignModel,
    KernelModel,
    PlacementComparisonModel,
    PolarCodeDocument,
    ReliabilityTableModel,
    SearchResultModel,
    SignalSetModel,
    SimResultModel,
    SpectrumModel,
    SpectrumReportModel,
)

log = logging.getLogger("polarkit.cli")

T = TypeVar("T")

# flags whose names differ from the config field
_FLAG_NAMES = {"K": "--k"}


class UsageError(PolarkitError):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _flag_name(field: str) -> str:
    return _FLAG_NAMES.get(field, "--" + field.replace("_", "-"))


def _with_flag(flag: str, fn: Callable[..., T], *args: Any, **kwargs: Any) -> T:
    try:
        return fn(*args, **kwargs)
    except DomainError as exc:
        raise UsageError(flag, str(exc)) from exc


####################
# Argument parsing
####################


def _add_output(parser: argparse.ArgumentParser, csv: bool) -> None:
    parser.add_argument("--config", type=Path, help="JSON campaign document; explicit flags override it")
    parser.add_argument("--out", help="output file (or directory for campaigns); stdout when omitted")
    parser.add_argument("--json", dest="format", action="store_const", const="json", help="emit JSON")
    if csv:
        parser.add_argument("--format", choices=["json", "csv"], help="output format")


def _add_kernel(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set", help="psk:<q>, quad-eq, pam3-eq or a .json point file")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--pi", help="permutation images, e.g. 0,2,4,1,3, or 'identity'")
    group.add_argument("--gamma", type=int, help="Reed-Solomon kernel u1 + gamma*u2 over a prime q")
    group.add_argument("--kernel", help="JSON kernel document with q and table, e.g. kernel --out output")


def _add_monte_carlo(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--snr-db", dest="snr_db", help="start:stop:step (inclusive), a comma list, or one value")
    parser.add_argument("--trials", type=int, help="trials per SNR point")
    parser.add_argument("--seed", type=int, help=f"campaign seed (fallback: ${SEED_ENV_VAR})")
    parser.add_argument("--threads", type=int, help="worker cap; results do not depend on it")


def _add_code(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="stage count, N = 2^n")
    parser.add_argument(
        "--placement",
        choices=["channel-stage", "all-stages", "all-standard"],
        help="where the chosen kernel sits; other stages use the standard kernel",
    )
    parser.add_argument("--k", "-K", dest="K", type=int, help="information symbols")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarkit", description="Non-binary polarization kernel toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)

    p = add("signalset", "describe a signal set or run a one-parameter design solve")
    _add_output(p, csv=False)
    p.add_argument("--set", help="psk:<q>, quad-eq, pam3-eq or a .json point file")
    p.add_argument("--design", choices=["quad", "pam3"], help="solve the rotation (quad) or gap ratio (pam3)")

    p = add("kernel", "build and validate a kernel")
    _add_output(p, csv=False)
    _add_kernel(p)
    p.add_argument("--q", type=int, help="alphabet size when no --set is given")

    p = add("spectrum", "distance spectra of the synthetic channels")
    _add_output(p, csv=True)
    _add_kernel(p)
    p.add_argument("--role", choices=[ROLE_GOOD, ROLE_BAD])
    p.add_argument("--u1", type=int, help="reference u1 (single-reference spectrum)")
    p.add_argument("--u2", type=int, help="reference u2 (single-reference spectrum)")

    p = add("bound", "union bound of the worst reference spectrum over an SNR grid")
    _add_output(p, csv=True)
    _add_kernel(p)
    p.add_argument("--role", choices=[ROLE_GOOD, ROLE_BAD])
    p.add_argument("--snr-db", dest="snr_db", help="start:stop:step (inclusive), a comma list, or one value")

    p = add("search", "exhaustive search of permutation kernels")
    _add_output(p, csv=False)
    p.add_argument("--set", help="psk:<q>, quad-eq, pam3-eq or a .json point file")
    p.add_argument("--all-optima", dest="all_optima", action="store_true", help="list every optimal permutation")

    p = add("simulate", "Monte Carlo symbol error rate of one synthetic channel")
    _add_output(p, csv=True)
    _add_kernel(p)
    _add_monte_carlo(p)
    p.add_argument("--role", choices=[ROLE_GOOD, ROLE_BAD])
    p.add_argument("--campaign", help="campaign name used for <campaign>.<role>.csv")
    p.add_argument("--early-stop", dest="early_stop", action="store_true",
                   help=f"stop a point after {EARLY_STOP_ERRORS} errors")

    p = add("construct", "genie-aided reliabilities of every index")
    _add_output(p, csv=True)
    _add_kernel(p)
    _add_monte_carlo(p)
    _add_code(p)
    p.add_argument("--compare-placements", dest="compare_placements", action="store_true",
                   help="compare kernel placements A/B (chosen kernel) and C/D (--alt-pi)")
    p.add_argument("--alt-pi", dest="alt_pi", help="alternative permutation for placements C and D")
    p.add_argument("--save-code", dest="save_code", help="write the constructed code (needs --k) to this JSON file")

    p = add("fer", "Monte Carlo frame error rate of SC decoding")
    _add_output(p, csv=True)
    _add_kernel(p)
    _add_monte_carlo(p)
    _add_code(p)
    p.add_argument("--campaign", help="campaign name used for <campaign>.fer.csv")
    p.add_argument("--code", help="JSON polar code from construct --save-code; replaces --set, --pi and --n")
    p.add_argument("--construction-snr-db", dest="construction_snr_db", type=float,
                   help="build the information set once at this SNR instead of at every point")
    p.add_argument("--construction-trials", dest="construction_trials", type=int,
                   help="genie trials per construction")
    p.add_argument("--early-stop", dest="early_stop", action="store_true",
                   help=f"stop a point after {EARLY_STOP_ERRORS} errors")

    p = add("serve", "serve the analysis API over HTTP")
    p.add_argument("--config", type=Path, help="JSON campaign document")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    return parser


def _load_config(args: argparse.Namespace) -> CampaignConfig:
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    document: Dict[str, Any] = {}
    config_path = getattr(args, "config", None)
    if config_path is not None:
        try:
            document = json.loads(Path(config_path).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError("--config", f"cannot read {config_path}: {exc}") from exc
        if not isinstance(document, dict):
            raise UsageError("--config", "document must be a JSON object")
    merged = {**document, **flags, "command": args.command}
    try:
        return CampaignConfig.model_validate(merged)
    except ValidationError as exc:
        first = exc.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else "config"
        source = "--config" if field not in flags and field in document else _flag_name(field)
        raise UsageError(source, f"{first['msg']} (field {field!r})") from exc


####################
# Shared resolution
####################


def _require(cfg: CampaignConfig, field: str) -> Any:
    value = getattr(cfg, field)
    if value is None:
        raise UsageError(_flag_name(field), "is required")
    return value


def _signal_set(cfg: CampaignConfig) -> SignalSet:
    return _with_flag("--set", parse_signal_set, _require(cfg, "set"))


def _kernel(cfg: CampaignConfig, q: int) -> Kernel:
    if cfg.kernel is not None:
        if cfg.pi is not None or cfg.gamma is not None:
            raise UsageError("--kernel", "give only one of --pi, --gamma, --kernel")
        kernel = _with_flag("--kernel", load_kernel, cfg.kernel)
        if kernel.q != q:
            raise UsageError("--kernel", f"kernel has q={kernel.q}, signal set has q={q}")
        return kernel
    flag = "--gamma" if cfg.gamma is not None else "--pi"
    return _with_flag(flag, resolve_kernel, q, pi=cfg.pi, gamma=cfg.gamma)


def _role(cfg: CampaignConfig) -> str:
    if cfg.role not in (ROLE_GOOD, ROLE_BAD):
        raise UsageError("--role", f"must be {ROLE_GOOD!r} or {ROLE_BAD!r}, got {cfg.role!r}")
    return cfg.role


def _snr_grid(cfg: CampaignConfig) -> List[float]:
    value = _require(cfg, "snr_db")
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, list):
        if not value:
            raise UsageError("--snr-db", "SNR grid is empty")
        return [float(v) for v in value]
    return _with_flag("--snr-db", parse_snr_grid, value)


def _seed(cfg: CampaignConfig) -> int:
    # read at call time so the environment can change between runs
    return cfg.seed if cfg.seed is not None else get_int_env(SEED_ENV_VAR, 1)


def _format(cfg: CampaignConfig, default: str) -> str:
    return cfg.format or default


def _out_file(cfg: CampaignConfig, role: str, fmt: str) -> Optional[Path]:
    if cfg.out is None:
        return None
    path = Path(cfg.out)
    if path.suffix in (".csv", ".json"):
        return path
    return campaign_path(path, cfg.campaign, role, fmt)


def _code_config(cfg: CampaignConfig, signal_set: SignalSet, kernel: Kernel) -> PolarCodeConfig:
    assignments = {
        "channel-stage": StageAssignment.channel_stage_only(kernel),
        "all-stages": StageAssignment.uniform(kernel),
        "all-standard": StageAssignment.all_standard(signal_set.q),
    }
    return _with_flag("--n", PolarCodeConfig.build, signal_set, cfg.n, assignments[cfg.placement])


####################
# Subcommands
####################


def cmd_signalset(cfg: CampaignConfig) -> int:
    if cfg.design is not None:
        if cfg.design == "quad":
            value, signal_set = optimize_quad_rotation()
            pi, closed_form, parameter = (0, 2, 1, 3), 2.0 / math.sqrt(3.0), "x"
        else:
            value, signal_set = optimize_pam3_shift()
            pi, closed_form, parameter = (0, 2, 1), 1.0 + math.sqrt(3.0), "beta_over_alpha"
        spectrum = good_spectrum(signal_set, permutation_kernel(signal_set.q, pi), 0, 0)
        write_json(
            DesignModel(
                parameter=parameter,
                value=value,
                d_min=spectrum.d_min,
                n_min=spectrum.n_min,
                es=signal_set.es,
                points=signal_set.points.tolist(),
                extra={"closed_form": closed_form, "pi": list(pi)},
            ),
            cfg.out,
        )
        return EXIT_OK
    signal_set = _signal_set(cfg)
    model = SignalSetModel.model_validate(signal_set)
    model.min_distance = min_distance(signal_set)
    write_json(model, cfg.out)
    return EXIT_OK


def cmd_kernel(cfg: CampaignConfig) -> int:
    if cfg.set is not None:
        q = _signal_set(cfg).q
    else:
        q = _require(cfg, "q")
    kernel = _kernel(cfg, q)
    pi = is_permutation_kernel(kernel)
    model = KernelModel.model_validate(kernel)
    model.valid = validate(kernel)
    model.permutation = list(pi.image) if pi is not None else None
    if cfg.gamma is not None:
        model.notes = gamma_notes(cfg.gamma)
    write_json(model, cfg.out)
    return EXIT_OK


def cmd_spectrum(cfg: CampaignConfig) -> int:
    signal_set = _signal_set(cfg)
    kernel = _kernel(cfg, signal_set.q)
    role = _role(cfg)
    if cfg.u1 is not None or cfg.u2 is not None:
        single = good_spectrum if role == ROLE_GOOD else bad_spectrum
        flag = "--u1" if cfg.u1 is not None else "--u2"
        spectrum = _with_flag(flag, single, signal_set, kernel, cfg.u1 or 0, cfg.u2 or 0)
        if _format(cfg, "json") == "csv":
            write_spectrum(spectrum, cfg.out)
        else:
            write_json(SpectrumModel.from_spectrum(spectrum), cfg.out)
        return EXIT_OK
    result = report(signal_set, kernel, role)
    if _format(cfg, "json") == "csv":
        write_spectrum(result.worst, cfg.out)
    else:
        write_json(SpectrumReportModel.from_report(result, signal_set.name, kernel.name), cfg.out)
    return EXIT_OK


def cmd_bound(cfg: CampaignConfig) -> int:
    signal_set = _signal_set(cfg)
    kernel = _kernel(cfg, signal_set.q)
    worst = report(signal_set, kernel, _role(cfg)).worst
    curve = _with_flag("--snr-db", bound_curve, worst, _snr_grid(cfg))
    if _format(cfg, "csv") == "csv":
        write_bound(curve, cfg.out)
    else:
        write_json(
            BoundResponse(
                signal_set=signal_set.name,
                kernel=kernel.name,
                spectrum=SpectrumModel.from_spectrum(worst),
                points=[BoundPointModel(snr_db=s, pe_bound=p) for s, p in curve],
            ),
            cfg.out,
        )
    return EXIT_OK


def cmd_search(cfg: CampaignConfig) -> int:
    signal_set = _signal_set(cfg)
    result = search_permutations(signal_set, all_optima=cfg.all_optima)
    write_json(SearchResultModel.from_result(result, signal_set.name, equidistant_bound(signal_set)), cfg.out)
    return EXIT_OK


def cmd_simulate(cfg: CampaignConfig) -> int:
    signal_set = _signal_set(cfg)
    kernel = _kernel(cfg, signal_set.q)
    role = _role(cfg)
    simulate = simulate_good_channel if role == ROLE_GOOD else simulate_bad_channel
    result = simulate(
        signal_set,
        kernel,
        _snr_grid(cfg),
        cfg.trials,
        _seed(cfg),
        threads=cfg.threads,
        early_stop=EARLY_STOP_ERRORS if cfg.early_stop else None,
    )
    result = overlay_bounds(result, report(signal_set, kernel, role).worst)
    _write_result(cfg, result, role)
    return EXIT_OK


def _write_result(cfg: CampaignConfig, result, role: str) -> None:
    fmt = _format(cfg, "csv")
    target = _out_file(cfg, role, fmt)
    if fmt == "csv":
        write_sim_result(result, target)
    else:
        write_json(SimResultModel.model_validate(result), target)


def _single_snr(cfg: CampaignConfig) -> float:
    grid = _snr_grid(cfg)
    if len(grid) != 1:
        raise UsageError("--snr-db", f"construction needs exactly one SNR value, got {len(grid)}")
    return grid[0]


def cmd_construct(cfg: CampaignConfig) -> int:
    signal_set = _signal_set(cfg)
    kernel = _kernel(cfg, signal_set.q)
    params = _with_flag("--snr-db", ChannelParams, _single_snr(cfg), signal_set.es)
    if cfg.compare_placements:
        alt_pi = _with_flag("--alt-pi", parse_permutation, _require(cfg, "alt_pi"), signal_set.q)
        alternative = permutation_kernel(signal_set.q, alt_pi)
        comparison = _with_flag(
            "--n", placement_comparison, signal_set, cfg.n, kernel, alternative,
            params, cfg.trials, _seed(cfg), threads=cfg.threads,
        )
        write_json(
            PlacementComparisonModel(
                special=kernel.name,
                alternative=alternative.name,
                agreement_ab=comparison.agreement("A", "B"),
                agreement_cd=comparison.agreement("C", "D"),
                tables={k: ReliabilityTableModel.from_table(t) for k, t in comparison.tables.items()},
            ),
            cfg.out,
        )
        return EXIT_OK
    if cfg.save_code is not None and cfg.K is None:
        raise UsageError("--save-code", "needs --k to choose the information set")
    code = _code_config(cfg, signal_set, kernel)
    table = genie_reliabilities(code, params, cfg.trials, _seed(cfg), threads=cfg.threads)
    information_set = None
    if cfg.K is not None:
        frozen = _with_flag("--k", select_information_set, table, cfg.K)
        constructed = code.with_frozen(frozen)
        information_set = constructed.information_set
        if cfg.save_code is not None:
            write_json(PolarCodeDocument.from_config(constructed), cfg.save_code)
    if _format(cfg, "csv") == "csv":
        write_reliabilities(table, cfg.out)
    else:
        write_json(ReliabilityTableModel.from_table(table, information_set), cfg.out)
    return EXIT_OK


def cmd_fer(cfg: CampaignConfig) -> int:
    if cfg.code is not None:
        code = _with_flag("--code", load_code_config, cfg.code)
        K = cfg.K if cfg.K is not None else code.length - len(code.frozen)
    else:
        signal_set = _signal_set(cfg)
        kernel = _kernel(cfg, signal_set.q)
        code = _code_config(cfg, signal_set, kernel)
        K = cfg.K if cfg.K is not None else code.length // 2
    result = _with_flag(
        "--k",
        simulate_fer,
        code,
        K,
        _snr_grid(cfg),
        cfg.trials,
        _seed(cfg),
        construction_snr_db=cfg.construction_snr_db,
        construction_trials=cfg.construction_trials or CONSTRUCTION_TRIALS,
        threads=cfg.threads,
        early_stop=EARLY_STOP_ERRORS if cfg.early_stop else None,
    )
    _write_result(cfg, result, ROLE_FER)
    return EXIT_OK


def cmd_serve(cfg: CampaignConfig) -> int:
    from .main import serve

    kwargs = {k: v for k, v in (("host", cfg.host), ("port", cfg.port)) if v is not None}
    serve(**kwargs)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[CampaignConfig], int]] = {
    "signalset": cmd_signalset,
    "kernel": cmd_kernel,
    "spectrum": cmd_spectrum,
    "bound": cmd_bound,
    "search": cmd_search,
    "simulate": cmd_simulate,
    "construct": cmd_construct,
    "fer": cmd_fer,
    "serve": cmd_serve,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _load_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        log.warning("invalid arguments for %s: %s", args.command, exc)
        print(f"polarkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchRefusedError as exc:
        log.error("search refused: %s", exc)
        print(f"polarkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except DomainError as exc:
        log.warning("invalid input for %s: %s", args.command, exc)
        print(f"polarkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PolarkitError, RuntimeError, OSError) as exc:
        log.exception("%s failed", args.command)
        print(f"polarkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main() -> None:
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
