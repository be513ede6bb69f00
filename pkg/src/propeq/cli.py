"""Command-line interface: simulate, sweep, blindspots, spectrum.

Exit codes: 0 success, 1 configuration or validation error, 2 runtime
pipeline error (including I/O failures while emitting results).
"""

from __future__ import annotations

import argparse
import sys

from .channel import apply_channel, modulator_spectrum
from .equalizer import equalize, extract_doppler, predict_blind_spots
from .errors import PipelineError
from .harness import (
    CSV_HEADER,
    ScenarioConfig,
    default_scenario,
    dump_spectrum,
    emit_csv,
    emit_plot,
    fp_grid,
    load_config,
    run_single,
    scenario_with,
    sweep_fp,
    SweepResult,
)
from .signals import combine, synth_ils, synth_tone
from .spectral import forward_fft


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this CLI reserves 2 for runtime
    # pipeline failures, so downgrade usage problems to the config exit code.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="propeq",
        description="Reference-tone equalization of propeller-modulated ILS captures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[], help="run one scenario")
    sim.add_argument("--config", help="JSON scenario config (defaults used if omitted)")
    sim.add_argument("--fp", type=float, help="override propeller rate in Hz")
    sim.add_argument("--seed", type=int, help="override channel noise seed")
    sim.add_argument("--snr-db", type=float, help="override channel SNR in dB")
    sim.add_argument("--out", help="write the run as CSV to this path")

    sw = sub.add_parser("sweep", help="propeller-rate sweep with Monte-Carlo seeds")
    sw.add_argument("--config", help="JSON scenario config (defaults used if omitted)")
    sw.add_argument("--fp-start", type=float, default=15.0)
    sw.add_argument("--fp-stop", type=float, default=40.0)
    sw.add_argument("--fp-step", type=float, default=0.5)
    sw.add_argument("--seeds", type=int, default=10, help="number of seeds (0..n-1)")
    sw.add_argument("--snr-db", type=float, help="override channel SNR in dB")
    sw.add_argument("--out", required=True, help="CSV output path")
    sw.add_argument("--plot", help="optional SVG chart output path")
    sw.add_argument("--workers", type=int, default=1, help="parallel grid workers")

    bs = sub.add_parser("blindspots", help="scan the grid for equalization blind spots")
    bs.add_argument("--config", help="JSON scenario config (defaults used if omitted)")
    bs.add_argument("--threshold", type=float, default=0.01)
    bs.add_argument("--fp-start", type=float, default=15.0)
    bs.add_argument("--fp-stop", type=float, default=40.0)
    bs.add_argument("--fp-step", type=float, default=0.5)

    sp = sub.add_parser("spectrum", help="dump a pipeline-stage spectrum as CSV")
    sp.add_argument("--config", help="JSON scenario config (defaults used if omitted)")
    sp.add_argument("--stage", choices=("rx", "equalized", "modulator"), required=True)
    sp.add_argument("--fp", type=float, help="override propeller rate in Hz")
    sp.add_argument("--seed", type=int, help="override channel noise seed")
    sp.add_argument("--out", required=True, help="CSV output path")
    return parser


def _load_scenario(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        try:
            cfg = load_config(args.config)
        except FileNotFoundError as e:
            raise ValueError(f"config file not found: {args.config}") from e
    else:
        cfg = default_scenario()
    overrides = {}
    if getattr(args, "fp", None) is not None:
        overrides["f_p"] = args.fp
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "snr_db", None) is not None:
        overrides["snr_db"] = args.snr_db
    return scenario_with(cfg, **overrides) if overrides else cfg


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_scenario(args)
    result = run_single(cfg)
    print(f"f_p = {result.f_p_hz:g} Hz, seed = {result.seed}")
    print(f"ddm_raw = {result.ddm_raw:+.6f}  (dev {result.dev_raw:.3e})")
    print(f"ddm_eq  = {result.ddm_eq:+.6f}  (dev {result.dev_eq:.3e})")
    flagged = predict_blind_spots(cfg.channel, cfg.clock)
    if flagged:
        freqs = ", ".join(f"{f:g} Hz" for f in flagged)
        print(f"note: modulator has components at {freqs}; equalization may underperform")
    if args.out:
        lines = [
            CSV_HEADER,
            f"{result.f_p_hz!r},{result.seed},{result.ddm_raw!r},"
            f"{result.ddm_eq!r},{result.dev_raw!r},{result.dev_eq!r}",
        ]
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    return 0


def _annotate_blind_spots(sweep: SweepResult) -> None:
    for s in sweep.summaries:
        if s.flagged_freqs:
            freqs = ", ".join(f"{f:g} Hz" for f in s.flagged_freqs)
            print(
                f"note: f_p = {s.f_p_hz:g} Hz is an equalization blind spot "
                f"(modulator component at {freqs}); equalization may underperform"
            )


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.seeds <= 0:
        raise ValueError(f"--seeds must be >= 1, got {args.seeds}")
    if args.workers <= 0:
        raise ValueError(f"--workers must be >= 1, got {args.workers}")
    cfg = _load_scenario(args)
    sweep = sweep_fp(
        cfg,
        args.fp_start,
        args.fp_stop,
        args.fp_step,
        seeds=list(range(args.seeds)),
        workers=args.workers,
    )
    emit_csv(sweep, args.out)
    print(f"wrote {len(sweep.results)} runs to {args.out}")
    if args.plot:
        emit_plot(sweep, args.plot)
        print(f"wrote plot to {args.plot}")
    _annotate_blind_spots(sweep)
    return 0


def _cmd_blindspots(args: argparse.Namespace) -> int:
    cfg = _load_scenario(args)
    if not args.threshold > 0:
        raise ValueError(f"--threshold must be > 0, got {args.threshold}")
    any_flagged = False
    for fp in fp_grid(args.fp_start, args.fp_stop, args.fp_step):
        flagged = predict_blind_spots(
            scenario_with(cfg, f_p=fp).channel, cfg.clock, rel_threshold=args.threshold
        )
        if flagged:
            any_flagged = True
            freqs = ", ".join(f"{f:g} Hz" for f in flagged)
            print(f"f_p = {fp:g} Hz: blind spot at {freqs}; equalization may underperform")
    if not any_flagged:
        print("no blind spots flagged on the scanned grid")
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    cfg = _load_scenario(args)
    if args.stage == "modulator":
        spec = modulator_spectrum(cfg.channel, cfg.clock)
    else:
        tx = combine(synth_ils(cfg.ils, cfg.clock), synth_tone(cfg.tone, cfg.clock))
        rx_spec = forward_fft(apply_channel(tx, cfg.channel))
        if args.stage == "rx":
            spec = rx_spec
        else:
            dop = extract_doppler(rx_spec, cfg.tone, cfg.tone_band)
            eq = equalize(rx_spec, dop, cfg.signal_band, cfg.reg)
            spec = forward_fft(eq)
    dump_spectrum(spec, args.out)
    print(f"wrote {args.stage} spectrum to {args.out}")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "blindspots": _cmd_blindspots,
    "spectrum": _cmd_spectrum,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as e:
        print(f"propeq: config error: {e}", file=sys.stderr)
        return 1
    except PipelineError as e:
        print(f"propeq: pipeline error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"propeq: i/o error: {e}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
