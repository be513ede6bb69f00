#!/usr/bin/env python3
"""Dump modulator, received, and equalized spectra for one rotation rate.

The received spectrum shows the chop harmonics convolved onto every
transmitted line; the equalized spectrum shows them collapsed back, leaving
the residual floor created by band truncation.
"""

import argparse
from pathlib import Path

from propeq import (
    apply_channel,
    combine,
    default_scenario,
    dump_spectrum,
    equalize,
    extract_doppler,
    forward_fft,
    modulator_spectrum,
    scenario_with,
    synth_ils,
    synth_tone,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fp", type=float, default=30.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--noiseless", action="store_true")
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cfg = scenario_with(
        default_scenario(),
        f_p=args.fp,
        seed=args.seed,
        snr_db=None if args.noiseless else "keep",
    )
    tx = combine(synth_ils(cfg.ils, cfg.clock), synth_tone(cfg.tone, cfg.clock))
    rx_spec = forward_fft(apply_channel(tx, cfg.channel))
    dop = extract_doppler(rx_spec, cfg.tone, cfg.tone_band)
    eq_spec = forward_fft(equalize(rx_spec, dop, cfg.signal_band, cfg.reg))

    dump_spectrum(modulator_spectrum(cfg.channel, cfg.clock), out / "modulator.csv")
    dump_spectrum(rx_spec, out / "rx.csv")
    dump_spectrum(eq_spec, out / "equalized.csv")
    print(f"wrote modulator.csv, rx.csv, equalized.csv to {out}/ (f_p={args.fp:g} Hz)")


if __name__ == "__main__":
    main()
