"""Scenario runner: single simulations, propeller-speed sweeps, and emitters.

A scenario bundles every knob of the pipeline (clock, transmitted signal,
channel, windows, regularization). ``run_single`` executes the full chain
synth -> channel -> FFT -> extract -> equalize -> DDM for one configuration;
``sweep_fp`` repeats it over a rotation-rate grid and a Monte-Carlo seed
list, with optional thread-parallel execution whose output is merged in
deterministic grid order.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .channel import (
    ChannelConfig,
    CustomCycle,
    PropellerModel,
    Shape,
    SineRipple,
    SquareWave,
    apply_channel,
)
from .equalizer import RegPolicy, equalize, extract_doppler, predict_blind_spots
from .metrics import compute_ddm, estimate_amplitudes
from .signals import IlsParams, SampleClock, ToneParams, combine, synth_ils, synth_tone
from .spectral import (
    BandSpec,
    Spectrum,
    bandpass_window,
    folded_frequencies,
    forward_fft,
    inverse_fft,
)

CSV_HEADER = "f_p_hz,seed,ddm_raw,ddm_eq,dev_raw,dev_eq"

# Default square-wave chop and phase. Duty 0.3 keeps the 3rd/7th harmonics
# weak (few spurious blind-spot flags on the half-Hz sweep grid) while the
# 4th harmonic stays strong enough to flag 22.5/37.5 Hz; the phase aligns
# the 4th/6th-harmonic hits at f_p=15 into quadrature at the DDM bins so the
# low end of the sweep stays at the noise floor.
DEFAULT_SQUARE = SquareWave(duty=0.3, lo=0.5, hi=1.0)
DEFAULT_PROPELLER_PHASE = 1.366


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulation scenario."""

    clock: SampleClock = SampleClock()
    ils: IlsParams = IlsParams()
    tone: ToneParams = ToneParams()
    channel: ChannelConfig = field(
        default_factory=lambda: ChannelConfig(
            propellers=(
                PropellerModel(
                    shape=DEFAULT_SQUARE,
                    f_p=30.0,
                    phase=DEFAULT_PROPELLER_PHASE,
                    coeff=1.0,
                ),
            ),
            snr_db=20.0,
            rng_seed=0,
        )
    )
    signal_band: BandSpec = BandSpec(center_hz=0.0, half_width_hz=300.0)
    tone_band: BandSpec = BandSpec(center_hz=1500.0, half_width_hz=300.0)
    reg: RegPolicy = RegPolicy()
    true_ddm: float | None = None

    def __post_init__(self) -> None:
        if self.tone_band.center_hz != self.tone.offset_hz:
            raise ValueError(
                f"tone_band center {self.tone_band.center_hz} Hz must equal "
                f"tone offset {self.tone.offset_hz} Hz"
            )
        if self.signal_band.overlaps(self.tone_band):
            raise ValueError("signal_band and tone_band must be disjoint")
        # tone separation must exceed twice the modulation spread the bands admit
        min_offset = 2.0 * (150.0 + self.tone_band.half_width_hz)
        if self.tone.offset_hz < min_offset:
            raise ValueError(
                f"tone offset {self.tone.offset_hz} Hz too close to the signal "
                f"band; need >= {min_offset} Hz"
            )
        if self.true_ddm is None:
            object.__setattr__(self, "true_ddm", self.ils.ddm)


def default_scenario() -> ScenarioConfig:
    """The stock scenario: 32 kHz/1 s capture, square-wave chop, 20 dB SNR."""
    return ScenarioConfig()


@dataclass(frozen=True)
class RunResult:
    """Raw and equalized DDM for one (rotation rate, seed) realization."""

    f_p_hz: float
    seed: int
    ddm_raw: float
    ddm_eq: float
    dev_raw: float
    dev_eq: float


@dataclass(frozen=True)
class FpSummary:
    """Per-grid-point medians across seeds, plus blind-spot flags."""

    f_p_hz: float
    median_dev_raw: float
    median_dev_eq: float
    flagged_freqs: tuple[float, ...]


@dataclass(frozen=True)
class SweepResult:
    """All runs of a rotation-rate sweep in deterministic grid order."""

    results: tuple[RunResult, ...]
    summaries: tuple[FpSummary, ...]

    @property
    def blind_spots(self) -> tuple[float, ...]:
        return tuple(s.f_p_hz for s in self.summaries if s.flagged_freqs)


def scenario_with(
    cfg: ScenarioConfig,
    f_p: float | None = None,
    seed: int | None = None,
    snr_db: float | None | str = "keep",
) -> ScenarioConfig:
    """Copy of ``cfg`` with the rotation rate, seed, or SNR overridden.

    ``f_p`` is applied to every propeller (a uniform-speed sweep).
    ``snr_db`` accepts None to disable noise; pass the default sentinel to
    leave it untouched.
    """
    ch = cfg.channel
    props = ch.propellers
    if f_p is not None:
        props = tuple(replace(p, f_p=f_p) for p in props)
    new_snr = ch.snr_db if snr_db == "keep" else snr_db
    ch = ChannelConfig(
        propellers=props,
        snr_db=new_snr,
        rng_seed=ch.rng_seed if seed is None else seed,
    )
    return replace(cfg, channel=ch)


def run_single(cfg: ScenarioConfig) -> RunResult:
    """Execute the full pipeline once.

    The raw DDM is measured on the signal-band-windowed received buffer (not
    the full capture) so it reflects propeller impairment rather than the
    presence of the reference tone.
    """
    tx = combine(synth_ils(cfg.ils, cfg.clock), synth_tone(cfg.tone, cfg.clock))
    rx = apply_channel(tx, cfg.channel)
    rx_spec = forward_fft(rx)

    raw_buf = inverse_fft(bandpass_window(rx_spec, cfg.signal_band))
    ddm_raw = compute_ddm(estimate_amplitudes(raw_buf))

    dop = extract_doppler(rx_spec, cfg.tone, cfg.tone_band)
    eq_buf = equalize(rx_spec, dop, cfg.signal_band, cfg.reg)
    ddm_eq = compute_ddm(estimate_amplitudes(eq_buf))

    truth = float(cfg.true_ddm)
    return RunResult(
        f_p_hz=float(cfg.channel.propellers[0].f_p),
        seed=cfg.channel.rng_seed,
        ddm_raw=float(ddm_raw),
        ddm_eq=float(ddm_eq),
        dev_raw=abs(float(ddm_raw) - truth),
        dev_eq=abs(float(ddm_eq) - truth),
    )


def fp_grid(fp_start: float, fp_stop: float, fp_step: float) -> tuple[float, ...]:
    """Inclusive grid with floor((stop-start)/step)+1 points."""
    if not fp_step > 0:
        raise ValueError(f"fp_step must be > 0, got {fp_step}")
    if fp_start > fp_stop:
        raise ValueError(f"fp_start {fp_start} must be <= fp_stop {fp_stop}")
    n = int(np.floor((fp_stop - fp_start) / fp_step + 1e-9)) + 1
    return tuple(fp_start + i * fp_step for i in range(n))


def sweep_fp(
    cfg: ScenarioConfig,
    fp_start: float,
    fp_stop: float,
    fp_step: float,
    seeds: list[int] | tuple[int, ...],
    workers: int = 1,
    blind_spot_threshold: float = 0.01,
) -> SweepResult:
    """Run the pipeline over a rotation-rate grid times a seed list.

    Grid points may execute concurrently (``workers`` threads); results are
    merged in (grid, seed) order regardless of completion order, so serial
    and parallel sweeps emit byte-identical CSVs.
    """
    seeds = list(seeds)
    if len(seeds) == 0:
        raise ValueError("seeds must be non-empty")
    grid = fp_grid(fp_start, fp_stop, fp_step)
    jobs = [scenario_with(cfg, f_p=fp, seed=s) for fp in grid for s in seeds]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_single, jobs))
    else:
        results = [run_single(job) for job in jobs]

    summaries = []
    for i, fp in enumerate(grid):
        chunk = results[i * len(seeds) : (i + 1) * len(seeds)]
        flagged = predict_blind_spots(
            scenario_with(cfg, f_p=fp).channel,
            cfg.clock,
            rel_threshold=blind_spot_threshold,
        )
        summaries.append(
            FpSummary(
                f_p_hz=fp,
                median_dev_raw=float(np.median([r.dev_raw for r in chunk])),
                median_dev_eq=float(np.median([r.dev_eq for r in chunk])),
                flagged_freqs=flagged,
            )
        )
    return SweepResult(results=tuple(results), summaries=tuple(summaries))


# ---------------------------------------------------------------------------
# emitters


def emit_csv(result: SweepResult, path: str | Path) -> None:
    """Write one row per run: f_p_hz,seed,ddm_raw,ddm_eq,dev_raw,dev_eq."""
    lines = [CSV_HEADER]
    for r in result.results:
        lines.append(
            f"{r.f_p_hz!r},{r.seed},{r.ddm_raw!r},{r.ddm_eq!r},{r.dev_raw!r},{r.dev_eq!r}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_sweep_csv(path: str | Path) -> tuple[RunResult, ...]:
    """Parse a CSV written by ``emit_csv`` back into run records."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if ",".join(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header}")
        out = []
        for row in reader:
            out.append(
                RunResult(
                    f_p_hz=float(row[0]),
                    seed=int(row[1]),
                    ddm_raw=float(row[2]),
                    ddm_eq=float(row[3]),
                    dev_raw=float(row[4]),
                    dev_eq=float(row[5]),
                )
            )
    return tuple(out)


def dump_spectrum(spec: Spectrum, path: str | Path) -> None:
    """CSV dump: freq_hz,re,im,mag_db rows in ascending folded frequency."""
    f = folded_frequencies(spec.clock)
    order = np.argsort(f, kind="stable")
    lines = ["freq_hz,re,im,mag_db"]
    for i in order:
        b = spec.bins[i]
        mag_db = float(20.0 * np.log10(abs(b) + 1e-20))
        lines.append(f"{float(f[i])!r},{float(b.real)!r},{float(b.imag)!r},{mag_db!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_plot(result: SweepResult, path: str | Path) -> None:
    """Self-contained SVG line chart of median deviations vs rotation rate.

    Blind-spot grid points are marked with dashed vertical lines.
    """
    w, h = 880, 460
    ml, mr, mt, mb = 70, 30, 40, 55
    pw, ph = w - ml - mr, h - mt - mb

    fps = [s.f_p_hz for s in result.summaries]
    raw = [max(s.median_dev_raw, 1e-12) for s in result.summaries]
    eq = [max(s.median_dev_eq, 1e-12) for s in result.summaries]

    x0, x1 = min(fps), max(fps)
    xspan = (x1 - x0) or 1.0
    ylo = 10.0 ** np.floor(np.log10(min(min(raw), min(eq))))
    yhi = 10.0 ** np.ceil(np.log10(max(max(raw), max(eq))))
    if yhi <= ylo:
        yhi = ylo * 10.0

    def sx(v: float) -> float:
        return ml + (v - x0) / xspan * pw

    def sy(v: float) -> float:
        return mt + ph - (np.log10(v) - np.log10(ylo)) / (np.log10(yhi) - np.log10(ylo)) * ph

    def poly(ys: list[float]) -> str:
        return " ".join(f"{sx(fp):.2f},{sy(v):.2f}" for fp, v in zip(fps, ys))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<text x="{w / 2:.0f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">Median DDM deviation vs propeller rate (raw vs equalized)</text>',
    ]
    # y grid: decades
    dec = int(np.log10(ylo))
    while 10.0 ** dec <= yhi * 1.0001:
        y = sy(10.0 ** dec)
        parts.append(
            f'<line x1="{ml}" y1="{y:.2f}" x2="{ml + pw}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">1e{dec}</text>'
        )
        dec += 1
    # x ticks every 5 Hz
    tick = np.ceil(x0 / 5.0) * 5.0
    while tick <= x1 + 1e-9:
        x = sx(tick)
        parts.append(
            f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 5}" '
            f'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{mt + ph + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{tick:g}</text>'
        )
        tick += 5.0
    # blind-spot markers
    for s in result.summaries:
        if s.flagged_freqs:
            x = sx(s.f_p_hz)
            parts.append(
                f'<line x1="{x:.2f}" y1="{mt}" x2="{x:.2f}" y2="{mt + ph}" '
                f'stroke="#bbbbbb" stroke-width="1" stroke-dasharray="4,3"/>'
            )
    parts.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<polyline points="{poly(raw)}" fill="none" stroke="#1f77b4" stroke-width="1.6"/>'
    )
    parts.append(
        f'<polyline points="{poly(eq)}" fill="none" stroke="#d62728" stroke-width="1.6"/>'
    )
    parts.append(
        f'<text x="{ml + pw / 2:.0f}" y="{h - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">propeller rate f_p (Hz)</text>'
    )
    parts.append(
        f'<text x="18" y="{mt + ph / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 18 {mt + ph / 2:.0f})">median |DDM - truth|</text>'
    )
    lx, ly = ml + pw - 235, mt + 14
    parts.append(
        f'<line x1="{lx}" y1="{ly}" x2="{lx + 26}" y2="{ly}" stroke="#1f77b4" stroke-width="1.6"/>'
    )
    parts.append(
        f'<text x="{lx + 32}" y="{ly + 4}" font-family="sans-serif" font-size="12">raw (non-equalized)</text>'
    )
    parts.append(
        f'<line x1="{lx}" y1="{ly + 18}" x2="{lx + 26}" y2="{ly + 18}" stroke="#d62728" stroke-width="1.6"/>'
    )
    parts.append(
        f'<text x="{lx + 32}" y="{ly + 22}" font-family="sans-serif" font-size="12">equalized</text>'
    )
    parts.append(
        f'<line x1="{lx}" y1="{ly + 36}" x2="{lx + 26}" y2="{ly + 36}" '
        f'stroke="#bbbbbb" stroke-width="1" stroke-dasharray="4,3"/>'
    )
    parts.append(
        f'<text x="{lx + 32}" y="{ly + 40}" font-family="sans-serif" font-size="12">blind-spot flag</text>'
    )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# JSON configuration


def _shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, SquareWave):
        return {"kind": "square", "duty": shape.duty, "lo": shape.lo, "hi": shape.hi}
    if isinstance(shape, SineRipple):
        return {"kind": "sine", "beta": shape.beta}
    if isinstance(shape, CustomCycle):
        return {"kind": "custom", "gains": list(shape.gains)}
    raise ValueError(f"unknown shape {shape!r}")


def _shape_from_dict(d: dict) -> Shape:
    kind = d.get("kind")
    rest = {k: v for k, v in d.items() if k != "kind"}
    if kind == "square":
        return SquareWave(**rest)
    if kind == "sine":
        return SineRipple(**rest)
    if kind == "custom":
        return CustomCycle(gains=tuple(rest.pop("gains")), **rest)
    raise ValueError(f"unknown shape kind {kind!r}")


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    return {
        "clock": {"rate_hz": cfg.clock.rate_hz, "n_samples": cfg.clock.n_samples},
        "ils": {
            "a_c": cfg.ils.a_c,
            "a_90": cfg.ils.a_90,
            "a_150": cfg.ils.a_150,
            "phase_90": cfg.ils.phase_90,
            "phase_150": cfg.ils.phase_150,
        },
        "tone": {
            "offset_hz": cfg.tone.offset_hz,
            "amp": cfg.tone.amp,
            "phase": cfg.tone.phase,
        },
        "channel": {
            "propellers": [
                {
                    "shape": _shape_to_dict(p.shape),
                    "f_p": p.f_p,
                    "phase": p.phase,
                    "coeff": p.coeff,
                }
                for p in cfg.channel.propellers
            ],
            "snr_db": cfg.channel.snr_db,
            "rng_seed": cfg.channel.rng_seed,
        },
        "signal_band": {
            "center_hz": cfg.signal_band.center_hz,
            "half_width_hz": cfg.signal_band.half_width_hz,
        },
        "tone_band": {
            "center_hz": cfg.tone_band.center_hz,
            "half_width_hz": cfg.tone_band.half_width_hz,
        },
        "reg": {"eps_rel": cfg.reg.eps_rel},
        "true_ddm": cfg.true_ddm,
    }


def _check_keys(d: dict, allowed: set[str], where: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown config keys in {where}: {sorted(unknown)}")


def scenario_from_dict(d: dict) -> ScenarioConfig:
    """Build a scenario from a config dict; missing fields take defaults."""
    _check_keys(
        d,
        {"clock", "ils", "tone", "channel", "signal_band", "tone_band", "reg", "true_ddm"},
        "scenario",
    )
    defaults = ScenarioConfig()
    kwargs: dict = {}
    if "clock" in d:
        c = d["clock"]
        _check_keys(c, {"rate_hz", "n_samples"}, "clock")
        kwargs["clock"] = SampleClock(
            rate_hz=float(c.get("rate_hz", 32000.0)),
            n_samples=int(c.get("n_samples", 32000)),
        )
    if "ils" in d:
        _check_keys(d["ils"], {"a_c", "a_90", "a_150", "phase_90", "phase_150"}, "ils")
        kwargs["ils"] = IlsParams(**d["ils"])
    if "tone" in d:
        _check_keys(d["tone"], {"offset_hz", "amp", "phase"}, "tone")
        kwargs["tone"] = ToneParams(**d["tone"])
    if "channel" in d:
        ch = d["channel"]
        _check_keys(ch, {"propellers", "snr_db", "rng_seed"}, "channel")
        props = []
        for p in ch.get("propellers", []):
            _check_keys(p, {"shape", "f_p", "phase", "coeff"}, "propeller")
            props.append(
                PropellerModel(
                    shape=_shape_from_dict(p["shape"]),
                    f_p=float(p.get("f_p", 30.0)),
                    phase=float(p.get("phase", 0.0)),
                    coeff=float(p.get("coeff", 1.0)),
                )
            )
        if not props:
            props = list(defaults.channel.propellers)
        snr = ch.get("snr_db", defaults.channel.snr_db)
        kwargs["channel"] = ChannelConfig(
            propellers=tuple(props),
            snr_db=None if snr is None else float(snr),
            rng_seed=int(ch.get("rng_seed", 0)),
        )
    for band_key in ("signal_band", "tone_band"):
        if band_key in d:
            _check_keys(d[band_key], {"center_hz", "half_width_hz"}, band_key)
            kwargs[band_key] = BandSpec(**d[band_key])
    if "reg" in d:
        _check_keys(d["reg"], {"eps_rel"}, "reg")
        kwargs["reg"] = RegPolicy(**d["reg"])
    if "true_ddm" in d and d["true_ddm"] is not None:
        kwargs["true_ddm"] = float(d["true_ddm"])
    return ScenarioConfig(**kwargs)


def load_config(path: str | Path) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"invalid JSON in config {path}: {e}") from e
    if not isinstance(d, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return scenario_from_dict(d)
