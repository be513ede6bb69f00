"""Reference-tone equalization: modulator extraction and regularized division.

The modulator estimate comes from the tone band of the received spectrum:
window the band, inverse transform, then demodulate by the known tone so the
estimate sits at baseband with unit scaling. Equalization divides the
windowed signal band by that estimate with a relative magnitude floor so a
ringing, band-limited estimate cannot blow up the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelConfig, modulator_spectrum
from .errors import ToneAbsentError
from .signals import SampleBuffer, SampleClock, ToneParams
from .spectral import BandSpec, Spectrum, bandpass_window, bin_index, inverse_fft


@dataclass(frozen=True)
class DopplerEstimate:
    """Complex modulator estimate at baseband, scaled to unit tone amplitude."""

    g_hat: SampleBuffer
    tone_band: BandSpec

    def __post_init__(self) -> None:
        if not float(np.mean(np.abs(self.g_hat.samples))) > 0:
            raise ValueError("g_hat must carry energy")


@dataclass(frozen=True)
class RegPolicy:
    """Relative magnitude floor for the equalizing division."""

    eps_rel: float = 1e-3

    def __post_init__(self) -> None:
        if not 0.0 < self.eps_rel < 1.0:
            raise ValueError(f"eps_rel must be in (0, 1), got {self.eps_rel}")


def extract_doppler(
    rx_spec: Spectrum, tone: ToneParams, band: BandSpec
) -> DopplerEstimate:
    """Recover the modulation process from the reference-tone band.

    Windows ``band`` out of the received spectrum, inverse transforms, and
    multiplies by the conjugate tone (divided by its amplitude). For a
    noiseless channel whose modulator harmonics all fall inside the band the
    result equals the true aggregate gain; in general it is the band-limited
    truncation of it.

    Raises:
        ValueError: band not centered on the tone, or outside Nyquist.
        ToneAbsentError: the windowed band carries no energy at all.
    """
    if band.center_hz != tone.offset_hz:
        raise ValueError(
            f"tone band center {band.center_hz} Hz must equal tone offset {tone.offset_hz} Hz"
        )
    windowed = bandpass_window(rx_spec, band)
    band_energy = float(np.sum(np.abs(windowed.bins) ** 2))
    total_energy = float(np.sum(np.abs(rx_spec.bins) ** 2))
    # far below FFT roundoff relative to the capture: the tone is not there
    if band_energy <= 1e-24 * total_energy:
        raise ToneAbsentError(
            f"no energy in tone band [{band.lo_hz}, {band.hi_hz}] Hz"
        )
    d_t = inverse_fft(windowed)
    t = rx_spec.clock.times()
    carrier = np.exp(-1j * (2 * np.pi * tone.offset_hz * t + tone.phase))
    g_hat = d_t.samples * carrier / tone.amp
    return DopplerEstimate(SampleBuffer(rx_spec.clock, g_hat), band)


def equalize(
    rx_spec: Spectrum,
    dop: DopplerEstimate,
    signal_band: BandSpec,
    reg: RegPolicy = RegPolicy(),
) -> SampleBuffer:
    """Divide the windowed signal band by the modulator estimate.

    out[k] = s_band[k] * conj(g_hat[k]) / max(|g_hat[k]|^2, floor^2)
    with floor = eps_rel * max_k |g_hat[k]|. Whenever every |g_hat[k]| sits
    above the floor this is exactly plain division.
    """
    if signal_band.overlaps(dop.tone_band):
        raise ValueError(
            f"signal band [{signal_band.lo_hz}, {signal_band.hi_hz}] Hz must be "
            f"disjoint from tone band [{dop.tone_band.lo_hz}, {dop.tone_band.hi_hz}] Hz"
        )
    s_band = inverse_fft(bandpass_window(rx_spec, signal_band))
    g = dop.g_hat.samples
    floor_sq = (reg.eps_rel * float(np.max(np.abs(g)))) ** 2
    denom = np.maximum(np.abs(g) ** 2, floor_sq)
    return SampleBuffer(rx_spec.clock, s_band.samples * np.conj(g) / denom)


def predict_blind_spots(
    cfg: ChannelConfig,
    clock: SampleClock,
    critical_freqs: tuple[float, ...] = (90.0, 150.0),
    rel_threshold: float = 0.01,
) -> tuple[float, ...]:
    """Critical frequencies where the modulator itself has spectral content.

    A frequency f is flagged when |G(f)| > rel_threshold * |G(0)| for the
    noiseless aggregate-gain spectrum G. Inverting such a modulator injects
    energy at f into every signal component, so equalization can interfere
    with the very tones it is meant to protect.
    """
    if not rel_threshold > 0:
        raise ValueError(f"rel_threshold must be > 0, got {rel_threshold}")
    spec = modulator_spectrum(cfg, clock)
    ref = abs(spec.bins[0])
    flagged = []
    for f in critical_freqs:
        idx = bin_index(clock, f)
        if abs(spec.bins[idx]) > rel_threshold * ref:
            flagged.append(f)
    return tuple(flagged)
