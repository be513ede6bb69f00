"""Capture-window Fourier analysis and brick-wall band windows.

Transform convention: forward FFT is unnormalized, inverse carries 1/N, so
``inverse_fft(forward_fft(x)) == x`` to roundoff. Bin k of a length-N
spectrum corresponds to frequency k*(rate/N) folded into (-rate/2, rate/2]
(the Nyquist bin is reported as +rate/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signals import SampleBuffer, SampleClock


@dataclass(frozen=True)
class Spectrum:
    """Full-length discrete spectrum of one capture window."""

    clock: SampleClock
    bins: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.bins, dtype=np.complex128)
        if arr.ndim != 1 or arr.shape[0] != self.clock.n_samples:
            raise ValueError(
                f"bins must be 1-d of length {self.clock.n_samples}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("bins must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "bins", arr)


@dataclass(frozen=True)
class BandSpec:
    """A brick-wall pass band, inclusive at both edges."""

    center_hz: float
    half_width_hz: float = 300.0

    def __post_init__(self) -> None:
        if not self.half_width_hz > 0:
            raise ValueError(f"half_width_hz must be > 0, got {self.half_width_hz}")

    @property
    def lo_hz(self) -> float:
        return self.center_hz - self.half_width_hz

    @property
    def hi_hz(self) -> float:
        return self.center_hz + self.half_width_hz

    def overlaps(self, other: "BandSpec") -> bool:
        return self.lo_hz <= other.hi_hz and other.lo_hz <= self.hi_hz


def folded_frequencies(clock: SampleClock) -> np.ndarray:
    """Per-bin frequencies in Hz, folded to (-rate/2, rate/2]."""
    f = np.fft.fftfreq(clock.n_samples, d=1.0 / clock.rate_hz)
    if clock.n_samples % 2 == 0:
        # numpy puts the Nyquist bin at -rate/2; this library folds it positive
        f = f.copy()
        f[clock.n_samples // 2] = clock.rate_hz / 2.0
    return f


def bin_index(clock: SampleClock, freq_hz: float, tol: float = 1e-9) -> int:
    """Index of the bin holding ``freq_hz``, required to be an exact bin."""
    ratio = freq_hz / clock.bin_hz
    idx = int(round(ratio))
    if abs(ratio - idx) > tol:
        raise ValueError(
            f"{freq_hz} Hz is not an integer bin at resolution {clock.bin_hz} Hz"
        )
    n = clock.n_samples
    if idx > n // 2 or idx < -((n - 1) // 2):
        raise ValueError(f"{freq_hz} Hz is outside the Nyquist range")
    return idx % n


def forward_fft(buf: SampleBuffer) -> Spectrum:
    """Unnormalized forward DFT of a capture."""
    return Spectrum(buf.clock, np.fft.fft(buf.samples))


def inverse_fft(spec: Spectrum) -> SampleBuffer:
    """Inverse DFT scaled by 1/N."""
    return SampleBuffer(spec.clock, np.fft.ifft(spec.bins))


def bandpass_window(spec: Spectrum, band: BandSpec) -> Spectrum:
    """Zero every bin whose folded frequency falls outside ``band``.

    The window is single-sided: the mirror band at negative frequencies is
    not passed unless ``band`` itself covers it.
    """
    nyq = spec.clock.rate_hz / 2.0
    if band.lo_hz <= -nyq or band.hi_hz > nyq:
        raise ValueError(
            f"band [{band.lo_hz}, {band.hi_hz}] Hz exceeds the Nyquist range "
            f"(-{nyq}, {nyq}]"
        )
    f = folded_frequencies(spec.clock)
    mask = (f >= band.lo_hz) & (f <= band.hi_hz)
    return Spectrum(spec.clock, np.where(mask, spec.bins, 0.0))
