"""ILS tone amplitude estimation, DDM, and DDM deviation.

Amplitudes are read from exact FFT bins, no neighborhood summation: on the
default clock every tone is an integer bin, and any leakage into those bins
caused by channel modulation is precisely the impairment being measured, so
the estimator must not smooth it away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CarrierLostError
from .signals import SampleBuffer
from .spectral import bin_index

_CARRIER_FLOOR = 1e-12


@dataclass(frozen=True)
class ToneAmplitudes:
    """Estimated carrier and sideband-pair amplitudes, in volts."""

    a_c: float
    a_90: float
    a_150: float

    def __post_init__(self) -> None:
        for name in ("a_c", "a_90", "a_150"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


def estimate_amplitudes(buf: SampleBuffer) -> ToneAmplitudes:
    """Bin-exact amplitude estimates: a_c = |X[0]|/N, a_f = (|X[+f]|+|X[-f]|)/N."""
    n = buf.clock.n_samples
    x = np.fft.fft(buf.samples)
    a_c = float(abs(x[0])) / n
    pair = {}
    for f in (90.0, 150.0):
        up = bin_index(buf.clock, f)
        dn = bin_index(buf.clock, -f)
        pair[f] = float(abs(x[up]) + abs(x[dn])) / n
    return ToneAmplitudes(a_c=a_c, a_90=pair[90.0], a_150=pair[150.0])


def compute_ddm(amps: ToneAmplitudes) -> float:
    """Difference in depth of modulation, (a_90 - a_150) / a_c (unitless)."""
    if amps.a_c <= _CARRIER_FLOOR:
        raise CarrierLostError(f"carrier lost: a_c={amps.a_c} <= {_CARRIER_FLOOR}")
    return (amps.a_90 - amps.a_150) / amps.a_c


def ddm_deviation(est: float, truth: float) -> float:
    """Absolute error of a DDM estimate against the configured truth."""
    if not (np.isfinite(est) and np.isfinite(truth)):
        raise ValueError(f"inputs must be finite, got est={est} truth={truth}")
    return abs(est - truth)
