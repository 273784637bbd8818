"""Post-synthesis chain: Schroeder reverb, RMS normalization, metering.

The corpus chain applies reverb first and normalizes afterwards, so the
levels written into the metadata hold for the shipped file.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ReverbKind(str, enum.Enum):
    DRY = "dry"
    RIR_SMALL = "rir_small"
    RIR_MEDIUM = "rir_medium"

    @property
    def target_rt60_s(self) -> float:
        return _TARGET_RT60[self]


_TARGET_RT60 = {
    ReverbKind.DRY: 0.0,
    ReverbKind.RIR_SMALL: 0.3,
    ReverbKind.RIR_MEDIUM: 0.6,
}

# Classic Schroeder constants: four parallel feedback combs into two
# series all-passes.
COMB_DELAYS_MS = (29.7, 37.1, 41.1, 43.7)
ALLPASS_DELAYS_MS = (5.0, 1.7)
ALLPASS_GAIN = 0.7
WET_MIX = 0.3


def comb_feedback_gain(delay_ms: float, rt60_s: float) -> float:
    """Feedback gain that makes a comb's echo train decay 60 dB in rt60_s."""
    return 10.0 ** (-3.0 * (delay_ms / 1000.0) / rt60_s)


@dataclass(frozen=True)
class ReverbConfig:
    comb_delays_ms: tuple[float, ...]
    comb_gains: tuple[float, ...]
    allpass_delays_ms: tuple[float, ...]
    allpass_gain: float
    wet_mix: float

    def __post_init__(self):
        if any(g <= 0 or g >= 1 for g in self.comb_gains):
            raise ValueError("comb feedback gains must lie in (0, 1)")
        if any(d <= 0 for d in self.comb_delays_ms + self.allpass_delays_ms):
            raise ValueError("delays must be positive")
        if not 0.0 <= self.wet_mix <= 1.0:
            raise ValueError("wet_mix must be in [0, 1]")

    @classmethod
    def for_kind(cls, kind: ReverbKind) -> "ReverbConfig":
        if kind is ReverbKind.DRY:
            raise ValueError("dry has no reverb configuration")
        rt60 = kind.target_rt60_s
        gains = tuple(comb_feedback_gain(d, rt60) for d in COMB_DELAYS_MS)
        return cls(COMB_DELAYS_MS, gains, ALLPASS_DELAYS_MS, ALLPASS_GAIN, WET_MIX)


def _feedback_comb(x: np.ndarray, delay: int, gain: float) -> np.ndarray:
    """y[n] = x[n] + gain*y[n-delay], truncated to len(x).

    Within the truncated output the recursion is a finite echo sum
    y[n] = sum_k gain^k * x[n - k*delay], which is what is computed here.
    """
    y = x.copy()
    for k in range(1, (len(x) - 1) // delay + 1):
        y[k * delay :] += gain**k * x[: len(x) - k * delay]
    return y


def _allpass(x: np.ndarray, delay: int, gain: float) -> np.ndarray:
    """y[n] = -gain*x[n] + x[n-delay] + gain*y[n-delay], truncated.

    Expanding the recursion gives the echo sum
    y = -gain*x + (1 - gain^2) * sum_{k>=1} gain^(k-1) * x[n - k*delay].
    """
    y = -gain * x
    tail_gain = 1.0 - gain**2
    for k in range(1, (len(x) - 1) // delay + 1):
        y[k * delay :] += tail_gain * gain ** (k - 1) * x[: len(x) - k * delay]
    return y


def apply_reverb(buffer: np.ndarray, kind: ReverbKind, sample_rate: float) -> np.ndarray:
    """Schroeder reverb, output truncated to the input length.

    dry is an identity; otherwise the wet path is the sum of the four
    combs fed through both all-passes, mixed as
    wet_mix*wet + (1-wet_mix)*dry.
    """
    if kind is ReverbKind.DRY:
        return buffer.copy()
    cfg = ReverbConfig.for_kind(kind)
    buffer = np.asarray(buffer, dtype=np.float64)

    wet = np.zeros_like(buffer)
    for delay_ms, g in zip(cfg.comb_delays_ms, cfg.comb_gains):
        wet += _feedback_comb(buffer, round(delay_ms * sample_rate / 1000.0), g)
    for delay_ms in cfg.allpass_delays_ms:
        wet = _allpass(wet, round(delay_ms * sample_rate / 1000.0), cfg.allpass_gain)

    return (1.0 - cfg.wet_mix) * buffer + cfg.wet_mix * wet


@dataclass(frozen=True)
class LevelReport:
    peak_dbfs: float
    rms_dbfs: float


def _to_dbfs(x: float) -> float:
    if x <= 0.0:
        return -math.inf
    return 20.0 * math.log10(x)


def measure_levels(buffer: np.ndarray) -> LevelReport:
    """Peak and RMS in dBFS. Both are -inf for an all-zero buffer."""
    if len(buffer) == 0:
        raise ValueError("cannot measure an empty buffer")
    peak = float(np.max(np.abs(buffer)))
    rms = float(np.sqrt(np.mean(np.square(buffer))))
    return LevelReport(peak_dbfs=_to_dbfs(peak), rms_dbfs=_to_dbfs(rms))


def normalize_rms(
    buffer: np.ndarray, target_dbfs: float, peak_cap_dbfs: float
) -> tuple[np.ndarray, LevelReport]:
    """Scale uniformly to the target RMS, then cap the peak if needed.

    If hitting the RMS target would push the peak above the cap, the
    buffer is rescaled so the peak sits exactly on the cap and the RMS
    lands below target. Raises on silent input.
    """
    if len(buffer) == 0:
        raise ValueError("cannot normalize an empty buffer")
    rms = float(np.sqrt(np.mean(np.square(buffer))))
    if rms == 0.0:
        raise ValueError("cannot normalize a silent buffer")
    scale = 10.0 ** (target_dbfs / 20.0) / rms
    peak = float(np.max(np.abs(buffer)))
    cap = 10.0 ** (peak_cap_dbfs / 20.0)
    if peak * scale > cap:
        scale = cap / peak
    out = buffer * scale
    return out, measure_levels(out)


def was_peak_capped(report: LevelReport, target_dbfs: float) -> bool:
    """True when the peak cap forced the RMS below the nominal target."""
    return report.rms_dbfs < target_dbfs - 1e-6
