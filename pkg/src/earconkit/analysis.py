"""Spectral analysis shared by the metadata builder and the baselines.

STFT -> log-mel features, scalar spectral statistics, and YIN pitch
estimation with median aggregation over frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LOG_EPS = 1e-10

# YIN analysis constants: fixed globally, no per-clip tuning.
YIN_FRAME = 2048
YIN_HOP = 256
YIN_WINDOW = 1024  # integration window inside each frame
YIN_THRESHOLD = 0.10
YIN_SEARCH_LO_HZ = 80.0
YIN_SEARCH_HI_HZ = 1600.0


@dataclass(frozen=True)
class StftConfig:
    window_size: int = 1024
    hop: int = 256
    window: str = "hann"

    def __post_init__(self):
        if self.hop > self.window_size:
            raise ValueError("hop must not exceed window_size")
        if self.window_size & (self.window_size - 1):
            raise ValueError("window_size must be a power of two")
        if self.window != "hann":
            raise ValueError("only the Hann window is supported")


@dataclass(frozen=True)
class MelConfig:
    n_mels: int = 64
    f_min_hz: float = 0.0
    f_max_hz: float = 16000.0
    stft: StftConfig = field(default_factory=StftConfig)

    def __post_init__(self):
        if not 0 <= self.f_min_hz < self.f_max_hz:
            raise ValueError("need 0 <= f_min < f_max")


@dataclass(frozen=True)
class SpectralStats:
    centroid_hz: float
    bandwidth_hz: float
    zcr: float


@dataclass(frozen=True)
class PitchEstimate:
    """Median-aggregated clip pitch; None when no frame was voiced."""

    f0_hz: float | None
    frame_values: np.ndarray  # per-frame f0, NaN where unvoiced


def _hann(n: int) -> np.ndarray:
    # periodic Hann, the usual STFT taper
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def _frame(buffer: np.ndarray, size: int, hop: int) -> np.ndarray:
    if len(buffer) < size:
        raise ValueError(f"buffer ({len(buffer)} samples) shorter than one window ({size})")
    n_frames = 1 + (len(buffer) - size) // hop
    frames = np.lib.stride_tricks.sliding_window_view(buffer, size)[:: hop]
    return frames[:n_frames]


def stft_magnitude(buffer: np.ndarray, cfg: StftConfig = StftConfig()) -> np.ndarray:
    """Hann-windowed magnitude spectra, shape (frames, window/2 + 1)."""
    frames = _frame(np.asarray(buffer, dtype=np.float64), cfg.window_size, cfg.hop)
    return np.abs(np.fft.rfft(frames * _hann(cfg.window_size), axis=1))


def hz_to_mel(f_hz):
    return 2595.0 * np.log10(1.0 + np.asarray(f_hz, dtype=np.float64) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank(cfg: MelConfig, sample_rate: float) -> np.ndarray:
    """Triangular HTK-scale filters, shape (n_mels, window/2 + 1)."""
    n_bins = cfg.stft.window_size // 2 + 1
    bin_hz = np.arange(n_bins) * sample_rate / cfg.stft.window_size
    mel_pts = np.linspace(hz_to_mel(cfg.f_min_hz), hz_to_mel(cfg.f_max_hz), cfg.n_mels + 2)
    hz_pts = mel_to_hz(mel_pts)
    fb = np.zeros((cfg.n_mels, n_bins))
    for m in range(cfg.n_mels):
        lo, mid, hi = hz_pts[m], hz_pts[m + 1], hz_pts[m + 2]
        up = (bin_hz - lo) / (mid - lo)
        down = (hi - bin_hz) / (hi - mid)
        fb[m] = np.maximum(0.0, np.minimum(up, down))
    return fb


def mel_center_frequencies(cfg: MelConfig) -> np.ndarray:
    mel_pts = np.linspace(hz_to_mel(cfg.f_min_hz), hz_to_mel(cfg.f_max_hz), cfg.n_mels + 2)
    return mel_to_hz(mel_pts[1:-1])


def log_mel(
    buffer: np.ndarray, cfg: MelConfig = MelConfig(), sample_rate: float = 48000.0
) -> np.ndarray:
    """log(filterbank @ power spectrum + eps), shape (frames, n_mels)."""
    mag = stft_magnitude(buffer, cfg.stft)
    power = mag**2
    fb = mel_filterbank(cfg, sample_rate)
    return np.log(power @ fb.T + LOG_EPS)


def spectral_stats(
    buffer: np.ndarray, cfg: StftConfig = StftConfig(), sample_rate: float = 48000.0
) -> SpectralStats:
    """Centroid/bandwidth of the time-averaged spectrum, plus ZCR.

    A single scalar per clip: the magnitude spectra are averaged over
    frames before the moments are taken.
    """
    buffer = np.asarray(buffer, dtype=np.float64)
    if not np.any(buffer):
        raise ValueError("spectral statistics are undefined for a silent buffer")
    mean_mag = stft_magnitude(buffer, cfg).mean(axis=0)
    freqs = np.arange(len(mean_mag)) * sample_rate / cfg.window_size
    total = mean_mag.sum()
    centroid = float((freqs * mean_mag).sum() / total)
    bandwidth = float(np.sqrt(((freqs - centroid) ** 2 * mean_mag).sum() / total))

    signs = np.signbit(buffer)
    zcr = float(np.count_nonzero(signs[1:] != signs[:-1]) / (len(buffer) - 1))
    return SpectralStats(centroid_hz=centroid, bandwidth_hz=bandwidth, zcr=zcr)


def _yin_frame_dips(frames: np.ndarray, tau_max: int) -> np.ndarray:
    """Cumulative-mean-normalized difference per frame, shape (F, tau_max+1)."""
    w = YIN_WINDOW
    nfft = YIN_FRAME  # >= w + tau_max, no circular wrap for lags <= tau_max
    head = frames[:, :w]
    spec_head = np.fft.rfft(head, n=nfft, axis=1)
    spec_full = np.fft.rfft(frames[:, : w + tau_max], n=nfft, axis=1)
    corr = np.fft.irfft(np.conj(spec_head) * spec_full, n=nfft, axis=1)[:, : tau_max + 1]

    sq = np.square(frames)
    cums = np.concatenate([np.zeros((len(frames), 1)), np.cumsum(sq, axis=1)], axis=1)
    e_head = cums[:, w] - cums[:, 0]
    taus = np.arange(tau_max + 1)
    e_lag = cums[:, taus + w] - cums[:, taus]
    diff = np.maximum(e_head[:, None] + e_lag - 2.0 * corr, 0.0)

    denom = np.cumsum(diff[:, 1:], axis=1)
    cmndf = np.ones_like(diff)
    valid = denom > 0
    cmndf[:, 1:][valid] = (diff[:, 1:] * taus[1:])[valid] / denom[valid]
    return cmndf


def _parabolic_refine(curve: np.ndarray, idx: int, lo: int, hi: int) -> float:
    if idx <= lo or idx >= hi:
        return float(idx)
    y0, y1, y2 = curve[idx - 1], curve[idx], curve[idx + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom == 0.0:
        return float(idx)
    return idx + 0.5 * (y0 - y2) / denom


def yin_f0(
    buffer: np.ndarray,
    sample_rate: float,
    search_lo_hz: float = YIN_SEARCH_LO_HZ,
    search_hi_hz: float = YIN_SEARCH_HI_HZ,
) -> PitchEstimate:
    """YIN pitch per frame, aggregated by the median over voiced frames.

    Each frame takes the first lag whose normalized difference falls
    below the threshold, walks down to the local minimum, and refines it
    by parabolic interpolation. Frames with no dip stay unvoiced; a clip
    with no voiced frame yields f0_hz=None.
    """
    buffer = np.asarray(buffer, dtype=np.float64)
    if not 0 < search_lo_hz < search_hi_hz < sample_rate / 2:
        raise ValueError("need 0 < search_lo < search_hi < Nyquist")
    tau_min = max(2, int(sample_rate // search_hi_hz))
    tau_max = int(sample_rate // search_lo_hz)
    if tau_max > YIN_WINDOW:
        raise ValueError("search_lo_hz too low for the analysis window")

    frames = _frame(buffer, YIN_FRAME, YIN_HOP)
    cmndf = _yin_frame_dips(frames, tau_max)

    estimates = np.full(len(frames), np.nan)
    for i, curve in enumerate(cmndf):
        region = curve[tau_min : tau_max + 1]
        below = region < YIN_THRESHOLD
        if not below.any():
            continue
        tau = tau_min + int(np.argmax(below))
        while tau + 1 <= tau_max and curve[tau + 1] < curve[tau]:
            tau += 1
        tau_ref = _parabolic_refine(curve, tau, tau_min, tau_max)
        f0 = sample_rate / tau_ref
        if search_lo_hz <= f0 <= search_hi_hz:
            estimates[i] = f0

    voiced = estimates[~np.isnan(estimates)]
    clip_f0 = float(np.median(voiced)) if len(voiced) else None
    return PitchEstimate(f0_hz=clip_f0, frame_values=estimates)
