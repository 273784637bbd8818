"""Dry tone synthesis: oscillators, triads, amplitude modulation, ADSR.

All functions are pure and operate on float64 sample buffers scaled to
[-1, 1]. The dry render chain is oscillator/chord -> AM -> envelope;
effects and normalization live in `effects`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class WaveformFamily(str, enum.Enum):
    SINE = "sine"
    SQUARE = "square"
    TRIANGLE = "triangle"
    FM_2TO1 = "fm_2to1"
    FM_3TO2 = "fm_3to2"


class ChordType(str, enum.Enum):
    SINGLE = "single"
    MAJOR = "major"
    MINOR = "minor"


class EnvelopeName(str, enum.Enum):
    ADSR_FAST = "adsr_fast"
    ADSR_MED = "adsr_med"
    PERCUSSIVE = "percussive"


# Phase-modulation index shared by both FM families: moderate sideband
# spread (a handful of Bessel-weighted partials around the carrier).
FM_INDEX = 2.0

# modulator frequency = ratio * carrier frequency
FM_MOD_RATIO = {
    WaveformFamily.FM_2TO1: 2.0,
    WaveformFamily.FM_3TO2: 1.5,
}

# Just-intonation triads: rational ratios keep FFT peaks on exact bins.
CHORD_RATIOS = {
    ChordType.SINGLE: (1.0,),
    ChordType.MAJOR: (1.0, 5.0 / 4.0, 3.0 / 2.0),
    ChordType.MINOR: (1.0, 6.0 / 5.0, 3.0 / 2.0),
}


@dataclass(frozen=True)
class EnvelopePreset:
    """Linear ADSR segment constants. decay_ms=None means the decay runs
    to the end of the clip (percussive shape, release folded in)."""

    name: EnvelopeName
    attack_ms: int
    decay_ms: int | None
    sustain_level: float
    release_ms: int

    def __post_init__(self):
        if not 0.0 <= self.sustain_level <= 1.0:
            raise ValueError("sustain_level must be in [0, 1]")
        if self.attack_ms < 0 or self.release_ms < 0:
            raise ValueError("envelope edge durations must be >= 0")


ENVELOPE_PRESETS = {
    EnvelopeName.ADSR_FAST: EnvelopePreset(EnvelopeName.ADSR_FAST, 5, 20, 0.7, 30),
    EnvelopeName.ADSR_MED: EnvelopePreset(EnvelopeName.ADSR_MED, 20, 50, 0.8, 80),
    EnvelopeName.PERCUSSIVE: EnvelopePreset(EnvelopeName.PERCUSSIVE, 2, None, 0.0, 0),
}


@dataclass(frozen=True)
class AmSetting:
    """Sinusoidal amplitude modulation: gain dips to (1 - depth)."""

    rate_hz: float
    depth: float

    def __post_init__(self):
        if not 0.0 <= self.depth <= 1.0:
            raise ValueError("AM depth must be in [0, 1]")
        if self.rate_hz < 0:
            raise ValueError("AM rate must be >= 0")
        if (self.rate_hz == 0) != (self.depth == 0):
            raise ValueError("AM is either fully off (0, 0.0) or fully on")

    @property
    def enabled(self) -> bool:
        return self.depth > 0


AM_OFF = AmSetting(0.0, 0.0)


@dataclass(frozen=True)
class ClipSpec:
    """One point of the corpus parameter grid.

    `index` is the position in the sampled corpus (-1 before sampling) and
    `seed` is the global generation seed; rendering itself is a pure
    function of the factor fields.
    """

    waveform: WaveformFamily
    f0_hz: int
    duration_ms: int
    envelope: EnvelopeName
    am: AmSetting
    chord: ChordType
    reverb: "ReverbKind"  # noqa: F821 - effects imports this module, not vice versa
    seed: int = 0
    index: int = -1


def _check_frequency(f_hz: float, sample_rate: float):
    if f_hz <= 0:
        raise ValueError(f"frequency must be positive, got {f_hz}")
    if f_hz >= sample_rate / 2:
        raise ValueError(f"frequency {f_hz} Hz is at or above Nyquist ({sample_rate / 2} Hz)")


def render_oscillator(
    family: WaveformFamily, f_hz: float, n_samples: int, sample_rate: float
) -> np.ndarray:
    """Render one oscillator at phase 0.

    Square and triangle are additive truncated Fourier series (odd
    harmonics, 1/n and 1/n^2 weights) so no partial reaches Nyquist; FM
    families phase-modulate the carrier at a fixed modulator ratio.
    """
    _check_frequency(f_hz, sample_rate)
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")

    phase = (2.0 * np.pi * f_hz / sample_rate) * np.arange(n_samples)

    if family is WaveformFamily.SINE:
        return np.sin(phase)

    if family in FM_MOD_RATIO:
        ratio = FM_MOD_RATIO[family]
        return np.sin(phase + FM_INDEX * np.sin(ratio * phase))

    # largest harmonic strictly below Nyquist
    n_max = int((sample_rate / 2) // f_hz)
    if n_max * f_hz >= sample_rate / 2:
        n_max -= 1
    harmonics = np.arange(1, n_max + 1, 2, dtype=np.float64)

    if family is WaveformFamily.SQUARE:
        weights = (4.0 / np.pi) / harmonics
    elif family is WaveformFamily.TRIANGLE:
        signs = np.where((harmonics - 1) % 4 == 0, 1.0, -1.0)
        weights = (8.0 / np.pi**2) * signs / harmonics**2
    else:
        raise ValueError(f"unknown waveform family: {family}")

    buf = np.sin(phase[:, None] * harmonics) @ weights
    # Gibbs overshoot of the truncated square series can poke above 1.
    peak = np.max(np.abs(buf))
    if peak > 1.0:
        buf /= peak
    return buf


def build_chord(
    family: WaveformFamily,
    root_hz: float,
    chord: ChordType,
    n_samples: int,
    sample_rate: float,
) -> np.ndarray:
    """Single tone, or an equal-amplitude just-intonation triad (sum / 3)."""
    ratios = CHORD_RATIOS[chord]
    top_hz = root_hz * max(ratios)
    if top_hz >= sample_rate / 2:
        raise ValueError(
            f"triad component {top_hz} Hz is at or above Nyquist ({sample_rate / 2} Hz)"
        )
    if chord is ChordType.SINGLE:
        return render_oscillator(family, root_hz, n_samples, sample_rate)
    parts = [render_oscillator(family, root_hz * r, n_samples, sample_rate) for r in ratios]
    return (parts[0] + parts[1] + parts[2]) / 3.0


def apply_am(buffer: np.ndarray, am: AmSetting, sample_rate: float) -> np.ndarray:
    """Multiply by 1 - depth + depth*0.5*(1 - cos(2*pi*rate*k/sr)).

    The gain swings between (1 - depth) and 1, so peak level is never
    raised; depth 0 returns the input unchanged.
    """
    if not am.enabled:
        return buffer.copy()
    k = np.arange(len(buffer))
    gain = 1.0 - am.depth + am.depth * 0.5 * (
        1.0 - np.cos(2.0 * np.pi * am.rate_hz / sample_rate * k)
    )
    return buffer * gain


def envelope_gain(preset: EnvelopePreset, n_samples: int, sample_rate: float) -> np.ndarray:
    """Piecewise-linear ADSR gain curve over n_samples.

    Segment breakpoints: 0 at sample 0, 1 after the attack, sustain after
    the decay, sustain held, then 0 exactly at the last sample. If the
    nominal segments exceed the clip, all three are compressed
    proportionally so the shape survives on short clips.
    """
    if n_samples < 2:
        raise ValueError("buffer too short for envelope edges")
    last = float(n_samples - 1)

    a = preset.attack_ms * sample_rate / 1000.0
    r = preset.release_ms * sample_rate / 1000.0
    if preset.decay_ms is None:
        d = max(last - a - r, 0.0)
    else:
        d = preset.decay_ms * sample_rate / 1000.0

    total = a + d + r
    if total > last:
        scale = last / total
        a, d, r = a * scale, d * scale, r * scale

    xs = [0.0, a, a + d, last - r, last]
    ys = [0.0, 1.0, preset.sustain_level, preset.sustain_level, 0.0]
    # collapse coincident breakpoints (empty sustain / zero release); the
    # later one wins so the curve still ends at 0, but the gain-0 anchor
    # at sample 0 is never displaced
    pts = [(xs[0], ys[0])]
    for x, y in zip(xs[1:], ys[1:]):
        if x > pts[-1][0]:
            pts.append((x, y))
        elif len(pts) > 1:
            pts[-1] = (x, y)
    gx, gy = zip(*pts)
    return np.interp(np.arange(n_samples, dtype=np.float64), gx, gy)


def apply_envelope(
    buffer: np.ndarray, preset: EnvelopePreset, sample_rate: float
) -> np.ndarray:
    """Apply the ADSR gain curve; first and last output samples are 0."""
    return buffer * envelope_gain(preset, len(buffer), sample_rate)


def render_dry_clip(spec: ClipSpec, sample_rate: float) -> np.ndarray:
    """Full dry chain for a spec: chord -> AM -> envelope.

    Output length is round(duration_ms * sr / 1000); the result is a pure
    function of (spec, sample_rate).
    """
    n_samples = round(spec.duration_ms * sample_rate / 1000.0)
    buf = build_chord(spec.waveform, spec.f0_hz, spec.chord, n_samples, sample_rate)
    buf = apply_am(buf, spec.am, sample_rate)
    return apply_envelope(buf, ENVELOPE_PRESETS[spec.envelope], sample_rate)
