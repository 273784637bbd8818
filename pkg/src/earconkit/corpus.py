"""Corpus generation: grid enumeration, deterministic sampling, rendering,
WAV output, split assignment, and the metadata/manifest files.

Everything downstream of the seed is deterministic, so regenerating with
the same (grid, seed, target_n) reproduces the corpus byte for byte.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import analysis, effects, rng, synth, wavio
from .effects import ReverbKind
from .synth import AmSetting, ChordType, ClipSpec, EnvelopeName, WaveformFamily

SAMPLE_RATE = 48000
BIT_DEPTH = 16
CORPUS_VERSION = "1.0.0"
RMS_TARGET_DBFS = -20.0
PEAK_CAP_DBFS = -1.0

METADATA_COLUMNS = [
    "file",
    "split",
    "sr_hz",
    "bit_depth",
    "duration_ms",
    "peak_dbfs",
    "rms_dbfs",
    "lufs",
    "waveform",
    "f0_hz",
    "chord",
    "am_rate_hz",
    "am_depth",
    "envelope",
    "reverb",
    "spec_centroid_hz",
    "bandwidth_hz",
    "zcr",
    "inharmonicity_proxy",
    "roughness_proxy",
    "attack_ms",
    "release_ms",
    "seed",
    "version",
]

LICENSE_NOTICE = """\
# Licenses

The audio files in this corpus are fully synthetic and are dedicated to
the public domain under CC0-1.0. The generation code is MIT-licensed.
No third-party assets are included.
"""


@dataclass(frozen=True)
class GridDefinition:
    """The eight factor value-lists of the parameter grid."""

    waveforms: tuple[WaveformFamily, ...] = tuple(WaveformFamily)
    f0s_hz: tuple[int, ...] = (350, 500, 750, 1000)
    durations_ms: tuple[int, ...] = (100, 250, 500)
    envelopes: tuple[EnvelopeName, ...] = tuple(EnvelopeName)
    am_rates_hz: tuple[float, ...] = (0.0, 8.0, 30.0)
    am_depths: tuple[float, ...] = (0.0, 0.3, 0.5)
    chords: tuple[ChordType, ...] = tuple(ChordType)
    reverbs: tuple[ReverbKind, ...] = tuple(ReverbKind)

    def am_settings(self) -> list[AmSetting]:
        """Canonical AM pairs: off is (0, 0.0); a zero rate or zero depth
        alone would sound identical to off, so those pairs are dropped."""
        out = []
        for rate, depth in product(self.am_rates_hz, self.am_depths):
            if (rate == 0) == (depth == 0):
                out.append(AmSetting(rate, depth))
        return out

    def raw_size(self) -> int:
        return math.prod(
            len(v)
            for v in (
                self.waveforms,
                self.f0s_hz,
                self.durations_ms,
                self.envelopes,
                self.am_rates_hz,
                self.am_depths,
                self.chords,
                self.reverbs,
            )
        )

    def size(self) -> int:
        return (
            len(self.waveforms)
            * len(self.f0s_hz)
            * len(self.durations_ms)
            * len(self.envelopes)
            * len(self.am_settings())
            * len(self.chords)
            * len(self.reverbs)
        )


def enumerate_grid(grid: GridDefinition = GridDefinition()) -> list[ClipSpec]:
    """All grid points in lexicographic factor order (waveform slowest)."""
    return [
        ClipSpec(
            waveform=waveform,
            f0_hz=f0,
            duration_ms=duration,
            envelope=envelope,
            am=am,
            chord=chord,
            reverb=reverb,
        )
        for waveform, f0, duration, envelope, am, chord, reverb in product(
            grid.waveforms,
            grid.f0s_hz,
            grid.durations_ms,
            grid.envelopes,
            grid.am_settings(),
            grid.chords,
            grid.reverbs,
        )
    ]


def sample_corpus(superset: list[ClipSpec], target_n: int, seed: int) -> list[ClipSpec]:
    """First target_n specs of the seeded Fisher-Yates shuffle, re-indexed."""
    if target_n > len(superset):
        raise ValueError(
            f"target_n={target_n} exceeds the grid superset size {len(superset)}"
        )
    picked = rng.shuffled(superset, seed)[:target_n]
    return [
        dataclasses.replace(spec, seed=seed, index=i) for i, spec in enumerate(picked)
    ]


def clip_filename(spec: ClipSpec) -> str:
    return (
        f"clip_{spec.index:04d}_{spec.waveform.value}_{spec.f0_hz}hz_"
        f"{spec.duration_ms}ms_{spec.envelope.value}_"
        f"am{spec.am.rate_hz:g}-{spec.am.depth:.1f}_"
        f"{spec.chord.value}_{spec.reverb.value}.wav"
    )


_FILENAME_RE = re.compile(
    r"^clip_(?P<index>\d{4})"
    r"_(?P<waveform>sine|square|triangle|fm_2to1|fm_3to2)"
    r"_(?P<f0>\d+)hz"
    r"_(?P<duration>\d+)ms"
    r"_(?P<envelope>adsr_fast|adsr_med|percussive)"
    r"_am(?P<rate>\d+(?:\.\d+)?)-(?P<depth>\d\.\d)"
    r"_(?P<chord>single|major|minor)"
    r"_(?P<reverb>dry|rir_small|rir_medium)\.wav$"
)


def parse_clip_filename(name: str) -> dict:
    """Recover every factor value encoded in a corpus filename."""
    m = _FILENAME_RE.match(name)
    if m is None:
        raise ValueError(f"not a corpus clip filename: {name!r}")
    return {
        "index": int(m["index"]),
        "waveform": WaveformFamily(m["waveform"]),
        "f0_hz": int(m["f0"]),
        "duration_ms": int(m["duration"]),
        "envelope": EnvelopeName(m["envelope"]),
        "am": AmSetting(float(m["rate"]), float(m["depth"])),
        "chord": ChordType(m["chord"]),
        "reverb": ReverbKind(m["reverb"]),
    }


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def assign_split(filename: str) -> str:
    """train/val/test by FNV-1a 64 of the filename bytes, mod 100."""
    h = fnv1a64(filename.encode("utf-8")) % 100
    if h < 80:
        return "train"
    if h < 90:
        return "val"
    return "test"


def format_float(x: float) -> str:
    """Fixed-notation rendering with 6 significant digits.

    A pinned formatter: metadata bytes must not depend on repr() quirks.
    """
    if x == 0.0:
        return "0.00000"
    if not math.isfinite(x):
        raise ValueError(f"cannot format non-finite value {x}")
    decimals = max(0, 5 - int(math.floor(math.log10(abs(x)))))
    return f"{x:.{decimals}f}"


@dataclass(frozen=True)
class MetadataRow:
    file: str
    split: str
    sr_hz: int
    bit_depth: int
    duration_ms: int
    peak_dbfs: float
    rms_dbfs: float
    lufs: str  # not computed; emitted empty
    waveform: str
    f0_hz: int
    chord: str
    am_rate_hz: float
    am_depth: float
    envelope: str
    reverb: str
    spec_centroid_hz: float
    bandwidth_hz: float
    zcr: float
    inharmonicity_proxy: int
    roughness_proxy: float
    attack_ms: int
    release_ms: int
    seed: int
    version: str

    def as_csv_values(self) -> list[str]:
        vals = []
        for name in METADATA_COLUMNS:
            v = getattr(self, name)
            vals.append(format_float(v) if isinstance(v, float) else str(v))
        return vals


@dataclass
class CorpusManifest:
    """Generation record: everything needed to regenerate byte-identically,
    plus the observed split/cap counts of this run."""

    version: str
    seed: int
    target_n: int
    sample_rate: int = SAMPLE_RATE
    bit_depth: int = BIT_DEPTH
    rms_target_dbfs: float = RMS_TARGET_DBFS
    peak_cap_dbfs: float = PEAK_CAP_DBFS
    fm_index: float = synth.FM_INDEX
    fm_mod_ratios: dict = field(
        default_factory=lambda: {k.value: v for k, v in synth.FM_MOD_RATIO.items()}
    )
    chord_ratios: dict = field(
        default_factory=lambda: {k.value: list(v) for k, v in synth.CHORD_RATIOS.items()}
    )
    envelope_presets: dict = field(
        default_factory=lambda: {
            name.value: {
                "attack_ms": p.attack_ms,
                "decay_ms": "rest_of_clip" if p.decay_ms is None else p.decay_ms,
                "sustain_level": p.sustain_level,
                "release_ms": p.release_ms,
            }
            for name, p in synth.ENVELOPE_PRESETS.items()
        }
    )
    reverb: dict = field(
        default_factory=lambda: {
            "comb_delays_ms": list(effects.COMB_DELAYS_MS),
            "allpass_delays_ms": list(effects.ALLPASS_DELAYS_MS),
            "allpass_gain": effects.ALLPASS_GAIN,
            "wet_mix": effects.WET_MIX,
            "comb_gain_rule": "10^(-3*delay/rt60)",
            "target_rt60_s": {
                k.value: k.target_rt60_s for k in ReverbKind if k is not ReverbKind.DRY
            },
        }
    )
    stft: dict = field(
        default_factory=lambda: {
            "window_size": analysis.StftConfig().window_size,
            "hop": analysis.StftConfig().hop,
            "window": analysis.StftConfig().window,
        }
    )
    mel: dict = field(
        default_factory=lambda: {
            "n_mels": analysis.MelConfig().n_mels,
            "f_min_hz": analysis.MelConfig().f_min_hz,
            "f_max_hz": analysis.MelConfig().f_max_hz,
            "log_eps": analysis.LOG_EPS,
        }
    )
    yin: dict = field(
        default_factory=lambda: {
            "frame": analysis.YIN_FRAME,
            "hop": analysis.YIN_HOP,
            "integration_window": analysis.YIN_WINDOW,
            "threshold": analysis.YIN_THRESHOLD,
            "search_lo_hz": analysis.YIN_SEARCH_LO_HZ,
            "search_hi_hz": analysis.YIN_SEARCH_HI_HZ,
        }
    )
    shuffle_prng: str = "xoshiro256** seeded via splitmix64; descending Fisher-Yates"
    split_digest: str = "fnv1a64(filename) mod 100 -> <80 train, <90 val, else test"
    superset_size: int = 0
    split_counts: dict = field(default_factory=dict)
    peak_capped_clips: int = 0

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CorpusManifest":
        return cls(**json.loads(text))


class CorpusBuildError(RuntimeError):
    """Raised when one or more clips fail to render or write."""

    def __init__(self, failures: list[tuple[str, Exception]]):
        self.failures = failures
        lines = ", ".join(f"{name}: {err}" for name, err in failures)
        super().__init__(f"{len(failures)} clip(s) failed: {lines}")


def render_clip(spec: ClipSpec, sample_rate: int = SAMPLE_RATE):
    """Full chain for one spec: dry render -> reverb -> RMS normalize."""
    dry = synth.render_dry_clip(spec, sample_rate)
    wet = effects.apply_reverb(dry, spec.reverb, sample_rate)
    return effects.normalize_rms(wet, RMS_TARGET_DBFS, PEAK_CAP_DBFS)


def _metadata_row(
    spec: ClipSpec,
    filename: str,
    split: str,
    levels: effects.LevelReport,
    stats: analysis.SpectralStats,
    version: str,
) -> MetadataRow:
    preset = synth.ENVELOPE_PRESETS[spec.envelope]
    return MetadataRow(
        file=filename,
        split=split,
        sr_hz=SAMPLE_RATE,
        bit_depth=BIT_DEPTH,
        duration_ms=spec.duration_ms,
        peak_dbfs=levels.peak_dbfs,
        rms_dbfs=levels.rms_dbfs,
        lufs="",
        waveform=spec.waveform.value,
        f0_hz=spec.f0_hz,
        chord=spec.chord.value,
        am_rate_hz=spec.am.rate_hz,
        am_depth=spec.am.depth,
        envelope=spec.envelope.value,
        reverb=spec.reverb.value,
        spec_centroid_hz=stats.centroid_hz,
        bandwidth_hz=stats.bandwidth_hz,
        zcr=stats.zcr,
        inharmonicity_proxy=int(spec.chord is not ChordType.SINGLE),
        roughness_proxy=spec.am.depth,
        attack_ms=preset.attack_ms,
        release_ms=preset.release_ms,
        seed=spec.seed,
        version=version,
    )


def write_metadata(rows: list[MetadataRow], meta_path: Path) -> None:
    meta_path.parent.mkdir(parents=True, exist_ok=True)
    with open(meta_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METADATA_COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv_values())


def read_metadata(meta_path: str | Path) -> list[dict]:
    """Rows of metadata.csv as dicts; validates the header first."""
    with open(meta_path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != METADATA_COLUMNS:
            unexpected = [c for c in header if c not in METADATA_COLUMNS]
            missing = [c for c in METADATA_COLUMNS if c not in header]
            raise ValueError(
                f"metadata schema mismatch: unexpected={unexpected} missing={missing}"
            )
        return [dict(zip(header, row)) for row in reader]


def build_corpus(
    grid: GridDefinition,
    target_n: int,
    seed: int,
    out_dir: str | Path,
    meta_path: str | Path,
    version: str = CORPUS_VERSION,
) -> CorpusManifest:
    """Render the sampled corpus and write WAVs + metadata + manifest.

    Rows are written in clip-index order. Any per-clip failure aborts the
    build with every failing clip named.
    """
    out_dir = Path(out_dir)
    meta_path = Path(meta_path)
    out_dir.mkdir(parents=True, exist_ok=True)

    superset = enumerate_grid(grid)
    specs = sample_corpus(superset, target_n, seed)

    rows: list[MetadataRow] = []
    failures: list[tuple[str, Exception]] = []
    capped = 0
    split_counts = {"train": 0, "val": 0, "test": 0}
    for spec in specs:
        name = clip_filename(spec)
        try:
            buf, levels = render_clip(spec)
            stats = analysis.spectral_stats(buf, sample_rate=SAMPLE_RATE)
            wavio.write_wav(buf, out_dir / name, SAMPLE_RATE)
        except Exception as err:  # noqa: BLE001 - aggregated and re-raised
            failures.append((name, err))
            continue
        split = assign_split(name)
        split_counts[split] += 1
        if effects.was_peak_capped(levels, RMS_TARGET_DBFS):
            capped += 1
        rows.append(_metadata_row(spec, name, split, levels, stats, version))

    if failures:
        raise CorpusBuildError(failures)

    write_metadata(rows, meta_path)

    manifest = CorpusManifest(
        version=version,
        seed=seed,
        target_n=target_n,
        superset_size=len(superset),
        split_counts=split_counts,
        peak_capped_clips=capped,
    )
    manifest_path = meta_path.parent / "manifest.json"
    manifest_path.write_text(manifest.to_json(), encoding="utf-8")
    (meta_path.parent / "LICENSES.md").write_text(LICENSE_NOTICE, encoding="utf-8")
    return manifest
