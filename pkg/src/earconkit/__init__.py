"""earconkit: deterministic synthesis of a parametric earcon corpus.

Signal chain: oscillator/chord -> amplitude modulation -> ADSR envelope
-> Schroeder reverb -> RMS normalization, rendered over a seeded sample
of the parameter grid into mono 48 kHz 16-bit WAV files with a full
metadata table, plus reference classification and pitch baselines.
"""

from .analysis import (
    MelConfig,
    PitchEstimate,
    SpectralStats,
    StftConfig,
    log_mel,
    spectral_stats,
    stft_magnitude,
    yin_f0,
)
from .corpus import (
    BIT_DEPTH,
    CORPUS_VERSION,
    METADATA_COLUMNS,
    SAMPLE_RATE,
    CorpusManifest,
    GridDefinition,
    MetadataRow,
    assign_split,
    build_corpus,
    clip_filename,
    enumerate_grid,
    parse_clip_filename,
    render_clip,
    sample_corpus,
)
from .effects import (
    LevelReport,
    ReverbConfig,
    ReverbKind,
    apply_reverb,
    measure_levels,
    normalize_rms,
)
from .synth import (
    AM_OFF,
    ENVELOPE_PRESETS,
    AmSetting,
    ChordType,
    ClipSpec,
    EnvelopeName,
    EnvelopePreset,
    WaveformFamily,
    apply_am,
    apply_envelope,
    build_chord,
    render_dry_clip,
    render_oscillator,
)
from .wavio import read_wav, write_wav

__version__ = "0.1.0"
