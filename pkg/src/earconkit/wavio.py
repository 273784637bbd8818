"""Mono 16-bit PCM WAV writing and reading.

The encoder is written out explicitly (plain 44-byte RIFF header, no
optional chunks) so identical sample buffers always produce identical
bytes. Quantization is round-half-away-from-zero scaled by 32767, which
keeps +/-1.0 exactly representable and symmetric.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

PCM_SCALE = 32767


def quantize(buffer: np.ndarray) -> np.ndarray:
    """Float samples in [-1, 1] -> int16, half values rounding away from 0."""
    buffer = np.asarray(buffer, dtype=np.float64)
    if len(buffer) and np.max(np.abs(buffer)) > 1.0:
        raise ValueError("samples out of range [-1, 1]")
    return (np.sign(buffer) * np.floor(np.abs(buffer) * PCM_SCALE + 0.5)).astype(np.int16)


def write_wav(buffer: np.ndarray, path: str | Path, sample_rate: int = 48000) -> None:
    """Write mono 16-bit little-endian PCM (RIFF format 1)."""
    pcm = quantize(buffer).astype("<i2").tobytes()
    byte_rate = sample_rate * 2
    header = b"RIFF" + struct.pack("<I", 36 + len(pcm)) + b"WAVE"
    header += b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, sample_rate, byte_rate, 2, 16)
    header += b"data" + struct.pack("<I", len(pcm))
    Path(path).write_bytes(header + pcm)


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a mono 16-bit PCM WAV back to float64 in [-1, 1]."""
    raw = Path(path).read_bytes()
    if raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")

    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (size,) = struct.unpack("<I", raw[pos + 4 : pos + 8])
        body = raw[pos + 8 : pos + 8 + size]
        if chunk_id == b"fmt ":
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size & 1)

    if fmt is None or data is None:
        raise ValueError(f"{path}: missing fmt or data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if (audio_format, channels, bits) != (1, 1, 16):
        raise ValueError(f"{path}: expected mono 16-bit PCM, got {fmt}")
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / PCM_SCALE
    return samples, sample_rate
