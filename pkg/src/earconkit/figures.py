"""Spectrogram grid figure: one row per waveform family, one column per
AM setting. Rendering is pure pixel assembly (fixed color table, no
plotting backend) so the output bytes depend only on the corpus.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from . import analysis, wavio
from .corpus import GridDefinition
from .synth import WaveformFamily

# Coarse viridis-like anchors, interpolated to a 256-entry table.
_COLOR_ANCHORS = np.array(
    [
        (68, 1, 84),
        (71, 44, 122),
        (59, 81, 139),
        (44, 113, 142),
        (33, 144, 141),
        (39, 173, 129),
        (92, 200, 99),
        (170, 220, 50),
        (253, 231, 37),
    ],
    dtype=np.float64,
)

CELL_HEIGHT = 128  # two pixels per mel band
PAD = 4
BACKGROUND = 32


def color_table() -> np.ndarray:
    xs = np.linspace(0.0, 1.0, len(_COLOR_ANCHORS))
    grid = np.linspace(0.0, 1.0, 256)
    return np.stack(
        [np.interp(grid, xs, _COLOR_ANCHORS[:, c]) for c in range(3)], axis=1
    ).astype(np.uint8)


def _cell_pixels(mels: np.ndarray, vmin: float, vmax: float, lut: np.ndarray) -> np.ndarray:
    # mel bands on the vertical axis, low frequencies at the bottom
    scaled = (mels.T[::-1] - vmin) / (vmax - vmin) if vmax > vmin else np.zeros_like(mels.T)
    idx = np.clip(scaled * 255.0, 0, 255).astype(np.uint8)
    rgb = lut[idx]
    return np.repeat(rgb, CELL_HEIGHT // mels.shape[1], axis=0)


def select_figure_clips(meta_rows: list[dict]) -> list[list[dict]]:
    """One clip per (waveform family, AM setting) cell.

    Prefers single/dry clips so the cells show the raw timbre; raises
    naming every missing combination.
    """
    am_settings = GridDefinition().am_settings()
    cells = []
    missing = []
    for family in WaveformFamily:
        row_cells = []
        for am in am_settings:
            candidates = [
                r
                for r in meta_rows
                if r["waveform"] == family.value
                and float(r["am_rate_hz"]) == am.rate_hz
                and float(r["am_depth"]) == am.depth
            ]
            if not candidates:
                missing.append(f"{family.value}/am{am.rate_hz:g}-{am.depth:.1f}")
                continue
            candidates.sort(
                key=lambda r: (r["chord"] != "single", r["reverb"] != "dry", r["file"])
            )
            row_cells.append(candidates[0])
        cells.append(row_cells)
    if missing:
        raise ValueError(f"no clips for figure cells: {', '.join(missing)}")
    return cells


def render_spectrogram_grid(
    meta_rows: list[dict], audio_dir: str | Path, out_path: str | Path
) -> None:
    """Write the 5-row log-mel grid image as a PNG."""
    audio_dir = Path(audio_dir)
    cells = select_figure_clips(meta_rows)
    cfg = analysis.MelConfig()

    mel_grids = []
    for row_cells in cells:
        row_mels = []
        for r in row_cells:
            buf, sr = wavio.read_wav(audio_dir / r["file"])
            row_mels.append(analysis.log_mel(buf, cfg, sr))
        mel_grids.append(row_mels)

    vmin = min(m.min() for row in mel_grids for m in row)
    vmax = max(m.max() for row in mel_grids for m in row)
    cell_w = max(m.shape[0] for row in mel_grids for m in row)
    lut = color_table()

    n_rows = len(mel_grids)
    n_cols = len(mel_grids[0])
    height = n_rows * CELL_HEIGHT + (n_rows + 1) * PAD
    width = n_cols * cell_w + (n_cols + 1) * PAD
    canvas = np.full((height, width, 3), BACKGROUND, dtype=np.uint8)

    for i, row in enumerate(mel_grids):
        for j, mels in enumerate(row):
            pixels = _cell_pixels(mels, vmin, vmax, lut)
            y = PAD + i * (CELL_HEIGHT + PAD)
            x = PAD + j * (cell_w + PAD)
            canvas[y : y + pixels.shape[0], x : x + pixels.shape[1]] = pixels

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(canvas).save(out_path, format="PNG")
