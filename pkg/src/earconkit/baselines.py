"""Reference baselines over the generated corpus.

Waveform-family classification from pooled log-mel features with a
multinomial logistic regression trained by plain full-batch gradient
descent, and pitch regression scoring of the YIN estimator on all
single-tone clips. Both emit JSON reports with per-clip predictions so
every metric can be recomputed from the report alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, wavio
from .synth import WaveformFamily

LEARNING_RATE = 0.1
N_ITERATIONS = 2000
L2_LAMBDA = 1e-3
SEMITONE_TOLERANCE = 2.0 ** (1.0 / 12.0) - 1.0  # ~5.95% of f0

CLASS_ORDER = [w.value for w in WaveformFamily]


@dataclass(frozen=True)
class PooledMelFeature:
    """Per-clip mean/variance pooling of the log-mel matrix over frames."""

    mean: np.ndarray
    variance: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.mean, self.variance])


@dataclass
class ClassifierModel:
    weights: np.ndarray  # (n_classes, n_features + 1), bias first
    class_order: list[str]
    feat_mean: np.ndarray
    feat_std: np.ndarray
    losses: np.ndarray

    def _design(self, features: np.ndarray) -> np.ndarray:
        z = (features - self.feat_mean) / self.feat_std
        return np.hstack([np.ones((len(z), 1)), z])

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        return _softmax(self._design(features) @ self.weights.T)

    def predict(self, features: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(features), axis=1)


def pool_log_mel(
    buffer: np.ndarray, cfg: analysis.MelConfig, sample_rate: float
) -> PooledMelFeature:
    mels = analysis.log_mel(buffer, cfg, sample_rate)
    return PooledMelFeature(mean=mels.mean(axis=0), variance=mels.var(axis=0))


def extract_features(
    meta_rows: list[dict],
    audio_dir: str | Path,
    cfg: analysis.MelConfig = analysis.MelConfig(),
) -> np.ndarray:
    """Feature matrix (n_clips, 2*n_mels) in metadata row order."""
    audio_dir = Path(audio_dir)
    vectors = []
    for row in meta_rows:
        path = audio_dir / row["file"]
        try:
            buf, sr = wavio.read_wav(path)
            vectors.append(pool_log_mel(buf, cfg, sr).vector)
        except Exception as err:
            raise RuntimeError(f"feature extraction failed for {path}: {err}") from err
    return np.array(vectors)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _loss_and_grad(weights, x, y_onehot, l2):
    """Mean cross-entropy with an L2 penalty on the non-bias weights."""
    probs = _softmax(x @ weights.T)
    n = len(x)
    ce = -np.mean(np.log(probs[np.arange(n), np.argmax(y_onehot, axis=1)] + 1e-300))
    penalty = weights.copy()
    penalty[:, 0] = 0.0
    loss = ce + 0.5 * l2 * np.sum(penalty**2)
    grad = (probs - y_onehot).T @ x / n + l2 * penalty
    return loss, grad


class DivergedError(RuntimeError):
    """Gradient descent saw the loss increase; carries the loss trace."""

    def __init__(self, iteration: int, losses: list[float]):
        self.iteration = iteration
        self.losses = losses
        super().__init__(
            f"loss increased at iteration {iteration}: "
            f"{losses[-2]:.6f} -> {losses[-1]:.6f}"
        )


def train_classifier(
    features: np.ndarray,
    labels: np.ndarray,
    learning_rate: float = LEARNING_RATE,
    n_iterations: int = N_ITERATIONS,
    l2: float = L2_LAMBDA,
) -> ClassifierModel:
    """Full-batch gradient descent from zero weights on standardized
    features. Deterministic: no randomness anywhere in training."""
    labels = np.asarray(labels)
    if len(np.unique(labels)) < 2:
        raise ValueError("training split must contain at least 2 classes")

    feat_mean = features.mean(axis=0)
    feat_std = features.std(axis=0)
    feat_std = np.where(feat_std < 1e-12, 1.0, feat_std)
    x = np.hstack([np.ones((len(features), 1)), (features - feat_mean) / feat_std])

    n_classes = len(CLASS_ORDER)
    y_onehot = np.zeros((len(labels), n_classes))
    y_onehot[np.arange(len(labels)), labels] = 1.0

    weights = np.zeros((n_classes, x.shape[1]))
    losses = []
    for it in range(n_iterations):
        loss, grad = _loss_and_grad(weights, x, y_onehot, l2)
        losses.append(loss)
        if it > 0 and losses[-1] > losses[-2]:
            raise DivergedError(it, losses)
        weights -= learning_rate * grad

    return ClassifierModel(
        weights=weights,
        class_order=list(CLASS_ORDER),
        feat_mean=feat_mean,
        feat_std=feat_std,
        losses=np.array(losses),
    )


def evaluate_classifier(
    model: ClassifierModel, features: np.ndarray, labels: np.ndarray
) -> dict:
    """Accuracy and a confusion matrix (rows = true class)."""
    if len(features) == 0:
        raise ValueError("cannot evaluate an empty split")
    pred = model.predict(features)
    labels = np.asarray(labels)
    n_classes = len(model.class_order)
    confusion = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(labels, pred):
        confusion[t, p] += 1
    return {
        "n": int(len(labels)),
        "accuracy": float(np.mean(pred == labels)),
        "confusion_matrix": confusion.tolist(),
        "predictions": pred.tolist(),
    }


def classification_report(
    meta_rows: list[dict], audio_dir: str | Path, cfg: analysis.MelConfig = analysis.MelConfig()
) -> dict:
    """Train on the train split, evaluate on val and test."""
    features = extract_features(meta_rows, audio_dir, cfg)
    class_index = {name: i for i, name in enumerate(CLASS_ORDER)}
    labels = np.array([class_index[r["waveform"]] for r in meta_rows])
    splits = np.array([r["split"] for r in meta_rows])

    train_mask = splits == "train"
    model = train_classifier(features[train_mask], labels[train_mask])

    report = {
        "task": "waveform_classification",
        "class_order": list(CLASS_ORDER),
        "config": {
            "n_mels": cfg.n_mels,
            "f_min_hz": cfg.f_min_hz,
            "f_max_hz": cfg.f_max_hz,
            "stft_window": cfg.stft.window_size,
            "stft_hop": cfg.stft.hop,
            "learning_rate": LEARNING_RATE,
            "n_iterations": N_ITERATIONS,
            "l2_lambda": L2_LAMBDA,
        },
        "splits": {},
        "predictions": [],
    }
    for split in ("val", "test"):
        mask = splits == split
        result = evaluate_classifier(model, features[mask], labels[mask])
        preds = result.pop("predictions")
        report["splits"][split] = result
        for row, true_label, pred in zip(
            (r for r in meta_rows if r["split"] == split),
            labels[mask],
            preds,
        ):
            report["predictions"].append(
                {
                    "file": row["file"],
                    "split": split,
                    "true": CLASS_ORDER[true_label],
                    "predicted": CLASS_ORDER[pred],
                }
            )
    return report


def evaluate_f0(
    meta_rows: list[dict],
    audio_dir: str | Path,
    tolerance_multiplier: float = 1.0,
) -> dict:
    """YIN error statistics over every single-tone clip.

    Unvoiced estimates count against the within-semitone rate but are
    excluded from MAE/MedAE (their count is reported separately).
    """
    audio_dir = Path(audio_dir)
    singles = [r for r in meta_rows if r["chord"] == "single"]
    if not singles:
        raise ValueError("corpus contains no single-tone clips")

    per_clip = []
    abs_errors = []
    n_unvoiced = 0
    n_within = 0
    for row in singles:
        buf, sr = wavio.read_wav(audio_dir / row["file"])
        estimate = analysis.yin_f0(buf, sr)
        f0_true = float(row["f0_hz"])
        tol = SEMITONE_TOLERANCE * tolerance_multiplier * f0_true
        if estimate.f0_hz is None:
            n_unvoiced += 1
            within = False
            err = None
        else:
            err = abs(estimate.f0_hz - f0_true)
            abs_errors.append(err)
            within = err <= tol
        n_within += within
        per_clip.append(
            {
                "file": row["file"],
                "f0_nominal_hz": f0_true,
                "f0_est_hz": estimate.f0_hz,
                "abs_err_hz": err,
                "within_semitone": within,
            }
        )

    abs_errors = np.array(abs_errors)
    return {
        "task": "f0_regression",
        "config": {
            "estimator": "yin_median_over_frames",
            "yin_threshold": analysis.YIN_THRESHOLD,
            "search_band_hz": [analysis.YIN_SEARCH_LO_HZ, analysis.YIN_SEARCH_HI_HZ],
            "semitone_tolerance": SEMITONE_TOLERANCE * tolerance_multiplier,
        },
        "n": len(singles),
        "n_voiced": len(abs_errors),
        "n_unvoiced": n_unvoiced,
        "mae_hz": float(abs_errors.mean()) if len(abs_errors) else None,
        "medae_hz": float(np.median(abs_errors)) if len(abs_errors) else None,
        "within_semitone_rate": n_within / len(singles),
        "per_clip": per_clip,
    }


def write_report(report: dict, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
