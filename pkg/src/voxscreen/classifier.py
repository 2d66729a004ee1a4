"""Asymmetric threshold band around the identity line.

A pair is accepted when the signed deviation ``d = Y - X`` of its output
feature ``Y`` from its input feature ``X`` lies inside ``[t_neg, t_pos]``.
The two edges are fitted independently: ``t_neg`` on pairs with ``d < 0``
and ``t_pos`` on pairs with ``d > 0``, each maximizing accuracy against the
human labels within its half-space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import FeatureKindMismatch, FeatureUnavailable, NoLabeledPairs
from .features import FEATURE_KINDS, AcousticFeatures

GOOD = "good"
BAD = "bad"
REVIEW = "review"
LABELS = (GOOD, BAD)
UNBOUNDED = math.inf


def normalize_label(label) -> str | None:
    if label is None:
        return None
    s = str(label).strip().lower()
    if s == "":
        return None
    if s not in LABELS:
        raise ValueError(f"label must be 'good' or 'bad', got {label!r}")
    return s


@dataclass(frozen=True)
class SamplePair:
    id: str
    input_features: AcousticFeatures
    output_features: AcousticFeatures
    human_label: str | None = None
    vocoder_tag: str = ""

    def __post_init__(self):
        object.__setattr__(self, "human_label", normalize_label(self.human_label))


@dataclass(frozen=True)
class Deviation:
    feature_kind: str
    d: float


@dataclass(frozen=True)
class ThresholdBand:
    """Acceptance band ``t_neg <= d <= t_pos``; infinite edges mean unbounded."""

    feature_kind: str
    t_neg: float
    t_pos: float

    def __post_init__(self):
        if self.feature_kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.feature_kind!r}")
        if not self.t_neg < 0 < self.t_pos:
            raise ValueError(f"band must satisfy t_neg < 0 < t_pos, got ({self.t_neg}, {self.t_pos})")

    def accepts(self, d: float) -> bool:
        return self.t_neg <= d <= self.t_pos


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with 'bad' as the positive class."""

    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def n(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


@dataclass(frozen=True)
class Metrics:
    """Accuracy, sensitivity and specificity; ``None`` marks an undefined ratio."""

    accuracy: float | None
    sensitivity: float | None
    specificity: float | None

    @classmethod
    def from_counts(cls, cm: ConfusionMatrix) -> "Metrics":
        def ratio(num, den):
            return num / den if den > 0 else None
        return cls(ratio(cm.tp + cm.tn, cm.n), ratio(cm.tp, cm.tp + cm.fn),
                   ratio(cm.tn, cm.tn + cm.fp))

    def as_dict(self) -> dict:
        return {"accuracy": self.accuracy, "sensitivity": self.sensitivity,
                "specificity": self.specificity}


@dataclass(frozen=True)
class BandFit:
    band: ThresholdBand
    training_accuracy: float
    n_train: int
    neg_accuracy: float | None = None
    pos_accuracy: float | None = None
    warnings: tuple = field(default_factory=tuple)


def deviation(pair: SamplePair, feature: str) -> Deviation:
    """Signed deviation of the output feature from the input feature."""
    if feature not in FEATURE_KINDS:
        raise ValueError(f"unknown feature kind {feature!r}")
    x = pair.input_features.value(feature)
    y = pair.output_features.value(feature)
    if x is None or y is None:
        side = "input" if x is None else "output"
        feats = pair.input_features if x is None else pair.output_features
        reason = feats.errors.get(feature, "unavailable")
        raise FeatureUnavailable(f"{pair.id}: {feature} on {side} side: {reason}")
    return Deviation(feature, y - x)


def classify(dev: Deviation, band: ThresholdBand) -> str:
    if dev.feature_kind != band.feature_kind:
        raise FeatureKindMismatch(f"deviation is {dev.feature_kind}, band is {band.feature_kind}")
    return GOOD if band.accepts(dev.d) else BAD


def _fit_half(magnitudes: np.ndarray, is_bad: np.ndarray) -> tuple[float, float]:
    """Best threshold on |d| for one half-space.

    Candidates are midpoints between consecutive distinct magnitudes, with
    0 included as the lowest boundary, plus an unbounded candidate beyond
    the extreme. A sample is accepted when its magnitude does not exceed
    the threshold. Ties go to the widest band.
    """
    values = np.unique(np.concatenate([[0.0], magnitudes]))
    candidates = list((values[:-1] + values[1:]) / 2) + [UNBOUNDED]
    order = np.argsort(magnitudes, kind="stable")
    mags = magnitudes[order]
    bad = is_bad[order]
    n = len(mags)
    # correct(t) = goods with |d| <= t + bads with |d| > t
    goods_le = np.concatenate([[0], np.cumsum(~bad)])
    bads_le = np.concatenate([[0], np.cumsum(bad)])
    total_bad = int(bad.sum())
    best_t, best_correct = None, -1
    for t in candidates:
        k = int(np.searchsorted(mags, t, side="right"))
        correct = goods_le[k] + (total_bad - bads_le[k])
        if correct >= best_correct:
            best_t, best_correct = t, correct
    return float(best_t), float(best_correct / n)


def optimize_band(deviations: Sequence[float], labels: Sequence[str], feature: str) -> BandFit:
    """Fit ``t_neg`` and ``t_pos`` independently from labelled deviations.

    Pairs with ``d == 0`` take part in neither search and are always
    accepted. An empty half-space yields an unbounded edge plus a warning.
    """
    d = np.asarray(deviations, dtype=float)
    labs = [normalize_label(v) for v in labels]
    if len(d) != len(labs):
        raise ValueError("one label per deviation")
    keep = np.array([v is not None for v in labs], dtype=bool)
    if len(d) == 0 or not keep.any():
        raise NoLabeledPairs(f"no labelled pairs for {feature}")
    d = d[keep]
    is_bad = np.array([v == BAD for v, k in zip(labs, keep) if k], dtype=bool)
    if not np.all(np.isfinite(d)):
        raise ValueError("deviations must be finite")

    warnings = []
    neg = d < 0
    pos = d > 0
    if neg.any():
        t, neg_acc = _fit_half(-d[neg], is_bad[neg])
        t_neg = -t
    else:
        t_neg, neg_acc = -UNBOUNDED, None
        warnings.append(f"{feature}: no labelled pairs with d < 0; lower edge left unbounded")
    if pos.any():
        t_pos, pos_acc = _fit_half(d[pos], is_bad[pos])
    else:
        t_pos, pos_acc = UNBOUNDED, None
        warnings.append(f"{feature}: no labelled pairs with d > 0; upper edge left unbounded")

    band = ThresholdBand(feature, t_neg, t_pos)
    accepted = (d >= t_neg) & (d <= t_pos)
    acc = float(np.mean(accepted != is_bad))
    return BandFit(band, acc, int(len(d)), neg_acc, pos_acc, tuple(warnings))


def confusion(labels: Iterable[str], decisions: Iterable[str]) -> ConfusionMatrix:
    tp = tn = fp = fn = 0
    for lab, dec in zip(labels, decisions):
        lab, dec = normalize_label(lab), normalize_label(dec)
        if lab == BAD:
            tp += dec == BAD
            fn += dec == GOOD
        else:
            tn += dec == GOOD
            fp += dec == BAD
    return ConfusionMatrix(tp, tn, fp, fn)


def evaluate(deviations: Sequence[float], labels: Sequence[str],
             band: ThresholdBand) -> tuple[ConfusionMatrix, Metrics]:
    labs = [normalize_label(v) for v in labels]
    if not labs or any(v is None for v in labs):
        raise NoLabeledPairs("evaluation needs every pair labelled")
    decisions = [GOOD if band.accepts(float(x)) else BAD for x in deviations]
    cm = confusion(labs, decisions)
    return cm, Metrics.from_counts(cm)


def pair_deviations(pairs: Sequence[SamplePair], feature: str):
    """Deviations and labels of pairs where ``feature`` is available on both sides.

    Returns ``(ids, deviations, labels, unavailable_ids)``; the last list is
    the mandatory-review bucket.
    """
    ids, devs, labs, review = [], [], [], []
    for p in sorted(pairs, key=lambda p: p.id):
        try:
            devs.append(deviation(p, feature).d)
        except FeatureUnavailable:
            review.append(p.id)
            continue
        ids.append(p.id)
        labs.append(p.human_label)
    return ids, devs, labs, review


# -- band profiles ----------------------------------------------------------

def _edge_to_json(v: float):
    return None if math.isinf(v) else float(v)


def _edge_from_json(v, sign: int) -> float:
    return sign * UNBOUNDED if v is None else float(v)


def fit_to_dict(fit: BandFit) -> dict:
    return {
        "t_neg": _edge_to_json(fit.band.t_neg),
        "t_pos": _edge_to_json(fit.band.t_pos),
        "accuracy": fit.training_accuracy,
        "n_train": fit.n_train,
        "warnings": list(fit.warnings),
    }


def band_from_dict(feature: str, d: dict) -> ThresholdBand:
    return ThresholdBand(feature, _edge_from_json(d.get("t_neg"), -1),
                         _edge_from_json(d.get("t_pos"), +1))
