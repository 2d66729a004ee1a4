"""Per-utterance acoustic descriptors: median f0, mean HNR and VTL."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .audio import AudioClip
from .config import AnalysisConfig
from .errors import ClipTooShort, FormantEstimationFailed, NoVoicedFrames, VoxScreenError
from .formants import estimate_vtl
from .harmonicity import mean_hnr
from .pitch import median_f0, track_pitch

FEATURE_KINDS = ("f0", "hnr", "vtl")
FEATURE_UNITS = {"f0": "Hz", "hnr": "dB", "vtl": "cm"}


@dataclass(frozen=True)
class AcousticFeatures:
    """Feature triple for one utterance.

    A feature that could not be computed is ``None`` and its error class
    name is recorded in ``errors`` (e.g. ``{"hnr": "NoVoicedFrames"}``).
    """

    median_f0_hz: float | None
    mean_hnr_db: float | None
    vtl_cm: float | None
    voiced_frame_count: int
    total_frame_count: int
    errors: dict = field(default_factory=dict)
    vtl_range_cm: tuple = (5.0, 30.0)

    def value(self, kind: str) -> float | None:
        return {"f0": self.median_f0_hz, "hnr": self.mean_hnr_db, "vtl": self.vtl_cm}[kind]

    @property
    def vtl_in_range(self) -> bool | None:
        """False flags an implausible VTL; the value itself is never clamped."""
        if self.vtl_cm is None:
            return None
        lo, hi = self.vtl_range_cm
        return lo < self.vtl_cm < hi


def _guard(fn, errors, kind):
    try:
        value = fn()
    except (NoVoicedFrames, FormantEstimationFailed, ClipTooShort) as exc:
        errors[kind] = type(exc).__name__
        return None
    if not math.isfinite(value):
        errors[kind] = "NonFinite"
        return None
    return value


def extract_features(clip: AudioClip, cfg: AnalysisConfig | None = None) -> AcousticFeatures:
    """Compute all three features from one shared pitch track.

    The pitch track defines the voiced frames for every feature, so f0, HNR
    and VTL are averaged over the same part of the utterance.
    """
    cfg = cfg or AnalysisConfig()
    errors: dict[str, str] = {}
    try:
        track = track_pitch(clip, cfg)
    except ClipTooShort:
        errors = {k: "ClipTooShort" for k in FEATURE_KINDS}
        return AcousticFeatures(None, None, None, 0, 0, errors, cfg.vtl_plausible_cm)
    f0 = _guard(lambda: median_f0(track), errors, "f0")
    hnr = _guard(lambda: mean_hnr(clip, cfg, track), errors, "hnr")
    vtl = _guard(lambda: estimate_vtl(clip, cfg, track), errors, "vtl")
    return AcousticFeatures(f0, hnr, vtl, track.voiced_count, len(track), errors,
                            cfg.vtl_plausible_cm)


def require(features: AcousticFeatures, kind: str) -> float:
    """Value of ``kind`` or raise the error recorded during extraction."""
    v = features.value(kind)
    if v is None:
        name = features.errors.get(kind, "NoVoicedFrames")
        exc = {"NoVoicedFrames": NoVoicedFrames,
               "FormantEstimationFailed": FormantEstimationFailed,
               "ClipTooShort": ClipTooShort}.get(name, VoxScreenError)
        raise exc(f"{kind} unavailable: {name}")
    return v
