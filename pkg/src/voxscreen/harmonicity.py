"""Harmonics-to-noise ratio by forward cross-correlation.

For every voiced frame a window of ``hnr_periods_per_window / pitch_floor``
seconds is correlated with a copy of itself one pitch period later. The
normalized correlation ``r`` is maximized at sub-sample resolution with
band-limited (windowed sinc) interpolation, since integer lags alone
understate ``r`` by several dB for high-pitched or bright voices.
"""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.optimize import minimize_scalar

from .audio import AudioClip
from .config import AnalysisConfig
from .errors import ClipTooShort, NoVoicedFrames
from .pitch import PitchTrack, track_pitch

HNR_MIN_DB = -10.0
HNR_MAX_DB = 60.0
SINC_DEPTH = 24


def hnr_from_r(r: float) -> float:
    """Map a harmonicity ``r`` in (0, 1] to dB, clamped to [-10, 60]."""
    if r >= 1.0:
        return HNR_MAX_DB
    return float(np.clip(10.0 * np.log10(r / (1.0 - r)), HNR_MIN_DB, HNR_MAX_DB))


def sinc_interp(y: np.ndarray, pos: float, depth: int = SINC_DEPTH) -> float:
    """Band-limited value of the sequence ``y`` at fractional index ``pos``."""
    i0 = int(np.floor(pos))
    lo = max(0, i0 - depth + 1)
    hi = min(len(y), i0 + depth + 1)
    j = np.arange(lo, hi)
    u = pos - j
    taper = 0.5 + 0.5 * np.cos(np.pi * u / (depth + 1))
    return float(np.dot(y[lo:hi], np.sinc(u) * taper))


def _refined_peak(r: np.ndarray, i: int) -> float:
    if r[i] >= 1.0:
        return 1.0
    res = minimize_scalar(lambda p: -sinc_interp(r, p), bounds=(i - 1.0, i + 1.0),
                          method="bounded", options={"xatol": 1e-4})
    return max(float(r[i]), -float(res.fun))


def frame_harmonicity(x: np.ndarray, center: int, period: float, width: int) -> float | None:
    """Peak normalized cross-correlation near lag ``period`` (samples).

    Returns ``None`` when the window does not fit inside ``x`` or when the
    correlation carries no periodicity (zero energy, non-positive peak).
    """
    lag0 = int(round(period))
    search = max(2, int(np.ceil(0.05 * period)))
    lag_min = max(1, lag0 - search - SINC_DEPTH)
    lag_max = lag0 + search + SINC_DEPTH
    start = int(round(center - (width + lag0) / 2))
    if start < 0 or start + lag_max + width > len(x):
        return None
    a = x[start: start + width]
    span = x[start + lag_min: start + lag_max + width]
    shifted = sliding_window_view(span, width)
    num = shifted @ a
    energy_a = float(a @ a)
    energy_b = np.einsum("ij,ij->i", shifted, shifted)
    denom = np.sqrt(energy_a * energy_b)
    if energy_a <= 0 or np.any(denom <= 0):
        return None
    r = num / denom
    lo = lag0 - search - lag_min
    hi = lag0 + search - lag_min
    i = lo + int(np.argmax(r[lo: hi + 1]))
    if r[i] <= 0:
        return None
    return min(1.0, _refined_peak(r, i))


def frame_hnr(clip: AudioClip, track: PitchTrack, cfg: AnalysisConfig) -> np.ndarray:
    """HNR in dB for each voiced frame of ``track``; NaN where undefined."""
    sr = clip.sample_rate_hz
    width = int(round(cfg.hnr_window_s * sr))
    x = clip.samples
    out = np.full(len(track), np.nan)
    for k in np.nonzero(track.voiced)[0]:
        r = frame_harmonicity(x, int(round(track.times_s[k] * sr)), sr / track.f0_hz[k], width)
        if r is not None:
            out[k] = hnr_from_r(r)
    return out


def mean_hnr(clip: AudioClip, cfg: AnalysisConfig | None = None,
             track: PitchTrack | None = None) -> float:
    """Unweighted mean frame HNR (dB) over voiced frames with defined periodicity."""
    cfg = cfg or AnalysisConfig()
    if clip.duration_s < cfg.hnr_window_s:
        raise ClipTooShort("clip is shorter than one harmonicity window")
    if track is None:
        track = track_pitch(clip, cfg)
    values = frame_hnr(clip, track, cfg)
    values = values[np.isfinite(values)]
    if values.size == 0:
        raise NoVoicedFrames("no voiced frame with defined periodicity")
    return float(np.mean(values))
