"""LPC formant estimation and uniform-tube vocal tract length.

A tube closed at the glottis and open at the lips resonates at
``F_i = (2i - 1) * c / (4 L)``, so consecutive formants are spaced by
``dF = c / (2 L)``. We fit ``dF`` to the lowest formants by least squares
and report ``L = c / (2 dF)``.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_toeplitz
from scipy.signal import lfilter

from .audio import AudioClip, resample
from .config import AnalysisConfig
from .errors import FormantEstimationFailed, NoVoicedFrames
from .pitch import PitchTrack, track_pitch


def lpc(x: np.ndarray, order: int) -> np.ndarray:
    """Autocorrelation-method LPC polynomial ``[1, a1, ..., a_order]``."""
    r = np.correlate(x, x, mode="full")[len(x) - 1: len(x) + order]
    if r[0] <= 0:
        raise FormantEstimationFailed("zero-energy frame")
    r = r.copy()
    r[0] *= 1.0 + 1e-9  # tiny white-noise correction keeps the system well posed
    a = solve_toeplitz(r[:-1], -r[1:])
    return np.concatenate([[1.0], a])


def formants_from_lpc(a: np.ndarray, sr: float, max_bandwidth_hz: float = 400.0,
                      min_freq_hz: float = 90.0) -> np.ndarray:
    """Sorted resonance frequencies of the LPC polynomial ``a``."""
    roots = np.roots(a)
    roots = roots[np.imag(roots) > 0]
    freqs = np.angle(roots) * sr / (2 * np.pi)
    bws = -np.log(np.abs(roots)) * sr / np.pi
    keep = (freqs > min_freq_hz) & (freqs < sr / 2 - 50.0) & (bws < max_bandwidth_hz)
    return np.sort(freqs[keep])


def formant_spacing(formants) -> float:
    """Least-squares ``dF`` in ``F_i ~ (2i - 1) dF / 2`` for i = 1..n."""
    f = np.asarray(formants, dtype=float)
    c = (2 * np.arange(1, len(f) + 1) - 1) / 2
    return float(f @ c / (c @ c))


def vtl_from_spacing(spacing_hz: float, speed_of_sound_cm_s: float = 35000.0) -> float:
    return speed_of_sound_cm_s / (2.0 * spacing_hz)


def frame_formants(clip: AudioClip, track: PitchTrack, cfg: AnalysisConfig) -> list[np.ndarray]:
    """Formants (up to ``cfg.formant_count``) for every voiced frame.

    Analysis runs on a pre-emphasized copy resampled to
    ``cfg.formant_rate_hz``. Frames whose window falls off the clip get an
    empty array.
    """
    low = resample(clip, cfg.formant_rate_hz)
    sr = low.sample_rate_hz
    alpha = np.exp(-2 * np.pi * cfg.preemphasis_from_hz / sr)
    x = lfilter([1.0, -alpha], [1.0], low.samples)
    n = int(round(cfg.formant_window_s * sr))
    window = np.hamming(n)
    out = []
    for k in np.nonzero(track.voiced)[0]:
        start = int(round(track.times_s[k] * sr)) - n // 2
        if start < 0 or start + n > len(x):
            out.append(np.zeros(0))
            continue
        frame = x[start: start + n] * window
        try:
            a = lpc(frame, cfg.lpc_order)
        except (FormantEstimationFailed, np.linalg.LinAlgError):
            out.append(np.zeros(0))
            continue
        f = formants_from_lpc(a, sr, cfg.max_formant_bandwidth_hz)
        out.append(f[: cfg.formant_count])
    return out


def estimate_vtl(clip: AudioClip, cfg: AnalysisConfig | None = None,
                 track: PitchTrack | None = None) -> float:
    """Median per-frame vocal tract length in centimetres."""
    cfg = cfg or AnalysisConfig()
    if track is None:
        track = track_pitch(clip, cfg)
    if track.voiced_count == 0:
        raise NoVoicedFrames("no voiced frames for formant analysis")
    lengths = [vtl_from_spacing(formant_spacing(f), cfg.speed_of_sound_cm_s)
               for f in frame_formants(clip, track, cfg) if len(f) >= 2]
    if not lengths:
        raise FormantEstimationFailed("fewer than two stable formants in every voiced frame")
    return float(np.median(lengths))
