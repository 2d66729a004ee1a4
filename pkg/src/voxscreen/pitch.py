"""Autocorrelation pitch tracking with path smoothing.

Each frame is Hann-windowed and its autocorrelation divided by the
autocorrelation of the window itself, which removes the taper bias at long
lags. Peaks in the allowed lag range become candidates; a Viterbi pass
through each voiced run picks the candidate path that trades local
strength against octave jumps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioClip, frame_indices
from .config import AnalysisConfig
from .errors import ClipTooShort, NoVoicedFrames

UNVOICED = 0.0


@dataclass(frozen=True, eq=False)
class PitchTrack:
    """Per-frame pitch. ``f0_hz`` holds ``UNVOICED`` (0 Hz) where no pitch was found."""

    times_s: np.ndarray
    f0_hz: np.ndarray
    voicing_strength: np.ndarray

    @property
    def voiced(self) -> np.ndarray:
        return self.f0_hz > UNVOICED

    @property
    def voiced_count(self) -> int:
        return int(np.count_nonzero(self.voiced))

    def __len__(self):
        return len(self.times_s)


def parabolic_peak(y: np.ndarray, i: int) -> tuple[float, float]:
    """Vertex of the parabola through ``y[i-1:i+2]`` as (offset position, value)."""
    if i <= 0 or i >= len(y) - 1:
        return float(i), float(y[i])
    a, b, c = y[i - 1], y[i], y[i + 1]
    denom = a - 2 * b + c
    if denom >= 0:
        return float(i), float(b)
    delta = 0.5 * (a - c) / denom
    return i + delta, float(b - 0.25 * (a - c) * delta)


def _nfft(n: int) -> int:
    return 1 << int(np.ceil(np.log2(2 * n)))


def _autocorr(x: np.ndarray, nfft: int, max_lag: int) -> np.ndarray:
    spec = np.fft.rfft(x, nfft)
    return np.fft.irfft(spec.real ** 2 + spec.imag ** 2, nfft)[: max_lag + 1]


def _frame_candidates(frame, window, window_ac, nfft, lag_lo, lag_hi, sr, cfg):
    """Candidate (frequency, strength, correlation) triples for one frame."""
    x = (frame - frame.mean()) * window
    ac = _autocorr(x, nfft, lag_hi + 1)
    if ac[0] <= 0:
        return []
    r = (ac / ac[0]) / window_ac
    seg = r[lag_lo - 1: lag_hi + 2]
    # local maxima strictly inside the lag range
    inner = np.nonzero((seg[1:-1] > seg[:-2]) & (seg[1:-1] >= seg[2:]) & (seg[1:-1] > 0))[0] + 1
    out = []
    for i in inner:
        pos, val = parabolic_peak(seg, int(i))
        lag = lag_lo - 1 + pos
        f = sr / lag
        if not cfg.pitch_floor_hz <= f <= cfg.pitch_ceiling_hz:
            continue
        val = min(val, 1.0)
        strength = val + cfg.octave_cost * np.log2(f / cfg.pitch_floor_hz)
        out.append((f, strength, val))
    out.sort(key=lambda c: -c[1])
    return out[: cfg.max_candidates]


def _viterbi(cands: list[list[tuple]], jump_cost: float) -> list[int]:
    """Best candidate index per frame within one contiguous voiced run."""
    score = np.array([c[1] for c in cands[0]])
    back = []
    for prev, cur in zip(cands[:-1], cands[1:]):
        fp = np.array([c[0] for c in prev])
        fc = np.array([c[0] for c in cur])
        trans = jump_cost * np.abs(np.log2(fc[:, None] / fp[None, :]))
        total = score[None, :] - trans
        idx = np.argmax(total, axis=1)
        back.append(idx)
        score = total[np.arange(len(fc)), idx] + np.array([c[1] for c in cur])
    path = [int(np.argmax(score))]
    for idx in reversed(back):
        path.append(int(idx[path[-1]]))
    return path[::-1]


def track_pitch(clip: AudioClip, cfg: AnalysisConfig | None = None) -> PitchTrack:
    """Estimate f0 every ``cfg.frame_hop_s`` seconds.

    A frame is voiced when its best normalized autocorrelation peak reaches
    ``cfg.voicing_threshold`` and its RMS is at least
    ``cfg.silence_threshold`` times the loudest frame's RMS.
    """
    cfg = cfg or AnalysisConfig()
    sr = clip.sample_rate_hz
    nw = int(round(cfg.pitch_window_s * sr))
    hop = max(1, int(round(cfg.frame_hop_s * sr)))
    if len(clip) < nw:
        raise ClipTooShort(
            f"clip of {clip.duration_s:.3f} s is shorter than the {cfg.pitch_window_s:.3f} s pitch window")
    lag_lo = max(2, int(np.floor(sr / cfg.pitch_ceiling_hz)))
    lag_hi = int(np.ceil(sr / cfg.pitch_floor_hz))
    nfft = _nfft(nw)
    window = np.hanning(nw + 2)[1:-1]
    window_ac = _autocorr(window, nfft, lag_hi + 1)
    window_ac = window_ac / window_ac[0]

    starts = frame_indices(len(clip), nw, hop)
    x = clip.samples
    frames = x[starts[:, None] + np.arange(nw)[None, :]]
    centered = frames - frames.mean(axis=1, keepdims=True)
    rms = np.sqrt(np.mean(centered ** 2, axis=1))
    peak_rms = rms.max()
    times = (starts + nw / 2) / sr

    n = len(starts)
    f0 = np.zeros(n)
    strength = np.zeros(n)
    cands: list[list[tuple]] = [[] for _ in range(n)]
    if peak_rms > 0:
        for k in range(n):
            if rms[k] < cfg.silence_threshold * peak_rms or rms[k] == 0:
                continue
            c = _frame_candidates(frames[k], window, window_ac, nfft, lag_lo, lag_hi, sr, cfg)
            if not c:
                continue
            best_r = max(v[2] for v in c)
            strength[k] = best_r
            if best_r >= cfg.voicing_threshold:
                cands[k] = [v for v in c if v[2] >= cfg.voicing_threshold]

    k = 0
    while k < n:
        if not cands[k]:
            k += 1
            continue
        end = k
        while end < n and cands[end]:
            end += 1
        run = cands[k:end]
        for j, ci in enumerate(_viterbi(run, cfg.octave_jump_cost)):
            f0[k + j] = run[j][ci][0]
        k = end

    return PitchTrack(times, f0, np.clip(strength, 0.0, 1.0))


def median_f0(track: PitchTrack) -> float:
    """Median f0 over voiced frames only (0 Hz frames are ignored)."""
    voiced = np.asarray(track.f0_hz)[np.asarray(track.f0_hz) > UNVOICED]
    if voiced.size == 0:
        raise NoVoicedFrames("no voiced frames in pitch track")
    return float(np.median(voiced))
