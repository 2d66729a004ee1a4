"""Audio decoding, framing and resampling.

Everything downstream works on :class:`AudioClip`, a mono float64 waveform
normalized to [-1, 1] regardless of the bit depth it was stored with.
"""
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal
from scipy.io import wavfile

from .errors import EmptyAudio, FrameTooLong, NonPositiveParam, UnsupportedFormat

WINDOW_KINDS = ("rectangular", "hanning", "gaussian")


@dataclass(frozen=True, eq=False)
class AudioClip:
    """Immutable mono waveform.

    Parameters
    ----------
    samples : array_like
        Amplitudes in [-1, 1]. Copied into a read-only float64 array.
    sample_rate_hz : int
        Samples per second.
    """

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        x = np.array(self.samples, dtype=np.float64).reshape(-1)
        if x.size == 0:
            raise EmptyAudio("clip has no samples")
        if not np.all(np.isfinite(x)):
            raise ValueError("samples must be finite")
        if np.max(np.abs(x)) > 1.0:
            raise ValueError("samples must lie within [-1, 1]")
        if int(self.sample_rate_hz) != self.sample_rate_hz or self.sample_rate_hz <= 0:
            raise NonPositiveParam("sample_rate_hz must be a positive integer")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz

    def __len__(self):
        return len(self.samples)

    def __eq__(self, other):
        if not isinstance(other, AudioClip):
            return NotImplemented
        return (self.sample_rate_hz == other.sample_rate_hz
                and np.array_equal(self.samples, other.samples))

    __hash__ = None


@dataclass(frozen=True)
class FrameSequence:
    frames: np.ndarray  # shape (n_frames, frame_length_samples)
    frame_length_samples: int
    hop_samples: int
    window_kind: str

    def __len__(self):
        return self.frames.shape[0]


def _to_float(data: np.ndarray) -> np.ndarray:
    kind = data.dtype
    if kind == np.uint8:
        return (data.astype(np.float64) - 128.0) / 128.0
    if kind == np.int16:
        return data.astype(np.float64) / 32768.0
    if kind == np.int32:
        # scipy left-justifies 24-bit data into int32, so one divisor covers both
        return data.astype(np.float64) / 2147483648.0
    if kind in (np.float32, np.float64):
        return np.clip(data.astype(np.float64), -1.0, 1.0)
    raise UnsupportedFormat(f"unsupported sample type {kind}")


def decode_wav(path) -> AudioClip:
    """Read a PCM WAV file into a mono :class:`AudioClip`.

    Integer samples are divided by the full-scale value of their type
    (e.g. 32768 for 16-bit) and channels are averaged with equal weight.
    """
    path = os.fspath(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except ValueError as exc:
        raise UnsupportedFormat(f"{path}: {exc}") from exc
    if data.size == 0:
        raise EmptyAudio(path)
    x = _to_float(data)
    if x.ndim == 2:
        x = x.mean(axis=1)
    return AudioClip(x, int(rate))


def encode_wav(clip: AudioClip, path) -> None:
    """Write ``clip`` as 16-bit mono PCM (inverse of :func:`decode_wav`)."""
    q = np.round(clip.samples * 32768.0)
    q = np.clip(q, -32768, 32767).astype(np.int16)
    wavfile.write(os.fspath(path), clip.sample_rate_hz, q)


def make_window(kind: str, n: int) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(n)
    if kind == "hanning":
        return np.hanning(n)
    if kind == "gaussian":
        # edges at exp(-12), as in common phonetic analysis defaults
        t = (np.arange(n) - (n - 1) / 2) / ((n - 1) / 2 if n > 1 else 1.0)
        edge = np.exp(-12.0)
        return (np.exp(-12.0 * t * t) - edge) / (1.0 - edge)
    raise ValueError(f"unknown window kind {kind!r}; expected one of {WINDOW_KINDS}")


def frame_indices(n_samples: int, frame_length: int, hop: int) -> np.ndarray:
    """Start index of every complete frame."""
    if frame_length > n_samples:
        return np.zeros(0, dtype=int)
    n_frames = (n_samples - frame_length) // hop + 1
    return np.arange(n_frames) * hop


def frame_signal(clip: AudioClip, frame_length_s: float, hop_s: float,
                 window: str = "rectangular") -> FrameSequence:
    """Cut ``clip`` into windowed frames; a partial trailing frame is dropped."""
    if frame_length_s <= 0 or hop_s <= 0:
        raise NonPositiveParam("frame length and hop must be positive")
    sr = clip.sample_rate_hz
    n = int(round(frame_length_s * sr))
    hop = int(round(hop_s * sr))
    if n < 1 or hop < 1:
        raise NonPositiveParam("frame length and hop must span at least one sample")
    if n > len(clip):
        raise FrameTooLong(f"frame of {n} samples exceeds clip of {len(clip)}")
    starts = frame_indices(len(clip), n, hop)
    frames = clip.samples[starts[:, None] + np.arange(n)[None, :]] * make_window(window, n)
    return FrameSequence(frames, n, hop, window)


def resample(clip: AudioClip, target_rate_hz: int) -> AudioClip:
    """Band-limited polyphase resampling to ``target_rate_hz``."""
    if target_rate_hz <= 0:
        raise NonPositiveParam("target_rate_hz must be positive")
    target_rate_hz = int(target_rate_hz)
    if target_rate_hz == clip.sample_rate_hz:
        return clip
    ratio = Fraction(target_rate_hz, clip.sample_rate_hz)
    y = signal.resample_poly(clip.samples, ratio.numerator, ratio.denominator)
    return AudioClip(np.clip(y, -1.0, 1.0), target_rate_hz)
