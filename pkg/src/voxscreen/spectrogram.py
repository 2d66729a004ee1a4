"""Magnitude STFT for visual inspection of failure cases."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .audio import AudioClip, frame_signal

FLOOR_DB = -100.0


@dataclass(frozen=True, eq=False)
class Spectrogram:
    times_s: np.ndarray
    freqs_hz: np.ndarray
    magnitude_db: np.ndarray  # shape (len(times_s), len(freqs_hz))

    def to_csv(self, path) -> None:
        """Write a grid with frequencies as columns and one row per frame."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time_s"] + [f"{f:.3f}" for f in self.freqs_hz])
            for t, row in zip(self.times_s, self.magnitude_db):
                w.writerow([f"{t:.6f}"] + [f"{v:.2f}" for v in row])


def spectrogram(clip: AudioClip, frame_length_s: float = 0.025,
                hop_s: float = 0.005) -> Spectrogram:
    """Hann-windowed STFT magnitude in dB re. a full-scale sine, floored at -100 dB."""
    fs = frame_signal(clip, frame_length_s, hop_s, "hanning")
    n = fs.frame_length_samples
    mag = np.abs(np.fft.rfft(fs.frames, axis=1))
    mag /= np.hanning(n).sum() / 2
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(mag)
    db = np.maximum(db, FLOOR_DB)
    sr = clip.sample_rate_hz
    times = (np.arange(len(fs)) * fs.hop_samples + n / 2) / sr
    return Spectrogram(times, np.fft.rfftfreq(n, 1 / sr), db)
