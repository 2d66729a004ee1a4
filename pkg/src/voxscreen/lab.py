"""Synthetic voices and controlled degradations with known ground truth.

Signals are built additively from band-limited harmonics so their period is
exact even when it is not an integer number of samples. Degradations model
the two failure families we care about: source mismatch (pitch shift) and
loss of harmonic clarity (noise, smearing, dropouts).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import signal

from .audio import AudioClip
from .errors import InvalidSpec

SIGNAL_KINDS = ("harmonic_complex", "sawtooth", "vowel", "noise", "silence")
DEGRADATION_KINDS = ("pitch_shift", "add_noise", "voicing_dropout", "harmonic_smear", "none")
NEUTRAL_FORMANTS = (500.0, 1500.0, 2500.0, 3500.0)


@dataclass(frozen=True)
class SignalSpec:
    kind: str
    f0_hz: float = 200.0
    duration_s: float = 1.0
    sample_rate_hz: int = 44100
    amplitude: float = 0.5
    n_harmonics: int = 10
    formants_hz: tuple = NEUTRAL_FORMANTS
    bandwidths_hz: tuple | None = None
    seed: int = 0

    def validate(self):
        if self.kind not in SIGNAL_KINDS:
            raise InvalidSpec(f"unknown signal kind {self.kind!r}")
        if self.duration_s <= 0 or self.sample_rate_hz <= 0:
            raise InvalidSpec("duration and sample rate must be positive")
        if not 0 <= self.amplitude <= 1:
            raise InvalidSpec("amplitude must lie in [0, 1]")
        nyquist = self.sample_rate_hz / 2
        if self.kind in ("harmonic_complex", "sawtooth", "vowel"):
            if not 0 < self.f0_hz < nyquist:
                raise InvalidSpec("f0 must lie in (0, sample_rate/2)")
        if self.kind == "harmonic_complex" and self.n_harmonics < 1:
            raise InvalidSpec("n_harmonics must be >= 1")
        if self.kind == "vowel":
            if not self.formants_hz or any(not 0 < f < nyquist for f in self.formants_hz):
                raise InvalidSpec("formants must lie in (0, sample_rate/2)")
            if self.bandwidths_hz is not None and len(self.bandwidths_hz) != len(self.formants_hz):
                raise InvalidSpec("one bandwidth per formant")


@dataclass(frozen=True)
class DegradationSpec:
    kind: str = "none"
    factor: float = 1.0
    snr_db: float = 20.0
    fraction: float = 0.0
    bandwidth_hz: float = 200.0
    seed: int = 0

    def validate(self):
        if self.kind not in DEGRADATION_KINDS:
            raise InvalidSpec(f"unknown degradation kind {self.kind!r}")
        if self.factor <= 0:
            raise InvalidSpec("pitch-shift factor must be positive")
        if not 0 <= self.fraction <= 1:
            raise InvalidSpec("dropout fraction must lie in [0, 1]")
        if self.bandwidth_hz <= 0:
            raise InvalidSpec("smear bandwidth must be positive")


def _additive(freqs, amps, phases, t):
    out = np.zeros_like(t)
    for f, a, p in zip(freqs, amps, phases):
        out += a * np.sin(2 * np.pi * f * t + p)
    return out


def glottal_harmonics(n: int, open_quotient: float = 0.6, speed_quotient: float = 2.0):
    """Amplitudes and phases of the first ``n`` harmonics of a Rosenberg
    glottal-flow derivative (flow pulse followed by lip radiation)."""
    m = 4096
    phase = np.arange(m) / m
    t_open = open_quotient * speed_quotient / (1 + speed_quotient)
    t_close = open_quotient / (1 + speed_quotient)
    flow = np.zeros(m)
    rising = phase < t_open
    flow[rising] = 0.5 * (1 - np.cos(np.pi * phase[rising] / t_open))
    falling = (phase >= t_open) & (phase < t_open + t_close)
    flow[falling] = np.cos(0.5 * np.pi * (phase[falling] - t_open) / t_close)
    deriv = np.diff(flow, append=flow[0]) * m
    spec = np.fft.rfft(deriv) / m
    k = np.arange(1, n + 1)
    coeffs = spec[np.minimum(k, len(spec) - 1)]
    return 2 * np.abs(coeffs), np.angle(coeffs) + np.pi / 2


def resonator_cascade(x, formants, bandwidths, sr):
    """Pass ``x`` through unity-DC-gain two-pole resonators in series."""
    y = x
    for f, bw in zip(formants, bandwidths):
        r = np.exp(-np.pi * bw / sr)
        a = [1.0, -2 * r * np.cos(2 * np.pi * f / sr), r * r]
        y = signal.lfilter([sum(a)], a, y)
    return y


def _normalize(x, amplitude):
    peak = np.max(np.abs(x))
    return x if peak == 0 else x * (amplitude / peak)


def synthesize(spec: SignalSpec) -> AudioClip:
    """Render ``spec`` deterministically into an :class:`AudioClip`."""
    spec.validate()
    sr = spec.sample_rate_hz
    n = int(round(spec.duration_s * sr))
    t = np.arange(n) / sr
    if spec.kind == "silence":
        return AudioClip(np.zeros(n), sr)
    if spec.kind == "noise":
        x = np.random.default_rng(spec.seed).standard_normal(n)
        return AudioClip(_normalize(x, spec.amplitude), sr)
    n_max = int(np.floor((sr / 2 - 1e-9) / spec.f0_hz))
    if spec.kind == "harmonic_complex":
        k = np.arange(1, min(spec.n_harmonics, n_max) + 1)
        x = _additive(k * spec.f0_hz, np.ones(len(k)), np.zeros(len(k)), t)
    elif spec.kind == "sawtooth":
        k = np.arange(1, n_max + 1)
        x = _additive(k * spec.f0_hz, 1.0 / k, np.zeros(len(k)), t)
    else:
        amps, phases = glottal_harmonics(n_max)
        k = np.arange(1, n_max + 1)
        source = _additive(k * spec.f0_hz, amps, phases, t)
        bws = spec.bandwidths_hz or tuple(50.0 + 0.02 * f for f in spec.formants_hz)
        # whole periods of lead-in let the resonators reach steady state before t = 0
        lead = int(round(np.ceil(0.1 * spec.f0_hz) / spec.f0_hz * sr))
        t_lead = (np.arange(-lead, 0)) / sr
        full = np.concatenate([_additive(k * spec.f0_hz, amps, phases, t_lead), source])
        x = resonator_cascade(full, spec.formants_hz, bws, sr)[lead:]
    return AudioClip(_normalize(x, spec.amplitude), sr)


def _rms(x):
    return float(np.sqrt(np.mean(np.square(x))))


def _fit(x):
    peak = np.max(np.abs(x))
    return x / peak * 0.99 if peak > 1 else x


def pitch_shift(clip: AudioClip, factor: float) -> AudioClip:
    """Scale periodicity by ``factor`` by resampling and relabelling the rate.

    Formants move by the same factor and the duration shrinks by ``1/factor``.
    """
    if factor == 1:
        return clip
    ratio = Fraction(1 / factor).limit_denominator(1000)
    y = signal.resample_poly(clip.samples, ratio.numerator, ratio.denominator)
    return AudioClip(_fit(y), clip.sample_rate_hz)


def add_noise(clip: AudioClip, snr_db: float, seed: int = 0) -> AudioClip:
    """Mix in white Gaussian noise at ``snr_db`` relative to the clip RMS."""
    x = clip.samples
    noise = np.random.default_rng(seed).standard_normal(len(x))
    noise *= _rms(x) / _rms(noise) / 10 ** (snr_db / 20)
    return AudioClip(_fit(x + noise), clip.sample_rate_hz)


def voicing_dropout(clip: AudioClip, fraction: float, seed: int = 0,
                    block_s: float = 0.02) -> AudioClip:
    """Zero each ``block_s`` block independently with probability ``fraction``."""
    x = np.array(clip.samples)
    block = max(1, int(round(block_s * clip.sample_rate_hz)))
    n_blocks = -(-len(x) // block)
    drop = np.random.default_rng(seed).random(n_blocks) < fraction
    for b in np.nonzero(drop)[0]:
        x[b * block:(b + 1) * block] = 0.0
    return AudioClip(x, clip.sample_rate_hz)


def harmonic_smear(clip: AudioClip, bandwidth_hz: float, seed: int = 0,
                   block_s: float = 0.02) -> AudioClip:
    """Blur fine spectral structure with time-varying noise-burst convolution.

    Each 50 %-overlapping Hann block is convolved with its own exponentially
    decaying noise burst of time constant ``1/(pi*bandwidth_hz)``. A fixed
    filter would leave the waveform periodic; drawing a fresh burst per
    block is what destroys the harmonic contrast.
    """
    sr = clip.sample_rate_hz
    x = clip.samples
    rng = np.random.default_rng(seed)
    tau = 1.0 / (np.pi * bandwidth_hz)
    burst_len = max(2, int(round(5 * tau * sr)))
    decay = np.exp(-np.arange(burst_len) / (tau * sr))
    block = max(4, int(round(block_s * sr)))
    hop = block // 2
    win = np.hanning(block + 1)[:-1]
    y = np.zeros(len(x) + block + burst_len)
    for start in range(-hop, len(x), hop):
        lo, hi = max(start, 0), min(start + block, len(x))
        if hi <= lo:
            continue
        seg = x[lo:hi] * win[lo - start: hi - start]
        burst = rng.standard_normal(burst_len) * decay
        burst /= np.sqrt(np.sum(burst ** 2))
        conv = np.convolve(seg, burst)
        y[lo: lo + len(conv)] += conv
    y = y[: len(x)]
    if _rms(y) > 0:
        y *= _rms(x) / _rms(y)
    return AudioClip(_fit(y), sr)


def degrade(clip: AudioClip, spec: DegradationSpec) -> AudioClip:
    spec.validate()
    if spec.kind == "none":
        return clip
    if spec.kind == "pitch_shift":
        return pitch_shift(clip, spec.factor)
    if spec.kind == "add_noise":
        return add_noise(clip, spec.snr_db, spec.seed)
    if spec.kind == "voicing_dropout":
        return voicing_dropout(clip, spec.fraction, spec.seed)
    return harmonic_smear(clip, spec.bandwidth_hz, spec.seed)


# -- labelled corpora -------------------------------------------------------

RECIPES = ("pitch_shift", "noise", "mixed")


@dataclass(frozen=True)
class CorpusItem:
    """One labelled source/output pair with its generating parameters."""

    id: str
    label: str
    source: AudioClip
    output: AudioClip
    source_spec: SignalSpec
    degradations: tuple = field(default_factory=tuple)
    vocoder_tag: str = "synthetic"


def _source_spec(rng, sample_rate_hz, duration_s, idx):
    scale = rng.uniform(0.9, 1.1)
    return SignalSpec(
        kind="vowel",
        f0_hz=float(np.round(rng.uniform(100.0, 200.0), 2)),
        duration_s=duration_s,
        sample_rate_hz=sample_rate_hz,
        amplitude=0.5,
        formants_hz=tuple(float(np.round(f * scale, 1)) for f in NEUTRAL_FORMANTS),
        seed=idx,
    )


def build_corpus(n_good: int, n_bad: int, recipe: str = "mixed", seed: int = 0,
                 sample_rate_hz: int = 16000, duration_s: float = 0.6,
                 vocoder_tag: str = "synthetic") -> list[CorpusItem]:
    """Labelled pairs whose Good/Bad status is fixed by construction.

    Every source is a vowel recorded at a random SNR of 18-28 dB. Good
    outputs get a pitch wobble within +-2 % and an SNR within +-1 dB of the
    source. Bad outputs get either a pitch shift of x1.4-1.8 (``pitch_shift``)
    or an SNR 12-18 dB below the source (``noise``); ``mixed`` alternates.
    """
    if n_good < 0 or n_bad < 0:
        raise InvalidSpec("counts must be non-negative")
    if recipe not in RECIPES:
        raise InvalidSpec(f"unknown recipe {recipe!r}; expected one of {RECIPES}")
    rng = np.random.default_rng(seed)
    items = []
    labels = ["good"] * n_good + ["bad"] * n_bad
    for idx, label in enumerate(labels):
        spec = _source_spec(rng, sample_rate_hz, duration_s, idx)
        clean = synthesize(spec)
        src_snr = float(rng.uniform(18.0, 28.0))
        seeds = rng.integers(0, 2 ** 31, size=2)
        source = add_noise(clean, src_snr, int(seeds[0]))
        if label == "good":
            shift = DegradationSpec("pitch_shift", factor=float(rng.uniform(0.98, 1.02)))
            noise = DegradationSpec("add_noise", snr_db=src_snr + float(rng.uniform(-1, 1)),
                                    seed=int(seeds[1]))
        else:
            mode = recipe if recipe != "mixed" else ("pitch_shift", "noise")[(idx - n_good) % 2]
            if mode == "pitch_shift":
                shift = DegradationSpec("pitch_shift", factor=float(rng.uniform(1.4, 1.8)))
                noise = DegradationSpec("add_noise", snr_db=src_snr + float(rng.uniform(-1, 1)),
                                        seed=int(seeds[1]))
            else:
                shift = DegradationSpec("pitch_shift", factor=float(rng.uniform(0.98, 1.02)))
                noise = DegradationSpec("add_noise", snr_db=src_snr - float(rng.uniform(12, 18)),
                                        seed=int(seeds[1]))
        output = degrade(degrade(clean, shift), noise)
        items.append(CorpusItem(
            id=f"{vocoder_tag}-{idx:04d}", label=label, source=source, output=output,
            source_spec=spec, degradations=(shift, noise), vocoder_tag=vocoder_tag))
    return items
