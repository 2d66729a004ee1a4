import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from voxscreen.errors import InvalidSpec, NoVoicedFrames
from voxscreen.harmonicity import mean_hnr
from voxscreen.lab import (DegradationSpec, SignalSpec, add_noise, build_corpus, degrade,
                           harmonic_smear, synthesize, voicing_dropout)
from voxscreen.pitch import median_f0, track_pitch

from oracles import corpus_accuracies


@pytest.fixture(scope="module")
def complex_clip():
    return synthesize(SignalSpec("harmonic_complex", f0_hz=200, duration_s=1.0))


def test_synthesize_lengths_and_amplitude():
    clip = synthesize(SignalSpec("sawtooth", f0_hz=220, duration_s=0.5, sample_rate_hz=16000))
    assert len(clip.samples) == 8000
    assert np.max(np.abs(clip.samples)) == pytest.approx(0.5)
    assert not synthesize(SignalSpec("silence", duration_s=0.1)).samples.any()


def test_synthesize_deterministic():
    a = synthesize(SignalSpec("noise", seed=4, duration_s=0.2))
    b = synthesize(SignalSpec("noise", seed=4, duration_s=0.2))
    c = synthesize(SignalSpec("noise", seed=5, duration_s=0.2))
    assert a == b and a != c


@pytest.mark.parametrize("spec", [
    SignalSpec("chirp"),
    SignalSpec("sawtooth", f0_hz=30000),
    SignalSpec("harmonic_complex", n_harmonics=0),
    SignalSpec("vowel", formants_hz=(500.0, 30000.0)),
    SignalSpec("noise", duration_s=0),
    SignalSpec("noise", amplitude=1.5),
])
def test_invalid_signal_specs(spec):
    with pytest.raises(InvalidSpec):
        synthesize(spec)


@pytest.mark.parametrize("spec", [
    DegradationSpec("reverb"),
    DegradationSpec("pitch_shift", factor=0),
    DegradationSpec("voicing_dropout", fraction=1.5),
    DegradationSpec("harmonic_smear", bandwidth_hz=-1),
])
def test_invalid_degradation_specs(spec, complex_clip):
    with pytest.raises(InvalidSpec):
        degrade(complex_clip, spec)


def test_degrade_none_is_identity(complex_clip):
    assert degrade(complex_clip, DegradationSpec("none")) == complex_clip


def test_pitch_shift_moves_f0(complex_clip):
    shifted = degrade(complex_clip, DegradationSpec("pitch_shift", factor=1.5))
    assert median_f0(track_pitch(shifted)) == pytest.approx(300, abs=3)
    assert shifted.duration_s == pytest.approx(1 / 1.5, abs=1e-3)


def test_noise_lowers_hnr(complex_clip):
    clean = mean_hnr(complex_clip)
    noisy = mean_hnr(degrade(complex_clip, DegradationSpec("add_noise", snr_db=0.0)))
    assert clean - noisy >= 8


def test_add_noise_exact_snr(complex_clip):
    noisy = add_noise(complex_clip, 10.0, seed=2)
    noise = noisy.samples - complex_clip.samples
    snr = 20 * np.log10(np.sqrt(np.mean(complex_clip.samples ** 2)) / np.sqrt(np.mean(noise ** 2)))
    assert snr == pytest.approx(10.0, abs=1e-9)


def test_dropout_extremes(complex_clip):
    assert voicing_dropout(complex_clip, 0.0) == complex_clip
    assert not voicing_dropout(complex_clip, 1.0).samples.any()
    with pytest.raises(NoVoicedFrames):
        median_f0(track_pitch(voicing_dropout(complex_clip, 1.0)))


def test_dropout_reduces_voiced_frames(complex_clip):
    full = track_pitch(complex_clip).voiced_count
    half = track_pitch(voicing_dropout(complex_clip, 0.5, seed=1)).voiced_count
    assert half < full


def test_smear_lowers_hnr_keeps_rms(complex_clip):
    smeared = harmonic_smear(complex_clip, 200.0, seed=1)
    assert mean_hnr(smeared) < mean_hnr(complex_clip) - 10
    rms = lambda x: np.sqrt(np.mean(x ** 2))
    assert rms(smeared.samples) == pytest.approx(rms(complex_clip.samples), rel=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(-10, 30))
def test_add_noise_deterministic(seed, snr):
    clip = synthesize(SignalSpec("harmonic_complex", duration_s=0.05, sample_rate_hz=8000))
    assert add_noise(clip, snr, seed) == add_noise(clip, snr, seed)


def test_corpus_structure():
    items = build_corpus(3, 4, "mixed", seed=1)
    assert [it.label for it in items] == ["good"] * 3 + ["bad"] * 4
    assert [it.id for it in items] == [f"synthetic-{i:04d}" for i in range(7)]
    bad_kinds = [it.degradations[0].factor > 1.3 for it in items[3:]]
    assert bad_kinds == [True, False, True, False]
    assert build_corpus(0, 0) == []
    with pytest.raises(InvalidSpec):
        build_corpus(1, 1, "reverb")


def test_corpus_deterministic():
    a = build_corpus(2, 2, "noise", seed=3)
    b = build_corpus(2, 2, "noise", seed=3)
    assert all(x.source == y.source and x.output == y.output for x, y in zip(a, b))


def test_small_pitch_corpus_separable_by_f0():
    acc = corpus_accuracies(build_corpus(6, 6, "pitch_shift", seed=2))
    assert acc["f0"] == 1.0
