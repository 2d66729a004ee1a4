import numpy as np
import pytest

from voxscreen.errors import NoVoicedFrames
from voxscreen.formants import estimate_vtl, formant_spacing, formants_from_lpc, lpc, vtl_from_spacing
from voxscreen.lab import SignalSpec, resonator_cascade, synthesize

NEUTRAL = (500.0, 1500.0, 2500.0, 3500.0)


def _vowel(formants, f0=120.0, sr=44100):
    return synthesize(SignalSpec("vowel", f0_hz=f0, formants_hz=tuple(formants), sample_rate_hz=sr))


def test_closed_form():
    assert formant_spacing(NEUTRAL) == pytest.approx(1000.0)
    assert vtl_from_spacing(1000.0) == pytest.approx(17.5)


@pytest.mark.parametrize("formants,expected", [
    (NEUTRAL, 17.5),
    ((583.0, 1750.0, 2917.0, 4083.0), 15.0),
])
def test_vowel_vtl(formants, expected):
    assert estimate_vtl(_vowel(formants)) == pytest.approx(expected, abs=0.5)


def test_unvoiced_clip(white_noise):
    with pytest.raises(NoVoicedFrames):
        estimate_vtl(white_noise)


@pytest.mark.parametrize("k", [0.85, 1.15])
def test_vtl_inverse_proportionality(k):
    base = estimate_vtl(_vowel(NEUTRAL))
    scaled = estimate_vtl(_vowel([f * k for f in NEUTRAL]))
    assert scaled / base == pytest.approx(1 / k, rel=0.05)


def test_lpc_recovers_resonances_of_noise_driven_filter():
    sr = 10000
    x = np.random.default_rng(1).standard_normal(4000)
    y = resonator_cascade(x, [700.0, 2200.0], [60.0, 80.0], sr)
    f = formants_from_lpc(lpc(y * np.hamming(len(y)), 6), sr)
    np.testing.assert_allclose(f[:2], [700, 2200], rtol=0.03)
