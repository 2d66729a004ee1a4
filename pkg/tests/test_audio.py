import io
import struct
import wave

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.io import wavfile

from voxscreen.audio import (AudioClip, decode_wav, encode_wav, frame_indices, frame_signal,
                             make_window, resample)
from voxscreen.errors import EmptyAudio, FrameTooLong, NonPositiveParam, UnsupportedFormat

from conftest import sine


def _write_pcm(path, frames: bytes, width, channels=1, rate=8000):
    with wave.open(str(path), "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(width)
        w.setframerate(rate)
        w.writeframes(frames)


def test_16bit_mono_duration(tmp_path):
    p = tmp_path / "a.wav"
    wavfile.write(p, 44100, np.zeros(44100, dtype=np.int16))
    clip = decode_wav(p)
    assert clip.sample_rate_hz == 44100
    assert clip.duration_s == 1.0


def test_stereo_mixdown_cancels(tmp_path):
    p = tmp_path / "s.wav"
    data = np.stack([np.full(100, 0.5), np.full(100, -0.5)], axis=1).astype(np.float32)
    wavfile.write(p, 8000, data)
    assert np.all(decode_wav(p).samples == 0.0)


def test_16bit_full_scale(tmp_path):
    p = tmp_path / "fs.wav"
    wavfile.write(p, 8000, np.array([-32768, 32767, 0], dtype=np.int16))
    x = decode_wav(p).samples
    assert x[0] == -1.0
    assert x[1] == 32767 / 32768
    assert x[2] == 0.0


@pytest.mark.parametrize("width,values,expected", [
    (1, bytes([0, 128, 255]), [-1.0, 0.0, 127 / 128]),
    (3, b"".join(v.to_bytes(3, "little", signed=True) for v in (-8388608, 8388607, 0)),
     [-1.0, 8388607 / 8388608, 0.0]),
])
def test_other_integer_depths(tmp_path, width, values, expected):
    p = tmp_path / "x.wav"
    _write_pcm(p, values, width)
    np.testing.assert_allclose(decode_wav(p).samples, expected, rtol=0, atol=1e-12)


def test_32bit_int(tmp_path):
    p = tmp_path / "i32.wav"
    wavfile.write(p, 8000, np.array([-2 ** 31, 2 ** 30], dtype=np.int32))
    np.testing.assert_array_equal(decode_wav(p).samples, [-1.0, 0.5])


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        decode_wav(tmp_path / "nope.wav")


def test_compressed_rejected(tmp_path):
    # minimal RIFF header declaring format tag 0x55 (MPEG layer 3)
    fmt = struct.pack("<HHIIHH", 0x55, 1, 8000, 1000, 1, 0)
    data = b"\x00" * 16
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(data)) + data
    p = tmp_path / "mp3.wav"
    p.write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
    with pytest.raises(UnsupportedFormat):
        decode_wav(p)


def test_empty_audio(tmp_path):
    p = tmp_path / "e.wav"
    _write_pcm(p, b"", 2)
    with pytest.raises(EmptyAudio):
        decode_wav(p)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-32768, 32767), min_size=1, max_size=400))
def test_pcm16_roundtrip_bit_exact(tmp_path_factory, ints):
    q = np.array(ints, dtype=np.int16)
    clip = AudioClip(q / 32768.0, 16000)
    p = tmp_path_factory.mktemp("rt") / "r.wav"
    encode_wav(clip, p)
    _, back = wavfile.read(p)
    np.testing.assert_array_equal(back, q)
    assert decode_wav(p) == clip


def test_clip_invariants():
    with pytest.raises(ValueError):
        AudioClip([1.5], 8000)
    with pytest.raises(EmptyAudio):
        AudioClip([], 8000)
    with pytest.raises(NonPositiveParam):
        AudioClip([0.1], 0)
    c = AudioClip([0.1, 0.2, 0.3], 3)
    assert c.duration_s == 1.0
    with pytest.raises(ValueError):
        c.samples[0] = 0.5


def test_frame_count_44k():
    fs = frame_signal(sine(440), 0.04, 0.01)
    assert len(fs) == 97
    assert fs.frames.shape == (97, 1764)


def test_rectangular_frames_are_raw_slices():
    clip = sine(300, duration=0.2)
    fs = frame_signal(clip, 0.02, 0.01, "rectangular")
    np.testing.assert_array_equal(fs.frames[3], clip.samples[3 * 441: 3 * 441 + 882])


def test_hanning_endpoints_zero():
    fs = frame_signal(sine(300, duration=0.2), 0.02, 0.01, "hanning")
    assert np.all(fs.frames[:, 0] == 0) and np.all(fs.frames[:, -1] == 0)


def test_gaussian_window_shape():
    w = make_window("gaussian", 101)
    assert w[50] == pytest.approx(1.0)
    assert w[0] == pytest.approx(0.0, abs=1e-12)


def test_frame_errors():
    clip = sine(300, duration=0.01)
    with pytest.raises(FrameTooLong):
        frame_signal(clip, 0.02, 0.01)
    with pytest.raises(NonPositiveParam):
        frame_signal(clip, 0.0, 0.01)
    with pytest.raises(NonPositiveParam):
        frame_signal(clip, 0.005, -1)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3000), st.integers(1, 500), st.integers(1, 400))
def test_framing_never_reads_past_end(n, frame, hop):
    starts = frame_indices(n, frame, hop)
    expected = (n - frame) // hop + 1 if n >= frame else 0
    assert len(starts) == expected
    if len(starts):
        assert starts[-1] + frame <= n
        assert np.all(starts == np.arange(len(starts)) * hop)


def test_resample_identity():
    clip = sine(440)
    assert resample(clip, 44100) is clip


def test_resample_keeps_spectral_peak_and_length():
    out = resample(sine(440), 16000)
    assert abs(len(out) - 16000) <= 1
    spec = np.abs(np.fft.rfft(out.samples))
    freqs = np.fft.rfftfreq(len(out), 1 / 16000)
    assert abs(freqs[np.argmax(spec)] - 440) <= 1


def test_resample_dc_zero():
    zeros = AudioClip(np.zeros(4410), 44100)
    assert np.all(resample(zeros, 16000).samples == 0)
    out = resample(sine(1000), 22050)
    assert abs(np.mean(out.samples)) < 1e-4


def test_resample_rejects_nonpositive():
    with pytest.raises(NonPositiveParam):
        resample(sine(440), 0)
