import numpy as np
import pytest

from voxscreen.audio import AudioClip
from voxscreen.lab import SignalSpec, synthesize

_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda s: int(s.split("_")[2])):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture(scope="session")
def sawtooth_220():
    return synthesize(SignalSpec("sawtooth", f0_hz=220.0, duration_s=1.0, sample_rate_hz=44100))


@pytest.fixture(scope="session")
def complex_200():
    return synthesize(SignalSpec("harmonic_complex", f0_hz=200.0, n_harmonics=10,
                                 duration_s=1.0, sample_rate_hz=44100))


@pytest.fixture(scope="session")
def white_noise():
    return synthesize(SignalSpec("noise", duration_s=1.0, sample_rate_hz=44100, seed=3))


@pytest.fixture(scope="session")
def silence():
    return AudioClip(np.zeros(44100), 44100)


def sine(freq, sr=44100, duration=1.0, amp=0.5):
    t = np.arange(int(round(sr * duration))) / sr
    return AudioClip(amp * np.sin(2 * np.pi * freq * t), sr)
