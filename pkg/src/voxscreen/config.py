"""Analysis parameters shared by the pitch, harmonicity and formant stages."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class AnalysisConfig:
    """Immutable analysis settings.

    Defaults follow the usual phonetic-toolkit settings for speech:
    75-600 Hz pitch range, 10 ms hop, voicing threshold 0.45 and a
    silence gate at 3 % of the loudest frame.
    """

    pitch_floor_hz: float = 75.0
    pitch_ceiling_hz: float = 600.0
    frame_hop_s: float = 0.010
    voicing_threshold: float = 0.45
    silence_threshold: float = 0.03
    periods_per_pitch_window: float = 3.0
    hnr_periods_per_window: float = 4.5
    octave_cost: float = 0.01
    octave_jump_cost: float = 0.35
    max_candidates: int = 15
    formant_rate_hz: int = 10000
    formant_window_s: float = 0.025
    formant_count: int = 4
    max_formant_bandwidth_hz: float = 400.0
    preemphasis_from_hz: float = 50.0
    speed_of_sound_cm_s: float = 35000.0
    vtl_plausible_cm: tuple = (5.0, 30.0)

    def __post_init__(self):
        if not 0 < self.pitch_floor_hz < self.pitch_ceiling_hz:
            raise ValueError("need 0 < pitch_floor_hz < pitch_ceiling_hz")
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "vtl_plausible_cm":
                object.__setattr__(self, f.name, tuple(float(u) for u in v))
                continue
            if v <= 0:
                raise ValueError(f"{f.name} must be positive, got {v!r}")

    @property
    def lpc_order(self) -> int:
        return self.formant_rate_hz // 1000 + 2

    @property
    def pitch_window_s(self) -> float:
        return self.periods_per_pitch_window / self.pitch_floor_hz

    @property
    def hnr_window_s(self) -> float:
        return self.hnr_periods_per_window / self.pitch_floor_hz

    def to_dict(self) -> dict:
        d = asdict(self)
        d["vtl_plausible_cm"] = list(self.vtl_plausible_cm)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "AnalysisConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
