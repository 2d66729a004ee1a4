"""Lightweight acoustic consistency screening for voice-cloning outputs.

Median f0, mean HNR and vocal tract length are measured on each source and
synthesized utterance; a pair is rejected when the output strays outside an
asymmetric band around the identity line ``output == input``.
"""
from .agreement import AgreementTable, FlowMatrix, RaterVotes, consensus_stats, flow_matrix
from .audio import AudioClip, FrameSequence, decode_wav, encode_wav, frame_signal, resample
from .classifier import (BAD, GOOD, REVIEW, ConfusionMatrix, Deviation, Metrics, SamplePair,
                         ThresholdBand, classify, deviation, evaluate, optimize_band,
                         pair_deviations)
from .config import AnalysisConfig
from .features import AcousticFeatures, extract_features
from .formants import estimate_vtl
from .harmonicity import mean_hnr
from .lab import (DegradationSpec, SignalSpec, add_noise, build_corpus, degrade,
                  harmonic_smear, pitch_shift, synthesize, voicing_dropout)
from .pitch import PitchTrack, median_f0, track_pitch
from .spectrogram import Spectrogram, spectrogram

__version__ = "0.1.0"
