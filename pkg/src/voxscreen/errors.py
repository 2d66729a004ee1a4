"""Exception hierarchy shared by all voxscreen modules."""


class VoxScreenError(Exception):
    """Base class for every error raised by this package."""


class UnsupportedFormat(VoxScreenError):
    pass


class EmptyAudio(VoxScreenError):
    pass


class NonPositiveParam(VoxScreenError, ValueError):
    pass


class FrameTooLong(VoxScreenError, ValueError):
    pass


class ClipTooShort(VoxScreenError):
    pass


class NoVoicedFrames(VoxScreenError):
    """The clip has no frame with detectable periodicity."""


class FormantEstimationFailed(VoxScreenError):
    pass


class FeatureUnavailable(VoxScreenError):
    """A feature could not be computed on one side of a pair."""


class FeatureKindMismatch(VoxScreenError, ValueError):
    pass


class NoLabeledPairs(VoxScreenError):
    pass


class TieVote(VoxScreenError):
    pass


class IdSetMismatch(VoxScreenError, ValueError):
    pass


class InvalidSpec(VoxScreenError, ValueError):
    pass


class ManifestInvalid(VoxScreenError):
    pass


class MissingBand(VoxScreenError, KeyError):
    pass
