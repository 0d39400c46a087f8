"""Exception hierarchy shared by all modules."""


class AvgReconError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(AvgReconError):
    """Invalid user input (measure, signal, config file)."""


class AsymmetricMeasure(ConfigError):
    pass


class WeightsNotNormalized(ConfigError):
    pass


class NegativeWeight(ConfigError):
    pass


class BandwidthTooLarge(ConfigError):
    pass


class DeltaMismatch(ConfigError):
    pass


class UnsupportedMeasureKind(ConfigError):
    pass


class OrderTooLarge(ConfigError):
    pass


class DimensionMismatch(ConfigError):
    pass


class DomainError(ConfigError):
    pass


class OutOfDomain(DomainError):
    pass


class NegativeGram(AvgReconError):
    pass


class PreconditionFailed(AvgReconError):
    """The error bound's hypotheses are not met for the requested n."""


class QuadratureNotConverged(AvgReconError):
    pass
