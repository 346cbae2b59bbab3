"""Exception taxonomy shared by all nvtherm modules.

The CLI maps these onto exit codes: usage problems exit 1 (argparse level),
validation failures exit 2, numerical failures exit 3.
"""


class NvthermError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(NvthermError, ValueError):
    """An argument is non-finite, out of its allowed set, or mis-shaped."""


class RangeError(NvthermError, ValueError):
    """A value lies outside the validity domain of a model or table."""


class ContractViolationError(NvthermError, ValueError):
    """An input object violates a structural precondition (e.g. not Hermitian)."""


class LabeledDegeneracyError(NvthermError):
    """Eigenstates cannot be assigned unambiguous spin labels.

    Carries the raw eigenvalues so callers can still inspect the spectrum.
    """

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class RankDeficiencyError(NvthermError):
    """Normal equations of a least-squares problem are singular or near-singular."""


class IllConditionedError(NvthermError):
    """A fit or calibration is requested on data that cannot constrain it."""


class InvalidWindowError(NvthermError, ValueError):
    """A spectral fit window is outside the data or too narrow to be usable."""


class QuadratureError(NvthermError):
    """Adaptive quadrature failed to reach its tolerance."""


class ConvergenceError(NvthermError):
    """An iterative numerical routine exhausted its iteration budget."""


class PipelineInstabilityError(NvthermError):
    """Too many Monte-Carlo trials failed for the run to be trustworthy."""


class ConfigError(NvthermError):
    """A configuration file is missing, unreadable, or inconsistent."""


class ExtrapolationWarning(UserWarning):
    """A model was evaluated outside the range it was calibrated on."""
