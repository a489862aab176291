"""Exception hierarchy shared by all modules."""


class LabelFreeError(ValueError):
    """Base class for every error raised by the package."""


class BasisMismatchError(LabelFreeError):
    """States or operators live on different single-particle bases."""


class LabelError(LabelFreeError):
    """Unknown or duplicated mode/spin label."""


class DegenerateStateError(LabelFreeError):
    """A physical state was required but the input vector is zero."""


class StatisticsMismatchError(LabelFreeError):
    """Bosonic and fermionic objects were mixed."""


class ParticleNumberError(LabelFreeError):
    """Particle numbers are incompatible with the requested operation."""


class NullStateError(LabelFreeError):
    """The state has (numerically) vanishing norm and cannot be normalized."""


class GuardError(LabelFreeError):
    """A size guard (factorial or memory) was exceeded."""


class NotApplicableError(LabelFreeError):
    """The input does not match the template an operation expects."""


class NoCoincidenceError(LabelFreeError):
    """The sLOCC projection has zero probability."""


class NumericalContractError(LabelFreeError):
    """A numerical post-condition (finiteness, PSD, unit trace...) failed."""
