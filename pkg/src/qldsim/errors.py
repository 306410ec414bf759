"""Exception hierarchy shared by all qldsim modules."""


class QldError(Exception):
    """Base class for all qldsim errors."""


class DimensionError(QldError):
    """Operands act on different numbers of qubits or mismatched Hilbert dimensions."""


class CapacityError(QldError):
    """A dense-matrix guard was exceeded (operation requested beyond desk scale)."""


class CodeValidationError(QldError):
    """A stabilizer code definition is inconsistent (non-commuting or dependent generators,
    bad logical operators, malformed tableau)."""


class RankError(CodeValidationError):
    """A generator or logical set is linearly dependent over GF(2)."""


class ContractViolationError(QldError):
    """An input violated an operation precondition that is checked numerically
    (e.g. a state that is not a syndrome eigenstate)."""


class ConsistencyError(QldError):
    """A mathematical construction is not well-defined for the supplied data
    (e.g. recovery-isometry Gram condition fails). Carries diagnostic payload."""

    def __init__(self, message, worst_pair=None, defect=None):
        super().__init__(message)
        self.worst_pair = worst_pair
        self.defect = defect


class PoleError(QldError):
    """A closed-form coefficient was requested at a dimension where its denominator vanishes."""


class ConfigError(QldError):
    """An experiment or protocol configuration is invalid."""
