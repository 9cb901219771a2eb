"""Exception hierarchy. Every error raised on purpose derives from SymspaceError."""


class SymspaceError(Exception):
    pass


class SpaceMismatch(SymspaceError):
    """Two functions live on measure spaces of different total mass."""


class IndeterminateForm(SymspaceError):
    pass


class InfiniteBlock(SymspaceError):
    """A conditional-expectation block has infinite mass."""


class WeightNotIntegrable(SymspaceError):
    pass


class NegativeValues(SymspaceError):
    pass


class TailPresent(SymspaceError):
    pass


class NormInfinite(SymspaceError):
    pass


class QuasiNormSpec(SymspaceError):
    """The operation is only defined for Banach (p >= 1) specs."""


class InvalidConstant(SymspaceError):
    pass


class NotAChain(SymspaceError):
    pass


class NoConvergence(SymspaceError):
    pass


class NotAMember(SymspaceError):
    pass
