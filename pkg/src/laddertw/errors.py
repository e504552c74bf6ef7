"""Exception hierarchy shared by every module."""


class LadderTWError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(LadderTWError, ValueError):
    """Input data (edge lists, files, Newick text) violates the format or invariants."""


class PreconditionError(LadderTWError, ValueError):
    """An operation was called on arguments outside its domain."""


class StructuralError(LadderTWError, ValueError):
    """A tree decomposition whose bag graph is not a tree.

    ``witness`` names the offending part: a bad edge, or the bag ids cut off
    from bag 0.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PolicyError(LadderTWError, ValueError):
    """A reduction was requested below a safety floor or without a certificate."""


class TreewidthUnknown(LadderTWError):
    """The exact search ran out of budget.

    Carries the best bounds proven so far; ``lower <= tw <= upper``.
    """

    def __init__(self, lower, upper, reason="budget exceeded"):
        super().__init__(f"{reason}: treewidth in [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.reason = reason
