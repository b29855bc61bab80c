"""Exception hierarchy shared by all modules."""


class ProcessError(Exception):
    """Base class for every error raised by procsplit."""


class InvalidAction(ProcessError):
    pass


class ReservedSeparatorInAction(InvalidAction):
    pass


class UnknownReference(ProcessError):
    def __init__(self, name):
        super().__init__(f"unknown process reference {name!r}")
        self.name = name


class MutualRecursion(ProcessError):
    def __init__(self, name):
        super().__init__(f"mutual recursion through definition {name!r}")
        self.name = name


class TauInCommRule(ProcessError):
    pass


class TauInAllowSet(ProcessError):
    pass


class InvalidCommRule(ProcessError):
    pass


class InvalidRenaming(ProcessError):
    pass


class OverlappingCommRules(ProcessError):
    pass


class NotBasicProcess(ProcessError):
    pass


class NotSequential(ProcessError):
    pass


class NotTauFree(ProcessError):
    pass


class ActionOutsideAlphabet(ProcessError):
    pass


class UnguardedRecursion(ProcessError):
    def __init__(self, name):
        super().__init__(f"unguarded recursion through {name!r}")
        self.name = name


class StateBoundExceeded(ProcessError):
    def __init__(self, max_states):
        super().__init__(f"state space exceeds {max_states} states")
        self.max_states = max_states


class ArityMismatch(ProcessError):
    pass


class TopologyError(ProcessError):
    pass


class DanglingNode(TopologyError):
    pass


class DuplicateChannel(TopologyError):
    pass


class UnknownEnd(TopologyError):
    pass


class ParseError(ProcessError):
    """Malformed input text; carries a 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
