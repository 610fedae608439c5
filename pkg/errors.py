"""
Exception hierarchy shared by every module. Library code raises these; only
the command-line front end turns them into messages and exit codes.
"""
from typing import Optional


class DyckLabError(Exception):
    """
    Root of all errors raised by this library.
    """


class GraphFormatError(DyckLabError):
    """
    A graph file or update script could not be parsed.
    """

    def __init__(self, message: str, line: Optional[int] = None):
        """
        Initialise this GraphFormatError
        :param message: description of the problem
        :param line: 1-based line number the problem was found on, if known
        """
        self.line = line
        if line is not None:
            message = "line {}: {}".format(line, message)
        super().__init__(message)


class UpdateError(DyckLabError):
    """
    An update operation could not be applied to an instance.
    """


class DuplicateEdgeError(UpdateError):
    pass


class MissingEdgeError(UpdateError):
    pass


class AlphabetMismatchError(DyckLabError):
    pass


class GrammarError(DyckLabError):
    pass


class InstanceKindError(DyckLabError):
    """
    The instance has the wrong shape for the requested operation, e.g. a
    directed graph handed to an undirected-only solver.
    """


class MissingPartitionError(InstanceKindError):
    pass


class InstanceTooLargeError(DyckLabError):
    pass


class FingerprintMismatchError(DyckLabError):
    pass


class DecompositionError(DyckLabError):
    """
    A path in an undirected gadget could not be split into nominal segments.
    """


class NotDyckPathError(DecompositionError):
    pass


class MalformedSegmentError(DecompositionError):
    pass
