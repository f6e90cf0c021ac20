"""Exception taxonomy shared across the package.

The CLI maps these onto process exit codes: 2 for malformed input files,
3 for infeasible assignment problems, 4 for precondition and size-guard
failures.
"""

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_PRECONDITION = 4


class SPAssignError(Exception):
    exit_code = 1


class ParseError(SPAssignError):
    """Malformed input file; carries the offending 1-based position."""

    exit_code = EXIT_PARSE

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        loc = ""
        if path is not None:
            loc = str(path)
            if line is not None:
                loc += f":{line}"
                if column is not None:
                    loc += f":{column}"
            loc += ": "
        super().__init__(loc + message)


class InfeasibleError(SPAssignError):
    """No assignment satisfies the load constraints.

    The message names the capacity that cannot be met (short papers,
    exhausted agent capacity, or an undersized partition subset).
    """

    exit_code = EXIT_INFEASIBLE


class PreconditionError(SPAssignError):
    """An operation was invoked outside its documented domain."""

    exit_code = EXIT_PRECONDITION


class ModeError(PreconditionError):
    """Operation requires the other authorship mode (one-to-one vs general)."""


class SizeGuardError(PreconditionError):
    """Instance exceeds the size limit of an exhaustive oracle."""


class GiantComponentError(PreconditionError):
    """A single authorship component holds more than half of all papers."""


class InvalidAssignmentError(PreconditionError):
    """Assignment refers to agents or papers outside the instance."""
