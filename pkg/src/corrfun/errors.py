"""Exception hierarchy; the CLI maps each class to an exit code."""


class CorrfunError(Exception):
    exit_code = 1


class InputError(CorrfunError, ValueError):
    """Malformed or out-of-contract input (bad file, failed precondition)."""

    exit_code = 1


class GuardError(CorrfunError):
    """An instance-size guard was exceeded."""

    exit_code = 2


class VerificationError(CorrfunError):
    """A verification check failed."""

    exit_code = 3


class InternalConsistencyError(CorrfunError, AssertionError):
    """Two routes that must agree did not; indicates a bug."""

    exit_code = 3
