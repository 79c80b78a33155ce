"""Error taxonomy shared by every module.

DomainError    bad mathematical input (division by zero, singular matrix).
UsageError     malformed arguments, mixed variable spaces, unknown names.
CapError       a configured resource cap was exceeded.
VerificationError   an internal consistency check failed diagnostically.
"""


class DomainError(ValueError):
    pass


class UsageError(ValueError):
    pass


class CapError(RuntimeError):
    pass


class VerificationError(RuntimeError):
    pass
