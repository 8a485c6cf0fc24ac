"""Exception types shared across the library, mapped to CLI exit codes."""


class LipfreeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LipfreeError):
    """Malformed document or argument violating an operation's contract."""


class InvalidSpaceError(InputError):
    """Raw labelled distance data failed metric validation."""

    def __init__(self, report):
        self.report = report
        kinds = sorted({kind for kind, _ in report.violations})
        super().__init__("not a valid metric space: " + ", ".join(kinds))


class NotAttainingError(LipfreeError):
    """The pair family admits no common norming function.

    Carries the negative-cycle witness certifying the failure of cyclical
    monotonicity.
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"family is not cyclically monotone: cycle {list(witness.cycle)} "
            f"has slack {witness.sum}"
        )


class ResourceLimitError(LipfreeError):
    """Instance exceeds the hard size cap of an exhaustive procedure."""


class CertificateMismatchError(LipfreeError):
    """A certificate failed independent re-verification (internal bug)."""
