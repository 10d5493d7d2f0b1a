"""Exception taxonomy shared by every module in the package."""


class CoreError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CoreError):
    """A table cell failed to parse (bad number, wrong field count, non-finite value).

    Carries the 1-based line number of the offending row when known.
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = "line %d: %s" % (line_number, message)
        super().__init__(message)
        self.line_number = line_number


class SchemaError(CoreError):
    """The table header does not match the expected drug,target,y[,pred] layout."""


class DuplicatePair(CoreError):
    """The same (drug, target) pair was observed more than once."""

    def __init__(self, drug, target):
        super().__init__("duplicate pair (%r, %r)" % (drug, target))
        self.drug = drug
        self.target = target


class InvalidValue(CoreError):
    """A numeric argument violates a precondition (non-finite entry, negative tolerance)."""


class AlignmentError(CoreError):
    """A prediction vector does not align with the dataset it is evaluated against."""


class SizeLimit(CoreError):
    """An exhaustive reference computation was asked to exceed its configured cap."""


class InsufficientEntities(CoreError):
    """The dataset has too few distinct drugs or targets for the requested split."""
