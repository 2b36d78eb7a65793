"""Exception hierarchy shared by the scheme modules and the CLI."""


class QHIBEError(Exception):
    """Base class for every error raised by this package."""


class AccessDenied(QHIBEError):
    """The distinguished output ⊥: the key does not match the ciphertext's
    identity, or evaluation was asked to combine different identities."""


class MalformedCiphertext(QHIBEError):
    """Ciphertext data that no honest party could have produced (e.g. a
    non-unit reached the Jacobi decoding step)."""


class IterationCapExceeded(QHIBEError):
    """A rejection loop hit its hard cap. Signals a degenerate modulus or
    adversarial input rather than bad luck."""


class FormatError(QHIBEError):
    """A key/params/ciphertext file could not be parsed."""


class QueryRefused(QHIBEError):
    """A game oracle refused a query that would trivialise the experiment."""


class ProtocolViolation(QHIBEError):
    """An adversary strategy returned malformed output to a game runner."""
