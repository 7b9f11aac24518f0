class NetTomoError(Exception):
    """Base class for all package errors."""


class ValidationError(NetTomoError, ValueError):
    """Malformed input: bad matrix, unknown link, broken path, bad file."""


class UncoveredLinkError(ValidationError):
    def __init__(self, links):
        self.links = list(links)
        super().__init__(f"links not covered by any path: {self.links}")


class SizeGuardError(NetTomoError):
    """An exhaustive search would exceed its configured size limit."""


class InfeasibleError(NetTomoError):
    """An optimisation problem has no feasible point (e.g. inconsistent measurements)."""


class NotCertifiedError(NetTomoError):
    """An operation's hypothesis (expander certificate) does not hold."""
