"""Semantic exception hierarchy shared across persistlab modules."""


class PersistlabError(Exception):
    """Base class for all persistlab errors."""


class DomainTooSmall(PersistlabError):
    """Asymptotic functional evaluated where it is not yet defined (e.g. log I(t) <= 0)."""


class Divergent(PersistlabError):
    """A requested limit/series/integral provably diverges."""


class Undecided(PersistlabError):
    """Convergence cannot be decided from the available information; refusing to guess."""


class Unsupported(PersistlabError):
    """Inputs are outside the supported regime of the operation."""


class NotPositiveDefinite(PersistlabError):
    """Covariance factorization failed beyond the allowed jitter cap."""


class AllExceeded(PersistlabError):
    """Every Monte Carlo replicate exceeded the level: the estimate p_hat = 0 is unusable."""


class ValidationError(PersistlabError):
    """Structural validation of a configuration or input object failed."""
