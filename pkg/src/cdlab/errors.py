"""Exception types shared across the package."""


class CdlabError(Exception):
    """Base class for cdlab-specific failures."""


class RankDeficientError(CdlabError):
    """The Gram matrix is not numerically positive definite.

    Raised when the measure's support is too small for the requested
    polynomial degree (too few atoms, or atoms in degenerate position).
    """


class NotHermitianError(CdlabError):
    """A matrix required to be Hermitian exceeds the asymmetry tolerance."""
