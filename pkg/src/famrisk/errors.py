"""Exception types shared across the package."""


class FamriskError(Exception):
    """Base class for model and solver failures (not for bad argument domains,
    which raise ValueError)."""


class InfeasibleError(FamriskError):
    """No valid model can produce the requested quantities.

    Carries whatever diagnostic the failing operation could establish:
    ``best_residual`` for root searches, ``bound`` for analytic limits.
    """

    def __init__(self, message, best_residual=None, bound=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.bound = bound


class UnattainableError(InfeasibleError):
    """A target value lies at or above the supremum reachable in the model.

    ``bound`` holds the supremum.
    """


class AmbiguousSolutionError(FamriskError):
    """More than one distinct root survived the multi-start search.

    ``solutions`` lists the distinct (irr, q) candidates found.
    """

    def __init__(self, message, solutions):
        super().__init__(message)
        self.solutions = list(solutions)
