"""Exception types shared across the package."""


class SkewgraphError(Exception):
    """Base class for all package errors."""


class DegenerateColumnError(SkewgraphError):
    """A constant column makes the requested rank statistic undefined."""

    def __init__(self, column: int, label: str | None = None):
        self.column = column
        self.label = label
        where = f"column {column}" if label is None else f"column {column} ({label!r})"
        super().__init__(f"{where} has zero rank variance; statistic undefined")


class NotPositiveSemidefiniteError(SkewgraphError):
    """Input matrix is not positive semidefinite where the solver requires it."""

    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            f"matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e}); "
            "apply psd_repair first"
        )


class InfeasibleColumnError(SkewgraphError):
    """A column subproblem of an l1 solver has an empty feasible set."""

    def __init__(self, column: int, lam: float, detail: str = ""):
        self.column = column
        self.lam = lam
        msg = f"column {column} infeasible at lambda={lam:g}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class IngestError(SkewgraphError):
    """Price panel could not be turned into a usable returns matrix."""
