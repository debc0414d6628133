"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: InputError -> 2,
BudgetExceededError -> 3, assertion failures in reports -> 1.
"""


class InputError(ValueError):
    """Invalid or inconsistent user-supplied data."""


class FieldMismatchError(InputError):
    """Operands belong to different fields."""


class SingularCurveError(InputError):
    """Curve model fails its nonsingularity invariant."""


class PointNotOnCurveError(InputError):
    """Point does not satisfy the curve equation."""


class InconsistentLedgerError(InputError):
    """Rank ledger violates the hypotheses of the formulas applied to it."""


class BudgetExceededError(RuntimeError):
    """A search or enumeration exceeded its configured desk-scale budget."""
