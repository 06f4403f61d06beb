"""Exception hierarchy shared across the package.

Each class carries a short ``category`` string that the CLI prints in front
of the message, so callers can tell bad input apart from infeasible requests
and numerical failures without parsing text.
"""


class GridTopoError(Exception):
    category = "error"


class ValidationError(GridTopoError):
    """Malformed input: bad files, violated data invariants, bad arguments."""

    category = "input"


class DisconnectedError(GridTopoError):
    """An operation that needs a connected (sub)graph got a disconnected one."""

    category = "infeasible"


class InfeasibleError(GridTopoError):
    """Request cannot be met: enumeration cap, degenerate objective, bad budget."""

    category = "infeasible"


class NumericalError(GridTopoError):
    """A numerical guard tripped (solver residual, simulation divergence)."""

    category = "numerical"


class CertificateError(GridTopoError):
    """A quality certificate that should hold by construction was violated."""

    category = "certificate"
