class OutsideDomain(ValueError):
    """Raised for (r, s) outside the admissible domain {s != 1} u {(0, 1)}."""


class InconsistentEquation(RuntimeError):
    """A defining equation has no solution to tolerance (indicates a convention bug)."""


class InvalidStructure(ValueError):
    """Structure constants fail a precondition (e.g. the Jacobi identity)."""


class AlgebraFileError(ValueError):
    """An algebra file is malformed (missing fields, bad indices, conflicting entries)."""
