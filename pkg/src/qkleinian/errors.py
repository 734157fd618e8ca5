"""Exception hierarchy shared by all modules."""


class QKError(Exception):
    """Base class for errors raised by qkleinian."""


class DomainError(QKError, ValueError):
    """Input outside the domain of an operation (zero vector, kernel hit, ...)."""


class SingularMatrixError(DomainError):
    def __init__(self, det):
        super().__init__(f"matrix is singular (det_h = {det:.3e})")
        self.det = det


class ConsistencyError(QKError, ArithmeticError):
    """A numerical self-check failed (conjugate pairing, real determinant)."""


class RankAmbiguityError(QKError):
    def __init__(self, lam, k, singular_values):
        super().__init__(
            f"numerical rank of (Phi - lambda I)^{k} is ambiguous at lambda = {lam:.6g}; "
            f"singular values {['%.2e' % s for s in singular_values]}"
        )
        self.lam = lam
        self.k = k
        self.singular_values = list(singular_values)


class ValidationError(QKError, ValueError):
    """Structured parameters violate a subclass constraint."""

    def __init__(self, constraint, detail=""):
        msg = f"constraint violated: {constraint}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.constraint = constraint


class PreconditionError(QKError, ValueError):
    pass


class DiagnosticError(QKError, RuntimeError):
    """A numerical campaign could not reach its goal."""


class CapReachedError(DiagnosticError):
    def __init__(self, cap, achieved):
        super().__init__(f"search cap {cap} reached; best value achieved {achieved:.6g}")
        self.cap = cap
        self.achieved = achieved


class SchemaError(QKError, ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
