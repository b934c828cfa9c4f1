"""Exceptions raised by the qudit tomography library."""


class QuditError(Exception):
    """Base class for every library error."""


class ValidationError(QuditError, ValueError):
    """An input violates a documented invariant."""


class ConfigError(ValidationError):
    pass


class MatrixFileError(ValidationError):
    pass


# linalg

class NotSquare(ValidationError):
    def __init__(self, shape):
        self.shape = tuple(shape)
        super().__init__(f"matrix is not square: shape {self.shape}")


class NotHermitian(ValidationError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"matrix is not Hermitian: max |H - H^+| = {residual:.3e}")


class NotUnitary(ValidationError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"matrix is not unitary: max |u u^+ - I| = {residual:.3e}")


class TraceNotOne(ValidationError):
    def __init__(self, actual: float):
        self.actual = actual
        super().__init__(f"trace is {actual!r}, expected 1")


class NotPositiveSemidefinite(ValidationError):
    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"matrix has negative eigenvalue {min_eigenvalue!r}")


class DecompositionError(QuditError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"eigendecomposition reconstruction residual {residual:.3e}")


# indexing

class IndexOutOfRange(ValidationError):
    pass


class EmptyKeepSet(ValidationError):
    def __init__(self):
        super().__init__("keep set must name at least one factor")


class BadPosition(ValidationError):
    def __init__(self, position, n_factors: int):
        self.position = position
        super().__init__(f"factor position {position!r} not in 1..{n_factors}")


class ShapeMismatch(ValidationError):
    pass


class TargetTooSmall(ValidationError):
    def __init__(self, target: int, dim: int):
        self.target = target
        self.dim = dim
        super().__init__(f"padding target {target} is smaller than dimension {dim}")


# tomography

class DimMismatch(ValidationError):
    pass


class BadSpin(ValidationError):
    def __init__(self, j):
        self.j = j
        super().__init__(f"spin must be a non-negative half-integer, got {j!r}")


class NegativeProbability(ValidationError):
    def __init__(self, value: float):
        self.value = value
        super().__init__(f"probability {value!r} is below the clamping floor")


class NotNormalized(ValidationError):
    def __init__(self, total: float):
        self.total = total
        super().__init__(f"probabilities sum to {total!r}, expected 1")


class EmptyProduct(ValidationError):
    def __init__(self):
        super().__init__("a product unitary needs at least one factor")


# entropy / inequalities / sampling

class QOutOfRange(ValidationError):
    def __init__(self, q: float):
        self.q = q
        super().__init__(f"entropic index q must be >= 1, got {q!r}")


class NonProductInput(ValidationError):
    pass


class BadRank(ValidationError):
    def __init__(self, rank: int, dim: int):
        self.rank = rank
        self.dim = dim
        super().__init__(f"rank {rank} not in 1..{dim}")


class UsageError(QuditError):
    """Bad command-line usage."""
