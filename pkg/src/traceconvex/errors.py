"""Exception types raised by the library."""


class TraceConvexError(Exception):
    """Base class for all library errors."""


class NonHermitianInput(TraceConvexError):
    """Input matrix deviates from A = A* beyond tolerance."""


class NotPositiveSemidefinite(TraceConvexError):
    """Eigenvalue below the negative clamp window."""


class SingularPower(TraceConvexError):
    """Negative matrix power requested of a (numerically) singular matrix."""


class SingularProbe(TraceConvexError):
    """Variational probe point is not strictly positive."""


class SingularCore(TraceConvexError):
    """B*A^pB is singular and no regularization was requested."""


class NotAContraction(TraceConvexError):
    """Operator norm exceeds 1 beyond tolerance."""


class NotADensityMatrix(TraceConvexError):
    """Trace differs from 1 beyond tolerance, or input not positive."""


class DimMismatch(TraceConvexError):
    """Operands have incompatible dimensions."""


class BadFactorIndex(TraceConvexError):
    """Tensor factor index outside the labeled space."""


class NotBipartite(TraceConvexError):
    """Operation requires a two-factor labeled matrix."""


class NotTripartite(TraceConvexError):
    """Operation requires a three-factor labeled matrix."""


class GroupTooLarge(TraceConvexError):
    """Exhaustive signed-permutation enumeration capped at n = 4."""


class BadRegime(TraceConvexError):
    """Exponent pair outside the regime required by the operation."""


class SearchExhausted(TraceConvexError):
    """Counterexample search ran out of budget (signals a bug: existence is guaranteed)."""


class CertificationError(TraceConvexError):
    """A random probe beat a value that is provably optimal; numerics are broken."""


class SchemaError(TraceConvexError):
    """Matrix JSON does not match the documented schema."""
