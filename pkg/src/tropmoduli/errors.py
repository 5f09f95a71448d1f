"""Exception hierarchy shared by all tropmoduli modules."""


class TropModuliError(Exception):
    """Base class for all library errors."""


class DependentGenerators(TropModuliError):
    """Lattice generators expected to be independent are not."""


class ZeroVector(TropModuliError):
    """A nonzero vector was required."""


class DimMismatch(TropModuliError):
    """Vector/matrix dimensions are incompatible."""


class UnknownFace(TropModuliError):
    """A face id does not exist in the complex."""


class NoCofacets(TropModuliError):
    """The face has no codimension-one cofacets."""


class InconsistentStrata(TropModuliError):
    """Semistable pair data violates its own invariants."""


class Disconnected(TropModuliError):
    """The underlying graph is not connected."""


class CycleInconsistency(TropModuliError):
    """A cycle's length-weighted slope sum does not vanish."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = tuple(cycle) if cycle is not None else ()


class Unstabilizable(TropModuliError):
    """No stable model can be reached by pruning/smoothing."""


class UnbalancedType(TropModuliError):
    """A combinatorial type fails the vertex balancing condition."""


class NonzeroSlopeContraction(TropModuliError):
    """contract() was asked to contract an edge of nonzero slope."""


class NotAlmost3Valent(TropModuliError):
    """Resolution requires a weightless almost-3-valent type."""


class MixedInvariants(TropModuliError):
    """Types fed to a wall graph do not share (genus, legs, degree)."""


class SeedNotInGraph(TropModuliError):
    """A queried node is not part of the wall graph."""


class PointNotInComplex(TropModuliError):
    """A point does not belong to any face of the complex."""


class InvalidFamily(TropModuliError):
    """A family datum fails validation where validity is a precondition."""


class InputError(TropModuliError):
    """A document does not match its schema.

    ``pointer`` is a JSON-pointer-like path into the offending document.
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer
