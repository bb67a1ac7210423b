"""Exception hierarchy shared by all cubalex modules."""


class CubalexError(Exception):
    """Base class for all domain errors."""


# -- complex construction / validation ------------------------------------

class MissingFace(CubalexError):
    pass


class IllegalIntersection(CubalexError):
    """Two cubes intersect in something that is not a common cube."""


class FaceOveruse(CubalexError):
    """An (n-1)-simplex is a face of more than two n-simplices."""


class NotCubical(CubalexError):
    pass


class UnknownVertex(CubalexError):
    pass


class NotACell(CubalexError):
    """Heuristic cell check failed (Euler characteristic / boundary)."""


# -- Alexander labelings ----------------------------------------------------

class OddCycle(CubalexError):
    """Adjacency graph is not bipartite: no parity function exists."""

    def __init__(self, message, cycle=None):
        super().__init__(message)
        self.cycle = cycle or []


class LabelClash(CubalexError):
    """Some n-simplex does not carry all n+1 labels."""


class HasBoundary(CubalexError):
    pass


class ParityImbalance(CubalexError):
    pass


class BadCenterLabel(CubalexError):
    pass


class UnmatchedSimplex(CubalexError):
    pass


class NonSimplicialStar(CubalexError):
    pass


class BoundaryViolation(CubalexError):
    pass


class NotSimplePair(CubalexError):
    pass


# -- shelling ----------------------------------------------------------------

class NotAPermutation(CubalexError):
    pass


class AllOppositePairsPresent(CubalexError):
    pass


# -- refinement / molecules ---------------------------------------------------

class DuplicateMaxAtom(CubalexError):
    pass


class BadAttachment(CubalexError):
    pass


class NotATree(CubalexError):
    pass


class CubeNotInMolecule(CubalexError):
    pass


class UnclassifiableFace(CubalexError):
    pass


class NoDisjointCollars(CubalexError):
    pass


# -- weaving -------------------------------------------------------------------

class InconsistentFaces(CubalexError):
    pass


class ColorComponentWithoutRoot(CubalexError):
    pass


class NotSurjective(CubalexError):
    pass


# -- necklace --------------------------------------------------------------------

class ParamsInvalid(CubalexError):
    pass


class MinimizationNotConverged(CubalexError):
    pass


class SamplingBudgetExceeded(CubalexError):
    pass


class IntegralNotConverged(CubalexError):
    pass
