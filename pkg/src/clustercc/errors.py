"""Exception hierarchy shared by all modules.

Errors are split into three families: input validation problems (bad
Cartan data, bad orientation, malformed shapes), violated mathematical
preconditions (non-exact division, non-free kernels), and internal
invariant breaches that indicate a bug rather than bad input.
"""


class ClusterCCError(Exception):
    """Base class for all library errors."""


# --- input validation -------------------------------------------------------

class NonCartan(ClusterCCError):
    """Matrix is not a generalized Cartan matrix (diagonal/sign pattern)."""


class NotSymmetrizer(ClusterCCError):
    """D*C is not symmetric."""


class BadOrientation(ClusterCCError):
    """Orientation pairs missing/extra, or the oriented graph has a cycle."""


class NotAffine(ClusterCCError):
    """Operation defined only for affine type."""


class BadExtendedVertex(ClusterCCError):
    """Deleting this vertex does not leave a finite-type Cartan matrix."""


class NotSinkOrSource(ClusterCCError):
    """Reflection requested at a vertex that is neither sink nor source."""


class ArityMismatch(ClusterCCError):
    """Laurent polynomials over different variable sets were combined."""


class ShapeMismatch(ClusterCCError):
    """Structure matrices do not have the required shapes."""


class TooLarge(ClusterCCError):
    """Instance exceeds the configured desk-scale bounds."""


# --- violated mathematical preconditions ------------------------------------

class NotDivisible(ClusterCCError):
    """Exact division failed; a recurrence hypothesis does not hold."""


class NegativeRank(ClusterCCError):
    """A reflection pushed a rank vector outside the positive cone."""


class NotLocallyFreeResult(ClusterCCError):
    """Kernel/cokernel of a reflection functor is not free over H_k."""


class DecompositionNotFound(ClusterCCError):
    """Exhaustive search found no canonical decomposition."""


# --- internal invariant breaches --------------------------------------------

class InvariantBreach(ClusterCCError):
    """A property the theory guarantees failed; indicates a bug."""


class NotLaurent(InvariantBreach):
    """A mutated variable failed the Laurent-phenomenon assertion."""


class NotHomogeneous(InvariantBreach):
    """A principal-coefficient variable is not graded-homogeneous."""


class InterpolationInconsistent(InvariantBreach):
    """Point counts do not fit a polynomial of the expected degree."""
