"""Exception types shared across the toolkit."""


class GroundspectError(Exception):
    """Base class for all toolkit-specific errors."""


class InputFormatError(GroundspectError):
    """A file or config payload does not match the documented schema."""


# -- graph construction and partitions ---------------------------------------

class SelfLoopError(GroundspectError):
    """An edge joins a node to itself."""


class DuplicateEdgeError(GroundspectError):
    """The same unordered node pair appears twice in an edge list."""


class IndexOutOfRangeError(GroundspectError):
    """A node index falls outside [0, n)."""


class EmptyLeaderSetError(GroundspectError):
    """A partition has no leader nodes (grounding requires at least one)."""


class EmptyFollowerSetError(GroundspectError):
    """A partition has no follower nodes."""


# -- spectral computations ----------------------------------------------------

class NotSymmetricError(GroundspectError):
    """Input matrix is not symmetric within tolerance."""


class NoConvergenceError(GroundspectError):
    """The rotation eigensolver did not converge within the sweep cap."""


class FiedlerOutOfRangeError(GroundspectError):
    """Smallest eigenvalue is outside (0, 1); the graph is likely
    disconnected or the partition invalid."""


class SignIndefiniteError(GroundspectError):
    """The computed Fiedler vector has mixed signs beyond tolerance,
    signalling eigenvalue multiplicity or a solver failure."""


class SingularScalingError(GroundspectError):
    """A diagonal entry of the semi-normalized scaling matrix is <= 0."""


class IsolatedLeaderError(GroundspectError):
    """A leader has degree zero, so the graph cannot be connected."""


# -- sequence generation ------------------------------------------------------

class InfeasibleConfigError(GroundspectError):
    """A sequence config cannot be realized (e.g. leader degree exceeds
    the follower count)."""


# -- simulation ----------------------------------------------------------------

class UnstableStepError(GroundspectError):
    """The rk4 step size violates the stability bound dt < 2.785/lambda_max."""


class NonFiniteStateError(GroundspectError):
    """The integrator produced a non-finite state."""


class TimeOutOfRangeError(GroundspectError):
    """Requested measurement time lies outside the recorded horizon."""


class SingularSystemError(GroundspectError):
    """The grounded Laplacian is not positive definite (disconnected graph)."""


# -- tempo estimation -----------------------------------------------------------

class ZeroReferenceVelocityError(GroundspectError):
    """The reference agent's velocity is numerically zero."""


class AllVelocitiesZeroError(GroundspectError):
    """Every agent velocity is zero: the system is at equilibrium."""


class DegenerateEstimateError(GroundspectError):
    """All estimate entries are equal within tolerance; no gap exists."""


class NonGenericInitialConditionWarning(UserWarning):
    """The initial condition has (numerically) no component along the
    slowest mode in any dimension; tempo ratios will not converge to it."""
