"""Exception types raised by the toolkit, one per named failure mode."""


class TemperleyError(Exception):
    """Base class for all toolkit errors."""


# lattice
class NotEven(TemperleyError):
    """Polyomino has a corner square that is not of class B1."""


class BadRemovalClass(TemperleyError):
    """Removed square d0 is not a B1 square on the outer boundary."""


class BadExposedPlacement(TemperleyError):
    """Exposed square is not a B0 square bordering exactly one square of the host."""


class ResolutionTooCoarse(TemperleyError):
    """Lattice spacing too coarse to realize the region's constraints."""


class RegionParse(TemperleyError):
    """Region document malformed."""


# height
class DisconnectedHost(TemperleyError):
    """Host polyomino is not edge-connected."""


class PathLeavesHost(TemperleyError):
    """Lattice path uses an edge outside the host."""


# kasteleyn
class UnbalancedColors(TemperleyError):
    """Black and white square counts differ."""


class DeterminantOverflow(TemperleyError):
    """Tiling count exceeds exact integer range; log-determinant available."""

    def __init__(self, log10_count):
        super().__init__(f"tiling count overflow, log10(count) = {log10_count:.6f}")
        self.log10_count = log10_count


class SingularSystem(TemperleyError):
    """Kasteleyn operator is singular (region is untilable)."""


class OverlappingEdges(TemperleyError):
    """Edge set for a probability query shares a vertex."""


class WrongValueParity(TemperleyError):
    """Function is not real on B0 and pure imaginary on B1."""


# greens
class DisconnectedFromBoundary(TemperleyError):
    """A vertex of the Dirichlet graph cannot reach the boundary set."""


class DominanceViolated(TemperleyError):
    """Flux matrix lost column diagonal dominance (discretization too coarse)."""


class ConjugateNotSingleValued(TemperleyError):
    """Harmonic conjugate has monodromy; flux corrections failed."""


class ProbesTooCloseToBoundary(TemperleyError):
    """Kernel probes violate the bulk-distance cutoff."""


# sampler
class UnreachableBoundary(TemperleyError):
    """Some forest vertex cannot reach the root set."""


class ForestHostMismatch(TemperleyError):
    """Forest does not live on the host's B0' graph."""


class Untilable(TemperleyError):
    """Host admits no domino tiling."""


# moments
class NotAnnular(TemperleyError):
    """Experiment requires a host with exactly one hole."""


class CoincidentPoints(TemperleyError):
    """Two-point function evaluated at equal points."""


class PathsIntersect(TemperleyError):
    """Integration paths are not pairwise disjoint."""


class BadMarkParity(TemperleyError):
    """Boundary mark is not on the required sublattice parity."""


class ProbeOutsideRegion(TemperleyError):
    """Probe point lies outside the region."""


# cli
class ConfigParse(TemperleyError):
    """Run configuration malformed."""
