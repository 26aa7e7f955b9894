"""Exception types raised by lattice validation, decoding, and generation."""


class LatticeError(ValueError):
    """Base class for all input validation errors in this package."""


class SumNotZero(LatticeError):
    """Superbasis vectors (or Gram row sums) do not vanish within tolerance."""


class NotObtuse(LatticeError):
    """A pair of superbasis vectors has a positive inner product."""

    def __init__(self, i, j, value):
        super().__init__(f"positive inner product q[{i}][{j}] = {value:.6g}")
        self.i = i
        self.j = j
        self.value = value


class DegenerateLattice(LatticeError):
    """The generating vectors do not span an n-dimensional lattice."""


class NotPSD(LatticeError):
    """Matrix is not positive semidefinite within tolerance."""


class NullityNotOne(LatticeError):
    """Matrix kernel is not exactly one-dimensional."""


class DimensionMismatch(LatticeError):
    """An argument has the wrong length or shape for this lattice."""


class NonFiniteInput(LatticeError):
    """An input contains NaN or infinity."""


class IndexOutOfRange(LatticeError):
    """A coefficient index lies outside 0..n."""


class EmptyVector(LatticeError):
    """A vector argument is empty."""


class DimensionTooLarge(LatticeError):
    """Exhaustive enumeration was requested above its size limit."""


class UnknownName(LatticeError):
    """No built-in lattice family with this name."""


class InvalidForm(LatticeError):
    """Binary quadratic form or flow network violates its invariants."""


class DegenerateDraw(LatticeError):
    """Random instance generation failed repeatedly (should not happen)."""


class IterationOverrun(RuntimeError):
    """Internal error: the descent exceeded its guaranteed iteration bound."""
