"""Exception types shared across the library."""

from __future__ import annotations


class PersistenceError(Exception):
    """Base class for every library-specific error."""


# -- finite posets ------------------------------------------------------------

class DuplicateElement(PersistenceError):
    pass


class UnknownElement(PersistenceError):
    pass


class CycleError(PersistenceError):
    """Transitive closure produced x < x, so the input is not a partial order."""


# -- maps and persistence posets ----------------------------------------------

class PartialStructureMap(PersistenceError):
    """A map misses a source element or sends one outside its target."""


class NonMonotoneStructureMap(PersistenceError):
    """A map violates order preservation."""


class NaturalityError(PersistenceError):
    """Slice maps of a persistence map do not commute with structure maps."""


class EmptyAfterNonempty(PersistenceError):
    """A component is empty although an earlier component is nonempty."""


class NotASubposet(PersistenceError):
    """Component subsets are not closed under the structure maps."""


class InconsistentTransfer(PersistenceError):
    """Order transferred from images contradicts an existing relation."""


class NotClosed(PersistenceError):
    """A surviving element maps into the removed set."""


# -- simplicial complexes ------------------------------------------------------

class UnknownVertex(PersistenceError):
    pass


# -- persistence modules -------------------------------------------------------

class ShapeMismatch(PersistenceError):
    pass


class TooLarge(PersistenceError):
    """Input exceeds the scale the exhaustive search is meant for."""


class NegativeMultiplicity(PersistenceError):
    """Internal consistency failure while extracting a barcode."""


# -- verification ----------------------------------------------------------------

class HypothesisUnmet(PersistenceError):
    """A verified statement's hypothesis does not hold for the input."""


# -- documents and CLI -----------------------------------------------------------

class SchemaError(PersistenceError):
    pass


class ValidationError(PersistenceError):
    pass


class NotNested(PersistenceError):
    """A cover set shrank between consecutive indices."""
