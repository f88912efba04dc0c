"""Exception hierarchy shared by all modules."""


class StructureError(ValueError):
    """Malformed input dimensions or out-of-range symbols."""


class PredicateError(ValueError):
    """A relation that is not the graph of a quasigroup."""


class ParseError(ValueError):
    """Unreadable file contents."""


class ConsistencyError(AssertionError):
    """An identity that must hold for quasigroups failed (a bug detector)."""


class TheoremViolation(RuntimeError):
    """The reducibility pipeline hit a state its preconditions should exclude."""
