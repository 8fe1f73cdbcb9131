"""Exception and warning types shared across the package."""

from __future__ import annotations


class GeotutorError(Exception):
    """Base class for all domain errors raised by this package."""


# --- core model -------------------------------------------------------------

class InvalidDeclaration(GeotutorError):
    """A predicate or object declaration is malformed (bad name, bad
    symmetry generator, unknown kind, ...)."""


class ArityMismatch(GeotutorError):
    """A fact or pattern supplies the wrong number of arguments."""


class KindMismatch(GeotutorError):
    """An argument's kind does not match the predicate declaration."""


# --- DSL parsing ------------------------------------------------------------

class DslSyntaxError(GeotutorError):
    """Unparseable DSL input. Carries the 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UndeclaredPredicate(GeotutorError):
    """A pattern or fact uses a predicate that was never declared."""


class UndeclaredObject(GeotutorError):
    """A problem fact or figure entry references an undeclared object."""


class RangeRestrictionViolation(GeotutorError):
    """A rule conclusion uses a variable that appears in no premise."""


class DuplicateRuleId(GeotutorError):
    """Two rules in one rule base share an id."""


class DuplicateDeclaration(GeotutorError):
    """A predicate is redeclared with a conflicting shape."""


class MissingConclusion(GeotutorError):
    """A problem file has no conclusion section."""


class InvalidProblem(GeotutorError):
    """A problem violates a structural invariant (e.g. the conclusion is
    already listed among the given facts)."""


# --- saturation -------------------------------------------------------------

class LimitExceeded(GeotutorError):
    """Saturation hit the configured round or fact budget."""


# --- proof graph ------------------------------------------------------------

class ConclusionNotDerived(GeotutorError):
    """The conclusion fact is absent from the derivation record."""


# --- tutoring ---------------------------------------------------------------

class MalformedStatement(GeotutorError):
    """A submitted statement fails canonicalization (unknown predicate or
    object, wrong arity or kind). Distinct from a well-formed statement
    that is simply not on the proof graph."""


class NothingMissing(GeotutorError):
    """A hint was requested but the best proof is already complete."""


class ReplayFormatError(GeotutorError):
    """A replay script contains an unknown command or a bad argument."""


# --- warnings ---------------------------------------------------------------

class EmptyRuleBaseWarning(UserWarning):
    """Filtering removed every rule; downstream saturation will be a no-op."""


class CapExceededWarning(UserWarning):
    """More proofs exist than the materialization cap allows."""
