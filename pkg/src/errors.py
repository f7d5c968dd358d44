# -*- coding: utf-8 -*-
"""
Error hierarchy
===============

- Validation errors are ``ValueError`` subclasses so callers that only know
  the builtin still catch them.
- Internal invariant violations of the sweep are ``RuntimeError`` subclasses
  grouped under :class:`SweepError`; they should never surface on valid input.
"""

from __future__ import annotations


class FeedLinkError(Exception):
    """Base class for every error raised by this package."""


# ----------------- input / geometry -----------------

class GeometryError(FeedLinkError, ValueError):
    """The polygon/point pair cannot be solved."""


class TooFewVertices(GeometryError):
    pass


class DegeneratePolygon(GeometryError):
    pass


class FocusOnBoundary(GeometryError):
    pass


class InputFormatError(FeedLinkError, ValueError):
    """A problem document could not be parsed."""


# ----------------- formula preconditions -----------------

class DivisionDegeneracy(FeedLinkError, ValueError):
    pass


class PreconditionViolated(FeedLinkError, ValueError):
    pass


class CoincidentPoints(FeedLinkError, ValueError):
    pass


# ----------------- sweep invariants -----------------

class SweepError(FeedLinkError, RuntimeError):
    """The event-driven sweep reached a state it cannot continue from."""


class NoEventFound(SweepError):
    pass


class EventBudgetExceeded(SweepError):
    pass


class TerminalStateMismatch(SweepError):
    pass
