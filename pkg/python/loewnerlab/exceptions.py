#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Error types raised across the loewnerlab package.

Every error derives from ValueError so code that catches ValueError around
an analysis call keeps working.
"""

from typing import Optional


class LoewnerLabError(ValueError):
    """Base class for all loewnerlab errors."""


class InvalidArgumentError(LoewnerLabError):
    """An argument is outside the accepted range."""


class InvalidGridError(LoewnerLabError):
    """A capacity grid is not strictly increasing from 0."""


class DomainError(LoewnerLabError):
    """A point was swallowed by the hull during map composition."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class BoundaryEvaluationError(LoewnerLabError):
    """An inverse step was evaluated on its branch cut."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class MissingTraceError(LoewnerLabError):
    """The evolution was solved without trace extraction."""


class NotASimpleSlitError(LoewnerLabError):
    """A curve vertex sits at or below the real axis after the start."""


class DegenerateStepError(LoewnerLabError):
    """A fitted slit step has nonpositive capacity."""


class InvalidDomainError(LoewnerLabError):
    """H minus the hull is not connected at the working resolution."""


class ResolutionError(LoewnerLabError):
    """The requested geometry is not resolved by the grid or complex."""


class DisconnectedError(LoewnerLabError):
    """Two points could not be connected inside the domain."""


class InvalidCurveError(LoewnerLabError):
    """A curve leaves the domain it is supposed to live in."""
