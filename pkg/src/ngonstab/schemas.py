"""Shared input-validation error type for the JSON interfaces.

SchemaError deliberately does not subclass ValueError: the command line
maps schema problems (malformed input, exit code 2) and domain problems
(valid input that violates a mathematical precondition, exit code 1) to
different exit codes, so the two exception families must stay disjoint.
"""

from __future__ import annotations

__all__ = ["SchemaError"]


class SchemaError(Exception):
    """Raised when a JSON value does not match the expected shape."""
