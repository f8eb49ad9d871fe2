from __future__ import annotations

from typing import Any


class PseudoquandleError(ValueError):
    """Base class; subclasses ValueError so plain ``except ValueError`` still works."""


class InputError(PseudoquandleError):
    """Bad input: malformed spec, invalid table, cap exceeded, bad map."""


class ParseError(InputError):
    pass


class NotAGroup(InputError):
    def __init__(self, message: str, witness: tuple[Any, ...] | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class SizeLimit(InputError):
    pass


class NotNormal(InputError):
    pass


class BadParameter(InputError):
    pass


class BadMap(InputError):
    pass


class NotAbelian(InputError):
    pass


class NotAHomomorphism(InputError):
    def __init__(self, message: str, witness: tuple[int, int] | None = None) -> None:
        super().__init__(message)
        self.witness = witness


class NoChain(PseudoquandleError):
    """The ascending chain criterion fails, so the class equation does not apply."""


class TheoremViolation(PseudoquandleError):
    """A computed structure contradicts a stated classification."""
