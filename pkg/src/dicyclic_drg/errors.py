from __future__ import annotations


class DicyclicError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpecError(DicyclicError, ValueError):
    pass


class ConstructionError(DicyclicError, ValueError):
    pass


class ConnectionSetError(DicyclicError, ValueError):
    def __init__(self, message: str, offending=None):
        super().__init__(message)
        self.offending = offending


class CapExceededError(DicyclicError, ValueError):
    pass


class ContractViolation(DicyclicError, ValueError):
    pass


class ParseError(DicyclicError, ValueError):
    def __init__(self, text: str, position: int, expected: str):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"parse error at position {position} in {text!r}: expected {expected}")
