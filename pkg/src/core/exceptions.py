"""Custom exception classes.

This module defines custom exceptions used throughout the application.
"""

from typing import Any, Dict, List, Optional


class BaseAppException(Exception):
    """Base exception class for the application.

    All custom exceptions should inherit from this class.
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message.
            details: Additional error details.
            cause: Underlying exception that caused this error.
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}
        self.cause = cause

    def __str__(self) -> str:
        """String representation of the exception."""
        return self.message

    def __repr__(self) -> str:
        """Detailed representation of the exception."""
        return f"{self.__class__.__name__}('{self.message}', details={self.details})"


class ConfigurationError(BaseAppException):
    """Raised when there's a configuration error."""
    pass


class ValidationError(BaseAppException):
    """Raised when data, a schema or a model specification is invalid.

    Attributes:
        violations: Individual violation messages, when more than one applies.
    """

    def __init__(
        self,
        message: str,
        violations: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message.
            violations: Individual violation messages.
            details: Additional error details.
            cause: Underlying exception that caused this error.
        """
        super().__init__(message, details, cause)
        self.violations = list(violations or [])


class DesignError(ValidationError):
    """Raised when a regression design cannot be constructed."""
    pass


class EstimationError(BaseAppException):
    """Raised when a nodewise regression or tuning step fails.

    Attributes:
        node: Index of the node whose regression failed, if known.
        estpoint: Index of the estimation point, for time-varying fits.
    """

    def __init__(
        self,
        message: str,
        node: Optional[int] = None,
        estpoint: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message.
            node: Index of the failing node.
            estpoint: Index of the failing estimation point.
            details: Additional error details.
            cause: Underlying exception that caused this error.
        """
        super().__init__(message, details, cause)
        self.node = node
        self.estpoint = estpoint

    def __str__(self) -> str:
        """Prefix the message with the failing node and estimation point."""
        where = []
        if self.estpoint is not None:
            where.append(f"estpoint {self.estpoint}")
        if self.node is not None:
            where.append(f"node {self.node}")
        if not where:
            return self.message
        return f"{', '.join(where)}: {self.message}"


class DegenerateResponseError(EstimationError):
    """Raised when a response is constant or carries no gradient signal."""
    pass


class SamplingError(BaseAppException):
    """Raised when a sampler detects a diverging chain."""
    pass


class SerializationError(BaseAppException):
    """Raised when a fit document cannot be parsed.

    Attributes:
        byte_offset: Position of the parse failure, if known.
    """

    def __init__(
        self,
        message: str,
        byte_offset: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ) -> None:
        """Initialize the exception.

        Args:
            message: Error message.
            byte_offset: Byte position of the failure in the document.
            details: Additional error details.
            cause: Underlying exception that caused this error.
        """
        super().__init__(message, details, cause)
        self.byte_offset = byte_offset


class SchemaVersionError(SerializationError):
    """Raised when a fit document was written under another schema version.

    Attributes:
        found: Version recorded in the document.
        expected: Version this build reads.
    """

    def __init__(self, found: str, expected: str) -> None:
        """Initialize the exception.

        Args:
            found: Version recorded in the document.
            expected: Version this build reads.
        """
        super().__init__(
            f"schema version mismatch: document has {found}, expected {expected}",
            details={"found": found, "expected": expected},
        )
        self.found = found
        self.expected = expected


class UsageError(BaseAppException):
    """Raised when command line flags are inconsistent."""
    pass
