"""
Standard Result Envelope Utilities
Provides a consistent output format across all commands
"""
from typing import Any, Dict, Optional

from core.exceptions import SCurveError


def standard_response(
    status: str,
    message: str,
    data: Any = None,
    metadata: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """
    Create standard result envelope

    Args:
        status: "success" or "error"
        message: Description of the command result
        data: Result payload (dict, list, or None)
        metadata: Run metadata (versions, config hash, conventions)

    Returns:
        Envelope dictionary, metadata first when present
    """
    envelope: Dict[str, Any] = {}
    if metadata is not None:
        envelope["metadata"] = metadata
    envelope.update({
        "status": status,
        "message": message,
        "data": data
    })
    return envelope


def success_response(message: str, data: Any = None, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Create success envelope

    Args:
        message: Success message
        data: Result payload
        metadata: Run metadata

    Returns:
        Success envelope
    """
    return standard_response("success", message, data, metadata)


def error_response(message: str, data: Any = None, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Create error envelope

    Args:
        message: Error message
        data: Additional error data (code, context)
        metadata: Run metadata

    Returns:
        Error envelope
    """
    return standard_response("error", message, data, metadata)


def exception_response(exc: SCurveError, metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Error envelope carrying the stable code and context of a numerical failure"""
    return error_response(exc.detail, {"code": exc.code, "context": exc.context}, metadata)
