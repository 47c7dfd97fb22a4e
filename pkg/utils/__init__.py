from utils.response import (
    standard_response,
    success_response,
    error_response,
    exception_response
)

__all__ = [
    "standard_response",
    "success_response",
    "error_response",
    "exception_response"
]
