import logging

from rich.console import Console
from rich.logging import RichHandler

from core.config import settings

console = Console(stderr=True)


def setup_logging(level: str | None = None) -> None:
    """
    Configure root logging with a rich handler on stderr

    Args:
        level: Explicit level name; defaults to LOG_LEVEL (DEBUG when DEBUG is set)
    """
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL

    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True, show_path=False)],
        force=True,
    )
