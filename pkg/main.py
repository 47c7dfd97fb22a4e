from typing import Optional

import typer

from core.config import settings
from core.logger import console, setup_logging

# Import commands
from commands import onecut, twocut, stokes, phase, zeros, sweep


# Initialize CLI app
app = typer.Typer(
    name=settings.APP_NAME,
    help="S-curves, equilibrium densities, phase diagrams and orthogonal-polynomial zeros for polynomial weights",
    no_args_is_help=True,
    add_completion=False,
)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    """
    Configure logging before any command runs
    """
    if log_level is not None:
        settings.LOG_LEVEL = log_level.upper()
    setup_logging()


# Register commands
app.command("onecut")(onecut.onecut)
app.command("twocut")(twocut.twocut)
app.command("stokes")(stokes.stokes)
app.command("phase")(phase.phase)
app.command("zeros")(zeros.zeros)
app.command("sweep")(sweep.sweep)


@app.command("version")
def version():
    """
    Print application and schema versions
    """
    console.print(f"{settings.APP_NAME} {settings.APP_VERSION} (schema {settings.SCHEMA_VERSION})")


if __name__ == "__main__":
    app()
