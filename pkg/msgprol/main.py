import logging
from typing import Optional

import click
from pydantic import ValidationError

from msgprol import __version__
from msgprol.cli.commands import lineage, report, solve_prolongation, train_msann
from msgprol.core.config import settings
from msgprol.core.errors import EXIT_CONFIG, MsgprolError
from msgprol.core.logging import kv, setup_logging

logger = logging.getLogger(__name__)


# --- Error handling ---
def _fail(exc: Exception, exit_code: int) -> None:
    logger.error(kv(event="command.failed", error=type(exc).__name__, exit_code=exit_code))
    click.echo(f"Error: {exc}", err=True)
    raise click.exceptions.Exit(exit_code)


class MsgprolGroup(click.Group):
    """Maps library errors escaping a subcommand to process exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except MsgprolError as e:
            _fail(e, e.exit_code)
        except ValidationError as e:
            _fail(e, EXIT_CONFIG)


@click.group(cls=MsgprolGroup)
@click.version_option(__version__, prog_name=settings.PROJECT_NAME)
@click.option("--log-level", default=None, help="Overrides MSGPROL_LOG_LEVEL.")
def cli(log_level: Optional[str]):
    """Optimal prolongation maps between graphs and multiscale autoencoder training."""
    setup_logging(log_level)


cli.add_command(lineage)
cli.add_command(solve_prolongation)
cli.add_command(train_msann)
cli.add_command(report)


def run() -> None:
    cli(prog_name="msgprol")


if __name__ == "__main__":
    run()
