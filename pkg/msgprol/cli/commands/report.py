import logging
from pathlib import Path
from typing import Optional, Tuple

import click

from msgprol.cli import deps
from msgprol.core.errors import DataIOError
from msgprol.core.logging import kv
from msgprol.msann.ledger import read_ledger_csv
from msgprol.utils.report_export import build_comparison, format_table, generate_report_xlsx, write_report_csv

logger = logging.getLogger(__name__)


@click.command("report")
@click.argument("ledgers", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option("--out", "out", type=click.Path(file_okay=False), default=None, help="Output directory.")
@click.option("--xlsx", is_flag=True, default=False, help="Also write report.xlsx.")
def report(ledgers: Tuple[str, ...], out: Optional[str], xlsx: bool):
    """Compare final MSE and cost to 1/10 of the initial MSE across runs."""
    runs = {}
    for path in map(Path, ledgers):
        # runs written by train-msann are all named ledger.csv; use their directory
        name = path.stem
        if name == "ledger" and path.parent.name:
            name = path.parent.name
        if name in runs:
            name = str(path)
        runs[name] = read_ledger_csv(path)

    rows = build_comparison(runs)
    out_dir = deps.get_output_dir(out)
    write_report_csv(rows, out_dir / "report.csv")
    if xlsx:
        target = out_dir / "report.xlsx"
        try:
            target.write_bytes(generate_report_xlsx(rows))
        except OSError as e:
            raise DataIOError(f"Could not write '{target}': {e}") from e
    logger.info(kv(event="report.done", runs=len(runs), out=out_dir))
    click.echo(format_table(rows))
