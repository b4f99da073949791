import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from openpyxl.workbook import Workbook
from openpyxl.worksheet.worksheet import Worksheet

from msgprol.core.errors import DataIOError
from msgprol.msann.ledger import CostLedger, cost_to_fraction
from msgprol.schemas.reports import ComparisonRow

# --- Configuration for report columns ---
HEADER_ROW = ["Run", "Kind", "Final MSE", "Cost to 1/10 MSE", "Default / Run Cost"]
COLUMN_MAP = {
    "Run": "run",
    "Kind": "kind",
    "Final MSE": "final_mse",
    "Cost to 1/10 MSE": "cost_to_tenth",
    "Default / Run Cost": "ratio",
}
FIELD_TO_HEADER = {v: k for k, v in COLUMN_MAP.items()}
MISSING = "N/A"


def is_default_run(ledger: CostLedger) -> bool:
    """Plain single-level training: every batch was taken at level 0."""
    levels = ledger.batch_levels()
    return bool(levels) and all(level == 0 for level in levels)


def _sort_cost(row: ComparisonRow) -> float:
    return row.cost_to_tenth if row.cost_to_tenth is not None else float("inf")


def build_comparison(ledgers: Mapping[str, CostLedger], fraction: float = 0.1) -> List[ComparisonRow]:
    """One row per run, then best/worst rows over the multiscale runs."""
    if not ledgers:
        raise ValueError("At least one ledger is required for a report.")

    default_name: Optional[str] = next((name for name, led in ledgers.items() if is_default_run(led)), None)
    default_cost = None
    if default_name is not None:
        reached = cost_to_fraction(ledgers[default_name], fraction)
        default_cost = float(reached) if reached is not None else None

    rows: List[ComparisonRow] = []
    for name, ledger in ledgers.items():
        reached = cost_to_fraction(ledger, fraction)
        cost = float(reached) if reached is not None else None
        ratio = default_cost / cost if default_cost is not None and cost else None
        rows.append(ComparisonRow(
            run=name,
            kind="default" if name == default_name else "run",
            final_mse=ledger.final_mse,
            cost_to_tenth=cost,
            ratio=ratio,
        ))

    others = [r for r in rows if r.kind == "run"]
    if others:
        best = min(others, key=_sort_cost)
        worst = max(others, key=_sort_cost)
        rows.append(best.model_copy(update={"kind": "best"}))
        rows.append(worst.model_copy(update={"kind": "worst"}))
    return rows


def _format_row_for_export(row: ComparisonRow) -> Dict[str, Any]:
    data = row.model_dump()
    return {header: (MISSING if data[field] is None else data[field]) for field, header in FIELD_TO_HEADER.items()}


def format_table(rows: List[ComparisonRow]) -> str:
    """Fixed-width text table for the terminal."""
    formatted = [[_cell(v) for v in (_format_row_for_export(r)[h] for h in HEADER_ROW)] for r in rows]
    widths = [max(len(h), *(len(line[i]) for line in formatted)) for i, h in enumerate(HEADER_ROW)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(HEADER_ROW, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(line, widths)) for line in formatted]
    return "\n".join(lines)


def _cell(value: Any) -> str:
    return f"{value:.6g}" if isinstance(value, float) else str(value)


def write_report_csv(rows: List[ComparisonRow], path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(HEADER_ROW)
            for row in rows:
                formatted = _format_row_for_export(row)
                writer.writerow([formatted[h] for h in HEADER_ROW])
    except OSError as e:
        raise DataIOError(f"Could not write report '{path}': {e}") from e
    return path


def generate_report_xlsx(rows: List[ComparisonRow]) -> bytes:
    """Comparison table as spreadsheet file content."""
    workbook = Workbook()
    sheet: Worksheet = workbook.active
    sheet.title = "Comparison"

    # Write Header
    sheet.append(HEADER_ROW)

    # Write Data Rows
    for row in rows:
        formatted = _format_row_for_export(row)
        sheet.append([formatted[h] for h in HEADER_ROW])

    file_stream = io.BytesIO()
    workbook.save(file_stream)
    file_stream.seek(0)
    return file_stream.read()
