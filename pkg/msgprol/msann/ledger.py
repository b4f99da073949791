"""Training cost ledger.

A batch of size b trained at level k costs (|M_k| / |M_0|) * b. Costs are
kept as exact fractions so totals can be compared against the closed-form
schedule cost with ``==``.
"""
import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

from msgprol.core.config import settings
from msgprol.core.errors import ConstraintError, DataIOError, ParseError

LEDGER_HEADER = ["t", "level", "cost", "mse"]


@dataclass(frozen=True)
class LedgerSample:
    t: int
    level: int
    cost: Fraction
    mse: float


@dataclass
class CostLedger:
    samples: List[LedgerSample] = field(default_factory=list)

    def record_initial(self, mse: float, level: int = 0) -> None:
        if self.samples:
            raise ConstraintError("The initial sample must be recorded before any batch.")
        self.samples.append(LedgerSample(0, level, Fraction(0), float(mse)))

    def record(self, level: int, increment: Fraction, mse: float) -> LedgerSample:
        if increment < 0:
            raise ConstraintError(f"Cost increments must be nonnegative, got {increment}.")
        sample = LedgerSample(self.next_step, level, self.total + increment, float(mse))
        self.samples.append(sample)
        return sample

    @property
    def next_step(self) -> int:
        return self.samples[-1].t + 1 if self.samples else 1

    @property
    def total(self) -> Fraction:
        return self.samples[-1].cost if self.samples else Fraction(0)

    @property
    def initial_mse(self) -> Optional[float]:
        return self.samples[0].mse if self.samples else None

    @property
    def final_mse(self) -> Optional[float]:
        return self.samples[-1].mse if self.samples else None

    def batch_levels(self) -> List[int]:
        return [s.level for s in self.samples if s.t > 0]

    def visit_levels(self) -> List[int]:
        """Batch levels with consecutive repeats collapsed."""
        visits: List[int] = []
        for level in self.batch_levels():
            if not visits or visits[-1] != level:
                visits.append(level)
        return visits


def batch_cost(level_size: int, fine_size: int, batch_size: int) -> Fraction:
    return Fraction(level_size, fine_size) * batch_size


def cost_to_fraction(ledger: CostLedger, fraction: float = 0.1) -> Optional[Fraction]:
    """First C(t) with E(t) <= fraction * E(0), or None if never reached."""
    if not ledger.samples:
        return None
    threshold = fraction * ledger.samples[0].mse
    for sample in ledger.samples[1:]:
        if sample.mse <= threshold:
            return sample.cost
    return None


def mse_at_cost(ledger: CostLedger, cost: Union[Fraction, float]) -> float:
    """E(t) of the last sample with C(t) <= cost."""
    if not ledger.samples:
        raise ConstraintError("An empty ledger has no error at any cost.")
    cost = Fraction(cost)
    if cost < 0:
        raise ConstraintError(f"Cost must be nonnegative, got {cost}.")
    mse = ledger.samples[0].mse
    for sample in ledger.samples[1:]:
        if sample.cost > cost:
            break
        mse = sample.mse
    return mse


# --- CSV ---

def _fmt(value: float) -> str:
    return f"{float(value):.{settings.CSV_SIGNIFICANT_DIGITS}g}"


def write_ledger_csv(ledger: CostLedger, path: Union[str, Path]) -> Path:
    if not str(path):
        raise DataIOError("Ledger path is empty.")
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(LEDGER_HEADER)
            for s in ledger.samples:
                writer.writerow([s.t, s.level, _fmt(s.cost), _fmt(s.mse)])
    except OSError as e:
        raise DataIOError(f"Could not write ledger '{path}': {e}") from e
    return path


def read_ledger_csv(path: Union[str, Path]) -> CostLedger:
    """Parses a ledger CSV; costs come back as exact fractions of their printed floats."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise DataIOError(f"Could not read ledger '{path}': {e}") from e
    if not rows or [c.strip() for c in rows[0]] != LEDGER_HEADER:
        raise ParseError(f"Ledger '{path}' must start with the header {','.join(LEDGER_HEADER)}.")

    ledger = CostLedger()
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(LEDGER_HEADER):
            raise ParseError(f"Ledger '{path}' line {line_no}: expected 4 columns, got {len(row)}.")
        try:
            sample = LedgerSample(int(row[0]), int(row[1]), Fraction(float(row[2])), float(row[3]))
        except ValueError as e:
            raise ParseError(f"Ledger '{path}' line {line_no}: {e}") from e
        if ledger.samples and sample.cost < ledger.samples[-1].cost:
            raise ParseError(f"Ledger '{path}' line {line_no}: cost decreases.")
        ledger.samples.append(sample)
    if not ledger.samples:
        raise ParseError(f"Ledger '{path}' has no samples.")
    return ledger
