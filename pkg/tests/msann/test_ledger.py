import pytest
from fractions import Fraction

from msgprol.core.errors import ConstraintError, DataIOError, ParseError
from msgprol.msann.ledger import (
    CostLedger,
    batch_cost,
    cost_to_fraction,
    mse_at_cost,
    read_ledger_csv,
    write_ledger_csv,
)


def ledger_from(mses, levels=None, step=Fraction(10)) -> CostLedger:
    ledger = CostLedger()
    ledger.record_initial(mses[0])
    for i, mse in enumerate(mses[1:]):
        ledger.record(levels[i] if levels else 0, step, mse)
    return ledger


# --- Recording ---

def test_record_accumulates_cost():
    ledger = ledger_from([1.0, 0.8, 0.5], step=Fraction(5, 2))
    assert [s.cost for s in ledger.samples] == [0, Fraction(5, 2), 5]
    assert [s.t for s in ledger.samples] == [0, 1, 2]
    assert ledger.total == 5
    assert ledger.initial_mse == 1.0
    assert ledger.final_mse == 0.5

def test_initial_sample_only_once():
    ledger = ledger_from([1.0, 0.5])
    with pytest.raises(ConstraintError):
        ledger.record_initial(1.0)

def test_negative_increment_rejected():
    ledger = ledger_from([1.0])
    with pytest.raises(ConstraintError):
        ledger.record(0, Fraction(-1), 0.5)

def test_visit_levels_collapse_repeats():
    ledger = ledger_from([1.0] * 7, levels=[0, 0, 1, 1, 0, 0])
    assert ledger.batch_levels() == [0, 0, 1, 1, 0, 0]
    assert ledger.visit_levels() == [0, 1, 0]

def test_batch_cost_fine_level_is_batch_size():
    assert batch_cost(356, 356, 32) == 32

# --- Cost to a fraction of the initial error ---

def test_cost_to_fraction_first_crossing():
    ledger = ledger_from([1.0, 0.5, 0.1, 0.05])
    assert cost_to_fraction(ledger, 0.1) == 20

def test_cost_to_fraction_never_reached():
    assert cost_to_fraction(ledger_from([1.0, 0.5, 0.2]), 0.1) is None

def test_cost_to_fraction_empty_ledger():
    assert cost_to_fraction(CostLedger()) is None

# --- Error at a cost ---

def test_mse_at_cost_takes_last_sample_within_budget():
    ledger = ledger_from([1.0, 0.8, 0.5, 0.2])
    assert mse_at_cost(ledger, 0) == 1.0
    assert mse_at_cost(ledger, 19.5) == 0.8
    assert mse_at_cost(ledger, Fraction(20)) == 0.5
    assert mse_at_cost(ledger, 1000) == 0.2

def test_mse_at_cost_rejects_empty_ledger_and_negative_cost():
    with pytest.raises(ConstraintError):
        mse_at_cost(CostLedger(), 1)
    with pytest.raises(ConstraintError, match="nonnegative"):
        mse_at_cost(ledger_from([1.0, 0.5]), -1)

# --- CSV ---

def test_ledger_csv_round_trip(tmp_path):
    ledger = ledger_from([0.25, 0.125, 0.0625], levels=[1, 0], step=Fraction(5, 2))
    path = write_ledger_csv(ledger, tmp_path / "ledger.csv")
    assert path.read_text().splitlines()[0] == "t,level,cost,mse"
    loaded = read_ledger_csv(path)
    assert loaded.samples == ledger.samples

def test_read_ledger_bad_header(tmp_path):
    path = tmp_path / "ledger.csv"
    path.write_text("step,level,cost,mse\n0,0,0,1\n")
    with pytest.raises(ParseError, match="header"):
        read_ledger_csv(path)

def test_read_ledger_wrong_column_count(tmp_path):
    path = tmp_path / "ledger.csv"
    path.write_text("t,level,cost,mse\n0,0,0\n")
    with pytest.raises(ParseError, match="columns"):
        read_ledger_csv(path)

def test_read_ledger_decreasing_cost(tmp_path):
    path = tmp_path / "ledger.csv"
    path.write_text("t,level,cost,mse\n0,0,5,1\n1,0,4,0.5\n")
    with pytest.raises(ParseError, match="decreases"):
        read_ledger_csv(path)

def test_read_ledger_not_a_number(tmp_path):
    path = tmp_path / "ledger.csv"
    path.write_text("t,level,cost,mse\n0,0,zero,1\n")
    with pytest.raises(ParseError):
        read_ledger_csv(path)

def test_read_ledger_missing_file(tmp_path):
    with pytest.raises(DataIOError):
        read_ledger_csv(tmp_path / "absent.csv")
