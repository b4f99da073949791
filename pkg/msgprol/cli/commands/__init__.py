from .lineage import lineage
from .solve import solve_prolongation
from .train import train_msann
from .report import report

__all__ = ["lineage", "solve_prolongation", "train_msann", "report"]
