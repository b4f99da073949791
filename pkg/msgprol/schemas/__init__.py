from .graph import GraphFamilyEnum, GraphSpec, LineageManifest, LineageMemberEntry, ProcessKindEnum
from .prolongation import AlphaUpdateEnum, InitStrategyEnum, OptimizerConfig, ProblemConfig, ProvenanceEnum, SolveReport
from .training import GridModeEnum, LayerSpec, PStrategyEnum, ScheduleEnum, TaskKindEnum, TaskSpec, TrainConfig
from .data import SyntheticTaskSpec
from .reports import CheckpointEntry, CheckpointManifest, ComparisonRow, ParamRoleEnum, TrainSummary
from .config import RunConfig

__all__ = ["RunConfig", "ProblemConfig", "TrainConfig", "OptimizerConfig", "GraphSpec"]
