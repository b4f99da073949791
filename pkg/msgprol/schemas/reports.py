from pydantic import BaseModel, Field, ConfigDict
from typing import List, Optional
import enum

from .training import PStrategyEnum, ScheduleEnum


class ParamRoleEnum(str, enum.Enum):
    weight = "weight"
    bias = "bias"


# --- train-msann outputs ---
class TrainSummary(BaseModel):
    final_mse: float
    initial_mse: float
    cost_to_tenth_initial_mse: Optional[float] = Field(None, description="null when E(t) never reached a tenth of E(0)")
    total_cost: float
    batches: int
    cycles: int
    levels: int
    gamma: int
    k: int
    schedule: ScheduleEnum
    p_strategy: PStrategyEnum
    seed: int

    model_config = ConfigDict(use_enum_values=True)


class CheckpointEntry(BaseModel):
    level: int = Field(..., ge=0)
    index: int = Field(..., ge=0, description="Position in the canonical W0, b0, W1, b1, ... order")
    shape: List[int]
    role: ParamRoleEnum
    file: str

    model_config = ConfigDict(use_enum_values=True)


class CheckpointManifest(BaseModel):
    layers: List[int]
    levels: int
    entries: List[CheckpointEntry] = []


# --- report outputs ---
class ComparisonRow(BaseModel):
    run: str
    kind: str = Field("run", description="run, default, best or worst")
    final_mse: float
    cost_to_tenth: Optional[float] = None
    ratio: Optional[float] = Field(None, description="default cost-to-tenth over this run's")
