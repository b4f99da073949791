from pydantic import AliasChoices, BaseModel, Field, ConfigDict, field_validator, model_validator
from typing import List, Literal, Optional
import enum


# --- Enums ---
class PStrategyEnum(str, enum.Enum):
    local_1d = "local-1d"
    local_2d = "local-2d"
    shuffled_1d = "shuffled-1d"
    shuffled_2d = "shuffled-2d"
    random_orthogonal = "random-orthogonal"
    optimized = "optimized"

class ScheduleEnum(str, enum.Enum):
    cycle = "cycle"                # recursive train / recurse / train
    simultaneous = "simultaneous"  # every level updated on every batch

class GridModeEnum(str, enum.Enum):
    one_d = "1d"   # widths halve per level
    two_d = "2d"   # widths quarter per level

class TaskKindEnum(str, enum.Enum):
    synthetic = "synthetic"
    mnist = "mnist"


# --- Network shape ---
class LayerSpec(BaseModel):
    sizes: List[int] = Field(..., min_length=2, description="Layer widths, input first")
    activation: Literal["sigmoid"] = "sigmoid"

    model_config = ConfigDict(extra="forbid")

    @field_validator('sizes')
    @classmethod
    def check_sizes(cls, v: List[int]) -> List[int]:
        if any(w < 1 for w in v):
            raise ValueError(f"Layer widths must be positive, got {v}.")
        if v[0] != v[-1]:
            raise ValueError(f"An autoencoder needs equal first and last widths, got {v[0]} and {v[-1]}.")
        return v


# --- Data source ---
class TaskSpec(BaseModel):
    kind: TaskKindEnum = TaskKindEnum.synthetic
    objects: int = Field(1, ge=1, le=2)
    object_length: Optional[int] = Field(None, ge=1)
    noise_p: float = Field(0.05, ge=0, le=1)
    images_file: str = Field("train-images-idx3-ubyte", description="IDX images file, relative to the data directory")
    pad_to_32: bool = Field(True, description="Zero-pad 28x28 images to 32x32")

    model_config = ConfigDict(extra="forbid")


# --- Training run ---
class TrainConfig(BaseModel):
    layers: LayerSpec
    task: TaskSpec = TaskSpec()
    levels: int = Field(0, ge=0, validation_alias=AliasChoices("levels", "L"), description="Max depth L")
    gamma: int = Field(1, ge=1, description="Recursion count (1 = V-cycle, 2 = W-cycle)")
    k: int = Field(4, ge=1, description="Batches per level visit")
    batch_size: int = Field(32, ge=1)
    learning_rate: float = Field(0.0005, gt=0)
    rmsprop_decay: float = Field(0.9, gt=0, lt=1)
    rmsprop_eps: float = Field(1e-8, gt=0)
    cycles: int = Field(10, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    p_strategy: PStrategyEnum = PStrategyEnum.local_1d
    grid_mode: GridModeEnum = GridModeEnum.one_d
    schedule: ScheduleEnum = ScheduleEnum.cycle
    optimized_s: float = Field(0.5, ge=0, le=1, description="Locality weight for the 'optimized' P strategy")
    validation_size: int = Field(256, ge=1, description="Rows in the fixed batch E(t) is measured on")
    checkpoint: bool = True

    model_config = ConfigDict(
        extra="forbid",
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "layers": {"sizes": [256, 64, 32, 64, 256]},
                "task": {"kind": "synthetic", "objects": 1, "noise_p": 0.05},
                "levels": 3,
                "gamma": 2,
                "k": 4,
                "batch_size": 32,
                "learning_rate": 0.0005,
                "cycles": 50,
                "p_strategy": "local-1d",
            }
        },
    )

    @model_validator(mode='after')
    def check_strategy(self) -> 'TrainConfig':
        if self.p_strategy in (PStrategyEnum.local_2d, PStrategyEnum.shuffled_2d) and self.grid_mode != GridModeEnum.two_d:
            raise ValueError(f"P strategy '{self.p_strategy.value}' needs grid_mode '2d'.")
        if self.p_strategy in (PStrategyEnum.local_1d, PStrategyEnum.shuffled_1d) and self.grid_mode != GridModeEnum.one_d:
            raise ValueError(f"P strategy '{self.p_strategy.value}' needs grid_mode '1d'.")
        return self
