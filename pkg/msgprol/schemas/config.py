from pydantic import BaseModel, Field, ConfigDict, model_validator
from typing import Optional

from .prolongation import ProblemConfig
from .training import TrainConfig


# --- Top-level run configuration (JSON file passed with --config) ---
class RunConfig(BaseModel):
    problem: Optional[ProblemConfig] = None
    training: Optional[TrainConfig] = None
    seed: Optional[int] = Field(None, ge=0, lt=2 ** 64, description="Overrides the section seed when set")
    output_dir: Optional[str] = Field(None, description="Defaults to settings.OUTPUT_DIR")

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def check_sections(self) -> 'RunConfig':
        if (self.problem is None) == (self.training is None):
            raise ValueError("A run config needs exactly one of the sections 'problem' or 'training'.")
        return self
