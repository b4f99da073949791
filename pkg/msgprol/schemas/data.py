from pydantic import BaseModel, Field, ConfigDict, model_validator
from typing import Optional


# --- Synthetic denoising task ---
class SyntheticTaskSpec(BaseModel):
    width: int = Field(..., ge=2, description="Vector length, a power of two")
    objects: int = Field(1, ge=1, le=2, description="Number of contiguous objects per vector")
    object_length: Optional[int] = Field(None, ge=1, description="Defaults to width / 8")
    noise_p: float = Field(0.05, ge=0, le=1, description="Probability that a pixel fires spuriously in the input copy")
    seed: int = Field(0, ge=0)

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={"example": {"width": 256, "objects": 1, "noise_p": 0.05, "seed": 0}},
    )

    @model_validator(mode='after')
    def check_width(self) -> 'SyntheticTaskSpec':
        if self.width & (self.width - 1):
            raise ValueError(f"width must be a power of two, got {self.width}.")
        if self.object_length is None:
            self.object_length = max(1, self.width // 8)
        if self.object_length > self.width:
            raise ValueError(f"object_length {self.object_length} exceeds width {self.width}.")
        return self
