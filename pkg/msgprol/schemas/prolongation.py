from pydantic import BaseModel, Field, ConfigDict, model_validator
from typing import Optional
import enum

from .graph import GraphSpec

# --- Enums ---
class AlphaUpdateEnum(str, enum.Enum):
    fixed = "fixed"
    closed_form = "closed-form"

class ProvenanceEnum(str, enum.Enum):
    optimized = "optimized"
    matching_init = "matching-init"
    closed_form_local = "closed-form-local"
    closed_form_diffuse = "closed-form-diffuse"
    kronecker_composed = "kronecker-composed"

class InitStrategyEnum(str, enum.Enum):
    matching = "matching"              # m*(L1, L2) carried to graph space
    block_identity = "block-identity"  # [I; 0]
    random = "random"                  # orthonormalized Gaussian
    closed_form_local = "closed-form-local"


# --- Optimizer configuration ---
class OptimizerConfig(BaseModel):
    max_iters: int = Field(5000, ge=1, description="Iteration cap for Stiefel gradient descent")
    step_size: float = Field(1.0, gt=0, description="Initial step of every backtracking line search")
    tolerance: float = Field(1e-7, gt=0, description="Stop when the Riemannian gradient norm drops below this")
    alpha_update: AlphaUpdateEnum = AlphaUpdateEnum.fixed
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Seed for random initializations")
    armijo: float = Field(1e-4, gt=0, lt=1, description="Sufficient-decrease constant")
    min_step: float = Field(1e-20, gt=0, description="Line search gives up below this step")

    model_config = ConfigDict(extra="forbid")


# --- Prolongation problem as given in a run config ---
class ProblemConfig(BaseModel):
    g1: GraphSpec
    g2: GraphSpec
    s: float = Field(0.0, ge=0, le=1, description="Weight of the locality term")
    alpha: float = Field(1.0, gt=0)
    beta: Optional[float] = Field(None, gt=0, description="Defaults to n1/n2")
    init: InitStrategyEnum = InitStrategyEnum.matching
    optimizer: OptimizerConfig = OptimizerConfig()

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "g1": {"family": "cycle", "size": 4},
                "g2": {"family": "cycle", "size": 8},
                "s": 0.0,
                "alpha": 1.0,
                "init": "matching",
                "optimizer": {"max_iters": 5000, "tolerance": 1e-7},
            }
        },
    )


# --- Report written by `solve-prolongation` ---
class SolveReport(BaseModel):
    objective: float
    diffusion_term: float
    locality_term: float
    alpha: float
    beta: float
    s: float
    iters: int
    provenance: ProvenanceEnum
    initial_objective: float
    initial_diffusion_term: float
    initial_locality_term: float
    matching_cost: Optional[float] = None
    n1: int
    n2: int
    orthogonality_defect: float

    model_config = ConfigDict(use_enum_values=True)

    @model_validator(mode='after')
    def check_descent(self) -> 'SolveReport':
        if self.objective > self.initial_objective + 1e-12:
            raise ValueError("Final objective exceeds the initial objective.")
        return self
