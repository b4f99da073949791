from pydantic import BaseModel, Field, ConfigDict, model_validator
from typing import Optional, List, Tuple
import enum

# --- Enums ---
class GraphFamilyEnum(str, enum.Enum):
    path = "path"
    cycle = "cycle"
    grid_periodic = "grid-periodic"
    grid_aperiodic = "grid-aperiodic"
    custom = "custom"

class ProcessKindEnum(str, enum.Enum):
    laplacian = "laplacian"
    manhattan = "manhattan"

# Families whose members are box products of two 1D factors
GRID_FAMILIES = (GraphFamilyEnum.grid_periodic, GraphFamilyEnum.grid_aperiodic)


# --- Graph description used inside run configs ---
class GraphSpec(BaseModel):
    family: GraphFamilyEnum
    size: int = Field(..., ge=1, description="Vertex count for 1D families, side length for grids, vertex count for custom graphs")
    edges: Optional[List[Tuple[int, int]]] = Field(None, description="Edge list, only for family 'custom'")

    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    @model_validator(mode='after')
    def check_edges(self) -> 'GraphSpec':
        if self.family == GraphFamilyEnum.custom:
            if self.edges is None:
                raise ValueError("Custom graphs require an explicit edge list.")
            for u, v in self.edges:
                if not (0 <= u < self.size and 0 <= v < self.size):
                    raise ValueError(f"Edge ({u}, {v}) has a vertex outside [0, {self.size}).")
        elif self.edges is not None:
            raise ValueError("Edges may only be given for family 'custom'.")
        return self


# --- Lineage manifest written by the `lineage` command ---
class LineageMemberEntry(BaseModel):
    level: int
    size: int
    edge_count: int
    laplacian_file: str
    distance_file: str

class LineageManifest(BaseModel):
    family: GraphFamilyEnum
    depth: int
    base_size: int
    sizes: List[int]
    members: List[LineageMemberEntry] = []

    model_config = ConfigDict(use_enum_values=True)
