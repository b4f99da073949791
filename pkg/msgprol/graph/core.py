"""Graphs, graph lineages, process matrices and graph products.

Vertices of a product graph are flattened row-major: vertex (i, j) of
G1 x G2 is i * n2 + j, so that adjacency and Laplacian identities hold
exactly against ``numpy.kron``.
"""
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from msgprol.core.errors import (
    ConfigurationError,
    DisconnectedGraphError,
    InvalidSizeError,
    ShapeError,
)
from msgprol.schemas.graph import GraphFamilyEnum, GraphSpec, ProcessKindEnum, GRID_FAMILIES

Edge = Tuple[int, int]


# --- Domain types ---

@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSizeError(f"A graph needs at least one vertex, got n={self.n}.")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidSizeError(f"Edge ({u}, {v}) is outside [0, {self.n}).")
            if u == v and self.n != 1:
                # Only the single-vertex lineage root may carry a self-loop
                raise InvalidSizeError(f"Self-loop at vertex {u} is not allowed.")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return adjacency(self).sum(axis=1)


@dataclass(frozen=True)
class ProcessMatrix:
    kind: ProcessKindEnum
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=float)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class GraphLineage:
    members: Tuple[Graph, ...]
    family: GraphFamilyEnum = GraphFamilyEnum.custom

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ConfigurationError("A lineage needs at least one member.")
        sizes = [g.n for g in members]
        if any(b < a for a, b in zip(sizes, sizes[1:])):
            raise ConfigurationError(f"Lineage sizes must be nondecreasing, got {sizes}.")
        object.__setattr__(self, "members", members)

    @property
    def sizes(self) -> List[int]:
        return [g.n for g in self.members]

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, level: int) -> Graph:
        return self.members[level]


# --- Constructors ---

def make_path(n: int) -> Graph:
    """Path graph P_n with edges {i, i+1}."""
    if n < 1:
        raise InvalidSizeError(f"Path graphs need n >= 1, got {n}.")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def make_cycle(n: int) -> Graph:
    """Cycle graph C_n with edges {i, (i+1) mod n}."""
    if n < 3:
        raise InvalidSizeError(f"Cycle graphs need n >= 3, got {n}.")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def make_grid(side: int, periodic: bool = True) -> Graph:
    """side x side grid: box product of two cycles (periodic) or two paths."""
    factor = make_cycle(side) if periodic else make_path(side)
    return box_product(factor, factor)


def box_product(g1: Graph, g2: Graph) -> Graph:
    n2 = g2.n
    edges: List[Edge] = []
    for a, b in g1.edges:
        if a == b:
            continue
        for j in range(n2):
            edges.append((a * n2 + j, b * n2 + j))
    for c, d in g2.edges:
        if c == d:
            continue
        for i in range(g1.n):
            edges.append((i * n2 + c, i * n2 + d))
    return Graph(g1.n * n2, tuple(edges))


def cross_product(g1: Graph, g2: Graph) -> Graph:
    n2 = g2.n
    edges: List[Edge] = []
    for a, b in g1.edges:
        for c, d in g2.edges:
            if a == b or c == d:
                continue
            edges.append((a * n2 + c, b * n2 + d))
            edges.append((a * n2 + d, b * n2 + c))
    return Graph(g1.n * n2, tuple(edges))


# --- Process matrices ---

def adjacency(g: Graph) -> np.ndarray:
    """Symmetric {0,1} adjacency matrix; a root self-loop is not represented."""
    a = np.zeros((g.n, g.n))
    for u, v in g.edges:
        if u != v:
            a[u, v] = 1.0
            a[v, u] = 1.0
    return a


def laplacian(g: Graph) -> ProcessMatrix:
    """L = A - D (negative semidefinite, rows sum to zero)."""
    a = adjacency(g)
    return ProcessMatrix(ProcessKindEnum.laplacian, a - np.diag(a.sum(axis=1)))


def is_connected(g: Graph) -> bool:
    n_components, _ = scipy.sparse.csgraph.connected_components(
        scipy.sparse.csr_matrix(adjacency(g)), directed=False
    )
    return n_components == 1


def manhattan(g: Graph) -> ProcessMatrix:
    """All-pairs shortest-path edge counts.

    Breadth-first search from every source at once: row s of the frontier
    holds the vertices first reached from s at the current depth.
    """
    step = scipy.sparse.csr_matrix((adjacency(g) != 0).astype(float))
    dist = np.full((g.n, g.n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    frontier = scipy.sparse.identity(g.n, format="csr")
    depth = 0
    while frontier.nnz:
        depth += 1
        reached = (frontier @ step).tocoo()
        fresh = dist[reached.row, reached.col] < 0
        rows, cols = reached.row[fresh], reached.col[fresh]
        dist[rows, cols] = depth
        frontier = scipy.sparse.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(g.n, g.n))
    if np.any(dist < 0):
        raise DisconnectedGraphError(f"Graph on {g.n} vertices is disconnected; distances are infinite.")
    return ProcessMatrix(ProcessKindEnum.manhattan, dist.astype(float))


# --- Kronecker algebra ---

def _as_matrix(m: Union[np.ndarray, ProcessMatrix, Sequence]) -> np.ndarray:
    if isinstance(m, ProcessMatrix):
        return m.data
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2:
        raise ShapeError(f"Expected a 2D matrix, got shape {arr.shape}.")
    return arr


def kron_product(a, b) -> np.ndarray:
    return np.kron(_as_matrix(a), _as_matrix(b))


def kron_sum(a, b) -> np.ndarray:
    """a (+) b = a (x) I_b + I_a (x) b, for square a and b."""
    a, b = _as_matrix(a), _as_matrix(b)
    for name, m in (("a", a), ("b", b)):
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"kron_sum needs square inputs; {name} has shape {m.shape}.")
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


# --- Lineages ---

_MIN_BASE = {
    GraphFamilyEnum.path: 1,
    GraphFamilyEnum.cycle: 3,
    GraphFamilyEnum.grid_periodic: 3,
    GraphFamilyEnum.grid_aperiodic: 1,
}


def make_lineage(family: Union[GraphFamilyEnum, str], depth: int, base_size: int) -> GraphLineage:
    """Builds members of size base*2^l (1D) or (base*2^l)^2 (2D) for l < depth."""
    try:
        family = GraphFamilyEnum(family)
    except ValueError:
        valid = ", ".join(f.value for f in GraphFamilyEnum)
        raise ConfigurationError(f"Unknown graph family '{family}'. Must be one of: {valid}")
    if family == GraphFamilyEnum.custom:
        raise ConfigurationError("Custom lineages are assembled from explicit graphs, not generated.")
    if depth < 1:
        raise ConfigurationError(f"Lineage depth must be >= 1, got {depth}.")
    if base_size < _MIN_BASE[family]:
        raise ConfigurationError(
            f"Base size {base_size} is too small for family '{family.value}' (minimum {_MIN_BASE[family]})."
        )

    members: List[Graph] = []
    for level in range(depth):
        side = base_size * 2 ** level
        if family == GraphFamilyEnum.path:
            members.append(make_path(side))
        elif family == GraphFamilyEnum.cycle:
            members.append(make_cycle(side))
        else:
            members.append(make_grid(side, periodic=family == GraphFamilyEnum.grid_periodic))
    return GraphLineage(tuple(members), family)


def graph_from_edges(n: int, edges: Iterable[Edge]) -> Graph:
    return Graph(n, tuple(tuple(e) for e in edges))


def graph_from_spec(spec: GraphSpec) -> Graph:
    """Builds the graph a run config describes."""
    family = GraphFamilyEnum(spec.family)
    if family == GraphFamilyEnum.path:
        return make_path(spec.size)
    if family == GraphFamilyEnum.cycle:
        return make_cycle(spec.size)
    if family in GRID_FAMILIES:
        return make_grid(spec.size, periodic=family == GraphFamilyEnum.grid_periodic)
    return graph_from_edges(spec.size, spec.edges or ())
