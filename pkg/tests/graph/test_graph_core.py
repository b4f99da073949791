import pytest
import numpy as np

from msgprol.core.errors import ConfigurationError, DisconnectedGraphError, InvalidSizeError, ShapeError
from msgprol.graph.core import (
    Graph,
    GraphLineage,
    box_product,
    cross_product,
    graph_from_spec,
    is_connected,
    kron_product,
    kron_sum,
    laplacian,
    make_cycle,
    make_grid,
    make_lineage,
    make_path,
    manhattan,
)
from msgprol.schemas.graph import GraphSpec

# --- Constructors ---

def test_make_path_single_vertex():
    """P_1 has one vertex and no edges."""
    g = make_path(1)
    assert g.n == 1
    assert g.edge_count == 0

def test_make_path_edges():
    """P_3 connects consecutive vertices."""
    assert make_path(3).edges == ((0, 1), (1, 2))

def test_make_path_degrees():
    """P_4 has 3 edges and max degree 2."""
    g = make_path(4)
    assert g.edge_count == 3
    assert g.degrees().max() == 2

def test_make_path_zero_rejected():
    with pytest.raises(InvalidSizeError):
        make_path(0)

@pytest.mark.parametrize("n", [3, 4, 6])
def test_make_cycle_is_two_regular(n):
    """C_n has n edges and every vertex has degree 2."""
    g = make_cycle(n)
    assert g.n == n
    assert g.edge_count == n
    assert np.all(g.degrees() == 2)

@pytest.mark.parametrize("n", [1, 2])
def test_make_cycle_degenerate_sizes_rejected(n):
    with pytest.raises(InvalidSizeError, match="n >= 3"):
        make_cycle(n)

def test_graph_rejects_out_of_range_edge():
    with pytest.raises(InvalidSizeError, match="outside"):
        Graph(3, ((0, 3),))

def test_graph_normalizes_duplicate_edges():
    """Reversed duplicates collapse to one sorted pair."""
    g = Graph(3, ((1, 0), (0, 1), (2, 1)))
    assert g.edges == ((0, 1), (1, 2))

# --- Products ---

def test_box_product_of_two_edges_is_four_cycle():
    """P_2 box P_2 is C_4."""
    g = box_product(make_path(2), make_path(2))
    assert g.n == 4
    assert g.edge_count == 4
    assert np.all(g.degrees() == 2)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(laplacian(g).data)),
                               np.sort(np.linalg.eigvalsh(laplacian(make_cycle(4)).data)), atol=1e-12)

def test_box_product_with_single_vertex_is_identity():
    g = make_cycle(5)
    assert box_product(make_path(1), g) == g

def test_box_product_periodic_grid_is_four_regular():
    g = box_product(make_cycle(4), make_cycle(4))
    assert g.n == 16
    assert np.all(g.degrees() == 4)
    assert g == make_grid(4, periodic=True)

def test_cross_product_of_two_edges_is_perfect_matching():
    g = cross_product(make_path(2), make_path(2))
    assert g.n == 4
    assert g.edges == ((0, 3), (1, 2))

def test_cross_product_with_single_vertex_has_no_edges():
    g = cross_product(make_path(1), make_cycle(4))
    assert g.n == 4
    assert g.edge_count == 0

def test_cross_product_triangle_with_edge():
    g = cross_product(make_cycle(3), make_path(2))
    assert g.n == 6
    assert g.edge_count == 6

# --- Process matrices ---

def test_laplacian_of_small_paths():
    np.testing.assert_array_equal(laplacian(make_path(2)).data, [[-1, 1], [1, -1]])
    np.testing.assert_array_equal(laplacian(make_path(3)).data, [[-1, 1, 0], [1, -2, 1], [0, 1, -1]])

def test_laplacian_rows_sum_to_zero(cycle4):
    lap = laplacian(cycle4).data
    np.testing.assert_array_equal(lap.sum(axis=1), np.zeros(4))
    np.testing.assert_array_equal(lap, lap.T)
    assert np.all(np.diag(lap) <= 0)

def test_process_matrix_is_read_only(path3):
    lap = laplacian(path3)
    with pytest.raises(ValueError):
        lap.data[0, 0] = 5.0

def test_manhattan_of_path(path3):
    np.testing.assert_array_equal(manhattan(path3).data, [[0, 1, 2], [1, 0, 1], [2, 1, 0]])

def test_manhattan_antipodal_cycle_vertices():
    assert manhattan(make_cycle(4)).data[0, 2] == 2
    assert manhattan(make_cycle(6)).data[0, 3] == 3

def test_manhattan_triangle_inequality():
    t = manhattan(make_grid(3, periodic=False)).data
    n = t.shape[0]
    for k in range(n):
        assert np.all(t <= t[:, [k]] + t[[k], :])

def test_manhattan_disconnected_graph_raises():
    g = Graph(4, ((0, 1), (2, 3)))
    assert not is_connected(g)
    with pytest.raises(DisconnectedGraphError):
        manhattan(g)

@pytest.mark.parametrize("periodic", [False, True])
def test_manhattan_grid_counts_axis_steps(periodic):
    side = 6
    a, b = np.divmod(np.arange(side * side), side)
    dx, dy = np.abs(a[:, None] - a[None, :]), np.abs(b[:, None] - b[None, :])
    if periodic:
        dx, dy = np.minimum(dx, side - dx), np.minimum(dy, side - dy)
    np.testing.assert_array_equal(manhattan(make_grid(side, periodic=periodic)).data, dx + dy)

def test_manhattan_single_vertex():
    np.testing.assert_array_equal(manhattan(Graph(1, ())).data, [[0.0]])

# --- Kronecker algebra ---

def test_kron_product_identities():
    np.testing.assert_array_equal(kron_product(np.eye(2), np.eye(3)), np.eye(6))
    np.testing.assert_array_equal(kron_product([[0, 1], [1, 0]], [[2]]), [[0, 2], [2, 0]])

def test_kron_sum_matches_box_product_laplacian():
    """L(G1 box G2) = L1 (+) L2 under row-major vertex numbering."""
    for g1, g2 in [(make_path(2), make_path(2)), (make_cycle(3), make_path(4)), (make_path(3), make_cycle(5))]:
        np.testing.assert_array_equal(kron_sum(laplacian(g1), laplacian(g2)), laplacian(box_product(g1, g2)).data)

def test_kron_sum_rejects_non_square():
    with pytest.raises(ShapeError, match="square"):
        kron_sum(np.ones((2, 3)), np.eye(2))

# --- Lineages ---

@pytest.mark.parametrize("family, depth, base, sizes", [
    ("cycle", 3, 4, [4, 8, 16]),
    ("grid-periodic", 2, 4, [16, 64]),
    ("path", 4, 2, [2, 4, 8, 16]),
])
def test_make_lineage_sizes(family, depth, base, sizes):
    assert make_lineage(family, depth, base).sizes == sizes

def test_make_lineage_unknown_family():
    with pytest.raises(ConfigurationError, match="Unknown graph family"):
        make_lineage("hypercube", 2, 2)

def test_make_lineage_cycle_base_too_small():
    with pytest.raises(ConfigurationError, match="too small"):
        make_lineage("cycle", 2, 2)

def test_lineage_sizes_must_not_decrease():
    with pytest.raises(ConfigurationError, match="nondecreasing"):
        GraphLineage((make_path(4), make_path(2)))

def test_graph_from_spec_builds_each_family():
    assert graph_from_spec(GraphSpec(family="cycle", size=5)) == make_cycle(5)
    assert graph_from_spec(GraphSpec(family="grid-aperiodic", size=3)).n == 9
    custom = graph_from_spec(GraphSpec(family="custom", size=3, edges=[(0, 2)]))
    assert custom.edges == ((0, 2),)
