import pytest
import numpy as np

from msgprol.core.errors import ConfigurationError, ConstraintError, ShapeError
from msgprol.graph.prolongation import closed_form_local_1d, random_orthogonal
from msgprol.msann.operators import ProResChain, pro_bias, pro_weight, res_bias, res_weight, restrict_gradient


def random_chain(widths, rng) -> ProResChain:
    steps = []
    for level in range(1, len(widths)):
        steps.append([random_orthogonal(f, c, rng) for f, c in zip(widths[level - 1], widths[level])])
    return ProResChain(widths, steps)


# --- Weight operators ---

def test_pro_weight_identity_maps(rng):
    w = rng.normal(size=(4, 3))
    np.testing.assert_array_equal(pro_weight(w, np.eye(4), np.eye(3)), w)

def test_res_undoes_pro_for_weights(random_stiefel, rng):
    pin, pout = random_stiefel(8, 4), random_stiefel(6, 3)
    w = rng.normal(size=(4, 3))
    np.testing.assert_allclose(res_weight(pro_weight(w, pin, pout), pin, pout), w, atol=1e-12)

def test_pro_res_is_idempotent_for_weights(random_stiefel, rng):
    pin, pout = random_stiefel(8, 4), random_stiefel(6, 3)
    big = rng.normal(size=(8, 6))
    once = pro_weight(res_weight(big, pin, pout), pin, pout)
    twice = pro_weight(res_weight(once, pin, pout), pin, pout)
    np.testing.assert_allclose(twice, once, atol=1e-10)

def test_pro_weight_shape_mismatch(random_stiefel):
    with pytest.raises(ShapeError):
        pro_weight(np.zeros((3, 3)), random_stiefel(8, 4), random_stiefel(6, 3))

# --- Bias operators ---

def test_pro_bias_identity():
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(pro_bias(b, np.eye(3)), b)

def test_pro_bias_local_stencil():
    np.testing.assert_allclose(pro_bias(np.ones(4), closed_form_local_1d(4)), np.full(8, 1.0 / np.sqrt(2.0)))

def test_res_undoes_pro_for_biases(random_stiefel, rng):
    p = random_stiefel(9, 5)
    b = rng.normal(size=5)
    np.testing.assert_allclose(res_bias(pro_bias(b, p), p), b, atol=1e-12)

def test_res_bias_shape_mismatch(random_stiefel):
    with pytest.raises(ShapeError):
        res_bias(np.zeros(4), random_stiefel(9, 5))

# --- Chains ---

def test_chain_algebra_over_random_chains(rng):
    """Res after Pro is the identity and Pro after Res is a projection, at every level."""
    for _ in range(100):
        base = [int(w) for w in rng.integers(1, 4, size=3) * 4]
        widths = [base, [w // 2 for w in base], [w // 4 for w in base]]
        chain = random_chain(widths, rng)
        level = int(rng.integers(1, 3))
        j = int(rng.integers(0, 4))
        coarse_shape = (widths[level][j // 2], widths[level][j // 2 + 1]) if j % 2 == 0 else (widths[level][j // 2 + 1],)
        fine_shape = (widths[0][j // 2], widths[0][j // 2 + 1]) if j % 2 == 0 else (widths[0][j // 2 + 1],)
        v = rng.normal(size=coarse_shape)
        np.testing.assert_allclose(chain.res(chain.pro(v, level, j), level, j), v, atol=1e-10)
        g = rng.normal(size=fine_shape)
        once = chain.pro(chain.res(g, level, j), level, j)
        np.testing.assert_allclose(chain.pro(chain.res(once, level, j), level, j), once, atol=1e-10)

def test_chain_composites_match_step_products(rng):
    widths = [[8, 4], [4, 2], [2, 1]]
    chain = random_chain(widths, rng)
    np.testing.assert_allclose(chain.to_fine(2, 0), chain.step(1, 0) @ chain.step(2, 0), atol=1e-14)
    np.testing.assert_array_equal(chain.to_fine(0, 1), np.eye(4))

def test_chain_rejects_non_orthogonal_map():
    with pytest.raises(ConstraintError):
        ProResChain([[4], [2]], [[np.ones((4, 2))]])

def test_chain_rejects_wrong_map_shape():
    with pytest.raises(ConfigurationError, match="shape"):
        ProResChain([[4], [2]], [[np.eye(3, 2)]])

# --- Restricted gradients ---

def test_restrict_gradient_identity_chain(rng):
    chain = ProResChain([[3, 2]], [])
    g = rng.normal(size=(3, 2))
    np.testing.assert_array_equal(restrict_gradient(g, chain, 0, 0), g)

def test_restrict_gradient_is_linear(rng):
    chain = random_chain([[8, 6], [4, 3]], rng)
    g1, g2 = rng.normal(size=(8, 6)), rng.normal(size=(8, 6))
    lhs = restrict_gradient(2.0 * g1 - 3.0 * g2, chain, 1, 0)
    rhs = 2.0 * restrict_gradient(g1, chain, 1, 0) - 3.0 * restrict_gradient(g2, chain, 1, 0)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
