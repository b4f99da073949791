"""Prolongation maps between graphs.

The objective for an n2 x n1 map P with orthonormal columns is

    E(P) = (1 - s) ||P L1 / sqrt(a) - sqrt(a) L2 P||_F^2      (diffusion)
         +      s  ||P T1 / sqrt(b) - sqrt(b) T2 P||_F^2      (locality)

with L the Laplacians and T the Manhattan distance matrices. It is
minimized over the Stiefel manifold by gradient descent with a QR
retraction and a backtracking (Armijo) line search.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from msgprol.core.config import settings
from msgprol.core.errors import (
    CompositionError,
    ConfigurationError,
    ConstraintError,
    DegenerateScaleError,
    DisconnectedGraphError,
    DomainError,
    NumericalFailureError,
    ShapeError,
)
from msgprol.core.logging import kv
from msgprol.graph.core import Graph, box_product, laplacian, manhattan
from msgprol.graph.spectral import (
    EigenMatching,
    cycle_spectrum,
    eigendecompose,
    match_munkres,
    matching_to_graph_space,
    zero_cost_cycle_map,
)
from msgprol.schemas.prolongation import (
    AlphaUpdateEnum,
    InitStrategyEnum,
    OptimizerConfig,
    ProvenanceEnum,
)

logger = logging.getLogger(__name__)


# --- Domain types ---

@dataclass
class ProlongationProblem:
    g1: Graph
    g2: Graph
    s: float = 0.0
    alpha: float = 1.0
    beta: Optional[float] = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.g1.n > self.g2.n:
            raise ConfigurationError(f"Prolongation needs n1 <= n2, got n1={self.g1.n}, n2={self.g2.n}.")
        if not 0.0 <= self.s <= 1.0:
            raise DomainError(f"s must lie in [0, 1], got {self.s}.")
        if self.beta is None:
            self.beta = self.g1.n / self.g2.n
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}.")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}.")

    @property
    def n1(self) -> int:
        return self.g1.n

    @property
    def n2(self) -> int:
        return self.g2.n

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.g2.n, self.g1.n)

    def _matrix(self, key: str) -> np.ndarray:
        if key not in self._cache:
            graph = self.g1 if key.endswith("1") else self.g2
            builder = laplacian if key.startswith("L") else manhattan
            self._cache[key] = builder(graph).data
        return self._cache[key]

    @property
    def L1(self) -> np.ndarray:
        return self._matrix("L1")

    @property
    def L2(self) -> np.ndarray:
        return self._matrix("L2")

    @property
    def T1(self) -> np.ndarray:
        return self._matrix("T1")

    @property
    def T2(self) -> np.ndarray:
        return self._matrix("T2")


@dataclass
class ProlongationMap:
    p: np.ndarray = field(repr=False)
    provenance: ProvenanceEnum
    objective_value: float
    alpha: float = 1.0
    beta: float = 1.0
    s: float = 0.0
    iters: int = 0
    problem: Optional[ProlongationProblem] = field(default=None, repr=False)
    history: List[float] = field(default_factory=list, repr=False)
    bound: Optional[float] = None

    def __post_init__(self):
        defect = orthogonality_defect(self.p)
        if defect >= settings.ORTHOGONALITY_TOL:
            raise ConstraintError(f"Prolongation map is not orthogonal (||P^T P - I||_F = {defect:.3e}).")


@dataclass
class SolveResult:
    """Outcome of the full pipeline: spectra -> matching -> graph space -> optimize."""
    map: ProlongationMap
    initial_p: np.ndarray = field(repr=False)
    initial_objective: float
    initial_terms: Tuple[float, float]
    final_terms: Tuple[float, float]
    matching: Optional[EigenMatching] = None


# --- Objective ---

def _check_shape(p: np.ndarray, prob: ProlongationProblem) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != prob.shape:
        raise ShapeError(f"P has shape {p.shape}, problem needs {prob.shape}.")
    return p


def _residual(p: np.ndarray, m1: np.ndarray, m2: np.ndarray, scale: float) -> np.ndarray:
    root = np.sqrt(scale)
    return p @ m1 / root - root * (m2 @ p)


def _term_gradient(residual: np.ndarray, m1: np.ndarray, m2: np.ndarray, scale: float) -> np.ndarray:
    root = np.sqrt(scale)
    return 2.0 * (residual @ m1.T / root - root * (m2.T @ residual))


def orthogonality_defect(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    return float(np.linalg.norm(p.T @ p - np.eye(p.shape[1])))


def objective_terms(p: np.ndarray, prob: ProlongationProblem,
                    alpha: Optional[float] = None, beta: Optional[float] = None) -> Tuple[float, float]:
    """Unweighted (diffusion, locality) squared terms; locality is skipped when s == 0."""
    p = _check_shape(p, prob)
    alpha = prob.alpha if alpha is None else alpha
    beta = prob.beta if beta is None else beta
    diffusion = float(np.sum(_residual(p, prob.L1, prob.L2, alpha) ** 2)) if prob.s < 1.0 else 0.0
    locality = float(np.sum(_residual(p, prob.T1, prob.T2, beta) ** 2)) if prob.s > 0.0 else 0.0
    return diffusion, locality


def full_terms(p: np.ndarray, prob: ProlongationProblem,
               alpha: Optional[float] = None, beta: Optional[float] = None) -> Tuple[float, float]:
    """Both squared terms regardless of s (for reporting); locality is nan on disconnected graphs."""
    p = _check_shape(p, prob)
    alpha = prob.alpha if alpha is None else alpha
    beta = prob.beta if beta is None else beta
    diffusion = float(np.sum(_residual(p, prob.L1, prob.L2, alpha) ** 2))
    try:
        locality = float(np.sum(_residual(p, prob.T1, prob.T2, beta) ** 2))
    except DisconnectedGraphError:
        locality = float("nan")
    return diffusion, locality


def objective(p: np.ndarray, prob: ProlongationProblem) -> float:
    diffusion, locality = objective_terms(p, prob)
    return (1.0 - prob.s) * diffusion + prob.s * locality


def diffusion_distance(p: np.ndarray, g1: Graph, g2: Graph, alpha: float = 1.0) -> float:
    """D_{P,alpha}(G1, G2), the unsquared diffusion term."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}.")
    p = np.asarray(p, dtype=float)
    if p.shape != (g2.n, g1.n):
        raise ShapeError(f"P has shape {p.shape}, graphs need {(g2.n, g1.n)}.")
    return float(np.linalg.norm(_residual(p, laplacian(g1).data, laplacian(g2).data, alpha)))


def objective_gradient(p: np.ndarray, prob: ProlongationProblem,
                       alpha: Optional[float] = None, beta: Optional[float] = None) -> np.ndarray:
    """Euclidean gradient dE/dP."""
    p = _check_shape(p, prob)
    alpha = prob.alpha if alpha is None else alpha
    beta = prob.beta if beta is None else beta
    grad = np.zeros_like(p)
    if prob.s < 1.0:
        r = _residual(p, prob.L1, prob.L2, alpha)
        grad += (1.0 - prob.s) * _term_gradient(r, prob.L1, prob.L2, alpha)
    if prob.s > 0.0:
        r = _residual(p, prob.T1, prob.T2, beta)
        grad += prob.s * _term_gradient(r, prob.T1, prob.T2, beta)
    return grad


def _closed_form_scale(p: np.ndarray, m1: np.ndarray, m2: np.ndarray, what: str) -> float:
    numerator = float(np.linalg.norm(p @ m1))
    denominator = float(np.linalg.norm(m2 @ p))
    if denominator == 0.0 or numerator == 0.0:
        raise DegenerateScaleError(f"Closed-form {what} is undefined (||M1-side|| = {numerator}, ||M2-side|| = {denominator}).")
    return numerator / denominator


def optimal_alpha(p: np.ndarray, g1: Graph, g2: Graph) -> float:
    """argmin over alpha of D_{P,alpha}: ||P L1||_F / ||L2 P||_F."""
    return _closed_form_scale(np.asarray(p, dtype=float), laplacian(g1).data, laplacian(g2).data, "alpha")


def optimal_beta(p: np.ndarray, g1: Graph, g2: Graph) -> float:
    """Locality-term analogue of optimal_alpha: ||P T1||_F / ||T2 P||_F."""
    return _closed_form_scale(np.asarray(p, dtype=float), manhattan(g1).data, manhattan(g2).data, "beta")


# --- Manifold helpers ---

def qr_retraction(y: np.ndarray) -> np.ndarray:
    """Thin QR with R's diagonal made positive; returns the Q factor."""
    q, r = scipy.linalg.qr(y, mode="economic")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs[None, :]


def riemannian_gradient(p: np.ndarray, egrad: np.ndarray) -> np.ndarray:
    """Projection of the Euclidean gradient onto the tangent space at P."""
    sym = p.T @ egrad
    return egrad - p @ (0.5 * (sym + sym.T))


def random_orthogonal(n2: int, n1: int, rng: np.random.Generator) -> np.ndarray:
    if n1 > n2:
        raise ShapeError(f"Stiefel matrices need n1 <= n2, got {n2}x{n1}.")
    return qr_retraction(rng.standard_normal((n2, n1)))


def block_identity(n2: int, n1: int) -> np.ndarray:
    """[I; 0], the trivial orthogonal embedding."""
    return np.eye(n2, n1)


# --- Closed-form families ---

def closed_form_local_1d(n1: int) -> np.ndarray:
    """Pair aggregation: P[2j, j] = P[2j+1, j] = 1/sqrt(2)."""
    if n1 < 1:
        raise ShapeError(f"n1 must be >= 1, got {n1}.")
    p = np.zeros((2 * n1, n1))
    cols = np.arange(n1)
    p[2 * cols, cols] = 1.0 / np.sqrt(2.0)
    p[2 * cols + 1, cols] = 1.0 / np.sqrt(2.0)
    return p


def closed_form_2d(n1: int) -> np.ndarray:
    """Local map between n1 x n1 and 2n1 x 2n1 periodic grids."""
    local = closed_form_local_1d(n1)
    return np.kron(local, local)


def closed_form_diffuse_cycle(n: int) -> np.ndarray:
    """Zero-diffusion map C_n -> C_2n: index doubling carried to graph space."""
    return matching_to_graph_space(zero_cost_cycle_map(n), cycle_spectrum(n), cycle_spectrum(2 * n))


def as_map(p: np.ndarray, prob: ProlongationProblem, provenance: ProvenanceEnum, **fields) -> ProlongationMap:
    """Wraps P as a map of ``prob``; ``fields`` override the problem's scales and objective."""
    values = dict(alpha=prob.alpha, beta=prob.beta, s=prob.s)
    values.update(fields)
    if "objective_value" not in values:
        values["objective_value"] = _value(p, prob, values["alpha"], values["beta"])
    return ProlongationMap(p=np.asarray(p, dtype=float), provenance=ProvenanceEnum(provenance), problem=prob, **values)


# --- Optimization ---

def _value(p: np.ndarray, prob: ProlongationProblem, alpha: float, beta: float) -> float:
    diffusion, locality = objective_terms(p, prob, alpha, beta)
    return (1.0 - prob.s) * diffusion + prob.s * locality


def _update_scales(p: np.ndarray, prob: ProlongationProblem, alpha: float, beta: float) -> Tuple[float, float]:
    try:
        if prob.s < 1.0:
            alpha = _closed_form_scale(p, prob.L1, prob.L2, "alpha")
        if prob.s > 0.0:
            beta = _closed_form_scale(p, prob.T1, prob.T2, "beta")
    except DegenerateScaleError:
        logger.debug(kv(event="optimize.scale_update_skipped"))
    return alpha, beta


def optimize(prob: ProlongationProblem, init: np.ndarray, cfg: Optional[OptimizerConfig] = None,
             provenance: ProvenanceEnum = ProvenanceEnum.optimized) -> ProlongationMap:
    """Minimizes E(P) over the Stiefel manifold starting from ``init``."""
    cfg = cfg or OptimizerConfig()
    p = _check_shape(np.array(init, dtype=float), prob)
    defect = orthogonality_defect(p)
    if defect >= settings.INIT_ORTHOGONALITY_TOL:
        raise ConstraintError(f"Initial P is not orthogonal (||P^T P - I||_F = {defect:.3e}).")
    if defect >= settings.ORTHOGONALITY_TOL:
        p = qr_retraction(p)

    alpha, beta = prob.alpha, prob.beta
    f = _value(p, prob, alpha, beta)
    if not np.isfinite(f):
        raise NumericalFailureError(f"Objective is not finite at the initial point ({f}).")
    history = [f]
    iters = 0

    for it in range(cfg.max_iters):
        rgrad = riemannian_gradient(p, objective_gradient(p, prob, alpha, beta))
        gnorm = float(np.linalg.norm(rgrad))
        if gnorm < cfg.tolerance:
            break

        step = cfg.step_size
        candidate, f_candidate = None, None
        while step >= cfg.min_step:
            trial = qr_retraction(p - step * rgrad)
            f_trial = _value(trial, prob, alpha, beta)
            if not np.isfinite(f_trial):
                raise NumericalFailureError(f"Objective became non-finite at iteration {it} (step {step:.3e}).")
            if f_trial <= f - cfg.armijo * step * gnorm ** 2:
                candidate, f_candidate = trial, f_trial
                break
            step *= 0.5
        if candidate is None:
            logger.debug(kv(event="optimize.line_search_stalled", iter=it, grad_norm=gnorm))
            break

        p, f = candidate, f_candidate
        if cfg.alpha_update == AlphaUpdateEnum.closed_form:
            new_alpha, new_beta = _update_scales(p, prob, alpha, beta)
            f_scaled = _value(p, prob, new_alpha, new_beta)
            if f_scaled <= f:
                alpha, beta, f = new_alpha, new_beta, f_scaled
        history.append(f)
        iters = it + 1
        logger.debug(kv(event="optimize.step", iter=iters, objective=f, grad_norm=gnorm, step=step))

    if orthogonality_defect(p) >= settings.ORTHOGONALITY_TOL:
        raise ConstraintError("Optimizer iterate left the Stiefel manifold.")

    logger.info(kv(event="optimize.done", n1=prob.n1, n2=prob.n2, s=prob.s, iters=iters, objective=f))
    return as_map(p, prob, provenance, objective_value=f, alpha=alpha, beta=beta, iters=iters, history=history)


def initial_map(prob: ProlongationProblem, strategy: InitStrategyEnum,
                rng: Optional[np.random.Generator] = None) -> Tuple[np.ndarray, Optional[EigenMatching]]:
    """Starting point for ``optimize`` and, for the matching strategy, the matching itself."""
    strategy = InitStrategyEnum(strategy)
    if strategy == InitStrategyEnum.matching:
        spec1 = eigendecompose(laplacian(prob.g1))
        spec2 = eigendecompose(laplacian(prob.g2))
        matching = match_munkres(spec1.eigenvalues, spec2.eigenvalues)
        return matching_to_graph_space(matching, spec1, spec2), matching
    if strategy == InitStrategyEnum.block_identity:
        return block_identity(prob.n2, prob.n1), None
    if strategy == InitStrategyEnum.random:
        return random_orthogonal(prob.n2, prob.n1, rng or np.random.default_rng()), None
    if prob.n2 != 2 * prob.n1:
        raise ConfigurationError("The closed-form local start needs n2 == 2 * n1.")
    return closed_form_local_1d(prob.n1), None


def solve(prob: ProlongationProblem, cfg: Optional[OptimizerConfig] = None,
          init: InitStrategyEnum = InitStrategyEnum.matching) -> SolveResult:
    """Initialize (by default from the minimal eigenvalue matching) and optimize."""
    cfg = cfg or OptimizerConfig()
    rng = np.random.default_rng(cfg.seed)
    p0, matching = initial_map(prob, init, rng)
    initial_objective = objective(p0, prob)
    initial_terms = full_terms(p0, prob)
    result = optimize(prob, p0, cfg)
    final_terms = full_terms(result.p, prob, result.alpha, result.beta)
    return SolveResult(
        map=result,
        initial_p=p0,
        initial_objective=initial_objective,
        initial_terms=initial_terms,
        final_terms=final_terms,
        matching=matching,
    )


# --- Box-product composition ---

def decoupling_bound(p1: np.ndarray, d1: float, p2: np.ndarray, d2: float) -> float:
    """||P2||_F D1 + ||P1||_F D2 for orthogonal factors (sqrt of their column counts)."""
    return float(np.sqrt(p2.shape[1]) * d1 + np.sqrt(p1.shape[1]) * d2)


def compose_box(p1: ProlongationMap, p2: ProlongationMap) -> ProlongationMap:
    """P1 (x) P2 between box products of the factor graph pairs, with its decoupling bound."""
    if p1.problem is None or p2.problem is None:
        raise CompositionError("Factor maps must carry the graph pairs they prolong between.")
    if abs(p1.alpha - p2.alpha) > 1e-12:
        raise CompositionError(f"Factor maps need a common alpha, got {p1.alpha} and {p2.alpha}.")
    alpha = p1.alpha

    d1 = diffusion_distance(p1.p, p1.problem.g1, p1.problem.g2, alpha)
    d2 = diffusion_distance(p2.p, p2.problem.g1, p2.problem.g2, alpha)
    bound = decoupling_bound(p1.p, d1, p2.p, d2)

    prob = ProlongationProblem(
        g1=box_product(p1.problem.g1, p2.problem.g1),
        g2=box_product(p1.problem.g2, p2.problem.g2),
        s=0.0,
        alpha=alpha,
    )
    p = np.kron(p1.p, p2.p)
    distance = float(np.linalg.norm(_residual(p, prob.L1, prob.L2, alpha)))
    if distance > bound + 1e-9:
        raise NumericalFailureError(f"Composed distance {distance:.6e} exceeds the decoupling bound {bound:.6e}.")

    logger.debug(kv(event="compose_box", distance=distance, bound=bound))
    return as_map(p, prob, ProvenanceEnum.kronecker_composed, objective_value=distance ** 2, bound=bound)
