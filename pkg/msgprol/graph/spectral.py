"""Laplacian spectra and minimal eigenvalue matchings.

A matching M is an n2 x n1 {0,1} matrix with one entry per column and at
most one per row; its cost is sum_ij M_ij (lam1_j - lam2_i)^2. Among
minimal-cost matchings, the one whose occupied cells (flat row-major
indices i*n1 + j, ascending) form the lexicographically least list wins.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from msgprol.core.config import settings
from msgprol.core.errors import (
    DomainError,
    InvalidSizeError,
    OrientationError,
    ShapeError,
    SizeLimitError,
    SymmetryError,
)
from msgprol.core.logging import kv
from msgprol.graph.core import ProcessMatrix

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[float]]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return u @ np.diag(self.eigenvalues) @ u.T


@dataclass(frozen=True)
class EigenMatching:
    m: np.ndarray
    cost: float
    lam1: Optional[np.ndarray] = field(default=None, repr=False)
    lam2: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def shape(self):
        return self.m.shape

    @property
    def occupied(self) -> List[int]:
        """Flat row-major indices of the ones, ascending."""
        return [int(f) for f in np.flatnonzero(self.m)]

    def row_of_column(self) -> List[int]:
        return [int(np.flatnonzero(self.m[:, j])[0]) for j in range(self.m.shape[1])]


# --- Eigendecomposition ---

def eigendecompose(l: Union[ProcessMatrix, np.ndarray]) -> Spectrum:
    """Symmetric eigendecomposition, eigenvalues descending, sign-fixed columns."""
    data = l.data if isinstance(l, ProcessMatrix) else np.asarray(l, dtype=float)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise ShapeError(f"Eigendecomposition needs a square matrix, got shape {data.shape}.")
    asymmetry = float(np.max(np.abs(data - data.T))) if data.size else 0.0
    if asymmetry > settings.SYMMETRY_TOL:
        raise SymmetryError(f"Matrix is not symmetric (max |L - L^T| = {asymmetry:.3e}).")

    values, vectors = scipy.linalg.eigh(data)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]

    # First nonzero component of every eigenvector is positive
    for col in range(vectors.shape[1]):
        nonzero = np.flatnonzero(np.abs(vectors[:, col]) > 1e-12)
        if nonzero.size and vectors[nonzero[0], col] < 0:
            vectors[:, col] = -vectors[:, col]
    return Spectrum(values, vectors)


def cycle_spectrum(n: int) -> Spectrum:
    """Analytic spectrum of L(C_n) in natural index order j = 0..n-1.

    Eigenvalue j is 2cos(2*pi*j/n) - 2. Column j of the real Fourier basis
    is a cosine for j <= n/2 and the matching sine for j > n/2.
    """
    if n < 3:
        raise InvalidSizeError(f"Cycle graphs need n >= 3, got {n}.")
    k = np.arange(n)
    values = 2.0 * np.cos(2.0 * np.pi * k / n) - 2.0
    vectors = np.zeros((n, n))
    vectors[:, 0] = 1.0 / np.sqrt(n)
    for j in range(1, (n + 1) // 2):
        theta = 2.0 * np.pi * j * k / n
        vectors[:, j] = np.sqrt(2.0 / n) * np.cos(theta)
        vectors[:, n - j] = np.sqrt(2.0 / n) * np.sin(theta)
    if n % 2 == 0:
        vectors[:, n // 2] = np.where(k % 2 == 0, 1.0, -1.0) / np.sqrt(n)
    return Spectrum(values, vectors)


def box_spectrum(spec_a: Spectrum, spec_b: Spectrum) -> Spectrum:
    """Spectrum of L_a (+) L_b in Kronecker order (index a * n_b + b)."""
    values = np.add.outer(spec_a.eigenvalues, spec_b.eigenvalues).ravel()
    return Spectrum(values, np.kron(spec_a.eigenvectors, spec_b.eigenvectors))


# --- Matching ---

def _cost_matrix(lam1: np.ndarray, lam2: np.ndarray) -> np.ndarray:
    return (lam2[:, None] - lam1[None, :]) ** 2


def _as_vector(lam: ArrayLike) -> np.ndarray:
    arr = np.asarray(lam, dtype=float).ravel()
    if arr.size == 0:
        raise ShapeError("Eigenvalue lists must be nonempty.")
    return arr


def matching_cost(m: np.ndarray, lam1: ArrayLike, lam2: ArrayLike) -> float:
    lam1, lam2 = _as_vector(lam1), _as_vector(lam2)
    m = np.asarray(m)
    if m.shape != (lam2.size, lam1.size):
        raise ShapeError(f"Matching shape {m.shape} does not fit spectra ({lam2.size}, {lam1.size}).")
    return float(np.sum(m * _cost_matrix(lam1, lam2)))


def _tie_tolerance(best: float) -> float:
    return settings.MATCHING_COST_TIE_TOL * max(1.0, abs(best))


def _matching_from_rows(rows: Dict[int, int], n2: int, n1: int) -> np.ndarray:
    m = np.zeros((n2, n1), dtype=np.int64)
    for col, row in rows.items():
        m[row, col] = 1
    return m


def _assignment_cost(cost: np.ndarray, rows: Dict[int, int]) -> float:
    cols = np.fromiter(rows.keys(), dtype=np.int64)
    return float(cost[np.fromiter(rows.values(), dtype=np.int64), cols].sum())


def _assignment_duals(cost: np.ndarray, row_of: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column potentials (u, v) certifying an optimal column->row assignment.

    Satisfies u_i + v_j <= cost_ij with equality on assigned cells, and u_i = 0
    on unassigned rows. Columns are relaxed Bellman-Ford style over the moves
    "the row of column a takes column b".
    """
    n2, n1 = cost.shape
    held = cost[row_of, np.arange(n1)]
    shift = cost[row_of, :] - held[:, None]
    free = np.setdiff1d(np.arange(n2), row_of)
    v = cost[free].min(axis=0) if free.size else np.zeros(n1)
    floor = 1e-3 * _tie_tolerance(float(held.sum()))
    for _ in range(n1 + 1):
        relaxed = np.minimum(v, (v[:, None] + shift).min(axis=0))
        settled = float(np.max(v - relaxed)) <= floor
        v = relaxed
        if settled:
            break
    u = np.zeros(n2)
    u[row_of] = held - v
    return u, v


_POOL = -1


def _rotate(
    current: Dict[int, int],
    row: int,
    col: int,
    tight_rows: List[List[int]],
    freeable: List[int],
    locked: Set[int],
) -> Optional[Dict[int, int]]:
    """Move ``row`` onto ``col`` along an alternating path of tight cells.

    The unassigned rows act as one pool column. Returns the new assignment,
    or None when no path exists without touching a locked row.
    """
    column_of = {r: c for c, r in current.items()}
    start = column_of.get(row, _POOL)
    target = current[col]
    blocked = locked | {row}
    taken_by: Dict[int, int] = {}
    entered: Dict[int, int] = {}
    seen = {start}
    queue = deque([start])
    while queue and target not in taken_by:
        c = queue.popleft()
        for r in (freeable if c == _POOL else tight_rows[c]):
            if r in blocked or r in taken_by:
                continue
            taken_by[r] = c
            if r == target:
                break
            nxt = column_of.get(r, _POOL)
            if nxt not in seen:
                seen.add(nxt)
                entered[nxt] = r
                queue.append(nxt)
    if target not in taken_by:
        return None

    updated = dict(current)
    updated[col] = row
    r = target
    while True:
        c = taken_by[r]
        if c != _POOL:
            updated[c] = r
        if c == start:
            return updated
        r = entered[c]


def match_munkres(lam1: ArrayLike, lam2: ArrayLike) -> EigenMatching:
    """Minimal eigenvalue matching via Munkres, with lexicographic tie-break."""
    lam1, lam2 = _as_vector(lam1), _as_vector(lam2)
    n1, n2 = lam1.size, lam2.size
    if n1 > n2:
        raise OrientationError(f"Matching needs n1 <= n2, got n1={n1}, n2={n2}; swap the inputs.")

    cost = _cost_matrix(lam1, lam2)
    rows, cols = linear_sum_assignment(cost)
    best = float(cost[rows, cols].sum())
    tolerance = _tie_tolerance(best)
    current = {int(c): int(r) for r, c in zip(rows, cols)}

    # Only cells with zero reduced cost can sit on a minimal matching
    u, v = _assignment_duals(cost, np.array([current[j] for j in range(n1)]))
    tight = cost - u[:, None] - v[None, :] <= tolerance
    tight_rows = [np.flatnonzero(tight[:, j]).tolist() for j in range(n1)]
    freeable = np.flatnonzero(u >= -tolerance).tolist() if n2 > n1 else []

    # Walk tight cells in row-major order, keeping a cell whenever some
    # minimal matching contains it together with every cell kept so far
    fixed: Dict[int, int] = {}
    used_rows: Set[int] = set()
    searches = 0
    for flat in np.flatnonzero(tight.ravel()):
        if len(fixed) == n1:
            break
        i, j = divmod(int(flat), n1)
        if j in fixed or i in used_rows:
            continue
        if current[j] != i:
            searches += 1
            candidate = _rotate(current, i, j, tight_rows, freeable, used_rows)
            if candidate is None or _assignment_cost(cost, candidate) > best + tolerance:
                continue
            current = candidate
        fixed[j] = i
        used_rows.add(i)

    for j in range(n1):
        fixed.setdefault(j, current[j])
    m = _matching_from_rows(fixed, n2, n1)
    logger.debug(kv(event="match_munkres", n1=n1, n2=n2, cost=best, tight_cells=int(tight.sum()), searches=searches))
    return EigenMatching(m, matching_cost(m, lam1, lam2), lam1, lam2)


def match_bruteforce(lam1: ArrayLike, lam2: ArrayLike) -> EigenMatching:
    """Exhaustive oracle over all injections columns -> rows (n2 <= 8)."""
    lam1, lam2 = _as_vector(lam1), _as_vector(lam2)
    n1, n2 = lam1.size, lam2.size
    if n1 > n2:
        raise OrientationError(f"Matching needs n1 <= n2, got n1={n1}, n2={n2}; swap the inputs.")
    if n2 > settings.BRUTEFORCE_MAX_N2:
        raise SizeLimitError(f"Brute-force matching supports n2 <= {settings.BRUTEFORCE_MAX_N2}, got {n2}.")

    cost = _cost_matrix(lam1, lam2)
    candidates = []
    for rows in itertools.permutations(range(n2), n1):
        total = float(sum(cost[r, c] for c, r in enumerate(rows)))
        candidates.append((total, rows))
    best = min(total for total, _ in candidates)
    tolerance = _tie_tolerance(best)

    def occupied(rows):
        return sorted(r * n1 + c for c, r in enumerate(rows))

    winner = min((rows for total, rows in candidates if total <= best + tolerance), key=occupied)
    m = _matching_from_rows({c: r for c, r in enumerate(winner)}, n2, n1)
    return EigenMatching(m, matching_cost(m, lam1, lam2), lam1, lam2)


def is_submultiset(lam1: ArrayLike, lam2: ArrayLike, tol: Optional[float] = None) -> bool:
    """True when every eigenvalue of lam1 (with multiplicity) appears in lam2 within tol."""
    tol = settings.EIGENVALUE_TIE_TOL if tol is None else tol
    small = np.sort(_as_vector(lam1))
    large = list(np.sort(_as_vector(lam2)))
    pos = 0
    for value in small:
        while pos < len(large) and large[pos] < value - tol:
            pos += 1
        if pos == len(large) or abs(large[pos] - value) > tol:
            return False
        pos += 1
    return True


# --- Spectral form of the diffusion term ---

def spectral_diffusion_cost(ptilde: np.ndarray, lam1: ArrayLike, lam2: ArrayLike, alpha: float) -> float:
    """||(1/sqrt(alpha)) P~ Lambda1 - sqrt(alpha) Lambda2 P~||_F."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}.")
    lam1, lam2 = _as_vector(lam1), _as_vector(lam2)
    ptilde = np.asarray(ptilde, dtype=float)
    if ptilde.shape != (lam2.size, lam1.size):
        raise ShapeError(f"P~ has shape {ptilde.shape}, expected ({lam2.size}, {lam1.size}).")
    root = np.sqrt(alpha)
    residual = ptilde * lam1[None, :] / root - root * lam2[:, None] * ptilde
    return float(np.linalg.norm(residual))


def to_spectral_basis(p: np.ndarray, spec1: Spectrum, spec2: Spectrum) -> np.ndarray:
    """P~ = U2^T P U1."""
    return spec2.eigenvectors.T @ np.asarray(p, dtype=float) @ spec1.eigenvectors


def matching_to_graph_space(m: Union[EigenMatching, np.ndarray], spec1: Spectrum, spec2: Spectrum) -> np.ndarray:
    """P = U2 M U1^T, the graph-space map with the same diffusion cost as M."""
    matrix = m.m if isinstance(m, EigenMatching) else np.asarray(m)
    expected = (spec2.n, spec1.n)
    if matrix.shape != expected:
        raise ShapeError(f"Matching has shape {matrix.shape}, spectra require {expected}.")
    return spec2.eigenvectors @ matrix.astype(float) @ spec1.eigenvectors.T


# --- Closed-form zero-cost constructions ---

def zero_cost_cycle_map(n: int) -> np.ndarray:
    """2n x n subpermutation with P[2j, j] = 1 (cycle eigenvalue index doubling)."""
    if n < 3:
        raise InvalidSizeError(f"Cycle graphs need n >= 3, got {n}.")
    p = np.zeros((2 * n, n))
    p[2 * np.arange(n), np.arange(n)] = 1.0
    return p


def kron_matching(m1: EigenMatching, m2: EigenMatching) -> EigenMatching:
    """Kronecker product of two matchings, costed on the Kronecker-sum spectra when known."""
    m = np.kron(m1.m, m2.m)
    if all(x is not None for x in (m1.lam1, m1.lam2, m2.lam1, m2.lam2)):
        lam1 = np.add.outer(m1.lam1, m2.lam1).ravel()
        lam2 = np.add.outer(m1.lam2, m2.lam2).ravel()
        return EigenMatching(m, matching_cost(m, lam1, lam2), lam1, lam2)
    return EigenMatching(m, float("nan"))
