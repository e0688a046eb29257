# filterbank/graph.py
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sparse
from scipy.sparse import csgraph
from scipy.spatial.distance import pdist, squareform

from config import get_logger
from constants import COMMUNITY_DEFAULT_BLOCKS
from .errors import (
    DisconnectedError,
    DuplicateEdgeConflictError,
    InvalidParamError,
    LengthMismatchError,
    NegativeWeightError,
    SelfLoopError,
    NotSymmetricError,
)

logger = get_logger(__name__)

Edge = Tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """Connected, undirected, weighted graph stored as a dense weight matrix."""
    weights: np.ndarray
    coords: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        validate_weights(weights)
        weights.setflags(write=False)
        object.__setattr__(self, 'weights', weights)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            coords.setflags(write=False)
            object.__setattr__(self, 'coords', coords)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def edges(self) -> Iterable[Edge]:
        """Yield each undirected edge once as ``(i, j, w)`` with ``i < j``."""
        rows, cols = np.nonzero(np.triu(self.weights, k=1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield i, j, float(self.weights[i, j])

    def adjacency(self) -> sparse.csr_matrix:
        return sparse.csr_matrix(self.weights)


def validate_weights(weights: np.ndarray) -> None:
    """Check the weight matrix invariants; raise the matching error kind."""
    if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
        raise InvalidParamError(f"Weight matrix must be square, got shape {weights.shape}")
    if weights.shape[0] < 2:
        raise InvalidParamError("A graph needs at least 2 vertices")
    if not np.all(np.isfinite(weights)):
        raise InvalidParamError("Weights must be finite")
    if np.any(np.diag(weights) != 0):
        raise SelfLoopError("Weight matrix has a nonzero diagonal (self-loop)")
    if np.any(weights < 0):
        raise NegativeWeightError("Edge weights must be nonnegative")
    if not np.array_equal(weights, weights.T):
        raise NotSymmetricError("Weight matrix must be symmetric")
    if not is_connected(weights):
        raise DisconnectedError("Graph is not connected")


def is_connected(weights: np.ndarray) -> bool:
    n_components, _ = csgraph.connected_components(
        sparse.csr_matrix(weights > 0), directed=False
    )
    return n_components == 1


def connect_components(weights: np.ndarray) -> Tuple[np.ndarray, int]:
    """
    Chain the connected components with unit-weight edges between the
    lowest-index vertices of successive components (ordered by that index).
    Returns the repaired weights and the number of edges added.
    """
    repaired = np.array(weights, dtype=float)
    n_components, labels = csgraph.connected_components(
        sparse.csr_matrix(repaired > 0), directed=False
    )
    if n_components <= 1:
        return repaired, 0
    anchors = sorted(int(np.flatnonzero(labels == c)[0]) for c in range(n_components))
    for a, b in zip(anchors[:-1], anchors[1:]):
        repaired[a, b] = repaired[b, a] = 1.0
    return repaired, len(anchors) - 1


def build_graph(n: int, edges: Sequence[Edge], one_based: bool = False) -> Graph:
    """Build a validated graph from an edge list ``[(i, j, w), ...]``."""
    if n < 2:
        raise InvalidParamError(f"A graph needs at least 2 vertices, got {n}")
    offset = 1 if one_based else 0
    weights = np.zeros((n, n))
    for edge in edges:
        if len(edge) != 3:
            raise InvalidParamError(f"Edge must be (i, j, w), got {edge!r}")
        i, j, w = int(edge[0]) - offset, int(edge[1]) - offset, float(edge[2])
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidParamError(f"Edge ({edge[0]}, {edge[1]}) out of range for n={n}")
        if i == j:
            raise SelfLoopError(f"Self-loop at vertex {edge[0]}")
        if w < 0:
            raise NegativeWeightError(f"Negative weight {w} on edge ({edge[0]}, {edge[1]})")
        if w == 0:
            raise InvalidParamError(f"Zero weight on edge ({edge[0]}, {edge[1]})")
        if weights[i, j] != 0 and weights[i, j] != w:
            raise DuplicateEdgeConflictError(
                f"Edge ({edge[0]}, {edge[1]}) listed with weights {weights[i, j]} and {w}"
            )
        weights[i, j] = weights[j, i] = w
    return Graph(weights)


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``L = D - W``."""
    W = g.weights
    return np.diag(W.sum(axis=1)) - W


def dirichlet_energy(g: Graph, x: Sequence[float], ordered_pairs: bool = True) -> float:
    """
    Dirichlet form of a signal.

    By default this is the double sum of ``w_ij (x_i - x_j)^2`` over all
    ordered vertex pairs, which counts each edge twice and equals
    ``2 x^T L x``. With ``ordered_pairs=False`` each undirected edge is counted
    once, giving ``x^T L x``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise LengthMismatchError(f"Signal length {x.shape} does not match n={g.n}")
    diff = x[:, None] - x[None, :]
    total = float(np.sum(g.weights * diff ** 2))
    return total if ordered_pairs else total / 2.0


def hop_distances(g: Graph, source: int) -> np.ndarray:
    """Unweighted hop distance from ``source`` to every vertex."""
    if not 0 <= source < g.n:
        raise InvalidParamError(f"Vertex {source} out of range for n={g.n}")
    support = sparse.csr_matrix((g.weights > 0).astype(float))
    dist = csgraph.shortest_path(support, directed=False, unweighted=True, indices=source)
    return dist.astype(int)


def gen_ring(n: int) -> Graph:
    """Unit-weight cycle on ``n`` vertices."""
    if n < 3:
        raise InvalidParamError(f"Ring graph needs n >= 3, got {n}")
    weights = np.zeros((n, n))
    idx = np.arange(n)
    weights[idx, (idx + 1) % n] = 1.0
    weights[(idx + 1) % n, idx] = 1.0
    return Graph(weights)


def gen_sensor(n: int, seed: int = 0, radius: float = 0.15) -> Graph:
    """
    Random geometric graph: uniform points in the unit square, Gaussian-kernel
    weights ``exp(-d^2 / (2 sigma^2))`` with ``sigma = radius / 2`` for pairs
    closer than ``radius``. Disconnected draws are chained together.
    """
    if n < 2:
        raise InvalidParamError(f"Sensor graph needs n >= 2, got {n}")
    if not radius > 0:
        raise InvalidParamError(f"Radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    coords = rng.uniform(size=(n, 2))
    dist = squareform(pdist(coords))
    sigma = radius / 2.0
    weights = np.where(dist <= radius, np.exp(-dist ** 2 / (2 * sigma ** 2)), 0.0)
    np.fill_diagonal(weights, 0.0)
    weights, added = connect_components(weights)
    if added:
        logger.warning("Sensor draw (n=%d, seed=%s) was disconnected; added %d edges", n, seed, added)
    return Graph(weights, coords=coords)


def gen_community(
    n: int,
    seed: int = 0,
    blocks: Optional[int] = None,
    p_in: float = 0.2,
    p_out: float = 0.002,
) -> Graph:
    """
    Stochastic block model with unit weights and contiguous equal-size blocks.
    Without an explicit ``blocks`` the count is ``min(8, n)``.
    """
    if n < 2:
        raise InvalidParamError(f"Community graph needs n >= 2, got {n}")
    if blocks is None:
        blocks = min(COMMUNITY_DEFAULT_BLOCKS, n)
    if not 1 <= blocks <= n:
        raise InvalidParamError(f"Block count must lie in [1, {n}], got {blocks}")
    for name, p in (('p_in', p_in), ('p_out', p_out)):
        if not 0.0 <= p <= 1.0:
            raise InvalidParamError(f"{name} must be a probability, got {p}")
    rng = np.random.default_rng(seed)
    membership = np.arange(n) * blocks // n
    prob = np.where(membership[:, None] == membership[None, :], p_in, p_out)
    draw = np.triu(rng.random((n, n)) < prob, k=1)
    weights = (draw | draw.T).astype(float)
    weights, added = connect_components(weights)
    if added:
        logger.warning("Community draw (n=%d, seed=%s) was disconnected; added %d edges", n, seed, added)
    return Graph(weights)
