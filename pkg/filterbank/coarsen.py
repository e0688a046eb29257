# filterbank/coarsen.py
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from config import get_logger
from .graph import Graph, connect_components, laplacian
from .sampler import channel_sizes
from .spectral import SpectralDecomposition, eig_sym

logger = get_logger(__name__)


@dataclass(frozen=True)
class CoarseMap:
    """
    Assignment of fine vertices to ``s`` supernodes of one or two vertices.
    ``coarse_graph`` is ``None`` when the coarse level has a single vertex.
    """
    fine_n: int
    coarse_n: int
    assignment: np.ndarray
    coarse_graph: Optional[Graph]

    def __post_init__(self):
        assignment = np.array(self.assignment, dtype=int)
        assignment.setflags(write=False)
        object.__setattr__(self, 'assignment', assignment)

    @property
    def trivial(self) -> bool:
        return self.coarse_graph is None

    def members(self, coarse_index: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == coarse_index)

    def to_dict(self) -> dict:
        return {
            'fine_n': self.fine_n,
            'coarse_n': self.coarse_n,
            'assignment': self.assignment.tolist(),
        }


def heavy_edge_matching(g: Graph) -> List[tuple]:
    """Greedy matching over edges sorted by descending weight, then by index pair."""
    edges = sorted(g.edges(), key=lambda e: (-e[2], e[0], e[1]))
    matched = np.zeros(g.n, dtype=bool)
    pairs = []
    for i, j, _ in edges:
        if not matched[i] and not matched[j]:
            matched[i] = matched[j] = True
            pairs.append((i, j))
    return pairs


def coarsen(g: Graph) -> CoarseMap:
    """
    Reduce ``g`` to exactly ``s = (n + 1) // 2`` supernodes.

    Heavy-edge matching comes first; leftover singletons are then merged in
    ascending index order until the count reaches ``s``. Supernodes are
    numbered by their smallest fine vertex.
    """
    n = g.n
    s, _ = channel_sizes(n)
    groups = [list(pair) for pair in heavy_edge_matching(g)]
    matched = {v for pair in groups for v in pair}
    singletons = [v for v in range(n) if v not in matched]

    # each forced merge removes one group; the leftover singletons always suffice
    forced = len(groups) + len(singletons) - s
    for k in range(forced):
        groups.append([singletons[2 * k], singletons[2 * k + 1]])
    groups.extend([v] for v in singletons[2 * forced:])
    if forced:
        logger.debug("Forced %d singleton merges to reach %d supernodes", forced, s)

    groups.sort(key=min)
    assignment = np.empty(n, dtype=int)
    for index, members in enumerate(groups):
        assignment[members] = index

    if s < 2:
        return CoarseMap(fine_n=n, coarse_n=s, assignment=assignment, coarse_graph=None)

    S = np.zeros((n, s))
    S[np.arange(n), assignment] = 1.0
    coarse_weights = S.T @ np.asarray(g.weights) @ S
    coarse_weights = (coarse_weights + coarse_weights.T) / 2.0
    np.fill_diagonal(coarse_weights, 0.0)
    coarse_weights, added = connect_components(coarse_weights)
    if added:
        logger.warning("Coarse graph was disconnected; added %d unit edges", added)
    return CoarseMap(
        fine_n=n,
        coarse_n=s,
        assignment=assignment,
        coarse_graph=Graph(coarse_weights),
    )


def coarse_basis(
    cm: CoarseMap,
    eig: Callable[[np.ndarray], SpectralDecomposition] = eig_sym,
) -> np.ndarray:
    """Eigenbasis ``U1`` of the coarse Laplacian (identity for a single supernode)."""
    if cm.trivial:
        return np.eye(cm.coarse_n)
    return np.array(eig(laplacian(cm.coarse_graph)).basis)
