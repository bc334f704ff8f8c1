"""Ego-centered primitives: neighborhoods, candidates, personalized
degree, and directed triad classification.

Conventions for a directed ego ``u``:

* the ego's neighborhood is its successor set (people ``u`` chose),
* two-hop candidates reach out through successors *or* predecessors of
  those neighbors, minus the ego and its successors,
* a common neighbor of ``(u, v)`` is a successor of ``u`` linked to
  ``v`` in either direction,
* the personalized degree of ``z`` in mode ``out``/``in`` counts nodes
  ``w`` with ``u -> w`` and ``z -> w`` / ``w -> z``; mode
  ``undirected`` symmetrizes every edge first (reciprocated reading).

On undirected graphs only mode ``undirected`` applies and all of this
collapses onto the plain neighborhood.
"""

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import _kernels
from .errors import ConfigError, PreconditionError

MODE_UNDIRECTED = "undirected"
MODE_IN = "in"
MODE_OUT = "out"

#: modes valid on a directed graph; undirected graphs admit only the first
ALL_MODES = (MODE_UNDIRECTED, MODE_IN, MODE_OUT)


def validate_mode(mode, directed):
    if mode not in ALL_MODES:
        raise ConfigError(f"unknown degree mode {mode!r}; choose from {ALL_MODES}")
    if not directed and mode != MODE_UNDIRECTED:
        raise ConfigError(
            f"undirected graphs admit only mode {MODE_UNDIRECTED!r}, got {mode!r}"
        )
    return mode


def ego_neighbors(graph, u):
    """The ego's own neighborhood: successors if directed."""
    return graph.successors(u)


def two_hop_candidates(graph, u):
    """Nodes two steps out (through either edge direction at the second
    hop), excluding the ego and its direct neighborhood. Sorted."""
    base = ego_neighbors(graph, u)
    if base.size == 0:
        return np.empty(0, dtype=np.int64)
    rows = [graph.neighbors(int(z)) for z in base]
    cand = np.unique(np.concatenate(rows))
    exclude = np.append(base, np.int64(u))
    return np.setdiff1d(cand, exclude, assume_unique=True)


def common_neighbors(graph, u, v):
    """Successors of ``u`` adjacent to ``v`` in either direction. Sorted."""
    if u == v:
        raise PreconditionError("a node has no common neighbors with itself")
    return _kernels.intersect_values(ego_neighbors(graph, u), graph.neighbors(v))


def _pd_context(graph, u, mode):
    """(anchor set, adjacency indptr, adjacency indices) for a mode."""
    validate_mode(mode, graph.directed)
    if mode == MODE_OUT:
        return graph.successors(u), graph.out_indptr, graph.out_indices
    if mode == MODE_IN:
        return graph.successors(u), graph.in_indptr, graph.in_indices
    return graph.neighbors(u), graph.sym_indptr, graph.sym_indices


def personalized_degrees(graph, u, targets, mode):
    """Personalized degree of each target node w.r.t. ego ``u``.

    No neighbor precondition here: the empirical per-triad analysis
    evaluates the same overlap formula for non-successor pools.
    """
    targets = np.asarray(targets, dtype=np.int64)
    anchor, indptr, indices = _pd_context(graph, u, mode)
    return _kernels.row_intersect_sizes(indptr, indices, anchor, targets)


def personalized_degree(graph, u, z, mode=MODE_UNDIRECTED):
    """Number of nodes linked (per mode) to both the ego and ``z``."""
    base = ego_neighbors(graph, u)
    pos = np.searchsorted(base, z)
    if not (pos < base.size and base[pos] == z):
        raise PreconditionError(f"{z} is not a neighbor of ego {u}")
    return int(personalized_degrees(graph, u, np.asarray([z], dtype=np.int64), mode)[0])


def global_degrees(graph, targets, mode):
    validate_mode(mode, graph.directed)
    targets = np.asarray(targets, dtype=np.int64)
    if mode == MODE_OUT:
        return graph.out_degree[targets]
    if mode == MODE_IN:
        return graph.in_degree[targets]
    return graph.sym_degree[targets]


# ---------------------------------------------------------------------------
# directed triads


class EdgeConfig(IntEnum):
    """Orientation of a linked pair, read from the first node."""

    OUT = 0
    RECIPROCAL = 1
    IN = 2


class TriadType(IntEnum):
    """Open directed triad ``u - z - v``: the ego-edge config crossed
    with the neighbor-edge config, row-major over (out, recip, in)."""

    T01 = 1  # u->z, z->v
    T02 = 2  # u->z, z<->v
    T03 = 3  # u->z, v->z
    T04 = 4  # u<->z, z->v
    T05 = 5  # u<->z, z<->v
    T06 = 6  # u<->z, v->z
    T07 = 7  # z->u, z->v
    T08 = 8  # z->u, z<->v
    T09 = 9  # z->u, v->z

    @property
    def ego_config(self):
        return EdgeConfig((self.value - 1) // 3)

    @property
    def neighbor_config(self):
        return EdgeConfig((self.value - 1) % 3)


TRIAD_TABLE = {
    (ego_cfg, nb_cfg): TriadType(3 * ego_cfg + nb_cfg + 1)
    for ego_cfg in EdgeConfig
    for nb_cfg in EdgeConfig
}


def edge_config(graph, a, b):
    """Config of the ``a``-``b`` link, or None when unlinked."""
    ab = graph.has_edge(a, b)
    ba = graph.has_edge(b, a)
    if ab and ba:
        return EdgeConfig.RECIPROCAL
    if ab:
        return EdgeConfig.OUT
    if ba:
        return EdgeConfig.IN
    return None


def classify_triad(graph, u, z, v):
    """Triad type of the path ``u - z - v``; both links must exist.

    Any ``u``-``v`` edge is ignored: the pattern describes how the
    recommendation reached ``v``, not whether it already succeeded.
    """
    if not graph.directed:
        raise PreconditionError("triad classification needs a directed graph")
    ego_cfg = edge_config(graph, u, z)
    if ego_cfg is None:
        raise PreconditionError(f"no edge between ego {u} and neighbor {z}")
    nb_cfg = edge_config(graph, z, v)
    if nb_cfg is None:
        raise PreconditionError(f"no edge between neighbor {z} and candidate {v}")
    return TRIAD_TABLE[(ego_cfg, nb_cfg)]


@dataclass
class EgoView:
    """Cached per-ego arrays shared by the scorers: the neighbor pool,
    the candidate set, and per-mode degree columns."""

    graph: object
    ego: int
    base: np.ndarray
    candidates: np.ndarray
    _pd: dict = field(default_factory=dict, repr=False)
    _gd: dict = field(default_factory=dict, repr=False)

    def pd(self, mode):
        if mode not in self._pd:
            self._pd[mode] = personalized_degrees(self.graph, self.ego, self.base, mode)
        return self._pd[mode]

    def gd(self, mode):
        if mode not in self._gd:
            self._gd[mode] = global_degrees(self.graph, self.base, mode)
        return self._gd[mode]


def ego_view(graph, u):
    return EgoView(
        graph=graph,
        ego=int(u),
        base=ego_neighbors(graph, u),
        candidates=two_hop_candidates(graph, u),
    )
