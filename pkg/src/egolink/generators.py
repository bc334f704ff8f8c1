"""Seeded synthetic graphs: uniform random, preferential attachment,
and planted-signal snapshot sequences.

The planted generator seeds snapshot 0 uniformly at random, then for
each transition scores every ego's two-hop candidates with a chosen
method and forms ``ego -> v`` with probability
``rate * score(v) / max score``, capped at 1. Its output carries
snapshot indices in the time column (``time_mode == "index"``), ready
for ``build_snapshots(preassigned=True)``.

All node ids are the generator's own 0..n-1 layout (labels are the
decimal ids); edges come out time-sorted and deduplicated like any
normalized list.
"""

from dataclasses import dataclass

import numpy as np

from .ego import MODE_UNDIRECTED, validate_mode
from .errors import ConfigError
from .graph import (
    SnapshotGraph,
    TemporalEdgeList,
    TIME_MODE_INDEX,
    TIME_MODE_TIMESTAMP,
)
from .scorers import validate_methods, score_candidates

KIND_UNIFORM = "uniform-random"
KIND_PREFERENTIAL = "preferential-attachment"
KIND_PLANTED = "planted-scorer"

ALL_KINDS = (KIND_UNIFORM, KIND_PREFERENTIAL, KIND_PLANTED)

#: timestamps for the uniform generator span 90 days of seconds
DEFAULT_TIME_SPAN = 90 * 86_400


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n_nodes: int
    seed: int = 0
    directed: bool = False
    edge_prob: float = None  # uniform-random density / planted base density
    n_attach: int = None  # preferential-attachment edges per arrival
    method: str = None  # planted-scorer method name
    mode: str = MODE_UNDIRECTED  # planted-scorer degree mode
    n_snapshots: int = None  # planted-scorer snapshot count
    formation_rate: float = 0.05  # planted-scorer per-ego rate scale
    time_span: int = DEFAULT_TIME_SPAN  # uniform-random timestamp window


def _assemble(n_nodes, src, dst, time, directed, time_mode):
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    time = np.asarray(time, dtype=np.int64)
    if not directed and src.size:
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        src, dst = lo, hi
    order = np.argsort(time, kind="stable")
    src, dst, time = src[order], dst[order], time[order]
    for arr in (src, dst, time):
        arr.setflags(write=False)
    return TemporalEdgeList(
        src=src, dst=dst, time=time,
        labels=tuple(str(i) for i in range(n_nodes)),
        directed=directed, time_mode=time_mode,
    )


def _uniform_structure(rng, n_nodes, edge_prob, directed):
    """One Bernoulli draw per candidate pair, row by row."""
    src_parts = []
    dst_parts = []
    for u in range(n_nodes):
        if directed:
            partners = np.concatenate(
                [np.arange(0, u, dtype=np.int64), np.arange(u + 1, n_nodes, dtype=np.int64)]
            )
        else:
            partners = np.arange(u + 1, n_nodes, dtype=np.int64)
        if partners.size == 0:
            continue
        hit = rng.random(partners.size) < edge_prob
        chosen = partners[hit]
        if chosen.size:
            src_parts.append(np.full(chosen.size, u, dtype=np.int64))
            dst_parts.append(chosen)
    if not src_parts:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(src_parts), np.concatenate(dst_parts)


def uniform_random_edges(n_nodes, edge_prob, directed=False, seed=0,
                         time_span=DEFAULT_TIME_SPAN):
    """Independent edges with uniform random timestamps."""
    n_nodes = int(n_nodes)
    if n_nodes < 1:
        raise ConfigError(f"need at least 1 node, got {n_nodes}")
    if not 0.0 <= float(edge_prob) <= 1.0:
        raise ConfigError(f"edge probability must be in [0, 1], got {edge_prob}")
    if int(time_span) < 1:
        raise ConfigError(f"time span must be positive, got {time_span}")
    rng = np.random.default_rng(seed)
    src, dst = _uniform_structure(rng, n_nodes, float(edge_prob), directed)
    time = rng.integers(0, int(time_span), size=src.size, dtype=np.int64)
    return _assemble(n_nodes, src, dst, time, directed, TIME_MODE_TIMESTAMP)


def preferential_attachment_edges(n_nodes, n_attach, directed=False, seed=0):
    """Arriving nodes attach to ``n_attach`` distinct targets drawn
    with probability proportional to current degree; timestamps are
    arrival steps. Directed edges point from the newcomer."""
    n_nodes = int(n_nodes)
    m = int(n_attach)
    if m < 1:
        raise ConfigError(f"attachment count must be >= 1, got {n_attach}")
    if n_nodes < m + 2:
        raise ConfigError(f"need at least {m + 2} nodes for attachment count {m}")
    rng = np.random.default_rng(seed)
    src = []
    dst = []
    time = []
    pool = []  # node repeated once per incident edge: degree-proportional draws
    # seed clique on the first m+1 nodes so every draw has m valid targets
    for a in range(m + 1):
        for b in range(a + 1, m + 1):
            src.append(a)
            dst.append(b)
            time.append(0)
            pool.extend((a, b))
    for u in range(m + 1, n_nodes):
        targets = set()
        while len(targets) < m:
            targets.add(pool[int(rng.integers(0, len(pool)))])
        for v in sorted(targets):
            src.append(u)
            dst.append(v)
            time.append(u)
            pool.extend((u, v))
    return _assemble(n_nodes, src, dst, time, directed, TIME_MODE_TIMESTAMP)


def planted_scorer_edges(n_nodes, edge_prob, method, n_snapshots=3, directed=False,
                         mode=MODE_UNDIRECTED, formation_rate=0.05, seed=0):
    """Snapshot sequence whose formations follow a scorer's rankings."""
    n_nodes = int(n_nodes)
    if n_nodes < 3:
        raise ConfigError(f"need at least 3 nodes, got {n_nodes}")
    if not 0.0 <= float(edge_prob) <= 1.0:
        raise ConfigError(f"edge probability must be in [0, 1], got {edge_prob}")
    if int(n_snapshots) < 2:
        raise ConfigError(f"planted sequences need >= 2 snapshots, got {n_snapshots}")
    if not 0.0 < float(formation_rate) <= 1.0:
        raise ConfigError(f"formation rate must be in (0, 1], got {formation_rate}")
    (method,) = validate_methods((method,))
    validate_mode(mode, directed)

    rng = np.random.default_rng(seed)
    src, dst = _uniform_structure(rng, n_nodes, float(edge_prob), directed)
    all_src = [src]
    all_dst = [dst]
    all_time = [np.zeros(src.size, dtype=np.int64)]

    rate = float(formation_rate)
    for s in range(1, int(n_snapshots)):
        g = SnapshotGraph(n_nodes, np.concatenate(all_src), np.concatenate(all_dst),
                          directed)
        new_src = []
        new_dst = []
        seen = set()  # undirected: both endpoints may pick the same pair
        for ego in range(n_nodes):
            table = score_candidates(g, ego, methods=(method,), mode=mode)
            scores = table.scores(method)
            if scores.size == 0:
                continue
            top = float(scores.max())
            if top <= 0.0:
                continue
            p = np.minimum(rate * scores / top, 1.0)
            chosen = table.candidates[rng.random(scores.size) < p]
            for v in chosen.tolist():
                key = (ego, v) if directed else (min(ego, v), max(ego, v))
                if key in seen:
                    continue
                seen.add(key)
                new_src.append(key[0] if not directed else ego)
                new_dst.append(key[1] if not directed else v)
        all_src.append(np.asarray(new_src, dtype=np.int64))
        all_dst.append(np.asarray(new_dst, dtype=np.int64))
        all_time.append(np.full(len(new_src), s, dtype=np.int64))

    return _assemble(
        n_nodes,
        np.concatenate(all_src),
        np.concatenate(all_dst),
        np.concatenate(all_time),
        directed,
        TIME_MODE_INDEX,
    )


def generate(spec):
    """Dispatch a :class:`GeneratorSpec` to its generator."""
    if spec.kind == KIND_UNIFORM:
        if spec.edge_prob is None:
            raise ConfigError("uniform-random needs edge_prob")
        return uniform_random_edges(
            spec.n_nodes, spec.edge_prob, directed=spec.directed, seed=spec.seed,
            time_span=spec.time_span,
        )
    if spec.kind == KIND_PREFERENTIAL:
        if spec.n_attach is None:
            raise ConfigError("preferential-attachment needs n_attach")
        return preferential_attachment_edges(
            spec.n_nodes, spec.n_attach, directed=spec.directed, seed=spec.seed
        )
    if spec.kind == KIND_PLANTED:
        if spec.edge_prob is None or spec.method is None or spec.n_snapshots is None:
            raise ConfigError("planted-scorer needs edge_prob, method, and n_snapshots")
        return planted_scorer_edges(
            spec.n_nodes, spec.edge_prob, spec.method, n_snapshots=spec.n_snapshots,
            directed=spec.directed, mode=spec.mode, formation_rate=spec.formation_rate,
            seed=spec.seed,
        )
    raise ConfigError(f"unknown generator kind {spec.kind!r}; choose from {ALL_KINDS}")
