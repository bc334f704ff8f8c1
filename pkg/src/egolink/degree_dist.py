"""Degree sampling and log-binned histograms.

Personalized-degree samples pool one value per (ego, neighbor) ordered
pair over every ego in the snapshot; global samples take one value per
node, or per pair when asked to mirror the personalized pooling.

Histograms use logarithmic bins with exact decade-fraction edges
``10 ** (k / bins_per_decade)``. Zero values cannot sit on a log axis,
so when any sample is 0 the whole sample set is shifted up by one
before binning and the ``shifted`` flag records it.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import write_csv
from .ego import MODE_UNDIRECTED, ego_neighbors, global_degrees, personalized_degrees, validate_mode
from .errors import ConfigError, EmptyInputError

KIND_PERSONALIZED = "personalized"
KIND_GLOBAL = "global"

ALL_KINDS = (KIND_PERSONALIZED, KIND_GLOBAL)

DISTRIBUTION_HEADER = ("bin_low", "bin_high", "bin_center", "count", "density")


@dataclass(frozen=True)
class DegreeSampleSet:
    values: np.ndarray
    kind: str
    mode: str
    n_egos: int

    @property
    def n_samples(self):
        return int(self.values.size)

    @property
    def shifted(self):
        """True when log-binning will need the +1 shift."""
        return bool(self.values.size) and int(self.values.min()) == 0


def _contributing_egos(graph, egos):
    if egos is None:
        egos = np.arange(graph.n_nodes, dtype=np.int64)
    return np.asarray(egos, dtype=np.int64)


def personalized_degree_samples(graph, mode=MODE_UNDIRECTED, egos=None):
    """Personalized degree of every (ego, neighbor) ordered pair."""
    validate_mode(mode, graph.directed)
    chunks = []
    n_egos = 0
    for u in _contributing_egos(graph, egos):
        base = ego_neighbors(graph, int(u))
        if base.size == 0:
            continue
        n_egos += 1
        chunks.append(personalized_degrees(graph, int(u), base, mode))
    values = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    values.setflags(write=False)
    return DegreeSampleSet(values=values, kind=KIND_PERSONALIZED, mode=mode, n_egos=n_egos)


def global_degree_samples(graph, mode=MODE_UNDIRECTED, per_neighbor=False, egos=None):
    """Global degrees, one per node; with ``per_neighbor`` one per
    (ego, neighbor) pair so the pooling matches the personalized set."""
    validate_mode(mode, graph.directed)
    if not per_neighbor:
        all_nodes = np.arange(graph.n_nodes, dtype=np.int64)
        values = global_degrees(graph, all_nodes, mode).copy()
        values.setflags(write=False)
        return DegreeSampleSet(values=values, kind=KIND_GLOBAL, mode=mode, n_egos=0)
    chunks = []
    n_egos = 0
    for u in _contributing_egos(graph, egos):
        base = ego_neighbors(graph, int(u))
        if base.size == 0:
            continue
        n_egos += 1
        chunks.append(global_degrees(graph, base, mode))
    values = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    values.setflags(write=False)
    return DegreeSampleSet(values=values, kind=KIND_GLOBAL, mode=mode, n_egos=n_egos)


@dataclass(frozen=True)
class BinnedDistribution:
    """Log-binned histogram. ``density`` integrates to 1 over
    ``log10(value)``; counts sum to the sample count."""

    bin_low: np.ndarray
    bin_high: np.ndarray
    bin_center: np.ndarray
    count: np.ndarray
    density: np.ndarray
    bins_per_decade: int
    n_samples: int
    shifted: bool

    @property
    def n_bins(self):
        return int(self.count.size)


def log_binned_histogram(samples, bins_per_decade=10):
    """Bin a sample set on exact log-spaced edges, shifting by +1 first
    when zeros are present."""
    bpd = int(bins_per_decade)
    if bpd < 1:
        raise ConfigError(f"bins_per_decade must be >= 1, got {bins_per_decade}")
    values = np.asarray(getattr(samples, "values", samples))
    if values.size == 0:
        raise EmptyInputError("no degree samples to bin")
    if values.min() < 0:
        raise ConfigError("degree samples must be nonnegative")
    shifted = int(values.min()) == 0
    pos = values.astype(np.float64) + (1.0 if shifted else 0.0)

    vmin = float(pos.min())
    vmax = float(pos.max())
    k_min = math.floor(bpd * math.log10(vmin))
    k_max = math.floor(bpd * math.log10(vmax))
    # float guards: the edge grid must bracket the data exactly
    while 10.0 ** (k_min / bpd) > vmin:
        k_min -= 1
    while 10.0 ** ((k_min + 1) / bpd) <= vmin:
        k_min += 1
    while 10.0 ** (k_max / bpd) > vmax:
        k_max -= 1
    while 10.0 ** ((k_max + 1) / bpd) <= vmax:
        k_max += 1

    exponents = np.arange(k_min, k_max + 2, dtype=np.float64) / bpd
    edges = 10.0 ** exponents
    idx = np.searchsorted(edges, pos, side="right") - 1
    count = np.bincount(idx, minlength=edges.size - 1).astype(np.int64)
    width = 1.0 / bpd  # log10 width of every bin, exact by construction
    density = count / (pos.size * width)
    centers = 10.0 ** ((np.arange(k_min, k_max + 1, dtype=np.float64) + 0.5) / bpd)
    low = edges[:-1].copy()
    high = edges[1:].copy()
    for arr in (count, density, centers, low, high):
        arr.setflags(write=False)
    return BinnedDistribution(
        bin_low=low,
        bin_high=high,
        bin_center=centers,
        count=count,
        density=density,
        bins_per_decade=bpd,
        n_samples=int(values.size),
        shifted=shifted,
    )


def distribution_metadata(dist, kind=None, mode=None):
    meta = {}
    if kind is not None:
        meta["kind"] = kind
    if mode is not None:
        meta["mode"] = mode
    meta["shifted"] = "true" if dist.shifted else "false"
    meta["n_samples"] = dist.n_samples
    meta["bins_per_decade"] = dist.bins_per_decade
    return meta


def distribution_rows(dist):
    return [
        (
            float(dist.bin_low[i]),
            float(dist.bin_high[i]),
            float(dist.bin_center[i]),
            int(dist.count[i]),
            float(dist.density[i]),
        )
        for i in range(dist.n_bins)
    ]


def write_distribution_csv(dist, path, kind=None, mode=None):
    write_csv(
        path,
        DISTRIBUTION_HEADER,
        distribution_rows(dist),
        metadata=distribution_metadata(dist, kind=kind, mode=mode),
    )
