"""Candidate scorers for one ego: common neighbors, degree-damped
common neighbors, and their personalized-degree variants.

All four scores decompose over the common neighbors ``z`` of the pair
``(ego, v)``:

* ``cn``     counts them,
* ``aa``     adds ``1 / log(effective global degree of z)``,
* ``pd-cn``  adds ``log(pd(z) + 2)``,
* ``pd-aa``  adds ``1 / log(P*(G-P)/G + G*(G-P)/P)`` with
  ``P = pd(z) + 1`` and ``G`` the shifted global degree.

Shifts keep every logarithm positive: in/out modes use ``gd + 2``
where mode ``undirected`` uses the raw (``aa``) or ``+1`` (``pd-aa``)
symmetrized degree. On directed graphs, mode ``undirected`` computes
degrees on the reciprocated graph while candidate and common-neighbor
enumeration stay directed. Changing the log base rescales each method
by one positive constant, so rankings never depend on it.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .ego import (
    MODE_IN,
    MODE_OUT,
    MODE_UNDIRECTED,
    common_neighbors,
    ego_neighbors,
    ego_view,
    global_degrees,
    personalized_degrees,
    validate_mode,
)
from .errors import ConfigError, PreconditionError

METHOD_CN = "cn"
METHOD_AA = "aa"
METHOD_PD_CN = "pd-cn"
METHOD_PD_AA = "pd-aa"

ALL_METHODS = (METHOD_CN, METHOD_AA, METHOD_PD_CN, METHOD_PD_AA)

#: mode value reported for methods that never read a degree
MODE_NONE = "none"


def _ln_base(log_base):
    if log_base is None:
        return 1.0
    base = float(log_base)
    if not base > 1.0:
        raise ConfigError(f"log base must be > 1, got {log_base!r}")
    return math.log(base)


def _aa_terms(pd, gd, mode):
    if mode in (MODE_IN, MODE_OUT):
        # in/out degrees can be 0 or 1; the +2 shift keeps log positive
        return 1.0 / np.log(gd.astype(np.float64) + 2.0)
    eff = gd.astype(np.float64)
    terms = np.zeros(eff.size, dtype=np.float64)
    ok = eff >= 2.0
    # degree-1 neighbors are leaves hanging off the ego; they can never
    # co-occur with a candidate, so their zeroed term is never read
    terms[ok] = 1.0 / np.log(eff[ok])
    return terms


def _pd_cn_terms(pd, gd, mode):
    terms = np.log(pd.astype(np.float64) + 2.0)
    assert terms.size == 0 or terms.min() > 0.0
    return terms


def _pd_aa_terms(pd, gd, mode):
    p = pd.astype(np.float64) + 1.0
    g = gd.astype(np.float64) + (2.0 if mode in (MODE_IN, MODE_OUT) else 1.0)
    # p < g holds for every neighbor of the ego under these shifts
    bracket = p * (g - p) / g + g * (g - p) / p
    assert bracket.size == 0 or bracket.min() > 1.0
    return 1.0 / np.log(bracket)


_TERM_BUILDERS = {
    METHOD_AA: _aa_terms,
    METHOD_PD_CN: _pd_cn_terms,
    METHOD_PD_AA: _pd_aa_terms,
}


def _rescale(method, total, ln_base):
    """Convert a natural-log score to another base as one multiplication,
    so changing the base can never reorder candidates."""
    if method == METHOD_PD_CN:
        return total / ln_base
    return total * ln_base


def validate_methods(methods):
    methods = tuple(methods)
    if not methods:
        raise ConfigError("need at least one scoring method")
    for m in methods:
        if m not in ALL_METHODS:
            raise ConfigError(f"unknown method {m!r}; choose from {ALL_METHODS}")
    if len(set(methods)) != len(methods):
        raise ConfigError(f"duplicate methods in {methods}")
    return methods


@dataclass(frozen=True)
class ScoreTable:
    """Scores for every two-hop candidate of one ego, one column per
    method. Candidates are sorted by node id."""

    ego: int
    mode: str
    candidates: np.ndarray
    columns: dict
    cn_counts: np.ndarray

    @property
    def methods(self):
        return tuple(self.columns)

    def scores(self, method):
        return self.columns[method]


def score_candidates(graph, ego, methods=ALL_METHODS, mode=MODE_UNDIRECTED,
                     log_base=None, view=None):
    """Score all two-hop candidates of ``ego`` in one fused pass."""
    methods = validate_methods(methods)
    validate_mode(mode, graph.directed)
    ln_base = _ln_base(log_base)
    if view is None:
        view = ego_view(graph, ego)

    term_methods = [m for m in methods if m != METHOD_CN]
    if term_methods:
        pd = view.pd(mode)
        gd = view.gd(mode)
        terms = np.column_stack(
            [_TERM_BUILDERS[m](pd, gd, mode) for m in term_methods]
        )
    else:
        terms = np.zeros((view.base.size, 0), dtype=np.float64)

    sums, counts = _kernels.accumulate_common_terms(
        view.base, terms, graph.sym_indptr, graph.sym_indices, view.candidates
    )
    columns = {}
    for m in methods:
        if m == METHOD_CN:
            columns[m] = counts.astype(np.float64)
        else:
            columns[m] = _rescale(m, sums[:, term_methods.index(m)], ln_base)
    return ScoreTable(
        ego=int(ego),
        mode=mode,
        candidates=view.candidates,
        columns=columns,
        cn_counts=counts,
    )


# ---------------------------------------------------------------------------
# single-pair forms


def _pair_common(graph, u, v):
    if u == v:
        raise PreconditionError("candidate equals the ego")
    base = ego_neighbors(graph, u)
    pos = np.searchsorted(base, v)
    if pos < base.size and base[pos] == v:
        raise PreconditionError(f"{v} is already a neighbor of ego {u}")
    cns = common_neighbors(graph, u, v)
    if cns.size == 0:
        raise PreconditionError(f"{v} is not a two-hop candidate of ego {u}")
    return cns


def _score_pair(graph, u, v, method, mode, log_base):
    cns = _pair_common(graph, u, v)
    if method == METHOD_CN:
        return float(cns.size)
    validate_mode(mode, graph.directed)
    ln_base = _ln_base(log_base)
    pd = personalized_degrees(graph, u, cns, mode)
    gd = global_degrees(graph, cns, mode)
    return float(_rescale(method, _TERM_BUILDERS[method](pd, gd, mode).sum(), ln_base))


def score_cn(graph, u, v):
    """Number of common neighbors of the pair."""
    return _score_pair(graph, u, v, METHOD_CN, None, None)


def score_aa(graph, u, v, mode=MODE_UNDIRECTED, log_base=None):
    """Degree-damped common-neighbor score."""
    return _score_pair(graph, u, v, METHOD_AA, mode, log_base)


def score_pdcn(graph, u, v, mode=MODE_UNDIRECTED, log_base=None):
    """Common neighbors weighted up by their personalized degree."""
    return _score_pair(graph, u, v, METHOD_PD_CN, mode, log_base)


def score_pdaa(graph, u, v, mode=MODE_UNDIRECTED, log_base=None):
    """Degree-damped score with the damping centered on how much of a
    neighbor's degree is shared with the ego."""
    return _score_pair(graph, u, v, METHOD_PD_AA, mode, log_base)
