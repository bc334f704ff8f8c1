"""Release gate: one test per shipping criterion.

Run ``pytest tests/test_acceptance.py -v`` to get one pass/fail line per
criterion. Each test is self-timed where the criterion carries a runtime
budget; random inputs use frozen seeds so the gate is deterministic.
"""

import math
import os
import time

import numpy as np
import pytest

import oracles
from conftest import random_graph

from egolink.cli import main as cli_main
from egolink.ego import (
    EdgeConfig,
    TriadType,
    classify_triad,
    common_neighbors,
    ego_neighbors,
    global_degrees,
    personalized_degree,
    personalized_degrees,
    two_hop_candidates,
)
from egolink.empirical import aggregate_empirical
from egolink.evaluation import evaluate_methods, rank_candidates
from egolink.generators import GeneratorSpec, generate
from egolink.graph import SnapshotGraph, build_snapshots, ingest_edges
from egolink.scorers import ALL_METHODS, MODE_NONE, score_candidates


TOL = 1e-12


@pytest.fixture(scope="module", autouse=True)
def _warm_kernels():
    """Absorb one-time compilation cost before any criterion's clock starts."""
    graph, _ = random_graph(0, 10, 0.4, True)
    for u in range(graph.n_nodes):
        if two_hop_candidates(graph, u).size:
            score_candidates(graph, u, mode="out")
            break


def _scoring_modes(method, directed):
    if method == "cn":
        return ("undirected",)  # mode-free: any one mode gives the column
    return ("out", "in", "undirected") if directed else ("undirected",)


def _planted_series(method, seed):
    spec = GeneratorSpec(kind="planted-scorer", n_nodes=1000, edge_prob=0.02,
                         method=method, n_snapshots=3, formation_rate=0.05,
                         seed=seed)
    return build_snapshots(generate(spec), preassigned=True)


def _group_rows(agg, kind):
    rows = {r.group: r for r in agg.rows
            if r.degree_kind == kind and r.mode == "undirected"}
    return rows["formed"], rows["not-formed"]


def test_c01_scorers_match_reference_on_200_random_graphs():
    """All four scorers, every applicable degree mode, equal a naive
    set-arithmetic reference to 1e-12 on 200 small seeded graphs."""
    start = time.monotonic()
    compared = 0
    for seed in range(200):
        directed = bool(seed % 2)
        n = 4 + seed % 9  # 4..12 nodes
        graph, pairs = random_graph(seed, n, 0.3, directed)
        out, inn, sym = oracles.adjacency(n, pairs, directed)
        for u in range(n):
            cands = two_hop_candidates(graph, u)
            if cands.size == 0:
                continue
            for method in ALL_METHODS:
                for mode in _scoring_modes(method, directed):
                    table = score_candidates(graph, u, methods=(method,),
                                             mode=mode)
                    got = table.scores(method)
                    for v, g in zip(table.candidates.tolist(), got.tolist()):
                        want = oracles.score(out, inn, sym, u, v, method, mode)
                        assert abs(g - want) <= TOL, (seed, u, v, method, mode)
                        compared += 1
    elapsed = time.monotonic() - start
    assert compared > 10_000  # the sweep actually exercised scores
    assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_c02_reference_neighborhood_yields_degrees_0_and_7(two_broker_graph):
    """The constructed two-broker neighborhood: the high-degree broker has
    personalized degree exactly 0, the embedded broker exactly 7."""
    start = time.monotonic()
    graph, ids = two_broker_graph
    u, z1, z2 = ids["u"], ids["z1"], ids["z2"]
    assert personalized_degree(graph, u, z1) == 0
    assert personalized_degree(graph, u, z2) == 7
    assert global_degrees(graph, np.array([z1, z2]), "undirected").tolist() == [14, 9]
    assert time.monotonic() - start < 1.0


def test_c03_personalized_degree_bounds_hold_on_1000_graphs():
    """pd <= global - 1 for every neighbor; pd <= global - 2 for every
    neighbor that is also adjacent to some 2-hop candidate."""
    violations = 0
    checked = 0
    for seed in range(1000):
        n = 4 + seed % 13  # 4..16 nodes
        p = (0.15, 0.3, 0.5)[seed % 3]
        graph, _ = random_graph(10_000 + seed, n, p, False)
        for u in range(n):
            nb = ego_neighbors(graph, u)
            if nb.size == 0:
                continue
            pd = personalized_degrees(graph, u, nb, "undirected")
            gd = global_degrees(graph, nb, "undirected")
            violations += int(np.count_nonzero(pd > gd - 1))
            checked += nb.size
            cands = two_hop_candidates(graph, u)
            if cands.size == 0:
                continue
            for z, pd_z, gd_z in zip(nb.tolist(), pd.tolist(), gd.tolist()):
                touches_candidate = np.intersect1d(
                    graph.neighbors(z), cands).size > 0
                if touches_candidate:
                    violations += int(pd_z > gd_z - 2)
    assert checked > 10_000
    assert violations == 0


def test_c04_degree_weight_argument_exceeds_1_for_all_pairs_up_to_10000():
    """The quantity inside the weighting log of the degree-aware scorer,
    p*(g-p)/g + g*(g-p)/p, stays strictly above 1 for every integer
    1 <= p < g <= 10,000, so every weight is positive and finite."""
    start = time.monotonic()
    lowest = np.inf
    for g in range(2, 10_001):
        p = np.arange(1, g, dtype=np.float64)
        bracket = p * (g - p) / g + g * (g - p) / p
        lowest = min(lowest, float(bracket.min()))
    elapsed = time.monotonic() - start
    assert lowest > 1.0
    assert np.isfinite(lowest)
    assert elapsed < 5.0, f"took {elapsed:.1f}s"


def test_c05_rankings_identical_under_log_bases_2_e_10():
    """Changing the logarithm base never reorders any candidate list for
    the three log-using scorers (frozen tie-break: score desc, id asc)."""
    methods = ("aa", "pd-cn", "pd-aa")
    compared = 0
    for seed in range(50):
        directed = bool(seed % 2)
        n = 6 + seed % 7
        graph, _ = random_graph(20_000 + seed, n, 0.35, directed)
        for u in range(n):
            if two_hop_candidates(graph, u).size == 0:
                continue
            for mode in _scoring_modes("aa", directed):
                tables = [score_candidates(graph, u, methods=methods,
                                           mode=mode, log_base=base)
                          for base in (2.0, None, 10.0)]
                for method in methods:
                    orders = [rank_candidates(t, method).ranking for t in tables]
                    assert np.array_equal(orders[0], orders[1])
                    assert np.array_equal(orders[1], orders[2])
                    compared += 1
    assert compared > 100


def test_c06_nine_direction_configurations_map_onto_all_nine_triads():
    """(ego edge direction) x (far edge direction) is a bijection onto
    T01..T09, and T07..T09 are exactly the ego-incoming-only cases."""
    seen = {}
    for ego_cfg in EdgeConfig:
        for nb_cfg in EdgeConfig:
            pairs = []
            if ego_cfg in (EdgeConfig.OUT, EdgeConfig.RECIPROCAL):
                pairs.append((0, 1))
            if ego_cfg in (EdgeConfig.IN, EdgeConfig.RECIPROCAL):
                pairs.append((1, 0))
            if nb_cfg in (EdgeConfig.OUT, EdgeConfig.RECIPROCAL):
                pairs.append((1, 2))
            if nb_cfg in (EdgeConfig.IN, EdgeConfig.RECIPROCAL):
                pairs.append((2, 1))
            src, dst = zip(*pairs)
            graph = SnapshotGraph(3, np.array(src), np.array(dst), True)
            triad = classify_triad(graph, 0, 1, 2)
            seen[(ego_cfg, nb_cfg)] = triad
            ego_in_only = ego_cfg == EdgeConfig.IN
            assert (triad in (TriadType.T07, TriadType.T08, TriadType.T09)) \
                == ego_in_only
    assert sorted(seen.values()) == list(TriadType)  # bijection


def test_c07_planted_broker_embedding_separates_formed_group():
    """On a 1,000-node sequence whose formations follow the personalized
    common-neighbor scorer, the formed group's mean log personalized degree
    exceeds the not-formed group's by at least 2 combined standard errors."""
    start = time.monotonic()
    series = _planted_series("pd-cn", seed=7)
    agg = aggregate_empirical(series, degree_modes=("undirected",))
    formed, not_formed = _group_rows(agg, "personalized")
    combined_se = math.hypot(formed.stderr, not_formed.stderr)
    assert formed.mean - not_formed.mean >= 2.0 * combined_se
    assert time.monotonic() - start < 60.0


def test_c08_planted_rare_broker_preference_lowers_formed_global_degree():
    """On a 1,000-node sequence whose formations follow the inverse-log-degree
    scorer, the formed group's mean log global degree sits at least 2 combined
    standard errors BELOW the not-formed group's."""
    start = time.monotonic()
    series = _planted_series("aa", seed=11)
    agg = aggregate_empirical(series, degree_modes=("undirected",))
    formed, not_formed = _group_rows(agg, "global")
    combined_se = math.hypot(formed.stderr, not_formed.stderr)
    assert not_formed.mean - formed.mean >= 2.0 * combined_se
    assert time.monotonic() - start < 60.0


def test_c09_personalized_scorers_win_top10_on_planted_fixture():
    """On the broker-embedding planted fixture, mean P@10 of the personalized
    variants beats (or matches, for the log-weighted pair) their plain
    counterparts."""
    start = time.monotonic()
    series = _planted_series("pd-cn", seed=7)
    res = evaluate_methods(series, methods=ALL_METHODS, ks=(10,), seed=0)
    p = {
        "cn": res.row("cn", MODE_NONE, 10).mean_p_at_k,
        "aa": res.row("aa", "undirected", 10).mean_p_at_k,
        "pd-cn": res.row("pd-cn", "undirected", 10).mean_p_at_k,
        "pd-aa": res.row("pd-aa", "undirected", 10).mean_p_at_k,
    }
    assert p["pd-cn"] > p["cn"], p
    assert p["pd-aa"] >= p["aa"], p
    assert time.monotonic() - start < 60.0


def test_c10_pipelines_are_byte_identical_across_reruns_and_workers(tmp_path):
    """Same seed twice, and worker counts 1 vs 8, produce byte-identical
    CSVs from both the group-statistics and the ranking-evaluation pipelines."""
    gen = tmp_path / "gen"
    assert cli_main(["generate", "--kind", "planted-scorer", "--n-nodes", "300",
                     "--edge-prob", "0.03", "--method", "pd-cn",
                     "--n-snapshots", "3", "--seed", "5",
                     "--output-dir", str(gen)]) == 0
    data = str(gen / "normalized.csv")

    def run(command, filename, tag, workers):
        out = tmp_path / f"{command}-{tag}"
        assert cli_main([command, "--input", data, "--time-mode", "index",
                         "--seed", "3", "--workers", str(workers),
                         "--output-dir", str(out)]) == 0
        return (out / filename).read_bytes()

    for command, filename in (("empirical", "empirical.csv"),
                              ("evaluate", "eval.csv")):
        first = run(command, filename, "a", workers=1)
        again = run(command, filename, "b", workers=1)
        fanned = run(command, filename, "c", workers=8)
        assert first == again
        assert first == fanned


FB_EDGE_FILE = os.environ.get(
    "EGOLINK_FB_EDGES",
    os.path.join(os.path.dirname(__file__), os.pardir, "data",
                 "facebook-links.txt"),
)


@pytest.mark.skipif(not os.path.exists(FB_EDGE_FILE),
                    reason="real-world edge list not present; set "
                           "EGOLINK_FB_EDGES or place data/facebook-links.txt")
def test_c11_real_social_network_prefers_personalized_scorers():
    """Optional, data-dependent: with 90-day snapshots of the public New
    Orleans friendship list, the personalized common-neighbor scorer beats
    the plain one at every tested K (improvement between 0.5% and 5%), and
    the personalized log-weighted scorer ranks best overall."""
    edges = ingest_edges(FB_EDGE_FILE, directed=False, missing_time=0)
    series = build_snapshots(edges, window_length=90 * 86_400)
    ks = (1, 3, 5, 10, 20, 30, 50)
    res = evaluate_methods(series, methods=ALL_METHODS, ks=ks,
                           sample_size=5000, seed=0)
    for k in ks:
        cn = res.row("cn", MODE_NONE, k).mean_p_at_k
        aa = res.row("aa", "undirected", k).mean_p_at_k
        pd_cn = res.row("pd-cn", "undirected", k).mean_p_at_k
        pd_aa = res.row("pd-aa", "undirected", k).mean_p_at_k
        assert pd_cn > cn, k
        assert pd_aa >= max(cn, aa, pd_cn), k
        improvement = 100.0 * (pd_cn - cn) / cn
        assert 0.5 <= improvement <= 5.0, (k, improvement)
