"""Scoring methods: pinned hand values, oracle equivalence, invariances."""

import math

import numpy as np
import pytest

import oracles
from conftest import make_graph, random_graph

from egolink.ego import ALL_MODES, ego_view
from egolink.errors import ConfigError, PreconditionError
from egolink.evaluation import rank_candidates
from egolink.scorers import (
    ALL_METHODS,
    MODE_NONE,
    ScoreTable,
    score_aa,
    score_candidates,
    score_cn,
    score_pdaa,
    score_pdcn,
    validate_methods,
)

_PAIR_FNS = {"cn": score_cn, "aa": score_aa, "pd-cn": score_pdcn, "pd-aa": score_pdaa}


class TestPinnedValues:
    def test_aa_degree_two_bridge(self):
        # single common neighbor of symmetric degree 2
        g = make_graph([(0, 1), (1, 2)], 3)
        got = score_aa(g, 0, 2)
        assert got == pytest.approx(1.4427, abs=1e-3)
        assert got == pytest.approx(1.0 / math.log(2), abs=1e-12)

    def test_aa_in_mode_smoothing(self):
        # bridge with in-degree 1: denominator log(1 + 2)
        g = make_graph([(0, 1), (1, 2)], 3, directed=True)
        got = score_aa(g, 0, 2, mode="in")
        assert got == pytest.approx(0.9102, abs=1e-3)
        assert got == pytest.approx(1.0 / math.log(3), abs=1e-12)

    def test_pdcn_stranger_bridge(self):
        g = make_graph([(0, 1), (1, 2)], 3)
        got = score_pdcn(g, 0, 2)
        assert got == pytest.approx(0.6931, abs=1e-3)
        assert got == pytest.approx(math.log(2), abs=1e-12)

    def test_pdcn_embedded_bridge(self, two_broker_graph):
        g, ids = two_broker_graph
        got = score_pdcn(g, ids["u"], ids["y1"])
        assert got == pytest.approx(2.1972, abs=1e-3)
        assert got == pytest.approx(math.log(9), abs=1e-12)

    def test_pdaa_low_embed(self):
        # P=1, G=3: bracket 20/3
        g = make_graph([(0, 1), (1, 2)], 3)
        got = score_pdaa(g, 0, 2)
        assert got == pytest.approx(0.5270, abs=1e-3)
        assert got == pytest.approx(1.0 / math.log(20 / 3), abs=1e-12)

    def test_pdaa_mid_embed(self):
        # z: pd 2, gd 4 -> P=3, G=5, bracket 68/15
        pairs = [(0, 1), (0, 3), (0, 4), (1, 3), (1, 4), (1, 2)]
        g = make_graph(pairs, 5)
        got = score_pdaa(g, 0, 2)
        assert got == pytest.approx(0.6614, abs=1e-3)
        assert got == pytest.approx(1.0 / math.log(68 / 15), abs=1e-12)

    def test_cn_counts(self, two_broker_graph):
        g, ids = two_broker_graph
        assert score_cn(g, ids["u"], ids["y1"]) == 1.0
        assert score_cn(g, ids["u"], ids["x1"]) == 1.0


class TestBulkAgainstPairs:
    @pytest.mark.parametrize("directed", [False, True])
    def test_equal(self, directed):
        modes = ALL_MODES if directed else ("undirected",)
        for seed in range(40):
            g, _ = random_graph(seed, 12, 0.3, directed)
            for u in range(12):
                view = ego_view(g, u)
                if view.candidates.size == 0:
                    continue
                for mode in modes:
                    table = score_candidates(g, u, mode=mode, view=view)
                    for i, v in enumerate(view.candidates.tolist()):
                        for method in ALL_METHODS:
                            fn = _PAIR_FNS[method]
                            one = fn(g, u, v) if method == "cn" else fn(g, u, v, mode=mode)
                            assert table.scores(method)[i] == pytest.approx(one, abs=1e-12)


class TestAgainstOracle:
    @pytest.mark.parametrize("directed", [False, True])
    def test_all_methods_all_modes(self, directed):
        modes = ALL_MODES if directed else ("undirected",)
        for seed in range(40):
            n = 10
            g, pairs = random_graph(seed, n, 0.3, directed)
            out, inn, sym = oracles.adjacency(n, pairs, directed)
            for u in range(n):
                view = ego_view(g, u)
                for mode in modes:
                    table = score_candidates(g, u, mode=mode, view=view)
                    for i, v in enumerate(view.candidates.tolist()):
                        for method in ALL_METHODS:
                            want = oracles.score(out, inn, sym, u, v, method, mode)
                            assert table.scores(method)[i] == pytest.approx(want, abs=1e-12)


class TestLogBase:
    def test_rankings_base_invariant(self):
        for seed in range(50):
            g, _ = random_graph(seed, 16, 0.25, seed % 2 == 1)
            view = None
            for u in range(16):
                view = ego_view(g, u)
                if view.candidates.size >= 3:
                    break
            if view.candidates.size < 3:
                continue
            for method in ("aa", "pd-cn", "pd-aa"):
                orders = []
                for base in (2.0, None, 10.0):
                    table = score_candidates(g, u, methods=(method,),
                                             log_base=base, view=view)
                    orders.append(rank_candidates(table).ranking.tolist())
                assert orders[0] == orders[1] == orders[2]

    def test_scores_scale_exactly(self):
        g, _ = random_graph(3, 12, 0.4, False)
        u = 0
        view = ego_view(g, u)
        natural = score_candidates(g, u, view=view)
        based = score_candidates(g, u, log_base=10.0, view=view)
        ln10 = math.log(10.0)
        # reciprocal-log methods scale up, direct-log methods scale down
        assert np.allclose(based.scores("aa"), natural.scores("aa") * ln10, atol=1e-12)
        assert np.allclose(based.scores("pd-aa"), natural.scores("pd-aa") * ln10, atol=1e-12)
        assert np.allclose(based.scores("pd-cn"), natural.scores("pd-cn") / ln10, atol=1e-12)
        assert np.array_equal(based.scores("cn"), natural.scores("cn"))

    def test_invalid_base(self):
        g = make_graph([(0, 1), (1, 2)], 3)
        with pytest.raises(ConfigError):
            score_aa(g, 0, 2, log_base=1.0)
        with pytest.raises(ConfigError):
            score_candidates(g, 0, log_base=0.5)


class TestValidation:
    def test_methods(self):
        validate_methods(ALL_METHODS)
        with pytest.raises(ConfigError):
            validate_methods(())
        with pytest.raises(ConfigError):
            validate_methods(("cn", "katz"))
        with pytest.raises(ConfigError):
            validate_methods(("cn", "cn"))

    def test_unknown_mode(self):
        g = make_graph([(0, 1), (1, 2)], 3, directed=True)
        with pytest.raises(ConfigError):
            score_aa(g, 0, 2, mode="both")

    def test_pair_preconditions(self):
        g = make_graph([(0, 1), (1, 2), (0, 3)], 4)
        with pytest.raises(PreconditionError):
            score_cn(g, 0, 0)
        with pytest.raises(PreconditionError):
            score_cn(g, 0, 1)  # already adjacent
        with pytest.raises(IndexError):
            score_cn(g, 0, 42)  # out of range
        with pytest.raises(PreconditionError):
            score_aa(g, 3, 2)  # no common neighbors


class TestStructure:
    def test_leaf_neighbor_harmless(self):
        # degree-1 neighbor contributes no candidates and must not poison
        # the shared term table with its log(1) denominator
        g = make_graph([(0, 1), (0, 2), (2, 3)], 4)
        table = score_candidates(g, 0)
        assert table.candidates.tolist() == [3]
        for method in ALL_METHODS:
            assert np.all(np.isfinite(table.scores(method)))
        assert table.scores("aa")[0] == pytest.approx(1 / math.log(2), abs=1e-12)

    def test_cn_column_mode_free(self):
        g, _ = random_graph(5, 12, 0.35, True)
        tables = [score_candidates(g, 2, mode=m) for m in ALL_MODES]
        for t in tables[1:]:
            assert np.array_equal(t.scores("cn"), tables[0].scores("cn"))

    def test_more_embedded_scores_higher(self, two_broker_graph):
        # same common-neighbor count; the mutual-heavy bridge wins on
        # personalized methods and loses on plain aa (higher degree)
        g, ids = two_broker_graph
        u, y1, x1 = ids["u"], ids["y1"], ids["x1"]
        assert score_pdcn(g, u, y1) > score_pdcn(g, u, x1)
        assert score_pdaa(g, u, y1) > score_pdaa(g, u, x1)
        assert score_cn(g, u, y1) == score_cn(g, u, x1)

    def test_table_lookup(self, two_broker_graph):
        g, ids = two_broker_graph
        table = score_candidates(g, ids["u"], methods=("cn",))
        assert isinstance(table, ScoreTable)
        assert table.mode == "undirected"
        assert table.methods == ("cn",)
        with pytest.raises(KeyError):
            table.scores("aa")

    def test_empty_candidates(self):
        g = make_graph([(0, 1)], 2)
        table = score_candidates(g, 0)
        assert table.candidates.size == 0
        for method in ALL_METHODS:
            assert table.scores(method).size == 0
