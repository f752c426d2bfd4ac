import io
from collections import Counter

import numpy as np
import pytest
from scipy.stats import binom

from src.core.exceptions import GeneratorError
from src.core.generators import (
    DpaParams, Scenario, SumTree, gen_dpa, gen_er, read_scenarios, scenario_of_edge, write_scenarios,
)
from src.core.graph import degree_pair_dist


def test_er_empty_and_complete():
    assert gen_er(100, 0.0, seed=1).num_edges == 0
    full = gen_er(3, 1.0, seed=1)
    assert full.num_edges == 9
    assert sum(s == t for s, t in full.edges) == 3


@pytest.mark.parametrize("n, p", [(0, 0.5), (5, -0.1), (5, 1.5)])
def test_er_rejects_bad_parameters(n, p):
    with pytest.raises(GeneratorError):
        gen_er(n, p)


def test_er_edge_count_moments():
    n, p = 200, 0.1
    counts = [gen_er(n, p, seed).num_edges for seed in np.random.SeedSequence(5).spawn(50)]
    sd = np.sqrt(n * n * p * (1 - p))
    assert abs(np.mean(counts) - n * n * p) < 3 * sd


def test_er_out_degree_marginal_is_binomial():
    n, p = 1000, 0.1
    nu = degree_pair_dist(gen_er(n, p, seed=17))
    marginal = nu.out_marginal()
    # düğümlerin çıkış derecesi Bin(n, p); kendi-döngüler dahil
    for k in range(70, 131):
        expected = binom.pmf(k, n, p)
        sd = np.sqrt(expected * (1 - expected) / n)
        assert abs(marginal.get(k, 0.0) - expected) <= 4 * sd + 1e-12


def test_er_is_deterministic():
    assert gen_er(50, 0.2, seed=7).edges == gen_er(50, 0.2, seed=7).edges


def test_sum_tree_sampling_frequencies(rng):
    tree = SumTree(4)
    for index, weight in enumerate([1.0, 2.0, 3.0, 4.0]):
        tree.set(index, weight)
    assert tree.total == pytest.approx(10.0)
    draws = Counter(tree.sample(u) for u in rng.random(100_000).tolist())
    for index, weight in enumerate([1.0, 2.0, 3.0, 4.0]):
        assert abs(draws[index] / 100_000 - weight / 10.0) < 0.01


def test_sum_tree_updates_and_edges():
    tree = SumTree(3)
    assert tree.capacity == 4
    tree.set(0, 1.0)
    tree.set(2, 1.0)
    tree.add(2, 2.0)
    assert tree[2] == 3.0 and len(tree) == 3
    assert tree.find(0.5) == 0
    assert tree.find(1.5) == 2
    assert tree.find(4.0) == 2
    with pytest.raises(GeneratorError):
        tree.set(5, 1.0)
    with pytest.raises(GeneratorError):
        tree.set(0, -1.0)


def test_dpa_alpha_only_is_in_tree():
    g = gen_dpa(DpaParams(1.0, 0.0, 0.0, target_edges=50), seed=3)
    assert g.num_nodes == 51
    assert g.num_edges == 51
    assert (g.out_deg[1:] == 1).all()
    assert scenario_of_edge(g, 0) is Scenario.SEED
    assert all(scenario_of_edge(g, i) is Scenario.ALPHA for i in range(1, 51))


def test_dpa_gamma_only():
    g = gen_dpa(DpaParams(0.0, 0.0, 1.0, target_edges=50), seed=3)
    assert (g.in_deg[1:] == 1).all()


def test_dpa_beta_only_stays_on_seed():
    g = gen_dpa(DpaParams(0.0, 1.0, 0.0, target_edges=20), seed=3)
    assert g.num_nodes == 1
    assert g.edges == [(0, 0)] * 21
    assert set(g.scenarios[1:].tolist()) == {int(Scenario.BETA)}


def test_dpa_count_laws_and_labels():
    g = gen_dpa(DpaParams(0.3, 0.4, 0.3, target_edges=10_000), seed=21)
    labels = Counter(g.scenarios.tolist())
    assert g.num_edges == 10_001
    assert g.num_nodes == 1 + labels[Scenario.ALPHA] + labels[Scenario.GAMMA]
    for scenario, share in ((Scenario.ALPHA, 0.3), (Scenario.BETA, 0.4), (Scenario.GAMMA, 0.3)):
        assert abs(labels[scenario] / 10_000 - share) < 0.02
    assert g.degrees_consistent()


def test_dpa_is_deterministic():
    params = DpaParams(0.2, 0.6, 0.2, delta_in=0.5, delta_out=2.5, target_edges=2000)
    first, second = gen_dpa(params, seed=9), gen_dpa(params, seed=9)
    assert first.edges == second.edges
    assert np.array_equal(first.scenarios, second.scenarios)


def test_dpa_params_validation():
    with pytest.raises(GeneratorError):
        DpaParams(0.5, 0.5, 0.5)
    with pytest.raises(GeneratorError):
        DpaParams(0.5, 0.5, 0.0, delta_in=0.0)
    with pytest.raises(GeneratorError):
        DpaParams(1.0, 0.0, 0.0, target_edges=0)


def test_dpa_params_resolve():
    params = DpaParams.resolve(alpha=0.2, target_edges=10)
    assert (params.beta, params.gamma) == pytest.approx((0.4, 0.4))
    assert DpaParams.resolve(alpha=1.0).beta == 0.0
    with pytest.raises(GeneratorError):
        DpaParams.resolve(alpha=0.8, beta=0.5)


def test_scenario_labels_missing_on_er():
    with pytest.raises(GeneratorError, match="no scenario labels"):
        scenario_of_edge(gen_er(5, 0.5, seed=1), 0)


def test_scenario_sidecar():
    g = gen_dpa(DpaParams(0.3, 0.4, 0.3, target_edges=30), seed=4)
    buffer = io.StringIO()
    write_scenarios(g, buffer)
    lines = buffer.getvalue().split()
    assert lines[0] == "s"
    assert set(lines[1:]) <= {"a", "b", "g"}

    plain = gen_dpa(DpaParams(0.3, 0.4, 0.3, target_edges=30), seed=4)
    plain.scenarios = None
    back = read_scenarios(io.StringIO(buffer.getvalue()), plain)
    assert np.array_equal(back.scenarios, g.scenarios)
    with pytest.raises(GeneratorError):
        read_scenarios(io.StringIO("a\nb\n"), plain)
    with pytest.raises(GeneratorError):
        Scenario.from_letter("x")


@pytest.mark.slow
def test_er_mean_edge_count_over_replicates():
    n, p = 1000, 0.1
    counts = [gen_er(n, p, seed).num_edges for seed in np.random.SeedSequence(6).spawn(100)]
    assert abs(np.mean(counts) - n * n * p) < 3 * np.sqrt(n * n * p * (1 - p))
