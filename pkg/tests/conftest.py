"""
Ortak test fikstürleri
"""
import numpy as np
import pytest

from src.core.assortativity import AssortProfile
from src.core.graph import DirectedGraph
from src.utils.constants import TYPE_PAIRS


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_graph():
    """0->1, 1->2, 2->0, 0->2: dört uç dağılımı da dejenere değil"""
    return DirectedGraph.from_edges(3, [(0, 1), (1, 2), (2, 0), (0, 2)])


@pytest.fixture
def forced_graph():
    """A->A, A->B, B->A, B->C, C->B

    Her düğümde çıkış = giriş, bu yüzden dört r değeri eşittir; η tek bir
    serbest parametreye sahiptir ve r ∈ [-0.25, 1].
    """
    return DirectedGraph.from_edges(3, [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1)])


@pytest.fixture
def two_cycle():
    return DirectedGraph.from_edges(2, [(0, 1), (1, 0)])


@pytest.fixture
def pearson_profile():
    """Kenar listesi üzerinden np.corrcoef ile bağımsız r(a, b)"""
    def compute(g: DirectedGraph) -> AssortProfile:
        degrees = {1: g.out_deg, 2: g.in_deg}
        values = []
        for a, b in TYPE_PAIRS:
            x = np.array([degrees[a][s] for s, _ in g.edges], dtype=float)
            y = np.array([degrees[b][t] for _, t in g.edges], dtype=float)
            values.append(np.corrcoef(x, y)[0, 1])
        return AssortProfile.from_values(values)
    return compute
