"""
Rastgele yönlü ağ üreticileri - kendi-döngülü ER ve DPA modeli
"""
import logging
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import List, Optional, TextIO, Union

import numpy as np

from .exceptions import GeneratorError
from .graph import DirectedGraph
from ..utils.constants import SCENARIO_LETTERS

logger = logging.getLogger(__name__)

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


class Scenario(IntEnum):
    """DPA kenar oluşturma senaryosu"""
    ALPHA = 0
    BETA = 1
    GAMMA = 2
    SEED = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @property
    def letter(self) -> str:
        return SCENARIO_LETTERS[self.label]

    @classmethod
    def from_letter(cls, letter: str) -> "Scenario":
        for scenario in cls:
            if scenario.letter == letter:
                return scenario
        raise GeneratorError(f"unknown scenario letter {letter!r}")


class SumTree:
    """Dinamik kümülatif ağırlık ağacı: O(log n) güncelleme ve örnekleme

    Yapraklar 1 tabanlı yığın dizisinin ikinci yarısındadır; iç düğümler
    çocuklarının toplamını tutar.
    """

    def __init__(self, capacity: int):
        self.capacity = 1
        while self.capacity < max(1, capacity):
            self.capacity *= 2
        self.tree = [0.0] * (2 * self.capacity)
        self.size = 0

    @property
    def total(self) -> float:
        return self.tree[1]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, index: int) -> float:
        return self.tree[self.capacity + index]

    def set(self, index: int, weight: float):
        if not 0 <= index < self.capacity:
            raise GeneratorError(f"sum tree index {index} outside capacity {self.capacity}")
        if weight < 0:
            raise GeneratorError("sum tree weights must be nonnegative")
        self.add(index, weight - self.tree[self.capacity + index])
        self.size = max(self.size, index + 1)

    def add(self, index: int, delta: float):
        node = self.capacity + index
        tree = self.tree
        while node:
            tree[node] += delta
            node >>= 1

    def find(self, mass: float) -> int:
        """Kümülatif ağırlığı mass'ı aşan ilk yaprak"""
        tree = self.tree
        node = 1
        while node < self.capacity:
            left = node << 1
            if mass < tree[left]:
                node = left
            else:
                mass -= tree[left]
                node = left + 1
        index = node - self.capacity
        # yuvarlama taşması
        return min(index, self.size - 1)

    def sample(self, uniform: float) -> int:
        """uniform ∈ [0, 1) ile ağırlıkla orantılı indeks"""
        return self.find(uniform * self.total)


@dataclass(frozen=True)
class DpaParams:
    alpha: float
    beta: float
    gamma: float
    delta_in: float = 1.0
    delta_out: float = 1.0
    target_edges: int = 10000

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise GeneratorError(f"{name}={value} outside [0, 1]")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-12:
            raise GeneratorError("alpha + beta + gamma must equal 1")
        if self.delta_in <= 0 or self.delta_out <= 0:
            raise GeneratorError("delta_in and delta_out must be positive")
        if self.target_edges < 1:
            raise GeneratorError("target_edges must be at least 1")

    @classmethod
    def resolve(cls, alpha: Optional[float] = None, beta: Optional[float] = None,
                gamma: Optional[float] = None, **kwargs) -> "DpaParams":
        """Verilmeyen olasılıklar kalan kütleyi eşit paylaşır"""
        given = {k: v for k, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma)) if v is not None}
        missing = [k for k in ("alpha", "beta", "gamma") if k not in given]
        if missing:
            remainder = 1.0 - sum(given.values())
            if remainder < -1e-12:
                raise GeneratorError("given scenario probabilities exceed 1")
            for k in missing:
                given[k] = max(0.0, remainder) / len(missing)
        return cls(given["alpha"], given["beta"], given["gamma"], **kwargs)


def gen_er(n: int, p: float, seed: SeedLike = None) -> DirectedGraph:
    """n² sıralı çiftin her biri (kendi-döngüler dahil) p olasılıkla kenar"""
    if n < 1:
        raise GeneratorError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise GeneratorError(f"p={p} outside [0, 1]")
    rng = np.random.default_rng(seed)
    sources, targets = np.nonzero(rng.random((n, n)) < p)
    logger.debug("ER(n=%d, p=%g): %d kenar", n, p, sources.size)
    return DirectedGraph(n, sources, targets)


def gen_dpa(params: DpaParams, seed: SeedLike = None) -> DirectedGraph:
    """Yönlü tercihli bağlanma; tohum tek düğüm ve bir kendi-döngüsü

    α: yeni düğüm -> mevcut v2 (∝ d_in + δ_in)
    β: mevcut v1 (∝ d_out + δ_out) -> mevcut v2 (∝ d_in + δ_in)
    γ: mevcut v1 (∝ d_out + δ_out) -> yeni düğüm
    """
    rng = np.random.default_rng(seed)
    T = params.target_edges
    out_tree = SumTree(T + 1)
    in_tree = SumTree(T + 1)
    sources = np.empty(T + 1, dtype=np.int64)
    targets = np.empty(T + 1, dtype=np.int64)
    labels = np.empty(T + 1, dtype=np.int8)

    sources[0] = targets[0] = 0
    labels[0] = Scenario.SEED
    out_tree.set(0, 1.0 + params.delta_out)
    in_tree.set(0, 1.0 + params.delta_in)
    num_nodes = 1

    alpha_cut = params.alpha
    beta_cut = params.alpha + params.beta
    for step, (u, first, second) in enumerate(rng.random((T, 3)).tolist()):
        if u < alpha_cut:
            v2 = in_tree.sample(first)
            v1 = num_nodes
            num_nodes += 1
            out_tree.set(v1, 1.0 + params.delta_out)
            in_tree.set(v1, params.delta_in)
            in_tree.add(v2, 1.0)
            scenario = Scenario.ALPHA
        elif u < beta_cut:
            v1 = out_tree.sample(first)
            v2 = in_tree.sample(second)
            out_tree.add(v1, 1.0)
            in_tree.add(v2, 1.0)
            scenario = Scenario.BETA
        else:
            v1 = out_tree.sample(first)
            v2 = num_nodes
            num_nodes += 1
            out_tree.set(v2, params.delta_out)
            in_tree.set(v2, 1.0 + params.delta_in)
            out_tree.add(v1, 1.0)
            scenario = Scenario.GAMMA
        sources[step + 1] = v1
        targets[step + 1] = v2
        labels[step + 1] = scenario

    logger.debug("DPA%s: %d düğüm, %d kenar", params, num_nodes, T + 1)
    return DirectedGraph(num_nodes, sources, targets, labels)


def scenario_of_edge(g: DirectedGraph, index: int) -> Scenario:
    if not g.has_scenarios:
        raise GeneratorError("no scenario labels")
    g._check_index(index)
    return Scenario(int(g.scenarios[index]))


def write_scenarios(g: DirectedGraph, stream: TextIO):
    """Kenar başına bir senaryo harfi"""
    if not g.has_scenarios:
        raise GeneratorError("no scenario labels")
    letters = [Scenario(code).letter for code in g.scenarios.tolist()]
    stream.write("\n".join(letters) + ("\n" if letters else ""))


def read_scenarios(stream: TextIO, g: DirectedGraph) -> DirectedGraph:
    """Senaryo yan dosyasını grafa ekle"""
    codes: List[int] = [int(Scenario.from_letter(line.strip())) for line in stream if line.strip()]
    if len(codes) != g.num_edges:
        raise GeneratorError(f"sidecar has {len(codes)} labels for {g.num_edges} edges")
    return DirectedGraph(g.num_nodes, g.sources, g.targets, codes)


def save_scenarios(g: DirectedGraph, path: str) -> str:
    filepath = Path(path)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        write_scenarios(g, f)
    return str(filepath)


def load_scenarios(path: str, g: DirectedGraph) -> DirectedGraph:
    with open(path, "r", encoding="utf-8") as f:
        return read_scenarios(f, g)
