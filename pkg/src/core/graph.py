"""
Yönlü çoklu graf - kenar dizisi, derece sayaçları ve ν dağılımı
"""
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np

from .exceptions import EdgeListParseError, GraphError
from ..utils.constants import DIST_SUM_TOL

logger = logging.getLogger(__name__)

DegreePair = Tuple[int, int]

_NODES_HEADER = re.compile(r"^#\s*nodes\s*=\s*(\d+)\s*$")


class DirectedGraph:
    """Yönlü çoklu graf (self-loop ve paralel kenar serbest)

    Kenarlar iki paralel tamsayı dizisinde (kaynak, hedef) tutulur.
    Yeniden bağlama yalnızca hedef dizisini değiştirir; kaynak dizisi ve
    derece sayaçları oluşturulduktan sonra sabittir.
    """

    def __init__(self, num_nodes: int, sources: Optional[Iterable[int]] = None,
                 targets: Optional[Iterable[int]] = None,
                 scenarios: Optional[Iterable[int]] = None):
        if num_nodes < 0:
            raise GraphError("num_nodes must be nonnegative")
        self.num_nodes = int(num_nodes)
        self.sources = np.asarray(sources if sources is not None else [], dtype=np.int64)
        self.targets = np.asarray(targets if targets is not None else [], dtype=np.int64)
        if self.sources.shape != self.targets.shape or self.sources.ndim != 1:
            raise GraphError("source and target arrays must have equal length")
        if self.sources.size and (
            self.sources.min() < 0 or self.targets.min() < 0
            or self.sources.max() >= num_nodes or self.targets.max() >= num_nodes
        ):
            raise GraphError("edge endpoint outside 0..num_nodes-1")

        self.scenarios = None
        if scenarios is not None:
            self.scenarios = np.asarray(scenarios, dtype=np.int8)
            if self.scenarios.shape != self.sources.shape:
                raise GraphError("one scenario label per edge required")

        self.out_deg, self.in_deg = self.recount_degrees()

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[Tuple[int, int]],
                   scenarios: Optional[Iterable[int]] = None) -> "DirectedGraph":
        """(kaynak, hedef) çiftlerinden graf oluştur"""
        edges = list(edges)
        sources = [s for s, _ in edges]
        targets = [t for _, t in edges]
        return cls(num_nodes, sources, targets, scenarios)

    @property
    def num_edges(self) -> int:
        return int(self.sources.size)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return list(zip(self.sources.tolist(), self.targets.tolist()))

    @property
    def has_scenarios(self) -> bool:
        return self.scenarios is not None

    def edge(self, index: int) -> Tuple[int, int]:
        self._check_index(index)
        return int(self.sources[index]), int(self.targets[index])

    def recount_degrees(self) -> Tuple[np.ndarray, np.ndarray]:
        """Dereceleri kenar listesinden yeniden say"""
        out_deg = np.bincount(self.sources, minlength=self.num_nodes).astype(np.int64)
        in_deg = np.bincount(self.targets, minlength=self.num_nodes).astype(np.int64)
        return out_deg, in_deg

    def degrees_consistent(self) -> bool:
        out_deg, in_deg = self.recount_degrees()
        return bool(np.array_equal(out_deg, self.out_deg) and np.array_equal(in_deg, self.in_deg))

    def copy(self) -> "DirectedGraph":
        return DirectedGraph(
            self.num_nodes, self.sources.copy(), self.targets.copy(),
            None if self.scenarios is None else self.scenarios.copy(),
        )

    def edge_multiset(self) -> Dict[Tuple[int, int], int]:
        counts: Dict[Tuple[int, int], int] = {}
        for pair in self.edges:
            counts[pair] = counts.get(pair, 0) + 1
        return counts

    def _check_index(self, index: int):
        if not 0 <= index < self.num_edges:
            raise GraphError(f"edge index {index} out of range (0..{self.num_edges - 1})")

    def __repr__(self) -> str:
        return f"DirectedGraph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


@dataclass(frozen=True)
class DegreePairDist:
    """ν: (çıkış, giriş) derece çiftlerinin düğüm oranları"""
    counts: Dict[DegreePair, int]
    num_nodes: int
    entries: Dict[DegreePair, float] = field(init=False, repr=False)

    def __post_init__(self):
        if self.num_nodes < 1:
            raise GraphError("empty graph")
        entries = {pair: count / self.num_nodes for pair, count in sorted(self.counts.items())}
        total = math.fsum(entries.values())
        if abs(total - 1.0) > DIST_SUM_TOL:
            raise GraphError(f"degree pair proportions sum to {total!r}, not 1")
        object.__setattr__(self, "entries", entries)

    def out_marginal(self) -> Dict[int, float]:
        """p^(1)_k = Σ_l ν_kl"""
        marginal: Dict[int, float] = {}
        for (k, _), nu in self.entries.items():
            marginal[k] = marginal.get(k, 0.0) + nu
        return marginal

    def in_marginal(self) -> Dict[int, float]:
        """p^(2)_l = Σ_k ν_kl"""
        marginal: Dict[int, float] = {}
        for (_, l), nu in self.entries.items():
            marginal[l] = marginal.get(l, 0.0) + nu
        return marginal

    def source_support(self) -> List[DegreePair]:
        """Kaynak kütlesi pozitif olan çiftler (çıkış derecesi > 0)"""
        return [pair for pair in self.entries if pair[0] > 0]

    def target_support(self) -> List[DegreePair]:
        """Hedef kütlesi pozitif olan çiftler (giriş derecesi > 0)"""
        return [pair for pair in self.entries if pair[1] > 0]

    def source_mass(self) -> np.ndarray:
        """i ν_ij / Σ i ν_ij, source_support sırasıyla"""
        weights = np.array([i * self.counts[(i, j)] for i, j in self.source_support()], dtype=float)
        if weights.sum() <= 0:
            raise GraphError("graph has no edges")
        return weights / weights.sum()

    def target_mass(self) -> np.ndarray:
        """l ν_kl / Σ l ν_kl, target_support sırasıyla"""
        weights = np.array([l * self.counts[(k, l)] for k, l in self.target_support()], dtype=float)
        if weights.sum() <= 0:
            raise GraphError("graph has no edges")
        return weights / weights.sum()


def degree_pair_dist(g: DirectedGraph) -> DegreePairDist:
    """Grafın ν dağılımını hesapla"""
    if g.num_nodes < 1:
        raise GraphError("empty graph")
    pairs, counts = np.unique(np.stack([g.out_deg, g.in_deg], axis=1), axis=0, return_counts=True)
    return DegreePairDist(
        counts={(int(k), int(l)): int(c) for (k, l), c in zip(pairs, counts)},
        num_nodes=g.num_nodes,
    )


def degree_distribution(g: DirectedGraph) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(derece, çıkış pmf, giriş pmf); 0..max derece, düğüm oranı olarak"""
    if g.num_nodes < 1:
        raise GraphError("empty graph")
    size = int(max(g.out_deg.max(), g.in_deg.max())) + 1
    out_pmf = np.bincount(g.out_deg, minlength=size) / g.num_nodes
    in_pmf = np.bincount(g.in_deg, minlength=size) / g.num_nodes
    return np.arange(size), out_pmf, in_pmf


def sample_edge_pair(g: DirectedGraph, rng: np.random.Generator) -> Tuple[int, int]:
    """Yerine koymadan iki farklı kenar indeksi seç"""
    m = g.num_edges
    if m < 2:
        raise GraphError("at least 2 edges required to sample an edge pair")
    first = int(rng.integers(m))
    second = int(rng.integers(m - 1))
    if second >= first:
        second += 1
    return first, second


def swap_edges(g: DirectedGraph, e1: int, e2: int):
    """(v1,v2),(v3,v4) -> (v1,v4),(v3,v2); derece sayaçları değişmez"""
    g._check_index(e1)
    g._check_index(e2)
    if e1 == e2:
        raise GraphError("cannot swap an edge with itself")
    g.targets[e1], g.targets[e2] = g.targets[e2], g.targets[e1]


def read_edge_list(stream: TextIO) -> DirectedGraph:
    """KONECT uyumlu kenar listesini oku ('#' ve '%' satırları yorum)"""
    declared: Optional[int] = None
    sources: List[int] = []
    targets: List[int] = []

    for line_number, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            continue
        if line[0] in "#%":
            match = _NODES_HEADER.match(line)
            if match:
                declared = int(match.group(1))
            continue

        tokens = line.split()
        if len(tokens) < 2:
            raise EdgeListParseError("expected 'src dst'", line_number)
        try:
            src, dst = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer node id in {line!r}", line_number) from None
        if src < 0 or dst < 0:
            raise EdgeListParseError("negative node id", line_number)
        sources.append(src)
        targets.append(dst)

    implied = 1 + max(max(sources, default=-1), max(targets, default=-1))
    if declared is not None and declared < implied:
        raise EdgeListParseError(f"header declares {declared} nodes but ids reach {implied - 1}")
    num_nodes = declared if declared is not None else implied
    logger.debug("Kenar listesi okundu: %d düğüm, %d kenar", num_nodes, len(sources))
    return DirectedGraph(num_nodes, sources, targets)


def write_edge_list(g: DirectedGraph, stream: TextIO):
    """Kenar listesini giriş sırasını koruyarak yaz"""
    stream.write(f"# nodes={g.num_nodes}\n")
    for src, dst in g.edges:
        stream.write(f"{src}\t{dst}\n")


def load_edge_list(path: str) -> DirectedGraph:
    with open(path, "r", encoding="utf-8") as f:
        return read_edge_list(f)


def save_edge_list(g: DirectedGraph, path: str) -> str:
    filepath = Path(path)
    filepath.parent.mkdir(parents=True, exist_ok=True)
    with open(filepath, "w", encoding="utf-8") as f:
        write_edge_list(g, f)
    return str(filepath)
