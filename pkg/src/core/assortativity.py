"""
Yönlü assortativity - η, q, q̃ dağılımları ve dört r(a,b) katsayısı
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .exceptions import DegenerateDistributionError, DidprError, GraphError, SupportMismatchError
from .graph import DegreePair, DirectedGraph, degree_pair_dist
from ..utils.constants import ETA_SUM_TOL, PROFILE_SLACK, TYPE_PAIRS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssortProfile:
    """r(1,1), r(1,2), r(2,1), r(2,2) değerleri (hedef olarak da kullanılır)"""
    r11: float
    r12: float
    r21: float
    r22: float

    def __post_init__(self):
        for name in ("r11", "r12", "r21", "r22"):
            value = getattr(self, name)
            if not np.isfinite(value) or abs(value) > 1.0 + PROFILE_SLACK:
                raise DidprError(f"{name}={value} outside [-1, 1]")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "AssortProfile":
        values = [float(v) for v in values]
        if len(values) != 4:
            raise DidprError("four assortativity values required (r11, r12, r21, r22)")
        return cls(*values)

    def __getitem__(self, pair: Tuple[int, int]) -> float:
        a, b = pair
        return getattr(self, f"r{a}{b}")

    def as_list(self) -> List[float]:
        return [self.r11, self.r12, self.r21, self.r22]

    def as_dict(self) -> Dict[str, float]:
        return {"r11": self.r11, "r12": self.r12, "r21": self.r21, "r22": self.r22}

    def max_abs_diff(self, other: "AssortProfile") -> float:
        return max(abs(x - y) for x, y in zip(self.as_list(), other.as_list()))


@dataclass(frozen=True)
class EdgeEndDistributions:
    """Kenar uçlarının marjinalleri: q^(a) kaynak, q̃^(b) hedef"""
    q: Dict[int, Dict[int, float]]
    q_tilde: Dict[int, Dict[int, float]]
    sigma_q: Dict[int, float]
    sigma_q_tilde: Dict[int, float]
    mean_q: Dict[int, float]
    mean_q_tilde: Dict[int, float]

    def require_positive(self, a: int, b: int):
        if self.sigma_q[a] <= 0 or self.sigma_q_tilde[b] <= 0:
            raise DegenerateDistributionError()


@dataclass(frozen=True)
class EdgeMixMatrix:
    """H: satırlar kaynak çiftleri (i,j), sütunlar hedef çiftleri (k,l), hücre η_ijkl"""
    source_pairs: List[DegreePair]
    target_pairs: List[DegreePair]
    H: np.ndarray
    source_index: Dict[DegreePair, int] = field(init=False, repr=False)
    target_index: Dict[DegreePair, int] = field(init=False, repr=False)

    def __post_init__(self):
        source_pairs = [tuple(int(x) for x in p) for p in self.source_pairs]
        target_pairs = [tuple(int(x) for x in p) for p in self.target_pairs]
        H = np.array(self.H, dtype=float)
        if H.shape != (len(source_pairs), len(target_pairs)):
            raise DidprError(f"H shape {H.shape} does not match pair lists "
                             f"({len(source_pairs)} x {len(target_pairs)})")
        H.setflags(write=False)
        object.__setattr__(self, "source_pairs", source_pairs)
        object.__setattr__(self, "target_pairs", target_pairs)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "source_index", {p: i for i, p in enumerate(source_pairs)})
        object.__setattr__(self, "target_index", {p: i for i, p in enumerate(target_pairs)})

    @property
    def row_sums(self) -> np.ndarray:
        return self.H.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.H.sum(axis=0)

    def source_degrees(self, a: int) -> np.ndarray:
        """x_a: kaynak çiftlerinin a tipi derecesi"""
        return np.array([p[a - 1] for p in self.source_pairs], dtype=float)

    def target_degrees(self, b: int) -> np.ndarray:
        """y_b: hedef çiftlerinin b tipi derecesi"""
        return np.array([p[b - 1] for p in self.target_pairs], dtype=float)

    def entry(self, source_pair: DegreePair, target_pair: DegreePair) -> float:
        try:
            return float(self.H[self.source_index[tuple(source_pair)], self.target_index[tuple(target_pair)]])
        except KeyError:
            raise SupportMismatchError(
                f"degree pair {source_pair}->{target_pair} absent from eta support") from None

    def validate(self, source_mass: np.ndarray = None, target_mass: np.ndarray = None,
                 tol: float = ETA_SUM_TOL):
        """Negatiflik, toplam ve (verilirse) marjinal kontrolü"""
        if (self.H < -tol).any():
            raise DidprError("eta has negative entries")
        if abs(self.H.sum() - 1.0) > tol:
            raise DidprError(f"eta sums to {self.H.sum()!r}, expected 1")
        if source_mass is not None and np.abs(self.row_sums - source_mass).max() > tol:
            raise DidprError("eta row sums do not match source masses")
        if target_mass is not None and np.abs(self.col_sums - target_mass).max() > tol:
            raise DidprError("eta column sums do not match target masses")

    def to_rows(self) -> List[Tuple[int, int, int, int, float]]:
        """Pozitif hücreleri (i, j, k, l, eta) satırları olarak döndür"""
        rows = []
        for s, t in zip(*np.nonzero(self.H > 0)):
            i, j = self.source_pairs[s]
            k, l = self.target_pairs[t]
            rows.append((i, j, k, l, float(self.H[s, t])))
        return rows

    @classmethod
    def from_rows(cls, rows: Iterable[Tuple[int, int, int, int, float]]) -> "EdgeMixMatrix":
        rows = list(rows)
        source_pairs = sorted({(int(r[0]), int(r[1])) for r in rows})
        target_pairs = sorted({(int(r[2]), int(r[3])) for r in rows})
        s_index = {p: i for i, p in enumerate(source_pairs)}
        t_index = {p: i for i, p in enumerate(target_pairs)}
        H = np.zeros((len(source_pairs), len(target_pairs)))
        for i, j, k, l, value in rows:
            H[s_index[(int(i), int(j))], t_index[(int(k), int(l))]] += float(value)
        return cls(source_pairs, target_pairs, H)


def support_indices(g: DirectedGraph, eta: EdgeMixMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """Düğüm başına eta satır / sütun indeksi (-1: destek dışı)"""
    src_row = np.full(g.num_nodes, -1, dtype=np.int64)
    tgt_col = np.full(g.num_nodes, -1, dtype=np.int64)
    for v, (k, l) in enumerate(zip(g.out_deg.tolist(), g.in_deg.tolist())):
        if k > 0:
            if (k, l) not in eta.source_index:
                raise SupportMismatchError(f"source pair {(k, l)} of node {v} missing from eta")
            src_row[v] = eta.source_index[(k, l)]
        if l > 0:
            if (k, l) not in eta.target_index:
                raise SupportMismatchError(f"target pair {(k, l)} of node {v} missing from eta")
            tgt_col[v] = eta.target_index[(k, l)]
    return src_row, tgt_col


def edge_mix_from_graph(g: DirectedGraph) -> EdgeMixMatrix:
    """Grafın gözlenen η matrisi (destek ν'den)"""
    if g.num_edges < 1:
        raise GraphError("graph has no edges")
    nu = degree_pair_dist(g)
    source_pairs = nu.source_support()
    target_pairs = nu.target_support()
    eta_index = EdgeMixMatrix(source_pairs, target_pairs, np.zeros((len(source_pairs), len(target_pairs))))
    src_row, tgt_col = support_indices(g, eta_index)

    counts = np.zeros((len(source_pairs), len(target_pairs)))
    np.add.at(counts, (src_row[g.sources], tgt_col[g.targets]), 1.0)
    return EdgeMixMatrix(source_pairs, target_pairs, counts / g.num_edges)


def _grouped(values: np.ndarray, weights: np.ndarray) -> Dict[int, float]:
    grouped: Dict[int, float] = {}
    for value, weight in zip(values.astype(int).tolist(), weights.tolist()):
        grouped[value] = grouped.get(value, 0.0) + weight
    return dict(sorted(grouped.items()))


def _mean_sigma(values: np.ndarray, weights: np.ndarray) -> Tuple[float, float]:
    total = weights.sum()
    p = weights / total
    mean = float(values @ p)
    # tek noktalı dağılımda σ tam sıfır
    if np.unique(values[weights > 0]).size <= 1:
        return mean, 0.0
    return mean, float(np.sqrt(((values - mean) ** 2) @ p))


def ends_from_masses(source_pairs: Sequence[DegreePair], source_mass: np.ndarray,
                     target_pairs: Sequence[DegreePair], target_mass: np.ndarray) -> EdgeEndDistributions:
    """Satır / sütun kütlelerinden q, q̃ ve σ değerleri"""
    q, q_tilde, sigma_q, sigma_q_tilde, mean_q, mean_q_tilde = {}, {}, {}, {}, {}, {}
    for a in (1, 2):
        x = np.array([p[a - 1] for p in source_pairs], dtype=float)
        y = np.array([p[a - 1] for p in target_pairs], dtype=float)
        q[a] = _grouped(x, source_mass)
        q_tilde[a] = _grouped(y, target_mass)
        mean_q[a], sigma_q[a] = _mean_sigma(x, source_mass)
        mean_q_tilde[a], sigma_q_tilde[a] = _mean_sigma(y, target_mass)
    return EdgeEndDistributions(q, q_tilde, sigma_q, sigma_q_tilde, mean_q, mean_q_tilde)


def end_distributions(eta: EdgeMixMatrix) -> EdgeEndDistributions:
    """η'nın satır / sütun toplamlarından uç dağılımları"""
    return ends_from_masses(eta.source_pairs, eta.row_sums, eta.target_pairs, eta.col_sums)


def mixing_marginal(eta: EdgeMixMatrix, a: int, b: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """e^{(a,b)} = R H Rᵀ: (kaynak dereceleri, hedef dereceleri, matris)"""
    x_values, x_inverse = np.unique(eta.source_degrees(a), return_inverse=True)
    y_values, y_inverse = np.unique(eta.target_degrees(b), return_inverse=True)
    R = np.zeros((x_values.size, len(eta.source_pairs)))
    R[x_inverse, np.arange(len(eta.source_pairs))] = 1.0
    S = np.zeros((y_values.size, len(eta.target_pairs)))
    S[y_inverse, np.arange(len(eta.target_pairs))] = 1.0
    return x_values.astype(int), y_values.astype(int), R @ eta.H @ S.T


def degree_product_moment(eta: EdgeMixMatrix, a: int, b: int) -> float:
    """Σ_{k,l} k l e^{(a,b)}_{kl}"""
    return float(eta.source_degrees(a) @ eta.H @ eta.target_degrees(b))


def assortativity(eta: EdgeMixMatrix) -> AssortProfile:
    """Dört yönlü assortativity katsayısı"""
    ends = end_distributions(eta)
    total = eta.H.sum()
    values = []
    for a, b in TYPE_PAIRS:
        ends.require_positive(a, b)
        moment = degree_product_moment(eta, a, b) / total
        covariance = moment - ends.mean_q[a] * ends.mean_q_tilde[b]
        values.append(covariance / (ends.sigma_q[a] * ends.sigma_q_tilde[b]))
    return AssortProfile.from_values(values)


def assortativity_of_graph(g: DirectedGraph) -> AssortProfile:
    return assortativity(edge_mix_from_graph(g))


def edge_assortativity(g: DirectedGraph) -> AssortProfile:
    """Kenar listesi üzerinden doğrudan Pearson korelasyonu"""
    if g.num_edges < 1:
        raise GraphError("graph has no edges")
    source_deg = {1: g.out_deg[g.sources].astype(float), 2: g.in_deg[g.sources].astype(float)}
    target_deg = {1: g.out_deg[g.targets].astype(float), 2: g.in_deg[g.targets].astype(float)}
    values = []
    for a, b in TYPE_PAIRS:
        x, y = source_deg[a], target_deg[b]
        if (x == x[0]).all() or (y == y[0]).all():
            raise DegenerateDistributionError()
        xc, yc = x - x.mean(), y - y.mean()
        values.append(float((xc @ yc) / np.sqrt((xc @ xc) * (yc @ yc))))
    return AssortProfile.from_values(values)
