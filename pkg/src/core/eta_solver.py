"""
Eta çözücü - kısıt sisteminin kurulması, hedef η ve koşullu sınırlar
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from .assortativity import (
    AssortProfile, EdgeEndDistributions, EdgeMixMatrix, assortativity, ends_from_masses,
)
from .exceptions import DegenerateDistributionError, DidprError, LpError, UnattainableIntervalsError
from .graph import DegreePair, DegreePairDist, DirectedGraph, degree_pair_dist
from .lp_solver import LinearProgram, LpStatus, solve
from ..utils.constants import (
    BOUND_CLAMP_TOL, DEFAULT_BOUND_ORDER, MARGINAL_RESIDUAL_TOL, PROFILE_SLACK, TARGET_MATCH_TOL,
    TYPE_PAIRS,
)

logger = logging.getLogger(__name__)

TypePair = Tuple[int, int]
Interval = Tuple[TypePair, float, float]


@dataclass
class EtaProblem:
    """Sabit ν üzerinde η arama problemi"""
    nu: DegreePairDist
    targets: Optional[AssortProfile] = None
    interval_constraints: List[Interval] = field(default_factory=list)
    source_pairs: List[DegreePair] = field(init=False)
    target_pairs: List[DegreePair] = field(init=False)
    source_mass: np.ndarray = field(init=False, repr=False)
    target_mass: np.ndarray = field(init=False, repr=False)
    ends: EdgeEndDistributions = field(init=False, repr=False)

    def __post_init__(self):
        self.source_pairs = self.nu.source_support()
        self.target_pairs = self.nu.target_support()
        self.source_mass = self.nu.source_mass()
        self.target_mass = self.nu.target_mass()
        self.ends = ends_from_masses(self.source_pairs, self.source_mass,
                                     self.target_pairs, self.target_mass)
        self.interval_constraints = [_check_interval(iv) for iv in self.interval_constraints]

    @classmethod
    def from_graph(cls, g: DirectedGraph, targets: Optional[AssortProfile] = None,
                   interval_constraints: Optional[List[Interval]] = None) -> "EtaProblem":
        return cls(degree_pair_dist(g), targets, list(interval_constraints or []))

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.source_pairs), len(self.target_pairs)

    @property
    def num_vars(self) -> int:
        return self.shape[0] * self.shape[1]

    def independence_eta(self) -> np.ndarray:
        """η⁰ = kaynak kütlesi ⊗ hedef kütlesi (dört r değeri sıfır)"""
        return np.outer(self.source_mass, self.target_mass)

    def to_eta(self, values: np.ndarray) -> EdgeMixMatrix:
        return EdgeMixMatrix(self.source_pairs, self.target_pairs, np.asarray(values).reshape(self.shape))


@dataclass(frozen=True)
class Unattainable:
    """Hedef değerleri bu ν için birlikte sağlanamıyor"""
    targets: AssortProfile
    message: str = "target assortativity coefficients unattainable"


@dataclass
class AssortBounds:
    """Her (a, b) çifti için [alt, üst] sınırlar"""
    bounds: Dict[TypePair, Tuple[float, float]] = field(default_factory=dict)

    def lower(self, pair: TypePair) -> float:
        return self.bounds[tuple(pair)][0]

    def upper(self, pair: TypePair) -> float:
        return self.bounds[tuple(pair)][1]

    def width(self, pair: TypePair) -> float:
        lower, upper = self.bounds[tuple(pair)]
        return upper - lower

    def brackets(self, profile: AssortProfile, tol: float = 1e-6) -> bool:
        return all(lo - tol <= profile[pair] <= hi + tol for pair, (lo, hi) in self.bounds.items())

    def as_rows(self) -> List[Dict]:
        return [
            {"pair": f"{a}{b}", "lower": lo, "upper": hi}
            for (a, b), (lo, hi) in self.bounds.items()
        ]


def _check_interval(interval: Interval) -> Interval:
    pair, lower, upper = interval
    pair = (int(pair[0]), int(pair[1]))
    if pair not in TYPE_PAIRS:
        raise DidprError(f"unknown coefficient pair {pair}")
    if lower > upper:
        raise DidprError(f"interval for r{pair[0]}{pair[1]} has lower {lower} > upper {upper}")
    if lower < -1 - PROFILE_SLACK or upper > 1 + PROFILE_SLACK:
        raise DidprError(f"interval for r{pair[0]}{pair[1]} outside [-1, 1]")
    return pair, float(lower), float(upper)


def g_map(a: int, b: int, r: float, ends: EdgeEndDistributions) -> float:
    """g^(a,b)(r) = σ_q^(a) σ_q̃^(b) r + Σ kl q_k^(a) q̃_l^(b)"""
    ends.require_positive(a, b)
    return ends.sigma_q[a] * ends.sigma_q_tilde[b] * r + ends.mean_q[a] * ends.mean_q_tilde[b]


def g_inverse(a: int, b: int, value: float, ends: EdgeEndDistributions) -> float:
    ends.require_positive(a, b)
    return (value - ends.mean_q[a] * ends.mean_q_tilde[b]) / (ends.sigma_q[a] * ends.sigma_q_tilde[b])


def product_weights(p: EtaProblem, a: int, b: int) -> np.ndarray:
    """Σ kl e^(a,b)_kl'nin H üzerindeki satır-öncelikli katsayıları"""
    x = np.array([pair[a - 1] for pair in p.source_pairs], dtype=float)
    y = np.array([pair[b - 1] for pair in p.target_pairs], dtype=float)
    return np.outer(x, y).ravel()


def standardized_weights(p: EtaProblem, a: int, b: int) -> np.ndarray:
    """(x-μ)(y-μ̃)/(σσ̃) katsayıları; marjinaller sağlandığında w·η = r(a,b)

    Σ kl e = g(r) satırının marjinal satırlar çıkarılmış ve ölçeklenmiş hali.
    """
    ends = p.ends
    if ends.sigma_q[a] <= 0 or ends.sigma_q_tilde[b] <= 0:
        raise DegenerateDistributionError(
            f"degenerate end distribution for r{a}{b}; target meaningless")
    x = np.array([pair[a - 1] for pair in p.source_pairs], dtype=float) - ends.mean_q[a]
    y = np.array([pair[b - 1] for pair in p.target_pairs], dtype=float) - ends.mean_q_tilde[b]
    return np.outer(x, y).ravel() / (ends.sigma_q[a] * ends.sigma_q_tilde[b])


def _marginal_rows(p: EtaProblem) -> Tuple[sparse.csr_matrix, np.ndarray]:
    n_src, n_tgt = p.shape
    row_sums = sparse.kron(sparse.identity(n_src), np.ones((1, n_tgt)))
    col_sums = sparse.kron(np.ones((1, n_src)), sparse.identity(n_tgt))
    return (sparse.vstack([row_sums, col_sums]).tocsr(),
            np.concatenate([p.source_mass, p.target_mass]))


def _interval_rows(p: EtaProblem, intervals: Sequence[Interval]) -> Tuple[sparse.csr_matrix, np.ndarray]:
    rows, rhs = [], []
    for (a, b), lower, upper in intervals:
        w = standardized_weights(p, a, b)
        rows.extend([w, -w])
        rhs.extend([upper, -lower])
    if not rows:
        return sparse.csr_matrix((0, p.num_vars)), np.zeros(0)
    return sparse.csr_matrix(np.vstack(rows)), np.array(rhs)


def assemble_constraints(p: EtaProblem, intervals: Optional[Sequence[Interval]] = None) -> LinearProgram:
    """H satır-öncelikli değişkenler; marjinal, hedef ve aralık satırları"""
    if p.num_vars == 0:
        raise DidprError("degree-pair support is empty; graph has no edges")
    A_eq, b_eq = _marginal_rows(p)
    if p.targets is not None:
        target_rows = [standardized_weights(p, a, b) for a, b in TYPE_PAIRS]
        A_eq = sparse.vstack([A_eq, sparse.csr_matrix(np.vstack(target_rows))]).tocsr()
        b_eq = np.concatenate([b_eq, p.targets.as_list()])

    active = p.interval_constraints if intervals is None else list(intervals)
    A_ub, b_ub = _interval_rows(p, active)
    logger.debug("Eta LP: %d değişken, %d eşitlik, %d eşitsizlik", p.num_vars, A_eq.shape[0], A_ub.shape[0])
    return LinearProgram(p.num_vars, None, A_eq, b_eq, A_ub, b_ub)


def _interior_program(base: LinearProgram, p: EtaProblem) -> LinearProgram:
    """η = ζ + t·η⁰, t <= 1, max t"""
    eta0 = p.independence_eta().ravel()
    t_column = base.A_eq @ eta0
    A_eq = sparse.hstack([base.A_eq, sparse.csr_matrix(t_column.reshape(-1, 1))]).tocsr()
    t_row = sparse.csr_matrix(([1.0], ([0], [base.num_vars])), shape=(1, base.num_vars + 1))
    if base.num_ub:
        A_ub = sparse.vstack([sparse.hstack([base.A_ub, sparse.csr_matrix((base.num_ub, 1))]), t_row]).tocsr()
    else:
        A_ub = t_row
    b_ub = np.concatenate([base.b_ub, [1.0]])
    c = np.zeros(base.num_vars + 1)
    c[-1] = -1.0
    return LinearProgram(base.num_vars + 1, c, A_eq, base.b_eq, A_ub, b_ub)


def solve_target_eta(p: EtaProblem, backend: str = "auto",
                     interior: bool = True) -> Union[EdgeMixMatrix, Unattainable]:
    """Dört hedefi sağlayan η; olursuzsa Unattainable

    interior=True: bağımsızlık matrisine en yakın iç nokta (max t); destekteki
    her giriş t·η⁰ ile alttan sınırlı olur.
    """
    if p.targets is None:
        raise DidprError("solve_target_eta requires four targets")
    base = assemble_constraints(p)
    lp = _interior_program(base, p) if interior else base
    solution = solve(lp, backend)

    if solution.status is LpStatus.INFEASIBLE:
        logger.info("Hedefler sağlanamıyor: %s", p.targets.as_dict())
        return Unattainable(p.targets)
    if solution.status is not LpStatus.OPTIMAL:
        raise LpError(f"eta program returned {solution.status.value}")

    if interior:
        t = float(solution.x[-1])
        values = solution.x[:-1] + t * p.independence_eta().ravel()
        logger.info("İç nokta η: t = %.4f", t)
    else:
        values = solution.x
    values = np.clip(values, 0.0, None)
    values /= values.sum()
    eta = p.to_eta(values)

    residual = max(np.abs(eta.row_sums - p.source_mass).max(), np.abs(eta.col_sums - p.target_mass).max())
    if residual > MARGINAL_RESIDUAL_TOL:
        raise LpError(f"eta marginal residual {residual:.3e} exceeds {MARGINAL_RESIDUAL_TOL:.0e}")
    reached = assortativity(eta)
    miss = reached.max_abs_diff(p.targets)
    if miss > TARGET_MATCH_TOL:
        raise LpError(f"reconstructed eta misses targets by {miss:.3e}")
    return eta


def _to_coefficient(value: float, pair: TypePair) -> float:
    if value < -1.0 - BOUND_CLAMP_TOL or value > 1.0 + BOUND_CLAMP_TOL:
        raise LpError(f"bound {value!r} for r{pair[0]}{pair[1]} outside [-1, 1]")
    return float(min(1.0, max(-1.0, value)))


def coefficient_bounds(p: EtaProblem, order: Sequence[TypePair] = DEFAULT_BOUND_ORDER,
                       intervals: Optional[Sequence[Interval]] = None,
                       backend: str = "auto") -> AssortBounds:
    """Sıralı koşullu sınırlar

    Sıradaki her çift, kendinden önceki çiftlere verilen aralıklara (ve
    sırada olmayan çiftlerin aralıklarına) koşullanır.
    """
    order = [(int(a), int(b)) for a, b in order]
    intervals = [_check_interval(iv) for iv in (p.interval_constraints if intervals is None else intervals)]
    result = AssortBounds()

    for position, (a, b) in enumerate(order):
        earlier = set(order[:position])
        active = [iv for iv in intervals if iv[0] in earlier or iv[0] not in order]
        lp = assemble_constraints(p, active)
        weights = product_weights(p, a, b)
        # g^(a,b) için σ kontrolü
        g_map(a, b, 0.0, p.ends)

        low = solve(lp.with_objective(weights), backend)
        if low.status is LpStatus.INFEASIBLE:
            raise UnattainableIntervalsError()
        high = solve(lp.with_objective(-weights), backend)
        if not (low.is_optimal and high.is_optimal):
            raise LpError(f"bound program for r{a}{b} returned {low.status.value}/{high.status.value}")

        lower = _to_coefficient(g_inverse(a, b, low.objective_value, p.ends), (a, b))
        upper = _to_coefficient(g_inverse(a, b, -high.objective_value, p.ends), (a, b))
        result.bounds[(a, b)] = (min(lower, upper), max(lower, upper))
        logger.info("r%d%d sınırları: [%.4f, %.4f] (%d koşul)", a, b, lower, upper, len(active))
    return result
