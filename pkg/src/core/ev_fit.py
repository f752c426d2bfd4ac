"""
EV uyumu - β̂, kuyruk indeksleri, polar dönüşüm ve DPA parametre tahmini
"""
import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta
from scipy.stats import ks_2samp

from .exceptions import EstimationError, GeneratorError
from .generators import DpaParams, SeedLike, gen_dpa
from .graph import DirectedGraph
from ..utils.constants import (
    ALPHA_GRID_POINTS, DEFAULT_SIM_EDGES, EXPONENT_SEARCH_BOUNDS, MIN_TAIL_DEGREES, MIN_TAIL_POINTS,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TailFit:
    iota: float
    x_min: int
    exponent: float
    ks: float
    n_tail: int


@dataclass(frozen=True)
class EvFit:
    alpha_hat: float
    beta_hat: float
    gamma_hat: float
    delta_in_hat: float
    delta_out_hat: float
    iota1_hat: float
    iota2_hat: float
    n_tail: int
    a_hat: float

    def __post_init__(self):
        if abs(self.alpha_hat + self.beta_hat + self.gamma_hat - 1.0) > 1e-9:
            raise EstimationError("alpha_hat + beta_hat + gamma_hat must equal 1")
        if self.iota1_hat <= 0 or self.iota2_hat <= 0:
            raise EstimationError("tail indices must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "EvFit":
        names = [f.name for f in fields(cls)]
        missing = [name for name in names if name not in data]
        if missing:
            raise EstimationError(f"EV fit lacks fields: {', '.join(missing)}")
        try:
            values = {name: (int if name == "n_tail" else float)(data[name]) for name in names}
        except (TypeError, ValueError):
            raise EstimationError("EV fit fields must be numeric") from None
        return cls(**values)

    def to_params(self, target_edges: int) -> DpaParams:
        """Uyumlanan değerlerle DPA parametreleri"""
        return DpaParams(self.alpha_hat, self.beta_hat, 1.0 - self.alpha_hat - self.beta_hat,
                         self.delta_in_hat, self.delta_out_hat, target_edges)


def load_ev_fit(path: str) -> EvFit:
    """fit komutunun yazdığı JSON'dan EvFit"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise EstimationError(f"invalid EV fit JSON in {path}: {e}") from None
    if not isinstance(data, dict):
        raise EstimationError(f"EV fit file {path} must hold a JSON object")
    return EvFit.from_dict(data)


def beta_hat_from_counts(num_nodes: int, num_edges: int) -> float:
    if num_edges < num_nodes or num_edges < 1:
        raise EstimationError("more nodes than edges; β̂ undefined")
    return 1.0 - num_nodes / num_edges


def beta_hat(g: DirectedGraph) -> float:
    """β̂ = 1 - |V|/|E|"""
    return beta_hat_from_counts(g.num_nodes, g.num_edges)


def tail_indices_from_params(alpha: float, beta: float, gamma: float,
                             delta_in: float, delta_out: float) -> Tuple[float, float]:
    """ι₁ = (1 + δ_out(α+γ))/(β+γ), ι₂ = (1 + δ_in(α+γ))/(α+β)"""
    iota1 = (1.0 + delta_out * (alpha + gamma)) / (beta + gamma)
    iota2 = (1.0 + delta_in * (alpha + gamma)) / (alpha + beta)
    return iota1, iota2


def invert_deltas(iota1: float, iota2: float, alpha: float, beta: float,
                  gamma: float) -> Tuple[float, float]:
    """(δ_in, δ_out) - tail_indices_from_params'ın tersi"""
    if alpha + gamma <= 0:
        raise EstimationError("alpha + gamma must be positive to recover deltas")
    delta_out = (iota1 * (beta + gamma) - 1.0) / (alpha + gamma)
    delta_in = (iota2 * (alpha + beta) - 1.0) / (alpha + gamma)
    return delta_in, delta_out


def _fit_exponent(tail: np.ndarray, x_min: int) -> float:
    log_sum = np.log(tail).sum()
    size = tail.size

    def negative_log_likelihood(s: float) -> float:
        return s * log_sum + size * np.log(zeta(s, x_min))

    result = minimize_scalar(negative_log_likelihood, bounds=EXPONENT_SEARCH_BOUNDS, method="bounded")
    return float(result.x)


def _ks_distance(tail: np.ndarray, exponent: float, x_min: int) -> float:
    """Ayrık kuyrukta ampirik ve model CDF arasındaki en büyük fark"""
    values, counts = np.unique(tail, return_counts=True)
    empirical = np.cumsum(counts) / tail.size
    normalizer = zeta(exponent, x_min)
    model = 1.0 - zeta(exponent, values + 1.0) / normalizer
    distance = np.abs(empirical - model).max()
    if values.size > 1:
        # bir sonraki gözlemin hemen altı
        before_next = 1.0 - zeta(exponent, values[1:].astype(float)) / normalizer
        distance = max(distance, np.abs(empirical[:-1] - before_next).max())
    return float(distance)


def fit_tail(degrees: Sequence[int]) -> TailFit:
    """Minimum KS uzaklıklı ayrık güç yasası kuyruğu"""
    positive = np.asarray(degrees, dtype=float)
    positive = np.sort(positive[positive > 0])
    if positive.size < MIN_TAIL_DEGREES:
        raise EstimationError(f"at least {MIN_TAIL_DEGREES} positive degrees required, got {positive.size}")
    candidates = np.unique(positive)
    if candidates.size < 2:
        raise EstimationError("constant degrees; no power-law tail")

    best: Optional[TailFit] = None
    for x_min in candidates.astype(int).tolist():
        tail = positive[positive >= x_min]
        if tail.size < MIN_TAIL_POINTS:
            break
        if np.unique(tail).size < 2:
            continue
        exponent = _fit_exponent(tail, x_min)
        ks = _ks_distance(tail, exponent, x_min)
        if best is None or ks < best.ks:
            best = TailFit(exponent - 1.0, x_min, exponent, ks, int(tail.size))

    if best is None:
        raise EstimationError("no admissible tail threshold")
    logger.debug("Kuyruk: ι=%.4f, x_min=%d, KS=%.4f, n=%d", best.iota, best.x_min, best.ks, best.n_tail)
    return best


def tail_index(degrees: Sequence[int]) -> Tuple[float, int]:
    """(ι, x_min); ι = güç yasası üssü - 1"""
    fit = fit_tail(degrees)
    return fit.iota, fit.x_min


def polar_transform(out_deg: Sequence[int], in_deg: Sequence[int],
                    a_hat: float) -> Tuple[np.ndarray, np.ndarray]:
    """L1 polar dönüşüm: R = d_out + d_in^â, θ = d_in^â / R"""
    if a_hat <= 0:
        raise EstimationError("a_hat must be positive")
    out_deg = np.asarray(out_deg, dtype=float)
    in_deg = np.asarray(in_deg, dtype=float)
    keep = (out_deg > 0) | (in_deg > 0)
    if not keep.any():
        raise EstimationError("all nodes have zero degree")
    powered = in_deg[keep] ** a_hat
    radius = out_deg[keep] + powered
    return radius, powered / radius


def tail_angles(out_deg: Sequence[int], in_deg: Sequence[int], a_hat: float, n_tail: int) -> np.ndarray:
    """R_v > c olan düğümlerin θ değerleri; c = (n_tail+1)'inci en büyük R"""
    radius, theta = polar_transform(out_deg, in_deg, a_hat)
    if radius.size <= n_tail:
        raise EstimationError(f"n_tail={n_tail} requires more than {n_tail} nodes with positive degree")
    threshold = np.sort(radius)[::-1][n_tail]
    return theta[radius > threshold]


def _alpha_distance(alpha: float, beta: float, iota1: float, iota2: float, a_hat: float,
                    observed: np.ndarray, tail_fraction: float, sim_edges: int,
                    sim_seed: np.random.SeedSequence) -> float:
    gamma = max(0.0, 1.0 - alpha - beta)
    try:
        delta_in, delta_out = invert_deltas(iota1, iota2, alpha, beta, gamma)
        params = DpaParams(alpha, beta, gamma, delta_in, delta_out, sim_edges)
    except (EstimationError, GeneratorError):
        return np.inf
    # ortak rastgele sayılar: her aday aynı tohumla
    sample = gen_dpa(params, np.random.SeedSequence(sim_seed.entropy, spawn_key=sim_seed.spawn_key))
    k = max(MIN_TAIL_POINTS, int(round(tail_fraction * sample.num_nodes)))
    try:
        simulated = tail_angles(sample.out_deg, sample.in_deg, a_hat, k)
    except EstimationError:
        return np.inf
    if simulated.size == 0 or observed.size == 0:
        return np.inf
    return float(ks_2samp(observed, simulated).statistic)


def fit_ev(g: DirectedGraph, n_tail: int = 200, grid_points: int = ALPHA_GRID_POINTS,
           sim_edges: int = DEFAULT_SIM_EDGES, seed: SeedLike = None) -> EvFit:
    """DPA parametrelerinin EV tahmini

    α̂, gözlenen kuyruk θ örneği ile aday α'lardan simüle edilen kuyruk θ
    örnekleri arasındaki KS uzaklığını en küçükleyen değerdir; kaba ızgaradan
    sonra en iyi komşuluk bir kez daha taranır.
    """
    if n_tail < MIN_TAIL_DEGREES:
        raise EstimationError(f"n_tail must be at least {MIN_TAIL_DEGREES}")
    if grid_points < 2:
        raise EstimationError("grid_points must be at least 2")

    beta = beta_hat(g)
    iota1 = fit_tail(g.out_deg).iota
    iota2 = fit_tail(g.in_deg).iota
    a_hat = iota2 / iota1
    observed = tail_angles(g.out_deg, g.in_deg, a_hat, n_tail)
    tail_fraction = n_tail / int(((g.out_deg > 0) | (g.in_deg > 0)).sum())
    logger.info("EV uyumu: β̂=%.4f, ι̂₁=%.4f, ι̂₂=%.4f, â=%.4f", beta, iota1, iota2, a_hat)

    if isinstance(seed, np.random.SeedSequence):
        sim_seed = seed
    elif isinstance(seed, np.random.Generator):
        sim_seed = np.random.SeedSequence(int(seed.integers(2 ** 63)))
    else:
        sim_seed = np.random.SeedSequence(seed)
    span = 1.0 - beta

    def search(grid: np.ndarray) -> Tuple[float, float]:
        scores = [_alpha_distance(a, beta, iota1, iota2, a_hat, observed, tail_fraction, sim_edges, sim_seed)
                  for a in grid]
        best = int(np.argmin(scores))
        logger.debug("α ızgarası %s -> %s", np.round(grid, 4).tolist(), np.round(scores, 4).tolist())
        return float(grid[best]), float(scores[best])

    coarse = np.linspace(0.0, span, grid_points)
    alpha, distance = search(coarse)
    step = coarse[1] - coarse[0]
    fine = np.linspace(max(0.0, alpha - step), min(span, alpha + step), grid_points)
    alpha, distance = search(fine)
    if not np.isfinite(distance):
        raise EstimationError("inconsistent tail estimates")

    gamma = max(0.0, 1.0 - alpha - beta)
    delta_in, delta_out = invert_deltas(iota1, iota2, alpha, beta, gamma)
    if delta_in < 0 or delta_out < 0:
        raise EstimationError("inconsistent tail estimates")
    logger.info("EV uyumu: α̂=%.4f, γ̂=%.4f, δ̂_out=%.4f, δ̂_in=%.4f (KS %.4f)",
                alpha, gamma, delta_out, delta_in, distance)
    return EvFit(alpha, beta, gamma, delta_in, delta_out, iota1, iota2, n_tail, a_hat)
