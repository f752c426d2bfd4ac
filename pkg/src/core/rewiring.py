"""
DiDPR yeniden bağlama zinciri - kenar çifti seçimi, η oranıyla kabul, iz kaydı
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .assortativity import (
    AssortProfile, EdgeMixMatrix, assortativity, edge_assortativity, support_indices,
)
from .exceptions import DegenerateDistributionError, DidprError, GraphError
from .generators import Scenario, SeedLike
from .graph import DegreePair, DirectedGraph
from ..utils.constants import (
    DEFAULT_CHECKPOINT_EVERY, DEFAULT_REWIRE_TOLERANCE, GAIN_BUCKETS, RANDOM_BLOCK_SIZE, TYPE_PAIRS,
)

logger = logging.getLogger(__name__)

SwapPairs = Tuple[DegreePair, DegreePair, DegreePair, DegreePair]


@dataclass
class RewiringConfig:
    max_steps: int = 200000
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY
    tolerance: float = DEFAULT_REWIRE_TOLERANCE
    stop_early: bool = False
    seed: SeedLike = None
    incremental: bool = False
    targets: Optional[AssortProfile] = None

    def __post_init__(self):
        if self.max_steps < 1:
            raise DidprError("max_steps must be at least 1")
        if self.checkpoint_every < 1:
            raise DidprError("checkpoint_every must be at least 1")
        if self.tolerance <= 0:
            raise DidprError("tolerance must be positive")


@dataclass(frozen=True)
class Checkpoint:
    step: int
    r11: float
    r12: float
    r21: float
    r22: float
    acc_rate: float

    @property
    def profile(self) -> AssortProfile:
        return AssortProfile(self.r11, self.r12, self.r21, self.r22)


@dataclass
class RewiringTrace:
    checkpoints: List[Checkpoint] = field(default_factory=list)

    def record(self, step: int, profile: AssortProfile, acc_rate: float):
        if self.checkpoints and step <= self.checkpoints[-1].step:
            raise DidprError("checkpoint steps must be strictly increasing")
        if not 0.0 <= acc_rate <= 1.0:
            raise DidprError(f"acceptance rate {acc_rate} outside [0, 1]")
        self.checkpoints.append(Checkpoint(step, *profile.as_list(), acc_rate))

    @property
    def final(self) -> Checkpoint:
        return self.checkpoints[-1]

    def __len__(self) -> int:
        return len(self.checkpoints)

    def steps_to_tolerance(self, targets: AssortProfile, tolerance: float) -> Optional[int]:
        """Dört katsayının da toleransa girdiği ilk kontrol noktasının sırası"""
        for index, checkpoint in enumerate(self.checkpoints):
            if checkpoint.profile.max_abs_diff(targets) <= tolerance:
                return index
        return None

    def to_rows(self) -> List[Dict]:
        return [
            {"step": c.step, "r11": c.r11, "r12": c.r12, "r21": c.r21, "r22": c.r22, "acc_rate": c.acc_rate}
            for c in self.checkpoints
        ]


@dataclass
class ScenarioGains:
    """Kabul edilen takasların r artışlarının senaryo çiftine göre toplamı"""
    totals: Dict[str, np.ndarray] = field(default_factory=lambda: {b: np.zeros(4) for b in GAIN_BUCKETS})
    accepted: Dict[str, int] = field(default_factory=lambda: {b: 0 for b in GAIN_BUCKETS})

    @staticmethod
    def bucket(first: Scenario, second: Scenario) -> str:
        if Scenario.SEED in (first, second):
            return "seed"
        low, high = sorted((Scenario(first), Scenario(second)))
        return f"{low.label}-{high.label}"

    def record(self, first: Scenario, second: Scenario, delta: Sequence[float]):
        key = self.bucket(first, second)
        self.totals[key] += delta
        self.accepted[key] += 1

    def total(self) -> np.ndarray:
        return np.sum(list(self.totals.values()), axis=0)

    def leader(self, coefficient: int, include_seed: bool = False) -> str:
        """Verilen katsayıda (0..3) en büyük toplam artışlı kova"""
        candidates = [b for b in GAIN_BUCKETS if include_seed or b != "seed"]
        return max(candidates, key=lambda b: self.totals[b][coefficient])

    def to_rows(self) -> List[Dict]:
        return [
            {"bucket": b, "accepted": self.accepted[b],
             **{f"d_r{a}{c}": float(v) for (a, c), v in zip(TYPE_PAIRS, self.totals[b])}}
            for b in GAIN_BUCKETS
        ]


def _accept(u: float, numerator: float, denominator: float) -> bool:
    # payda sıfırsa p = 1
    return denominator == 0.0 or u * denominator <= numerator


def acceptance_probability(eta: EdgeMixMatrix, pairs: SwapPairs) -> float:
    """min(1, η(i1j1,k2l2) η(i2j2,k1l1) / η(i1j1,k1l1) η(i2j2,k2l2))"""
    source1, target1, source2, target2 = pairs
    numerator = eta.entry(source1, target2) * eta.entry(source2, target1)
    denominator = eta.entry(source1, target1) * eta.entry(source2, target2)
    if denominator == 0.0:
        return 1.0
    return min(1.0, numerator / denominator)


def balance_ratio(eta: EdgeMixMatrix, pairs: SwapPairs) -> float:
    """İleri / geri kabul olasılığı oranı"""
    source1, target1, source2, target2 = pairs
    entries = [eta.entry(source1, target1), eta.entry(source2, target2),
               eta.entry(source1, target2), eta.entry(source2, target1)]
    if min(entries) <= 0.0:
        raise DidprError("balance ratio requires positive eta entries")
    forward = acceptance_probability(eta, pairs)
    reverse = acceptance_probability(eta, (source1, target2, source2, target1))
    return forward / reverse


def edge_scales(g: DirectedGraph) -> List[float]:
    """|E| σ_q^(a) σ_q̃^(b); takas sırasında sabit"""
    source_deg = {1: g.out_deg[g.sources], 2: g.in_deg[g.sources]}
    target_deg = {1: g.out_deg[g.targets], 2: g.in_deg[g.targets]}
    scales = []
    for a, b in TYPE_PAIRS:
        scale = g.num_edges * float(np.std(source_deg[a])) * float(np.std(target_deg[b]))
        if scale <= 0.0:
            raise DegenerateDistributionError()
        scales.append(scale)
    return scales


def rewire(g: DirectedGraph, eta: EdgeMixMatrix, cfg: RewiringConfig,
           gains: Optional[ScenarioGains] = None) -> Tuple[DirectedGraph, RewiringTrace]:
    """DiDPR zinciri; girdi grafı değiştirilmez

    Her adımda iki farklı kenar seçilir ve hedefleri η oranıyla takas edilir.
    İz her checkpoint_every adımda ve son adımda kaydedilir.
    """
    m = g.num_edges
    if m < 2:
        raise GraphError("at least 2 edges required to rewire")
    if gains is not None and not g.has_scenarios:
        raise DidprError("scenario gains require a graph with scenario labels")

    work = g.copy()
    src_row, tgt_col = support_indices(work, eta)
    H = eta.H.tolist()
    sources = work.sources.tolist()
    targets = work.targets.tolist()
    rows = src_row[work.sources].tolist()
    cols = tgt_col[work.targets].tolist()
    out_deg = work.out_deg.tolist()
    in_deg = work.in_deg.tolist()
    labels = work.scenarios.tolist() if gains is not None else None

    profile = edge_assortativity(work)
    goal = cfg.targets
    if cfg.stop_early and goal is None:
        goal = assortativity(eta)
    track = cfg.incremental or gains is not None
    current = np.array(profile.as_list())
    scales = edge_scales(work) if track else None

    trace = RewiringTrace()
    trace.record(0, profile, 0.0)
    logger.info("Yeniden bağlama başladı: %d kenar, %d adım, başlangıç %s", m, cfg.max_steps, profile.as_dict())

    rng = np.random.default_rng(cfg.seed)
    step = 0
    accepted = 0
    last_step = 0
    done = False
    while not done and step < cfg.max_steps:
        block = min(RANDOM_BLOCK_SIZE, cfg.max_steps - step)
        firsts = rng.integers(m, size=block).tolist()
        seconds = rng.integers(m - 1, size=block).tolist()
        uniforms = rng.random(block).tolist()

        for e1, e2, u in zip(firsts, seconds, uniforms):
            if e2 >= e1:
                e2 += 1
            r1, c1, r2, c2 = rows[e1], cols[e1], rows[e2], cols[e2]
            if _accept(u, H[r1][c2] * H[r2][c1], H[r1][c1] * H[r2][c2]):
                accepted += 1
                if track:
                    v1, v2, v3, v4 = sources[e1], targets[e1], sources[e2], targets[e2]
                    dx1, dx2 = out_deg[v1] - out_deg[v3], in_deg[v1] - in_deg[v3]
                    dy1, dy2 = out_deg[v4] - out_deg[v2], in_deg[v4] - in_deg[v2]
                    delta = (dx1 * dy1 / scales[0], dx1 * dy2 / scales[1],
                             dx2 * dy1 / scales[2], dx2 * dy2 / scales[3])
                    current += delta
                    if gains is not None:
                        gains.record(Scenario(labels[e1]), Scenario(labels[e2]), delta)
                targets[e1], targets[e2] = targets[e2], targets[e1]
                cols[e1], cols[e2] = c2, c1
            step += 1

            if step % cfg.checkpoint_every == 0 or step == cfg.max_steps:
                if track and cfg.incremental:
                    profile = AssortProfile.from_values(current)
                else:
                    work.targets[:] = targets
                    profile = edge_assortativity(work)
                trace.record(step, profile, accepted / (step - last_step))
                logger.debug("Adım %d: %s, kabul %.3f", step, profile.as_dict(), accepted / (step - last_step))
                accepted = 0
                last_step = step
                if cfg.stop_early and goal is not None and profile.max_abs_diff(goal) <= cfg.tolerance:
                    logger.info("Hedefe %d adımda ulaşıldı", step)
                    done = True
                    break

    work.targets[:] = targets
    logger.info("Yeniden bağlama bitti: %d adım, son %s", step, trace.final.profile.as_dict())
    return work, trace
