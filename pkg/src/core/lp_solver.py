"""
Doğrusal program çözücü - gömülü iki fazlı simplex ve HiGHS arka ucu
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, TextIO, Tuple

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .exceptions import LpError, LpStallError
from ..utils.constants import (
    BLAND_AFTER_DEGENERATE, FEASIBILITY_TOL, ITERATION_FACTOR, LP_BACKENDS, NONNEG_SLACK,
    OPTIMALITY_TOL, PIVOT_TOL, RESIDUAL_TOL, SIMPLEX_DENSE_LIMIT,
)

logger = logging.getLogger(__name__)

SparseRow = Tuple[Mapping[int, float], float]


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


def _as_csr(matrix, num_vars: int) -> sparse.csr_matrix:
    if matrix is None:
        return sparse.csr_matrix((0, num_vars))
    return sparse.csr_matrix(matrix, dtype=float)


def _as_vector(values, length: int) -> np.ndarray:
    if values is None:
        return np.zeros(length)
    return np.asarray(values, dtype=float).reshape(-1)


@dataclass
class LinearProgram:
    """min c·x, A_eq x = b_eq, A_ub x <= b_ub, x >= 0"""
    num_vars: int
    c: Optional[np.ndarray] = None
    A_eq: Optional[sparse.spmatrix] = None
    b_eq: Optional[np.ndarray] = None
    A_ub: Optional[sparse.spmatrix] = None
    b_ub: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.num_vars < 0:
            raise LpError("num_vars must be nonnegative")
        self.A_eq = _as_csr(self.A_eq, self.num_vars)
        self.A_ub = _as_csr(self.A_ub, self.num_vars)
        self.c = _as_vector(self.c, self.num_vars)
        self.b_eq = _as_vector(self.b_eq, self.A_eq.shape[0])
        self.b_ub = _as_vector(self.b_ub, self.A_ub.shape[0])

        if self.c.shape != (self.num_vars,):
            raise LpError(f"objective length {self.c.size} != num_vars {self.num_vars}")
        for name, A, b in (("eq", self.A_eq, self.b_eq), ("ub", self.A_ub, self.b_ub)):
            if A.shape[1] != self.num_vars:
                raise LpError(f"{name} rows have {A.shape[1]} columns, expected {self.num_vars}")
            if b.shape != (A.shape[0],):
                raise LpError(f"{name} right-hand side length {b.size} != row count {A.shape[0]}")
            if not np.isfinite(b).all():
                raise LpError(f"{name} right-hand side must be finite")
        if not np.isfinite(self.c).all():
            raise LpError("objective must be finite")

    @classmethod
    def from_rows(cls, num_vars: int, c: Optional[Iterable[float]] = None,
                  eq_rows: Iterable[SparseRow] = (), ub_rows: Iterable[SparseRow] = ()) -> "LinearProgram":
        """Seyrek satır sözlüklerinden LP oluştur"""
        def stack(rows: List[SparseRow]):
            data, indices, indptr, rhs = [], [], [0], []
            for coefficients, b in rows:
                for j, value in sorted(coefficients.items()):
                    if not 0 <= j < num_vars:
                        raise LpError(f"variable index {j} outside 0..{num_vars - 1}")
                    indices.append(j)
                    data.append(float(value))
                indptr.append(len(indices))
                rhs.append(float(b))
            matrix = sparse.csr_matrix((data, indices, indptr), shape=(len(rows), num_vars))
            return matrix, np.array(rhs)

        A_eq, b_eq = stack(list(eq_rows))
        A_ub, b_ub = stack(list(ub_rows))
        return cls(num_vars, None if c is None else np.asarray(list(c), float), A_eq, b_eq, A_ub, b_ub)

    @property
    def num_eq(self) -> int:
        return self.A_eq.shape[0]

    @property
    def num_ub(self) -> int:
        return self.A_ub.shape[0]

    @property
    def num_rows(self) -> int:
        return self.num_eq + self.num_ub

    def with_objective(self, c: np.ndarray) -> "LinearProgram":
        return replace(self, c=np.asarray(c, dtype=float))

    def dense_size(self) -> int:
        """Simplex tablosunun yaklaşık giriş sayısı"""
        return (self.num_rows + 1) * (self.num_vars + self.num_ub + self.num_rows + 1)


@dataclass
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray] = None
    objective_value: float = float("nan")
    iterations: int = 0
    backend: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def check_solution(lp: LinearProgram, x: np.ndarray) -> np.ndarray:
    """Çözücüden bağımsız artık kontrolü; küçük negatifler sıfırlanır"""
    x = np.asarray(x, dtype=float).copy()
    if x.shape != (lp.num_vars,):
        raise LpError(f"solution length {x.size} != num_vars {lp.num_vars}")
    if (x < -NONNEG_SLACK).any():
        raise LpError(f"solution has negative entry {x.min()!r}")
    x[x < 0] = 0.0

    if lp.num_eq:
        residual = np.abs(lp.A_eq @ x - lp.b_eq).max()
        limit = RESIDUAL_TOL * (1.0 + np.abs(lp.b_eq).max())
        if residual > limit:
            raise LpError(f"equality residual {residual:.3e} exceeds {limit:.3e}")
    if lp.num_ub:
        excess = (lp.A_ub @ x - lp.b_ub).max()
        if excess > RESIDUAL_TOL:
            raise LpError(f"inequality residual {excess:.3e} exceeds {RESIDUAL_TOL:.0e}")
    return x


class LpBackend(ABC):
    """Çözücü sözleşmesi: solve(lp) -> LpSolution"""
    name = "abstract"

    @abstractmethod
    def _solve(self, lp: LinearProgram) -> LpSolution:
        ...

    def solve(self, lp: LinearProgram) -> LpSolution:
        solution = self._solve(lp)
        solution.backend = self.name
        if solution.is_optimal:
            solution.x = check_solution(lp, solution.x)
            solution.objective_value = float(lp.c @ solution.x)
        logger.debug("LP (%s): %d değişken, %d satır -> %s, %d iterasyon",
                     self.name, lp.num_vars, lp.num_rows, solution.status.value, solution.iterations)
        return solution


@dataclass
class _Tableau:
    """Son satırı indirgenmiş maliyet olan kanonik tablo"""
    T: np.ndarray
    basis: List[int]
    iterations: int = 0
    degenerate: int = 0
    bland: bool = False
    limit: int = 0
    allowed: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def rhs(self) -> np.ndarray:
        return self.T[:-1, -1]

    def set_objective(self, cost: np.ndarray):
        self.T[-1, :-1] = cost
        self.T[-1, -1] = 0.0
        for row, var in enumerate(self.basis):
            if self.T[-1, var] != 0.0:
                self.T[-1] -= self.T[-1, var] * self.T[row]

    def pivot(self, row: int, col: int):
        T = self.T
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row])
        T[:, col] = 0.0
        T[row, col] = 1.0
        self.basis[row] = col

    def _entering(self) -> Optional[int]:
        reduced = self.T[-1, :-1]
        candidates = np.flatnonzero((reduced < -OPTIMALITY_TOL) & self.allowed)
        if candidates.size == 0:
            return None
        if self.bland:
            return int(candidates[0])
        return int(candidates[np.argmin(reduced[candidates])])

    def _leaving(self, col: int) -> Optional[int]:
        column = self.T[:-1, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return None
        ratios = self.rhs[rows] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + PIVOT_TOL]
        # eşitlikte en küçük indisli temel değişken (Bland)
        return int(min(tied, key=lambda r: self.basis[r]))

    def run(self) -> LpStatus:
        while True:
            col = self._entering()
            if col is None:
                return LpStatus.OPTIMAL
            row = self._leaving(col)
            if row is None:
                return LpStatus.UNBOUNDED
            if self.iterations >= self.limit:
                raise LpStallError()
            if self.rhs[row] <= PIVOT_TOL:
                self.degenerate += 1
                if not self.bland and self.degenerate >= BLAND_AFTER_DEGENERATE:
                    logger.debug("Bland kuralına geçildi (%d dejenere pivot)", self.degenerate)
                    self.bland = True
            self.pivot(row, col)
            self.iterations += 1


class SimplexSolver(LpBackend):
    """Yoğun tablolu iki fazlı primal simplex

    Dantzig kuralıyla başlar, BLAND_AFTER_DEGENERATE dejenere pivottan sonra
    Bland kuralına geçer. Faz 1 optimumu FEASIBILITY_TOL üstündeyse LP
    olursuzdur. Gereksiz eşitlik satırları faz 1 sonunda atılır.
    """
    name = "simplex"

    def __init__(self, iteration_factor: int = ITERATION_FACTOR):
        self.iteration_factor = iteration_factor

    def _solve(self, lp: LinearProgram) -> LpSolution:
        n, m_eq, m_ub = lp.num_vars, lp.num_eq, lp.num_ub
        m = m_eq + m_ub
        A = np.zeros((m, n + m_ub))
        A[:m_eq, :n] = lp.A_eq.toarray()
        A[m_eq:, :n] = lp.A_ub.toarray()
        A[m_eq:, n:] = np.eye(m_ub)
        b = np.concatenate([lp.b_eq, lp.b_ub])

        negative = b < 0
        A[negative] *= -1.0
        b[negative] *= -1.0

        # pozitif sağ taraflı eşitsizliklerde gevşek değişken temelde başlar
        basis: List[int] = []
        artificial_rows = []
        for row in range(m):
            if row >= m_eq and not negative[row]:
                basis.append(n + row - m_eq)
            else:
                basis.append(-1)
                artificial_rows.append(row)

        num_structural = n + m_ub
        num_artificial = len(artificial_rows)
        T = np.zeros((m + 1, num_structural + num_artificial + 1))
        T[:m, :num_structural] = A
        T[:m, -1] = b
        for offset, row in enumerate(artificial_rows):
            T[row, num_structural + offset] = 1.0
            basis[row] = num_structural + offset

        tableau = _Tableau(T, basis, limit=self.iteration_factor * max(1, n + m))
        tableau.allowed = np.ones(T.shape[1] - 1, dtype=bool)

        if num_artificial:
            phase_one = np.zeros(T.shape[1] - 1)
            phase_one[num_structural:] = 1.0
            tableau.set_objective(phase_one)
            tableau.run()
            infeasibility = -tableau.T[-1, -1]
            if infeasibility > FEASIBILITY_TOL:
                return LpSolution(LpStatus.INFEASIBLE, iterations=tableau.iterations)
            self._drive_out_artificials(tableau, num_structural)
            tableau.T = np.delete(tableau.T, np.s_[num_structural:num_structural + num_artificial], axis=1)
            tableau.allowed = np.ones(num_structural, dtype=bool)

        cost = np.zeros(num_structural)
        cost[:n] = lp.c
        tableau.set_objective(cost)
        status = tableau.run()
        if status is LpStatus.UNBOUNDED:
            return LpSolution(status, iterations=tableau.iterations)

        values = np.zeros(num_structural)
        values[tableau.basis] = tableau.rhs
        x = values[:n]
        return LpSolution(LpStatus.OPTIMAL, x, float(lp.c @ x), tableau.iterations)

    @staticmethod
    def _drive_out_artificials(tableau: _Tableau, num_structural: int):
        """Sıfır değerli yapay temel değişkenleri çıkar, gereksiz satırları sil"""
        redundant = []
        for row, var in enumerate(tableau.basis):
            if var < num_structural:
                continue
            coefficients = tableau.T[row, :num_structural]
            candidates = np.flatnonzero(np.abs(coefficients) > PIVOT_TOL)
            if candidates.size:
                tableau.pivot(row, int(candidates[np.argmax(np.abs(coefficients[candidates]))]))
            else:
                redundant.append(row)
        if redundant:
            logger.debug("%d gereksiz eşitlik satırı atıldı", len(redundant))
            tableau.T = np.delete(tableau.T, redundant, axis=0)
            dropped = set(redundant)
            tableau.basis = [v for r, v in enumerate(tableau.basis) if r not in dropped]


class HighsSolver(LpBackend):
    """scipy.optimize.linprog(method='highs') arka ucu"""
    name = "highs"

    OPTIONS = {"primal_feasibility_tolerance": 1e-9, "dual_feasibility_tolerance": 1e-9}

    def _linprog(self, lp: LinearProgram, presolve: bool):
        return linprog(
            lp.c,
            A_ub=lp.A_ub if lp.num_ub else None,
            b_ub=lp.b_ub if lp.num_ub else None,
            A_eq=lp.A_eq if lp.num_eq else None,
            b_eq=lp.b_eq if lp.num_eq else None,
            bounds=(0, None),
            method="highs",
            options={**self.OPTIONS, "presolve": presolve},
        )

    def _solve(self, lp: LinearProgram) -> LpSolution:
        result = self._linprog(lp, presolve=True)
        if result.status == 4:
            # presolve "olursuz ya da sınırsız" ayrımını yapamadı
            logger.debug("HiGHS presolve kapalı olarak tekrar çalıştırılıyor")
            result = self._linprog(lp, presolve=False)
        iterations = int(getattr(result, "nit", 0) or 0)
        if result.status == 0:
            return LpSolution(LpStatus.OPTIMAL, np.asarray(result.x), float(result.fun), iterations)
        if result.status == 2:
            return LpSolution(LpStatus.INFEASIBLE, iterations=iterations)
        if result.status == 3:
            return LpSolution(LpStatus.UNBOUNDED, iterations=iterations)
        if result.status == 1:
            raise LpStallError()
        raise LpError(f"HiGHS failed: {result.message}")


BACKENDS: Dict[str, type] = {"simplex": SimplexSolver, "highs": HighsSolver}


def get_backend(name: str = "auto", lp: Optional[LinearProgram] = None) -> LpBackend:
    """Arka uç seçimi; 'auto' tablo boyutuna göre karar verir"""
    if name not in LP_BACKENDS:
        raise LpError(f"unknown LP backend {name!r} (choose from {', '.join(LP_BACKENDS)})")
    if name == "auto":
        name = "simplex" if lp is None or lp.dense_size() <= SIMPLEX_DENSE_LIMIT else "highs"
    return BACKENDS[name]()


def solve(lp: LinearProgram, backend: str = "auto") -> LpSolution:
    return get_backend(backend, lp).solve(lp)


def solve_feasibility(lp: LinearProgram, backend: str = "auto") -> LpSolution:
    """Sıfır amaçlı çözüm: herhangi bir olurlu nokta"""
    return solve(lp.with_objective(np.zeros(lp.num_vars)), backend)


def dump_lp(lp: LinearProgram, stream: TextIO):
    """LP'yi satır başına bir kısıt olarak düz metne yaz"""
    def terms(row: sparse.csr_matrix) -> str:
        return " ".join(f"{int(j)}:{float(v)!r}" for j, v in zip(row.indices, row.data)) or "-"

    stream.write(f"# vars={lp.num_vars} eq={lp.num_eq} ub={lp.num_ub}\n")
    objective = sparse.csr_matrix(lp.c.reshape(1, -1))
    stream.write(f"min {terms(objective)}\n")
    for i in range(lp.num_eq):
        stream.write(f"eq {terms(lp.A_eq.getrow(i))} = {float(lp.b_eq[i])!r}\n")
    for i in range(lp.num_ub):
        stream.write(f"ub {terms(lp.A_ub.getrow(i))} <= {float(lp.b_ub[i])!r}\n")
