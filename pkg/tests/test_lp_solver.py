import io
from itertools import combinations

import numpy as np
import pytest

from src.core.exceptions import LpError, LpStallError
from src.core.lp_solver import (
    HighsSolver, LinearProgram, LpStatus, SimplexSolver, check_solution, dump_lp, get_backend, solve,
    solve_feasibility,
)

BACKEND_TOL = {"simplex": 1e-9, "highs": 1e-7}


def vertex_oracle(lp: LinearProgram):
    """Tüm temel olurlu çözümleri dene; (durum, en iyi amaç)"""
    n = lp.num_vars
    A_eq, b_eq = lp.A_eq.toarray(), lp.b_eq
    A_ub, b_ub = lp.A_ub.toarray(), lp.b_ub
    candidates = np.vstack([A_ub, -np.eye(n)])
    rhs = np.concatenate([b_ub, np.zeros(n)])

    best = None
    for active in combinations(range(candidates.shape[0]), n - A_eq.shape[0]):
        M = np.vstack([A_eq, candidates[list(active)]])
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        x = np.linalg.solve(M, np.concatenate([b_eq, rhs[list(active)]]))
        if (x < -1e-9).any() or (A_ub @ x - b_ub > 1e-9).any():
            continue
        value = lp.c @ x
        best = value if best is None else min(best, value)
    return (LpStatus.INFEASIBLE, None) if best is None else (LpStatus.OPTIMAL, best)


def random_bounded_lp(rng, infeasible: bool) -> LinearProgram:
    n = int(rng.integers(2, 5))
    num_ub = int(rng.integers(1, 4))
    x0 = rng.uniform(0.1, 1.0, size=n)
    A_ub = rng.uniform(-1.0, 1.0, size=(num_ub, n))
    b_ub = A_ub @ x0 + rng.uniform(0.1, 1.0, size=num_ub)

    # Σx <= B kutusu LP'yi sınırlı tutar
    A_ub = np.vstack([A_ub, np.ones(n)])
    b_ub = np.append(b_ub, x0.sum() + 1.0)
    if infeasible:
        A_ub = np.vstack([A_ub, -np.ones(n)])
        b_ub = np.append(b_ub, -(x0.sum() + 2.0))

    A_eq = b_eq = None
    if rng.random() < 0.5:
        w = rng.uniform(0.5, 1.5, size=n)
        A_eq, b_eq = w.reshape(1, -1), np.array([w @ x0])
    return LinearProgram(n, rng.normal(size=n), A_eq, b_eq, A_ub, b_ub)


def beale_lp() -> LinearProgram:
    return LinearProgram(
        4,
        c=[-0.75, 20.0, -0.5, 6.0],
        A_ub=[[0.25, -8.0, -1.0, 9.0], [0.5, -12.0, -0.5, 3.0], [0.0, 0.0, 1.0, 0.0]],
        b_ub=[0.0, 0.0, 1.0],
    )


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_single_upper_bound(backend):
    lp = LinearProgram.from_rows(1, c=[-1.0], ub_rows=[({0: 1.0}, 3.0)])
    solution = solve(lp, backend)
    assert solution.status is LpStatus.OPTIMAL
    assert solution.x[0] == pytest.approx(3.0)
    assert solution.objective_value == pytest.approx(-3.0)
    assert solution.backend == backend


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_contradictory_equalities_are_infeasible(backend):
    lp = LinearProgram.from_rows(2, eq_rows=[({0: 1.0, 1: 1.0}, 1.0), ({0: 1.0, 1: -1.0}, 3.0)])
    assert solve(lp, backend).status is LpStatus.INFEASIBLE


def test_unbounded():
    lp = LinearProgram.from_rows(2, c=[-1.0, 0.0], eq_rows=[({0: 1.0, 1: -1.0}, 0.0)])
    assert solve(lp, "simplex").status is LpStatus.UNBOUNDED


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_feasibility_point(backend):
    lp = LinearProgram.from_rows(2, c=[5.0, -2.0], eq_rows=[({0: 1.0, 1: 1.0}, 1.0)])
    solution = solve_feasibility(lp, backend)
    assert solution.is_optimal
    assert solution.x.sum() == pytest.approx(1.0, abs=1e-9)
    assert solution.objective_value == 0.0


def test_empty_constraint_set():
    solution = solve_feasibility(LinearProgram(3))
    assert solution.is_optimal
    assert solution.x.tolist() == [0.0, 0.0, 0.0]


@pytest.mark.parametrize("backend", ["simplex", "highs"])
def test_matches_vertex_enumeration(backend):
    rng = np.random.default_rng(7)
    tol = BACKEND_TOL[backend]
    for _ in range(200):
        lp = random_bounded_lp(rng, infeasible=rng.random() < 0.2)
        status, best = vertex_oracle(lp)
        solution = solve(lp, backend)
        assert solution.status is status
        if status is LpStatus.OPTIMAL:
            assert solution.objective_value == pytest.approx(best, abs=tol)
            check_solution(lp, solution.x)


def test_redundant_equality_rows_are_dropped():
    lp = LinearProgram.from_rows(
        3, c=[1.0, 2.0, 3.0],
        eq_rows=[({0: 1.0, 1: 1.0, 2: 1.0}, 1.0), ({0: 2.0, 1: 2.0, 2: 2.0}, 2.0)],
    )
    solution = solve(lp, "simplex")
    assert solution.is_optimal
    assert solution.x.tolist() == pytest.approx([1.0, 0.0, 0.0])


def test_negative_rhs_inequality_needs_phase_one():
    # x0 + x1 >= 2 olarak yazılmış
    lp = LinearProgram.from_rows(2, c=[1.0, 3.0], ub_rows=[({0: -1.0, 1: -1.0}, -2.0)])
    solution = solve(lp, "simplex")
    assert solution.x.tolist() == pytest.approx([2.0, 0.0])


def test_beale_cycles_under_default_cap():
    with pytest.raises(LpStallError, match="cycling/stall"):
        SimplexSolver().solve(beale_lp())


def test_beale_solved_once_bland_engages():
    solution = SimplexSolver(iteration_factor=500).solve(beale_lp())
    assert solution.is_optimal
    assert solution.objective_value == pytest.approx(-1.25, abs=1e-9)
    assert solution.iterations > 1000


def test_beale_with_highs():
    assert HighsSolver().solve(beale_lp()).objective_value == pytest.approx(-1.25, abs=1e-7)


def test_iteration_cap():
    lp = LinearProgram.from_rows(1, c=[-1.0], ub_rows=[({0: 1.0}, 3.0)])
    with pytest.raises(LpStallError):
        SimplexSolver(iteration_factor=0).solve(lp)


def test_deterministic():
    rng = np.random.default_rng(3)
    lp = random_bounded_lp(rng, infeasible=False)
    first, second = solve(lp, "simplex"), solve(lp, "simplex")
    assert first.objective_value == second.objective_value
    assert np.array_equal(first.x, second.x)


def test_dimension_mismatch():
    with pytest.raises(LpError):
        LinearProgram(2, c=[1.0])
    with pytest.raises(LpError):
        LinearProgram(2, A_eq=[[1.0, 1.0]], b_eq=[1.0, 2.0])
    with pytest.raises(LpError):
        LinearProgram.from_rows(2, eq_rows=[({2: 1.0}, 1.0)])
    with pytest.raises(LpError):
        LinearProgram(1, A_ub=[[1.0]], b_ub=[np.inf])


def test_check_solution_rejects_violations():
    lp = LinearProgram.from_rows(2, eq_rows=[({0: 1.0, 1: 1.0}, 1.0)])
    with pytest.raises(LpError):
        check_solution(lp, np.array([0.7, 0.7]))
    with pytest.raises(LpError):
        check_solution(lp, np.array([1.1, -0.1]))
    assert check_solution(lp, np.array([1.0 + 5e-10, -5e-10])).min() == 0.0


def test_backend_selection():
    small = LinearProgram(2)
    assert isinstance(get_backend("auto", small), SimplexSolver)
    assert isinstance(get_backend("highs", small), HighsSolver)
    with pytest.raises(LpError, match="unknown LP backend"):
        get_backend("ecos", small)


def test_dump_format():
    lp = LinearProgram.from_rows(
        2, c=[1.0, 0.0], eq_rows=[({0: 1.0, 1: 1.0}, 1.0)], ub_rows=[({1: 2.0}, 0.5)],
    )
    buffer = io.StringIO()
    dump_lp(lp, buffer)
    assert buffer.getvalue().splitlines() == [
        "# vars=2 eq=1 ub=1",
        "min 0:1.0",
        "eq 0:1.0 1:1.0 = 1.0",
        "ub 1:2.0 <= 0.5",
    ]
