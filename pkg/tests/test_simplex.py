import numpy as np

from delsarte.simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    exact_basis_check,
    simplex_solve,
)


def lp(c, a_eq=(), b_eq=(), a_ub=(), b_ub=()):
    n = len(c)
    return LinearProgram(
        np.array(c, dtype=float),
        np.array(a_eq, dtype=float).reshape(-1, n),
        np.array(b_eq, dtype=float),
        np.array(a_ub, dtype=float).reshape(-1, n),
        np.array(b_ub, dtype=float),
    )


def test_single_equality():
    res = simplex_solve(lp([1, 0], a_eq=[[1, 1]], b_eq=[1]))
    assert res.status == OPTIMAL
    assert abs(res.value - 1.0) < 1e-12
    assert np.allclose(res.x, [1, 0], atol=1e-12)


def test_zero_objective_feasible():
    res = simplex_solve(lp([0, 0], a_eq=[[1, 1]], b_eq=[1], a_ub=[[1, -1]], b_ub=[0]))
    assert res.status == OPTIMAL
    assert res.value == 0.0


def test_infeasible():
    res = simplex_solve(lp([1, 0], a_eq=[[1, 1]], b_eq=[1], a_ub=[[1, 0]], b_ub=[-1]))
    assert res.status == INFEASIBLE


def test_unbounded():
    res = simplex_solve(lp([1, 0], a_ub=[[0, 1]], b_ub=[1]))
    assert res.status == UNBOUNDED


def test_negative_rhs_rows():
    # x1 + x2 >= 2 and 2 x1 + x2 >= 3, minimize 3 x1 + 4 x2: optimum 6 at (2, 0)
    res = simplex_solve(
        lp([-3, -4], a_ub=[[-1, -1], [-2, -1]], b_ub=[-2, -3])
    )
    assert res.status == OPTIMAL
    assert abs(res.value - (-6.0)) < 1e-9
    assert np.allclose(res.x, [2, 0], atol=1e-9)
    # flipped-row duals still certify: b.y == value with y >= 0
    assert res.duals_ub.min() >= -1e-12
    assert abs(res.duals_ub @ np.array([-2.0, -3.0]) - res.value) < 1e-9


def test_degenerate_cycling_prone_instance():
    # classic cycling-prone data; Bland's rule must terminate at 0.05
    res = simplex_solve(
        lp(
            [0.75, -150, 0.02, -6],
            a_ub=[
                [0.25, -60, -0.04, 9],
                [0.5, -90, -0.02, 3],
                [0, 0, 1, 0],
            ],
            b_ub=[0, 0, 1],
        )
    )
    assert res.status == OPTIMAL
    assert abs(res.value - 0.05) < 1e-9


def test_duals_certify_value():
    problem = lp([4, 3], a_ub=[[2, 1], [1, 2]], b_ub=[4, 4])
    res = simplex_solve(problem)
    assert res.status == OPTIMAL
    # strong duality: b.y equals the optimum, duals nonnegative
    assert res.duals_ub.min() >= -1e-12
    assert abs(res.duals_ub @ problem.b_ub - res.value) < 1e-9
    # dual feasibility A^T y >= c
    assert np.all(problem.a_ub.T @ res.duals_ub - problem.c >= -1e-9)


def test_equality_dual_certifies_value():
    problem = lp([5, 1], a_eq=[[1, 1]], b_eq=[1], a_ub=[[1, -1]], b_ub=[0])
    res = simplex_solve(problem)
    assert res.status == OPTIMAL
    assert abs(res.value - 3.0) < 1e-12
    bound = res.duals_eq @ problem.b_eq + res.duals_ub @ problem.b_ub
    assert abs(bound - res.value) < 1e-9


def test_exact_basis_check_consistent():
    problem = lp([4, 3], a_eq=[[1, 1]], b_eq=[1], a_ub=[[1, -1]], b_ub=[0])
    res = simplex_solve(problem)
    report = exact_basis_check(problem, res)
    assert report.performed and report.consistent
    assert report.value_gap < 1e-12


def test_exact_basis_check_flags_tampering():
    problem = lp([4, 3], a_eq=[[1, 1]], b_eq=[1], a_ub=[[1, -1]], b_ub=[0])
    res = simplex_solve(problem)
    res.value = res.value + 0.5
    report = exact_basis_check(problem, res)
    assert report.performed and not report.consistent


def test_random_lps_agree_with_enumeration():
    # brute-force vertex enumeration over inequality subsets as an oracle
    import itertools
    import random

    rng = random.Random(13)
    for _ in range(60):
        n = rng.randint(1, 3)
        m = rng.randint(1, 4)
        c = [rng.uniform(-2, 2) for _ in range(n)]
        a_ub = [[rng.uniform(-2, 2) for _ in range(n)] for _ in range(m)]
        b_ub = [rng.uniform(0.2, 2) for _ in range(m)]  # 0 feasible, bounded unlikely
        rows = np.vstack([np.array(a_ub), np.eye(n)])
        rhs_all = np.concatenate([np.array(b_ub), np.zeros(n)])
        best = None
        for combo in itertools.combinations(range(m + n), n):
            mat = rows[list(combo)]
            if abs(np.linalg.det(mat)) < 1e-9:
                continue
            x = np.linalg.solve(mat, rhs_all[list(combo)])
            if np.all(np.array(a_ub) @ x <= np.array(b_ub) + 1e-9) and np.all(x >= -1e-9):
                val = float(np.array(c) @ x)
                best = val if best is None else max(best, val)
        res = simplex_solve(lp(c, a_ub=a_ub, b_ub=b_ub))
        if res.status == OPTIMAL and best is not None:
            assert abs(res.value - best) < 1e-7 * (1 + abs(best))
