"""Dense two-phase simplex with anti-cycling rules and an exact recheck.

Solves   maximize c.x   s.t.   a_eq x = b_eq,  a_ub x <= b_ub,  x >= 0
on small dense data. Tableau arithmetic is float64 with a fixed pivot
tolerance. The data here is heavily degenerate (sign constraints with zero
right-hand sides), so the pivot loop uses most-negative entering with a
lexicographic ratio test, and falls back to Bland's smallest-index rule
whenever the objective stalls; both safeguards keep the walk finite and
deterministic. The final basis can be re-derived over exact rationals
(every float is an exact dyadic rational) to confirm primal feasibility,
dual feasibility margins and the objective value, which catches
accumulated elimination drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

PIVOT_TOL = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """max c.x  s.t.  a_eq x = b_eq, a_ub x <= b_ub, x >= 0."""

    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.c, dtype=np.float64))
        n = c.shape[0]
        a_eq = np.asarray(self.a_eq, dtype=np.float64).reshape(-1, n)
        a_ub = np.asarray(self.a_ub, dtype=np.float64).reshape(-1, n)
        b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=np.float64))
        b_ub = np.atleast_1d(np.asarray(self.b_ub, dtype=np.float64)) if np.size(self.b_ub) else np.zeros(0)
        if b_eq.shape[0] != a_eq.shape[0] or b_ub.shape[0] != a_ub.shape[0]:
            raise ValueError("constraint matrix and right-hand side sizes disagree")
        for name, arr in (("c", c), ("a_eq", a_eq), ("b_eq", b_eq), ("a_ub", a_ub), ("b_ub", b_ub)):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        for name, arr in (("c", c), ("a_eq", a_eq), ("b_eq", b_eq), ("a_ub", a_ub), ("b_ub", b_ub)):
            object.__setattr__(self, name, arr)

    @property
    def n_vars(self) -> int:
        return self.c.shape[0]

    @property
    def n_eq(self) -> int:
        return self.a_eq.shape[0]

    @property
    def n_ub(self) -> int:
        return self.a_ub.shape[0]


@dataclass
class SimplexResult:
    status: str
    x: np.ndarray | None = None
    value: float | None = None
    duals_eq: np.ndarray | None = None
    duals_ub: np.ndarray | None = None
    dual_slacks: np.ndarray | None = None
    basis: tuple[int, ...] | None = None
    iterations: int = 0


def _standard_form(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Slack-augmented equality system with nonnegative right-hand side.

    Returns (a, b, sign, ncols) where sign records rows multiplied by -1.
    """
    n, me, mu = lp.n_vars, lp.n_eq, lp.n_ub
    m = me + mu
    a = np.zeros((m, n + mu))
    a[:me, :n] = lp.a_eq
    a[me:, :n] = lp.a_ub
    if mu:
        a[me:, n:] = np.eye(mu)
    b = np.concatenate([lp.b_eq, lp.b_ub])
    sign = np.ones(m)
    neg = b < 0
    sign[neg] = -1.0
    a[neg] *= -1.0
    b = np.abs(b)
    return a, b, sign, n + mu


def _pivot(t: np.ndarray, basis: list[int], row: int, col: int) -> None:
    t[row] /= t[row, col]
    factors = t[:, col].copy()
    factors[row] = 0.0
    t -= np.outer(factors, t[row])
    t[:, col] = 0.0
    t[row, col] = 1.0
    basis[row] = col


_STALL_LIMIT = 64


def _lexicographic_leave(t: np.ndarray, col: np.ndarray, ties: np.ndarray, basis: list[int]) -> int:
    """Among rows tied in the ratio test, pick the one whose scaled row is
    lexicographically smallest (the classic anti-cycling perturbation).
    Bit-identical duplicate rows stay tied; the smallest basic variable
    breaks what remains."""
    cand = ties
    width = t.shape[1] - 1
    j = 0
    while cand.size > 1 and j < width:
        vals = t[cand, j] / col[cand]
        low = vals.min()
        cand = cand[vals <= low + 1e-12 * (1.0 + abs(low))]
        j += 1
    if cand.size == 1:
        return int(cand[0])
    basis_arr = np.asarray(basis)
    return int(cand[np.argmin(basis_arr[cand])])


def _run(
    t: np.ndarray,
    basis: list[int],
    allowed_end: int,
    tol: float,
    cap: int,
) -> tuple[str, int]:
    """Pivot loop tuned for heavily degenerate data (zero right-hand sides).

    Entering: most negative reduced cost, switching to Bland's smallest
    index after a long objective stall as the anti-cycling backstop.
    Leaving: minimum ratio with lexicographic tie-breaking.
    """
    m = t.shape[0] - 1
    iters = 0
    stall = 0
    last_obj = t[m, -1]
    while True:
        obj = t[m, :allowed_end]
        negative = np.nonzero(obj < -tol)[0]
        if negative.size == 0:
            return OPTIMAL, iters
        iters += 1
        if iters > cap:
            return NUMERICAL_FAILURE, iters
        if stall >= _STALL_LIMIT:
            enter = int(negative[0])
        else:
            enter = int(negative[np.argmin(obj[negative])])
        col = t[:m, enter]
        pivotable = np.nonzero(col > tol)[0]
        if pivotable.size == 0:
            return UNBOUNDED, iters
        ratios = t[pivotable, -1] / col[pivotable]
        best = float(ratios.min())
        ties = pivotable[ratios <= best + 1e-12]
        if ties.size == 1:
            leave = int(ties[0])
        else:
            leave = _lexicographic_leave(t, col, ties, basis)
        _pivot(t, basis, leave, enter)
        if t[m, -1] > last_obj + 1e-12 * (1.0 + abs(last_obj)):
            stall = 0
            last_obj = t[m, -1]
        else:
            stall += 1


def simplex_solve(
    lp: LinearProgram, pivot_tol: float = PIVOT_TOL, max_iters: int | None = None
) -> SimplexResult:
    n, me, mu = lp.n_vars, lp.n_eq, lp.n_ub
    m = me + mu
    a, b, sign, ncols = _standard_form(lp)
    feas_tol = 1e-8 * (1.0 + (float(np.max(b)) if m else 0.0))

    # artificials for equality rows and for flipped inequality rows;
    # unflipped inequality rows start with their slack basic at value b >= 0
    art_rows = [i for i in range(m) if i < me or sign[i] < 0]
    n_art = len(art_rows)
    total = ncols + n_art
    t = np.zeros((m + 1, total + 1))
    t[:m, :ncols] = a
    t[:m, -1] = b
    basis: list[int] = [0] * m
    for k, i in enumerate(art_rows):
        t[i, ncols + k] = 1.0
        basis[i] = ncols + k
    for i in range(me, m):
        if sign[i] > 0:
            basis[i] = n + (i - me)

    cap = max_iters if max_iters is not None else 500 + 200 * (m + ncols)

    # phase one: minimize the sum of artificials
    if n_art:
        t[m, ncols:total] = 1.0
        for i in art_rows:
            t[m] -= t[i]
        status, it1 = _run(t, basis, total, pivot_tol, cap)
        if status != OPTIMAL:
            return SimplexResult(NUMERICAL_FAILURE, iterations=it1)
        if -t[m, -1] > feas_tol:
            return SimplexResult(INFEASIBLE, iterations=it1)
    else:
        it1 = 0

    # phase two: minimize -c over the original columns; artificial columns
    # stay in the tableau (possibly basic at zero) but may not re-enter
    t[m] = 0.0
    t[m, :n] = -lp.c
    for r in range(m):
        coeff = t[m, basis[r]]
        if coeff != 0.0:
            t[m] -= coeff * t[r]
    status, it2 = _run(t, basis, ncols, pivot_tol, cap)
    iters = it1 + it2
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, iterations=iters)
    if status != OPTIMAL:
        return SimplexResult(NUMERICAL_FAILURE, iterations=iters)

    x_std = np.zeros(total)
    for r in range(m):
        x_std[basis[r]] = t[r, -1]
    if n_art and float(np.max(np.abs(x_std[ncols:]))) > feas_tol:
        return SimplexResult(NUMERICAL_FAILURE, iterations=iters)
    x = np.maximum(x_std[:n], 0.0)
    value = float(lp.c @ x)

    # duals from the final basis: solve B^T y = c_B in the min form, then
    # undo the row sign flips and the max->min negation
    bmat = np.zeros((m, m))
    c_min = np.concatenate([-lp.c, np.zeros(mu + n_art)])
    for r in range(m):
        col = basis[r]
        if col < ncols:
            bmat[:, r] = a[:, col]
        else:
            bmat[art_rows[col - ncols], r] = 1.0
    try:
        y = np.linalg.solve(bmat.T, c_min[list(basis)])
    except np.linalg.LinAlgError:
        y, *_ = np.linalg.lstsq(bmat.T, c_min[list(basis)], rcond=None)
    y_orig = -sign * y
    duals_eq = y_orig[:me].copy()
    duals_ub = y_orig[me:].copy()
    a_orig = np.vstack([lp.a_eq, lp.a_ub]) if m else np.zeros((0, n))
    dual_slacks = a_orig.T @ y_orig - lp.c if m else -lp.c.copy()
    return SimplexResult(
        OPTIMAL,
        x=x,
        value=value,
        duals_eq=duals_eq,
        duals_ub=duals_ub,
        dual_slacks=np.asarray(dual_slacks),
        basis=tuple(basis),
        iterations=iters,
    )


# ---------------------------------------------------------------------------
# exact-rational re-verification of a final basis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactCheckReport:
    performed: bool
    consistent: bool
    max_primal_violation: float
    max_dual_violation: float
    value_gap: float
    note: str = ""


def _fraction_solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    n = len(mat)
    aug = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1, 1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


def exact_basis_check(
    lp: LinearProgram, result: SimplexResult, tol: float = 1e-7
) -> ExactCheckReport:
    """Re-derive the reported basis over exact rationals.

    The float LP data is reinterpreted as the exact dyadic rationals it
    stores; the basic solution, the duals and the reduced-cost margins are
    then exact, so any disagreement beyond ``tol`` is elimination drift in
    the float tableau rather than data noise.
    """
    if result.status != OPTIMAL or result.basis is None:
        return ExactCheckReport(False, False, np.inf, np.inf, np.inf, "no optimal basis")
    n, me, mu = lp.n_vars, lp.n_eq, lp.n_ub
    m = me + mu
    a, b, _, ncols = _standard_form(lp)
    # rebuild the artificial-column layout exactly as simplex_solve did
    b_raw = np.concatenate([lp.b_eq, lp.b_ub])
    sign_rows = [i for i in range(m) if i < me or b_raw[i] < 0]
    af = [[Fraction(float(x)) for x in row] for row in a]
    bf = [Fraction(float(x)) for x in b]
    cf = [Fraction(-float(x)) for x in lp.c] + [Fraction(0)] * (mu + len(sign_rows))

    def column(col: int) -> list[Fraction]:
        if col < ncols:
            return [af[r][col] for r in range(m)]
        out = [Fraction(0)] * m
        out[sign_rows[col - ncols]] = Fraction(1)
        return out

    bmat = [[Fraction(0)] * m for _ in range(m)]
    for r, col in enumerate(result.basis):
        colvec = column(col)
        for i in range(m):
            bmat[i][r] = colvec[i]
    x_b = _fraction_solve(bmat, bf)
    if x_b is None:
        return ExactCheckReport(True, False, np.inf, np.inf, np.inf, "singular basis")
    y = _fraction_solve([list(row) for row in zip(*bmat)], [cf[c] for c in result.basis])
    if y is None:
        return ExactCheckReport(True, False, np.inf, np.inf, np.inf, "singular basis transpose")

    primal_violation = max((float(-v) for v in x_b), default=0.0)
    basis_set = set(result.basis)
    dual_violation = 0.0
    for col in range(ncols):
        if col in basis_set:
            continue
        reduced = cf[col] - sum(yi * ai for yi, ai in zip(y, column(col)))
        dual_violation = max(dual_violation, float(-reduced))
    x_struct = [Fraction(0)] * n
    for r, col in enumerate(result.basis):
        if col < n:
            x_struct[col] = x_b[r]
    value_exact = sum(Fraction(float(ci)) * xi for ci, xi in zip(lp.c, x_struct))
    value_gap = abs(float(value_exact) - float(result.value))
    scale = 1.0 + abs(float(result.value))
    consistent = (
        primal_violation <= tol
        and dual_violation <= tol
        and value_gap <= tol * scale
    )
    return ExactCheckReport(
        True,
        consistent,
        max(primal_violation, 0.0),
        max(dual_violation, 0.0),
        value_gap,
    )
