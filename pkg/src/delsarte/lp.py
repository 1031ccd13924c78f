"""The extremal problem over Fourier coefficients, as a linear program.

An instance fixes a finite abelian group, a window W of allowed positivity
and a spectral support set Q. The admissible class consists of the real
positive definite f with f(0) = 1, f <= 0 off W and spectrum supported in
Q; the target is the largest total mass sum_g f(g), realized by an explicit
extremal function plus a dual certificate.

The decisive formulation choice: parametrize f by one nonnegative variable
per conjugation orbit of Q_eff = Q cap conj(Q). Positive definiteness and
the spectral support condition then collapse into variable nonnegativity,
f(0) = 1 is one equality, and the off-window sign condition is one linear
row per element, so the whole problem is a small dense LP rather than an
SDP. A real f with nonnegative spectrum weights conjugate characters
equally, which is why only Q_eff can carry spectrum.
"""

from __future__ import annotations

import enum
import hashlib
import itertools
import json
from dataclasses import InitVar, dataclass
from typing import Iterable

import numpy as np

from .errors import (
    EmptyEffectiveSupport,
    GroupMismatch,
    InvalidInstance,
    OracleTooLarge,
    OriginNotInW,
)
from .fourier import FunctionOnG, coords_table, dft, _phase_data
from .groups import DualElement, GroupElement, GroupSpec, _require_same_spec
from .posdef import PosDefReport, is_positive_definite
from .simplex import (
    INFEASIBLE,
    OPTIMAL,
    ExactCheckReport,
    LinearProgram,
    exact_basis_check,
    simplex_solve,
)


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class DelsarteInstance:
    """Problem data (group, W, Q).

    W must contain the identity: f(0) = 1 together with f <= 0 off W is
    unsatisfiable otherwise, so such instances are rejected outright. Q must
    be nonempty for user-built instances; the reduction machinery may carry
    an empty reduced support, which the solver reports as infeasible.
    """

    group: GroupSpec
    w: frozenset[GroupElement]
    q: frozenset[DualElement]
    allow_empty_q: InitVar[bool] = False

    def __post_init__(self, allow_empty_q: bool) -> None:
        object.__setattr__(self, "w", frozenset(self.w))
        object.__setattr__(self, "q", frozenset(self.q))
        if not self.w:
            raise InvalidInstance("W must be nonempty")
        for g in self.w:
            _require_same_spec(self.group, g.spec)
        for chi in self.q:
            _require_same_spec(self.group, chi.spec)
        if self.group.zero() not in self.w:
            raise OriginNotInW("W must contain the identity element")
        if not self.q and not allow_empty_q:
            raise InvalidInstance("Q must be nonempty")

    def w_sorted(self) -> tuple[GroupElement, ...]:
        return tuple(sorted(self.w, key=lambda g: g.index))

    def q_sorted(self) -> tuple[DualElement, ...]:
        return tuple(sorted(self.q, key=lambda c: c.index))

    def off_support(self) -> tuple[GroupElement, ...]:
        """Elements outside W, in canonical order; one LP row each."""
        return tuple(g for g in self.group.elements() if g not in self.w)

    def digest(self) -> str:
        payload = {
            "group": list(self.group.orders),
            "W": [list(g.coords) for g in self.w_sorted()],
            "Q": [list(c.coords) for c in self.q_sorted()],
        }
        blob = json.dumps(payload, separators=(",", ":")).encode()
        return "sha256:" + hashlib.sha256(blob).hexdigest()


@dataclass(frozen=True, eq=False)
class OrbitBasis:
    """Conjugation orbits of the symmetrized support, with real columns.

    One basis function per orbit: chi + conj(chi) for a true pair, chi
    itself for a self-conjugate (real-valued) character. Columns are built
    from canonicalized phases min(p, L - p), which makes every column
    exactly even in g, bit for bit.
    """

    spec: GroupSpec
    orbits: tuple[tuple[DualElement, ...], ...]
    weights: tuple[int, ...]
    columns: np.ndarray
    trivial_index: int | None

    @property
    def n_orbits(self) -> int:
        return len(self.orbits)

    @property
    def has_trivial(self) -> bool:
        return self.trivial_index is not None

    def synthesize(self, coeffs: Iterable[float]) -> FunctionOnG:
        a = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=float)
        if a.shape != (self.n_orbits,):
            raise ValueError(f"expected {self.n_orbits} coefficients")
        return FunctionOnG(self.spec, self.columns @ a)


def build_orbit_basis(q: Iterable[DualElement]) -> OrbitBasis:
    """Partition Q cap conj(Q) into conjugation orbits, ordered by the
    smallest character index in each orbit."""
    members = set(q)
    if not members:
        raise EmptyEffectiveSupport("support set is empty")
    spec = next(iter(members)).spec
    for chi in members:
        _require_same_spec(spec, chi.spec)
    q_eff = {chi for chi in members if chi.conjugate() in members}
    if not q_eff:
        raise EmptyEffectiveSupport("no conjugation-closed part: Q cap conj(Q) is empty")

    reps: dict[int, DualElement] = {}
    for chi in q_eff:
        key = min(chi.index, chi.conjugate().index)
        if key not in reps or chi.index < reps[key].index:
            reps[key] = chi
    order = sorted(reps)
    orbits: list[tuple[DualElement, ...]] = []
    weights: list[int] = []
    trivial_index: int | None = None
    lcm, lweights = _phase_data(spec)
    coords = coords_table(spec)
    cols = np.empty((spec.order, len(order)))
    for pos, key in enumerate(order):
        chi = reps[key]
        y = np.array(chi.coords, dtype=np.int64)
        p = (coords @ (y * lweights)) % lcm
        p = np.minimum(p, lcm - p)
        if chi.is_self_conjugate():
            orbits.append((chi,))
            weights.append(1)
            cols[:, pos] = np.where(p == 0, 1.0, -1.0)
        else:
            orbits.append((chi, chi.conjugate()))
            weights.append(2)
            cols[:, pos] = 2.0 * np.cos((2.0 * np.pi / lcm) * p)
        if chi.is_trivial():
            trivial_index = pos
    cols.setflags(write=False)
    return OrbitBasis(spec, tuple(orbits), tuple(weights), cols, trivial_index)


@dataclass(frozen=True)
class MembershipReport:
    """Per-condition residuals of class membership."""

    is_member: bool
    posdef: PosDefReport
    normalization_error: float
    off_support_violation: float
    off_spectrum_violation: float
    tol: float


def feasibility_check(
    f: FunctionOnG, inst: DelsarteInstance, tol: float = 1e-9
) -> MembershipReport:
    """Check all four membership conditions and report worst violations.

    Positive definiteness and the off-Q spectral bound use the transform
    scale (1 + max|f|) * |G|; f(0) = 1 and the off-window sign condition are
    absolute.
    """
    _require_same_spec(f.spec, inst.group)
    pd = is_positive_definite(f, tol)
    spectrum = dft(f)
    norm_err = abs(float(f.values[0]) - 1.0)
    off_w = [f.values[g.index] for g in inst.off_support()]
    off_w_violation = max(0.0, max(off_w)) if off_w else 0.0
    q_idx = {chi.index for chi in inst.q}
    off_q = [abs(spectrum.values[i]) for i in range(inst.group.order) if i not in q_idx]
    off_q_violation = float(max(off_q)) if off_q else 0.0
    scale = (1.0 + f.norm_inf()) * inst.group.order
    is_member = (
        pd.is_posdef
        and norm_err <= tol
        and off_w_violation <= tol
        and off_q_violation <= tol * scale
    )
    return MembershipReport(is_member, pd, norm_err, off_w_violation, off_q_violation, tol)


@dataclass(frozen=True, eq=False)
class DelsarteProgram:
    """LP data for an instance: one variable per orbit, the normalization
    equality, one sign row per off-window element."""

    instance: DelsarteInstance
    basis: OrbitBasis
    off_support: tuple[GroupElement, ...]
    program: LinearProgram


def build_lp(inst: DelsarteInstance) -> DelsarteProgram:
    basis = build_orbit_basis(inst.q)
    off = inst.off_support()
    n = basis.n_orbits
    c = np.zeros(n)
    if basis.trivial_index is not None:
        c[basis.trivial_index] = float(inst.group.order)
    a_eq = np.array([list(map(float, basis.weights))])
    b_eq = np.array([1.0])
    if off:
        a_ub = basis.columns[[g.index for g in off], :]
        b_ub = np.zeros(len(off))
    else:
        a_ub = np.zeros((0, n))
        b_ub = np.zeros(0)
    return DelsarteProgram(inst, basis, off, LinearProgram(c, a_eq, b_eq, a_ub, b_ub))


@dataclass(frozen=True)
class DualCertificate:
    """Lagrange multipliers proving the upper bound.

    Any y0 (free) and y_g >= 0 with y0 * w_o + sum_g y_g * col_o(g) >= c_o
    for every orbit o certify value <= y0, since the off-window rows have
    zero right-hand side.
    """

    normalization_multiplier: float
    off_support: tuple[GroupElement, ...]
    multipliers: tuple[float, ...]
    certified_upper_bound: float


@dataclass(frozen=True, eq=False)
class DelsarteSolution:
    status: Status
    value: float | None = None
    f: FunctionOnG | None = None
    fourier_coeffs: tuple[float, ...] | None = None
    basis: OrbitBasis | None = None
    dual: DualCertificate | None = None
    residuals: MembershipReport | None = None
    exact: ExactCheckReport | None = None
    lp_objective: float | None = None
    iterations: int = 0


def solve_delsarte(
    inst: DelsarteInstance, tol: float = 1e-9, exact_limit: int = 64
) -> DelsarteSolution:
    """Solve the instance.

    On success the extremal function, its orbit coefficients, feasibility
    residuals and a dual certificate are attached. The reported value is
    |G| times the trivial-orbit coefficient, which is the exact analytic
    total mass of the synthesized function (nontrivial columns sum to zero
    over the group); if the trivial character is outside the effective
    support the value is exactly 0. For groups of order at most
    ``exact_limit`` the final simplex basis is re-verified in exact rational
    arithmetic and any inconsistency demotes the result to a numerical
    failure.
    """
    try:
        prog = build_lp(inst)
    except EmptyEffectiveSupport:
        return DelsarteSolution(Status.INFEASIBLE)
    res = simplex_solve(prog.program)
    if res.status == INFEASIBLE:
        return DelsarteSolution(Status.INFEASIBLE, iterations=res.iterations)
    if res.status != OPTIMAL:
        return DelsarteSolution(Status.NUMERICAL_FAILURE, iterations=res.iterations)

    coeffs = np.maximum(res.x, 0.0)
    f = prog.basis.synthesize(coeffs)
    if prog.basis.trivial_index is not None:
        value = float(inst.group.order * coeffs[prog.basis.trivial_index])
    else:
        value = 0.0
    residuals = feasibility_check(f, inst, tol)
    multipliers = tuple(max(0.0, float(y)) for y in res.duals_ub)
    dual = DualCertificate(
        normalization_multiplier=float(res.duals_eq[0]),
        off_support=prog.off_support,
        multipliers=multipliers,
        certified_upper_bound=float(res.duals_eq[0]),
    )
    exact = None
    if inst.group.order <= exact_limit:
        exact = exact_basis_check(prog.program, res)
        if exact.performed and not exact.consistent:
            return DelsarteSolution(
                Status.NUMERICAL_FAILURE,
                value=value,
                f=f,
                fourier_coeffs=tuple(float(x) for x in coeffs),
                basis=prog.basis,
                dual=dual,
                residuals=residuals,
                exact=exact,
                lp_objective=res.value,
                iterations=res.iterations,
            )
    return DelsarteSolution(
        Status.OPTIMAL,
        value=value,
        f=f,
        fourier_coeffs=tuple(float(x) for x in coeffs),
        basis=prog.basis,
        dual=dual,
        residuals=residuals,
        exact=exact,
        lp_objective=res.value,
        iterations=res.iterations,
    )


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    duality_gap: float
    dual_feasibility_violation: float
    multiplier_negativity: float
    slackness_violation: float


def verify_certificate(
    sol: DelsarteSolution, inst: DelsarteInstance, tol: float = 1e-7
) -> CertificateReport:
    """Audit a solution's dual certificate against freshly built LP data.

    Checks dual feasibility (within tol * (1 + |G|)), the weak duality gap
    (within tol * (1 + value)) and complementary slackness (within tol).
    """
    if sol.status != Status.OPTIMAL or sol.dual is None:
        raise InvalidInstance("certificate verification needs an optimal solution")
    prog = build_lp(inst)
    if prog.off_support != sol.dual.off_support:
        raise InvalidInstance("certificate rows do not match the instance")
    y0 = sol.dual.normalization_multiplier
    ys = np.array(sol.dual.multipliers, dtype=float)
    c = prog.program.c
    w = np.array(prog.basis.weights, dtype=float)
    rows = prog.program.a_ub
    dual_lhs = y0 * w + (ys @ rows if len(ys) else 0.0)
    feas_violation = float(max(0.0, np.max(c - dual_lhs))) if len(c) else 0.0
    negativity = float(max(0.0, -np.min(ys))) if len(ys) else 0.0
    gap = float(sol.value - sol.dual.certified_upper_bound)
    coeffs = np.array(sol.fourier_coeffs, dtype=float)
    slack_rows = -(rows @ coeffs) if len(ys) else np.zeros(0)
    slackness = 0.0
    if len(ys):
        slackness = float(np.max(np.abs(ys * slack_rows)))
    dual_slack = dual_lhs - c
    slackness = max(slackness, float(np.max(np.abs(coeffs * dual_slack))) if len(c) else 0.0)
    ok = (
        feas_violation <= tol * (1.0 + inst.group.order)
        and negativity <= tol
        and gap <= tol * (1.0 + abs(sol.value))
        and slackness <= tol * (1.0 + inst.group.order)
    )
    return CertificateReport(ok, gap, feas_violation, negativity, slackness)


@dataclass
class OracleResult:
    status: Status
    value: float | None
    vertices: list[np.ndarray] | None = None


_MAX_ORACLE_ORBITS = 8
_MAX_ORACLE_ROWS = 24


def vertex_enum_oracle(
    inst: DelsarteInstance,
    collect_vertices: bool = False,
    chunk: int = 65536,
    max_vertices: int = 512,
) -> OracleResult:
    """Independent optimality oracle by exhaustive basic-solution enumeration.

    Every vertex of the feasible polytope satisfies the normalization
    equality plus n-1 further active constraints drawn from the sign rows
    and the nonnegativity bounds; all such square systems are solved in
    batches and the best feasible objective wins. Size limits: at most 8
    orbits and at most 24 constraint rows including the equality.
    """
    try:
        basis = build_orbit_basis(inst.q)
    except EmptyEffectiveSupport:
        return OracleResult(Status.INFEASIBLE, None)
    off = inst.off_support()
    n = basis.n_orbits
    m = len(off)
    if n > _MAX_ORACLE_ORBITS:
        raise OracleTooLarge(f"{n} orbits exceeds the oracle limit of {_MAX_ORACLE_ORBITS}")
    if m + 1 > _MAX_ORACLE_ROWS:
        raise OracleTooLarge(f"{m + 1} rows exceeds the oracle limit of {_MAX_ORACLE_ROWS}")

    w = np.array(basis.weights, dtype=float)
    rows = basis.columns[[g.index for g in off], :] if m else np.zeros((0, n))
    pool = np.vstack([rows, np.eye(n)])
    k = n - 1
    tol = 1e-9 * (1.0 + n)

    best: float | None = None
    feasible_found = False
    vertices: list[np.ndarray] = []
    seen: set[bytes] = set()

    combo_iter = itertools.combinations(range(pool.shape[0]), k)
    while True:
        block = list(itertools.islice(combo_iter, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.intp).reshape(len(block), k)
        mats = np.empty((len(block), n, n))
        mats[:, 0, :] = w
        if k:
            mats[:, 1:, :] = pool[idx]
        rhs = np.zeros((len(block), n))
        rhs[:, 0] = 1.0
        dets = np.linalg.det(mats)
        norms = np.prod(np.maximum(np.linalg.norm(mats, axis=2), 1e-300), axis=1)
        good = np.abs(dets) > 1e-10 * norms
        if not np.any(good):
            continue
        try:
            xs = np.linalg.solve(mats[good], rhs[good][..., None])[..., 0]
        except np.linalg.LinAlgError:
            # the det filter should prevent this; nan rows fail feasibility
            xs = np.full((int(np.sum(good)), n), np.nan)
            for pos, (mat, r) in enumerate(zip(mats[good], rhs[good])):
                try:
                    xs[pos] = np.linalg.solve(mat, r)
                except np.linalg.LinAlgError:
                    pass
        residual = np.abs(np.einsum("bij,bj->bi", mats[good], xs) - rhs[good]).max(axis=1)
        feas = residual <= 1e-7
        feas &= xs.min(axis=1) >= -tol
        if m:
            feas &= (xs @ rows.T).max(axis=1) <= tol
        feas &= np.abs(xs @ w - 1.0) <= tol
        if not np.any(feas):
            continue
        feasible_found = True
        xs_feas = xs[feas]
        if basis.trivial_index is not None:
            vals = inst.group.order * xs_feas[:, basis.trivial_index]
            top = float(np.max(vals))
            best = top if best is None else max(best, top)
        else:
            best = 0.0
        if collect_vertices:
            for x in xs_feas:
                key = np.round(x, 10).tobytes()
                if key not in seen and len(vertices) < max_vertices:
                    seen.add(key)
                    vertices.append(np.maximum(x, 0.0))
    if not feasible_found:
        return OracleResult(Status.INFEASIBLE, None)
    return OracleResult(Status.OPTIMAL, float(best), vertices if collect_vertices else None)
