"""Seeded verification campaigns behind the ``verify`` command.

Each campaign draws a deterministic stream of cases from a master seed,
records one reproduction seed per case, and returns a summary that the CLI
and the acceptance tests render. Failures carry the case seed so any single
case can be replayed in isolation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .fourier import FunctionOnG, Spectrum, conj_fourier_real, conv_square
from .groups import GroupElement, GroupSpec, Subgroup, generated_subgroup, make_group
from .lp import (
    DelsarteInstance,
    Status,
    feasibility_check,
    solve_delsarte,
    vertex_enum_oracle,
)
from .nets import build_net, net_approximation_error, project_coeffs, quantize
from .posdef import gram_oracle, is_positive_definite, restrict_function, trivial_extension
from .reduction import verify_equivalence

SUITES = ("posdef", "extension", "net", "oracle", "reduction")

DEFAULT_COUNTS = {
    "posdef": 200,
    "extension": 100,
    "net": 12,
    "oracle": 100,
    "reduction": 50,
}


@dataclass
class CaseFailure:
    index: int
    seed: int
    detail: str


@dataclass
class CampaignResult:
    suite: str
    seed: int
    count: int
    failures: list[CaseFailure] = field(default_factory=list)
    stats: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"suite={self.suite} seed={self.seed} count={self.count}"]
        for f in self.failures:
            out.append(f"  case {f.index} FAIL seed={f.seed}: {f.detail}")
        stats = " ".join(f"{k}={v:.3g}" for k, v in sorted(self.stats.items()))
        verdict = "PASS" if self.ok else "FAIL"
        passed = self.count - len(self.failures)
        out.append(f"{verdict} {self.suite}: {passed}/{self.count} cases{(' ' + stats) if stats else ''}")
        return out


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def random_group(rng: random.Random, max_order: int = 12, max_rank: int = 3) -> GroupSpec:
    while True:
        rank = rng.randint(1, max_rank)
        orders = [rng.randint(1, 6) for _ in range(rank)]
        total = 1
        for n in orders:
            total *= n
        if 2 <= total <= max_order:
            return make_group(orders)


def random_window(rng: random.Random, spec: GroupSpec) -> frozenset[GroupElement]:
    p = rng.uniform(0.15, 0.9)
    members = {spec.zero()}
    for g in spec.elements():
        if not g.is_zero() and rng.random() < p:
            members.add(g)
    return frozenset(members)


def random_conjugation_closed_q(rng: random.Random, spec: GroupSpec) -> frozenset:
    orbits: dict[int, list] = {}
    for chi in spec.duals():
        key = min(chi.index, chi.conjugate().index)
        orbits.setdefault(key, []).append(chi)
    p = rng.uniform(0.2, 0.95)
    chosen = [orb for orb in orbits.values() if rng.random() < p]
    if not chosen:
        chosen = [orbits[rng.choice(sorted(orbits))]]
    return frozenset(chi for orb in chosen for chi in orb)


def random_positive_definite(
    rng: random.Random, spec: GroupSpec, normalized: bool = True
) -> FunctionOnG:
    """Positive definite by construction: either a convolution square or the
    conjugate transform of a random symmetric nonnegative spectrum."""
    if rng.random() < 0.5:
        while True:
            phi = FunctionOnG(spec, [rng.uniform(-1, 1) for _ in range(spec.order)])
            f = conv_square(phi)
            if f.at_zero() > 1e-6:
                break
    else:
        vals = np.zeros(spec.order, dtype=complex)
        for chi in spec.duals():
            key = min(chi.index, chi.conjugate().index)
            if chi.index == key:
                mass = rng.uniform(0.0, 1.0)
                vals[chi.index] = mass
                vals[chi.conjugate().index] = mass
        if not np.any(vals):
            vals[0] = 1.0
        f = conj_fourier_real(Spectrum(spec, vals))
        if f.at_zero() <= 1e-9:
            f = FunctionOnG.delta(spec)
    if normalized:
        f = FunctionOnG(spec, f.values / f.at_zero())
    return f


def random_even_function(rng: random.Random, spec: GroupSpec) -> FunctionOnG:
    vals = np.array([rng.uniform(-1, 1) for _ in range(spec.order)])
    for g in spec.elements():
        vals[g.index] = vals[min(g.index, (-g).index)]
    return FunctionOnG(spec, vals)


def random_subgroup(rng: random.Random, spec: GroupSpec, proper: bool = False) -> Subgroup:
    for _ in range(64):
        picks = [spec.element_at(rng.randrange(spec.order)) for _ in range(rng.randint(1, 2))]
        h = generated_subgroup([spec.zero()] + picks)
        if not proper or h.order < spec.order:
            return h
    return generated_subgroup([spec.zero()])


def random_instance(rng: random.Random, max_order: int = 12) -> DelsarteInstance:
    spec = random_group(rng, max_order)
    return DelsarteInstance(spec, random_window(rng, spec), random_conjugation_closed_q(rng, spec))


def random_fiber_union_q(rng: random.Random, spec: GroupSpec, g0) -> frozenset:
    """Conjugation-closed union of restriction fibers of the subgroup.

    On such supports the subgroup reduction provably preserves the extremal
    value; partial fibers can lose feasibility (see delsarte.reduction).
    """
    from .reduction import restriction_fibers

    fibers = restriction_fibers(spec, g0)
    chosen: set = set()
    for gamma in fibers:
        if rng.random() < 0.5:
            chosen.add(gamma)
            chosen.add(gamma.conjugate())
    if not chosen:
        gamma = sorted(fibers, key=lambda c: c.index)[rng.randrange(len(fibers))]
        chosen = {gamma, gamma.conjugate()}
    return frozenset(chi for gamma in chosen for chi in fibers[gamma])


# ---------------------------------------------------------------------------
# campaigns
# ---------------------------------------------------------------------------


def posdef_campaign(seed: int = 0, count: int = 200) -> CampaignResult:
    """Convolution squares are positive definite; positive definite functions
    peak at 0 and have nonnegative total mass; the spectral and Gram tests
    agree on random even functions."""
    master = random.Random(seed)
    result = CampaignResult("posdef", seed, count)
    worst_min_spec = 0.0
    for i in range(count):
        case_seed = master.randrange(2**32)
        rng = random.Random(case_seed)
        spec = random_group(rng, 16)
        phi = FunctionOnG(spec, [rng.uniform(-1, 1) for _ in range(spec.order)])
        square = conv_square(phi)
        report = is_positive_definite(square)
        l2 = float(np.sum(phi.values**2))
        if not report.is_posdef or report.min_spectrum < -1e-10 * max(l2, 1e-30):
            result.failures.append(
                CaseFailure(i, case_seed, f"convolution square rejected: min spec {report.min_spectrum:g}")
            )
            continue
        worst_min_spec = min(worst_min_spec, report.min_spectrum)

        f = random_positive_definite(rng, spec)
        if f.norm_inf() > f.at_zero() + 1e-12:
            result.failures.append(
                CaseFailure(i, case_seed, f"peak bound violated: max|f| = {f.norm_inf():g} > f(0) = {f.at_zero():g}")
            )
            continue
        if f.total() < -1e-10 * spec.order * f.norm_inf():
            result.failures.append(CaseFailure(i, case_seed, f"negative total mass {f.total():g}"))
            continue

        even = random_even_function(rng, spec)
        if is_positive_definite(even).is_posdef != gram_oracle(even):
            result.failures.append(CaseFailure(i, case_seed, "spectral and Gram tests disagree"))
    result.stats["worst_min_spectrum"] = worst_min_spec
    return result


def extension_campaign(seed: int = 0, count: int = 100) -> CampaignResult:
    """Trivial extensions of positive definite subgroup functions pass both
    tests; restrictions of positive definite functions pass both tests."""
    master = random.Random(seed)
    result = CampaignResult("extension", seed, count)
    for i in range(count):
        case_seed = master.randrange(2**32)
        rng = random.Random(case_seed)
        spec = random_group(rng, 16)
        h = random_subgroup(rng, spec)
        f0 = random_positive_definite(rng, h.canonical_spec)
        ext = trivial_extension(f0, h, spec)
        if not is_positive_definite(ext).is_posdef:
            result.failures.append(CaseFailure(i, case_seed, "extension fails the spectral test"))
            continue
        if not gram_oracle(ext):
            result.failures.append(CaseFailure(i, case_seed, "extension fails the Gram test"))
            continue
        f = random_positive_definite(rng, spec)
        restr = restrict_function(f, h)
        if not is_positive_definite(restr).is_posdef or not gram_oracle(restr):
            result.failures.append(CaseFailure(i, case_seed, "restriction loses positive definiteness"))
    return result


def oracle_campaign(seed: int = 0, count: int = 100, max_order: int = 12) -> CampaignResult:
    """Simplex value vs exhaustive vertex enumeration, plus attainment: every
    optimal solve returns a member function whose mass equals the value."""
    master = random.Random(seed)
    result = CampaignResult("oracle", seed, count)
    max_gap = 0.0
    for i in range(count):
        case_seed = master.randrange(2**32)
        rng = random.Random(case_seed)
        inst = random_instance(rng, max_order)
        sol = solve_delsarte(inst)
        oracle = vertex_enum_oracle(inst)
        if sol.status != oracle.status:
            result.failures.append(
                CaseFailure(i, case_seed, f"verdicts differ: solver {sol.status.value}, oracle {oracle.status.value}")
            )
            continue
        if sol.status == Status.OPTIMAL:
            gap = abs(sol.value - oracle.value)
            max_gap = max(max_gap, gap)
            if gap > 1e-8 * (1.0 + abs(sol.value)):
                result.failures.append(
                    CaseFailure(i, case_seed, f"value gap {gap:g}: solver {sol.value!r}, oracle {oracle.value!r}")
                )
                continue
            if not sol.residuals.is_member:
                result.failures.append(CaseFailure(i, case_seed, "optimal f fails membership"))
                continue
            if abs(sol.f.total() - sol.value) > 1e-9 * (1.0 + abs(sol.value)):
                result.failures.append(
                    CaseFailure(i, case_seed, f"mass {sol.f.total():g} differs from value {sol.value:g}")
                )
    result.stats["max_gap"] = max_gap
    return result


def reduction_campaign(seed: int = 0, count: int = 50, max_order: int = 16) -> CampaignResult:
    """Instances whose window sits inside a proper subgroup, with supports
    built from full restriction fibers: the reduced problem must have the
    same status and value, and membership must transfer across trivial
    extension on sampled functions."""
    from .groups import generated_subgroup

    master = random.Random(seed)
    result = CampaignResult("reduction", seed, count)
    max_gap = 0.0
    for i in range(count):
        case_seed = master.randrange(2**32)
        rng = random.Random(case_seed)
        spec = random_group(rng, max_order)
        h = random_subgroup(rng, spec, proper=True)
        members = list(h.elements)
        window = {spec.zero()}
        for g in members:
            if rng.random() < 0.7:
                window.add(g)
        g0 = generated_subgroup(window)
        inst = DelsarteInstance(spec, frozenset(window), random_fiber_union_q(rng, spec, g0))
        report = verify_equivalence(inst, samples=12, seed=case_seed)
        if report.gap is not None:
            max_gap = max(max_gap, report.gap)
        if not report.ok:
            detail = (
                f"statuses {report.original_status.value}/{report.reduced_status.value}"
                f" gap={report.gap!r} membership {report.membership_agreements}/{report.membership_samples}"
            )
            result.failures.append(CaseFailure(i, case_seed, detail))
    result.stats["max_gap"] = max_gap
    return result


def golden_cases() -> list[tuple[str, DelsarteInstance, float | None]]:
    """Named instances with values pinned by the vertex oracle; expected
    value None means infeasible."""
    cases = []
    z4 = make_group([4])
    cases.append(("z4_interval", DelsarteInstance(z4, frozenset(z4.element((c,)) for c in (3, 0, 1)), frozenset(z4.duals())), 2.0))
    z6 = make_group([6])
    cases.append(("z6_interval", DelsarteInstance(z6, frozenset(z6.element((c,)) for c in (5, 0, 1)), frozenset(z6.duals())), 2.0))
    z5 = make_group([5])
    cases.append(("z5_whole_window", DelsarteInstance(z5, frozenset(z5.elements()), frozenset(z5.duals())), 5.0))
    z23 = make_group([2, 3])
    cases.append(("z2x3_whole_window", DelsarteInstance(z23, frozenset(z23.elements()), frozenset(z23.duals())), 6.0))
    for n in (2, 5, 8):
        zn = make_group([n])
        cases.append((f"z{n}_origin", DelsarteInstance(zn, frozenset([zn.zero()]), frozenset(zn.duals())), 1.0))
    cases.append(
        (
            "z4_trivial_support",
            DelsarteInstance(z4, frozenset([z4.zero(), z4.element((1,))]), frozenset([z4.trivial_character()])),
            None,
        )
    )
    return cases


def net_campaign(seed: int = 0, count: int = 12) -> CampaignResult:
    """Approximation bound on the golden extremal functions for a ladder of
    epsilons, plus seeded random (function, sample set) combinations."""
    master = random.Random(seed)
    result = CampaignResult("net", seed, count)
    epsilons = (0.05, 0.2, 1.0)
    worst_margin = np.inf
    index = 0

    def run_case(f: FunctionOnG, q, k, eps: float, case_seed: int, label: str) -> None:
        nonlocal index, worst_margin
        net = build_net(q, k, eps)
        coeffs = project_coeffs(f, net)
        quantized = quantize(coeffs, net.m)
        residual = float(np.max(coeffs - quantized)) if len(coeffs) else 0.0
        err = net_approximation_error(f, net)
        total = float(np.sum(coeffs))
        problems = []
        if err >= 2 * eps:
            problems.append(f"error {err:g} >= {2 * eps:g}")
        if residual >= 1.0 / net.m:
            problems.append(f"quantization residual {residual:g} >= 1/{net.m}")
        if abs(total - 1.0) > 1e-10:
            problems.append(f"cell masses sum to {total:g}")
        if problems:
            result.failures.append(CaseFailure(index, case_seed, f"{label}: " + "; ".join(problems)))
        worst_margin = min(worst_margin, 2 * eps - err)
        index += 1

    golden = [(name, inst, solve_delsarte(inst)) for name, inst, _ in golden_cases()]
    for name, inst, sol in golden:
        if sol.status != Status.OPTIMAL:
            continue
        for eps in epsilons:
            run_case(sol.f, inst.q, list(inst.group.elements()), eps, seed, name)
    for _ in range(count):
        case_seed = master.randrange(2**32)
        rng = random.Random(case_seed)
        spec = random_group(rng, 12)
        f = random_positive_definite(rng, spec)
        size = rng.randint(1, spec.order)
        k = rng.sample(list(spec.elements()), size)
        run_case(f, list(spec.duals()), k, rng.choice(epsilons), case_seed, "random")
    result.count = index
    result.stats["worst_bound_margin"] = float(worst_margin)
    return result


def run_campaign(suite: str, seed: int, count: int | None = None) -> CampaignResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    n = count if count is not None else DEFAULT_COUNTS[suite]
    if suite == "posdef":
        return posdef_campaign(seed, n)
    if suite == "extension":
        return extension_campaign(seed, n)
    if suite == "net":
        return net_campaign(seed, n)
    if suite == "oracle":
        return oracle_campaign(seed, n)
    return reduction_campaign(seed, n)
