"""Finite approximation nets for normalized positive definite functions.

Cover the spectral support by cells of radius epsilon around finitely many
center characters (sup distance over a chosen sample set K), make the cells
disjoint in construction order, project the spectrum of a function onto the
cells and floor the projected masses to a uniform grid of granularity m.
For any admissible f the quantized character combination approximates f
within 2*epsilon uniformly on K: the cell projection costs at most epsilon
(total spectral mass is f(0) = 1) and the quantization at most n/m < epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySetError, NetPreconditionError
from .fourier import FunctionOnG, dft
from .groups import DualElement, GroupElement, char_eval, _require_same_spec
from .posdef import is_positive_definite


@dataclass(frozen=True, eq=False)
class EpsilonNet:
    """Disjoint cells covering the support, one center each, plus the
    quantization granularity m > n_centers / epsilon."""

    k: tuple[GroupElement, ...]
    epsilon: float
    centers: tuple[DualElement, ...]
    partition: tuple[tuple[DualElement, ...], ...]
    m: int

    @property
    def n_centers(self) -> int:
        return len(self.centers)

    def support(self) -> frozenset[DualElement]:
        return frozenset(chi for cell in self.partition for chi in cell)

    def grid_size(self) -> int:
        """Cardinality of the candidate set {sum r_j chi_j : r_j on the grid}."""
        return (self.m + 1) ** self.n_centers


def character_distance(a: DualElement, b: DualElement, k: Sequence[GroupElement]) -> float:
    """max over g in k of |a(g) - b(g)|; at most 2, and 0 when k = {0}."""
    return max(abs(char_eval(a, g) - char_eval(b, g)) for g in k)


def build_net(
    q: Iterable[DualElement],
    k: Iterable[GroupElement],
    epsilon: float,
    grain: int | None = None,
) -> EpsilonNet:
    """Greedy disjoint cover of q in canonical order.

    The first uncovered character becomes the next center; its cell is
    everything not yet covered within epsilon of it. Granularity defaults to
    the smallest integer exceeding n_centers / epsilon.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    q_sorted = sorted(set(q), key=lambda c: c.index)
    if not q_sorted:
        raise EmptySetError("support set is empty")
    k_sorted = sorted(set(k), key=lambda g: g.index)
    if not k_sorted:
        raise EmptySetError("sample set is empty")
    spec = q_sorted[0].spec
    for chi in q_sorted:
        _require_same_spec(spec, chi.spec)
    for g in k_sorted:
        _require_same_spec(spec, g.spec)

    centers: list[DualElement] = []
    cells: list[tuple[DualElement, ...]] = []
    pending = q_sorted
    while pending:
        center = pending[0]
        cell = tuple(
            chi for chi in pending if character_distance(chi, center, k_sorted) < epsilon
        )
        taken = set(cell)
        pending = [chi for chi in pending if chi not in taken]
        centers.append(center)
        cells.append(cell)

    n = len(centers)
    if grain is None:
        m = math.floor(n / epsilon) + 1
        while m * epsilon <= n:  # float fence
            m += 1
    else:
        m = int(grain)
        if m * epsilon <= n:
            raise ValueError(f"granularity {m} is not above n/epsilon = {n / epsilon:g}")
    return EpsilonNet(tuple(k_sorted), float(epsilon), tuple(centers), tuple(cells), m)


def project_coeffs(f: FunctionOnG, net: EpsilonNet, tol: float = 1e-9) -> np.ndarray:
    """Spectral mass per cell: (1/|G|) * sum of the transform over the cell.

    Requires a positive definite f with f(0) = 1 whose spectrum lives on
    the net's support; then every coefficient is nonnegative and they sum
    to 1.
    """
    pd = is_positive_definite(f, tol)
    if not pd.is_posdef:
        raise NetPreconditionError("function is not positive definite")
    if abs(f.at_zero() - 1.0) > tol:
        raise NetPreconditionError(f"f(0) = {f.at_zero():g}, expected 1")
    spectrum = dft(f)
    scale = (1.0 + f.norm_inf()) * f.spec.order
    support_idx = {chi.index for chi in net.support()}
    leak = [abs(spectrum.values[i]) for i in range(f.spec.order) if i not in support_idx]
    if leak and max(leak) > tol * scale:
        raise NetPreconditionError(f"spectrum leaks outside the net support by {max(leak):g}")
    out = np.empty(net.n_centers)
    for j, cell in enumerate(net.partition):
        mass = sum(spectrum.values[chi.index].real for chi in cell) / f.spec.order
        if mass < -tol * scale:
            raise NetPreconditionError(f"negative cell mass {mass:g}")
        out[j] = max(mass, 0.0)
    return out


def quantize(coeffs: Sequence[float], m: int) -> np.ndarray:
    """Floor each coefficient to the grid {0, 1/m, ..., 1}.

    A grid product m * c_j that rounds up across an integer can only land
    d_j exactly on c_j, so 0 <= c_j - d_j < 1/m still holds.
    """
    if m < 1:
        raise ValueError("granularity must be a positive integer")
    arr = np.asarray(coeffs, dtype=float)
    if arr.size and (arr.min() < -1e-12 or arr.max() > 1.0 + 1e-9):
        raise ValueError("coefficients must lie in [0, 1]")
    return np.floor(np.maximum(arr, 0.0) * m) / m


def net_approximation_error(f: FunctionOnG, net: EpsilonNet, tol: float = 1e-9) -> float:
    """Sup over the sample set of |f - sum_j d_j center_j| with the
    quantized coefficients d; below 2*epsilon for admissible input."""
    coeffs = project_coeffs(f, net, tol)
    quantized = quantize(coeffs, net.m)
    worst = 0.0
    for g in net.k:
        approx = sum(
            d * char_eval(chi, g) for d, chi in zip(quantized, net.centers) if d
        )
        worst = max(worst, abs(f.value_at(g) - approx))
    return worst
