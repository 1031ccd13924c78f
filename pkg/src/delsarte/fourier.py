"""Fourier analysis on finite abelian groups.

Normalization: counting measure on the group, (1/|G|) * counting measure on
the dual. This is the unique pair for which inversion holds verbatim
(f = conj_fourier(dft(f))) and for which the total dual mass of a function
with f(0) = 1 comes out as 1. Every module in the package uses it.

Transforms are the naive O(|G|^2) sums, vectorized through cached character
tables for groups up to ``_DENSE_LIMIT`` and computed row by row beyond that.
Character phases are exact integer multiples of 1/lcm(orders) before the
single trigonometric evaluation, so no phase drift accumulates.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AsymmetricBump, GroupMismatch
from .groups import DualElement, GroupElement, GroupSpec, _require_same_spec

_DENSE_LIMIT = 2048


@functools.lru_cache(maxsize=128)
def coords_table(spec: GroupSpec) -> np.ndarray:
    """(|G|, d) residue tuples in canonical order."""
    idx = np.arange(spec.order, dtype=np.int64)
    out = np.empty((spec.order, spec.rank), dtype=np.int64)
    for j in range(spec.rank - 1, -1, -1):
        n = spec.orders[j]
        out[:, j] = idx % n
        idx //= n
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=128)
def _phase_data(spec: GroupSpec) -> tuple[int, np.ndarray]:
    lcm = spec.exponent
    weights = np.array([lcm // n for n in spec.orders], dtype=np.int64)
    return lcm, weights


def _ravel(spec: GroupSpec, coords: np.ndarray) -> np.ndarray:
    idx = np.zeros(coords.shape[0], dtype=np.int64)
    for j, n in enumerate(spec.orders):
        idx = idx * n + coords[:, j] % n
    return idx


def char_phase_numerators(spec: GroupSpec, chi: DualElement) -> np.ndarray:
    """Integer p(g) with chi(g) = exp(2 pi i p(g) / lcm), for all g at once."""
    lcm, weights = _phase_data(spec)
    y = np.array(chi.coords, dtype=np.int64)
    return (coords_table(spec) @ (y * weights)) % lcm


def char_values(spec: GroupSpec, chi: DualElement) -> np.ndarray:
    """chi(g) for every g in canonical order."""
    lcm, _ = _phase_data(spec)
    p = char_phase_numerators(spec, chi)
    return np.exp((2j * np.pi / lcm) * p)


@functools.lru_cache(maxsize=16)
def _char_matrix(spec: GroupSpec) -> np.ndarray | None:
    """CHI[i, j] = chi_i(g_j), cached for groups small enough to afford it."""
    if spec.order > _DENSE_LIMIT:
        return None
    lcm, weights = _phase_data(spec)
    c = coords_table(spec)
    p = ((c * weights) @ c.T) % lcm
    m = np.exp((2j * np.pi / lcm) * p)
    m.setflags(write=False)
    return m


@functools.lru_cache(maxsize=16)
def _diff_table(spec: GroupSpec) -> np.ndarray | None:
    """D[a, b] = canonical index of g_a - g_b."""
    if spec.order > _DENSE_LIMIT:
        return None
    c = coords_table(spec)
    d = np.zeros((spec.order, spec.order), dtype=np.int64)
    for j, n in enumerate(spec.orders):
        d = d * n + (c[:, j][:, None] - c[:, j][None, :]) % n
    d.setflags(write=False)
    return d


@functools.lru_cache(maxsize=128)
def _neg_index(spec: GroupSpec) -> np.ndarray:
    c = coords_table(spec)
    idx = _ravel(spec, -c)
    idx.setflags(write=False)
    return idx


@dataclass(frozen=True, eq=False)
class FunctionOnG:
    """Real-valued function on a group, tabulated in canonical element order."""

    spec: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (self.spec.order,):
            raise GroupMismatch(f"expected {self.spec.order} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("function values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def delta(cls, spec: GroupSpec) -> "FunctionOnG":
        v = np.zeros(spec.order)
        v[0] = 1.0
        return cls(spec, v)

    @classmethod
    def constant(cls, spec: GroupSpec, value: float = 1.0) -> "FunctionOnG":
        return cls(spec, np.full(spec.order, float(value)))

    @classmethod
    def indicator(cls, spec: GroupSpec, members: Iterable[GroupElement]) -> "FunctionOnG":
        v = np.zeros(spec.order)
        for g in members:
            _require_same_spec(spec, g.spec)
            v[g.index] = 1.0
        return cls(spec, v)

    def value_at(self, g: GroupElement) -> float:
        _require_same_spec(self.spec, g.spec)
        return float(self.values[g.index])

    def at_zero(self) -> float:
        return float(self.values[0])

    def total(self) -> float:
        return float(np.sum(self.values))

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex-valued function on the dual, tabulated in canonical order."""

    spec: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.complex128)
        if v.shape != (self.spec.order,):
            raise GroupMismatch(f"expected {self.spec.order} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("spectrum values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def value_at(self, chi: DualElement) -> complex:
        _require_same_spec(self.spec, chi.spec)
        return complex(self.values[chi.index])

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.values)))


def dft(f: FunctionOnG) -> Spectrum:
    """fhat(chi) = sum_g f(g) conj(chi(g)) under the counting measure."""
    m = _char_matrix(f.spec)
    if m is not None:
        vals = m.conj() @ f.values
    else:
        vals = np.empty(f.spec.order, dtype=np.complex128)
        for i, chi in enumerate(f.spec.duals()):
            vals[i] = np.vdot(char_values(f.spec, chi), f.values)
    return Spectrum(f.spec, vals)


def conj_fourier(k: Spectrum) -> np.ndarray:
    """Conjugate transform g -> (1/|G|) sum_chi k(chi) chi(g).

    The result is a complex array in canonical element order; callers that
    expect a real function assert realness via :func:`conj_fourier_real`.
    """
    m = _char_matrix(k.spec)
    if m is not None:
        return (k.values @ m) / k.spec.order
    acc = np.zeros(k.spec.order, dtype=np.complex128)
    for i, chi in enumerate(k.spec.duals()):
        acc += k.values[i] * char_values(k.spec, chi)
    return acc / k.spec.order


def conj_fourier_real(k: Spectrum, tol: float = 1e-9) -> FunctionOnG:
    """Conjugate transform of a spectrum known to come from a real function."""
    vals = conj_fourier(k)
    scale = 1.0 + k.norm_inf()
    worst = float(np.max(np.abs(vals.imag)))
    if worst > tol * scale:
        raise ValueError(f"conjugate transform is not real: max imaginary part {worst:g}")
    return FunctionOnG(k.spec, vals.real)


def convolve(f: FunctionOnG, h: FunctionOnG) -> FunctionOnG:
    """(f * h)(g) = sum_s f(s) h(g - s)."""
    _require_same_spec(f.spec, h.spec)
    d = _diff_table(f.spec)
    if d is not None:
        out = h.values[d] @ f.values
    else:
        c = coords_table(f.spec)
        out = np.empty(f.spec.order)
        for a in range(f.spec.order):
            idx = _ravel(f.spec, c[a] - c)
            out[a] = float(h.values[idx] @ f.values)
    return FunctionOnG(f.spec, out)


def reflect(f: FunctionOnG) -> FunctionOnG:
    """g -> f(-g)."""
    return FunctionOnG(f.spec, f.values[_neg_index(f.spec)])


def conv_square(phi: FunctionOnG) -> FunctionOnG:
    """phi convolved with its reflection; always positive definite, with
    value sum(phi^2) at the identity and spectrum |phihat|^2."""
    return convolve(phi, reflect(phi))


def bump_theta(b: Iterable[DualElement], gamma: DualElement) -> Spectrum:
    """Translated convolution square of a symmetric character-set indicator.

    The convolution is taken on the dual group with weight 1/|G| per
    character. The result is supported in the product set gamma*B*B, peaks
    at gamma with value |B|/|G|, and its conjugate transform equals
    gamma(g) * |conj_fourier(1_B)(g)|^2.
    """
    members = set(b)
    spec = gamma.spec
    if not members:
        raise AsymmetricBump("bump base set is empty")
    for chi in members:
        _require_same_spec(spec, chi.spec)
    if spec.trivial_character() not in members:
        raise AsymmetricBump("bump base set must contain the unit character")
    for chi in members:
        if chi.conjugate() not in members:
            raise AsymmetricBump(f"bump base set is not conjugation-closed at {chi.coords}")
    u = np.zeros(spec.order)
    u[[chi.index for chi in members]] = 1.0
    d = _diff_table(spec)
    if d is not None:
        theta0 = (u[d] @ u) / spec.order
        vals = theta0[d[:, gamma.index]]
    else:
        c = coords_table(spec)
        theta0 = np.empty(spec.order)
        for a in range(spec.order):
            idx = _ravel(spec, c[a] - c)
            theta0[a] = float(u[idx] @ u) / spec.order
        shift = _ravel(spec, c - c[gamma.index])
        vals = theta0[shift]
    return Spectrum(spec, vals.astype(np.complex128))
