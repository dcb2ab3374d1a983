"""Numerics on ``S^(2N+1)`` viewed as a join of circles, and the Morse flow on ``CP^N``.

Angles use the normalization ``z = |z| exp(2πi·arg z)`` so ``arg`` takes values in ``[0, 1)``.
The Morse function is ``f̃(z) = Σ a_j |z_j|²`` with strictly increasing ``a``;
its gradient flow has the closed form ``z_j(t) ∝ exp(2 a_j t) z_j(0)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "join_coords",
    "join_inverse",
    "morse_value",
    "morse_flow",
    "SimplexPath",
    "rho_moment",
    "beta",
    "GluingParams",
    "rho_explicit",
    "GluingReport",
    "check_gluing",
    "check_explicit_gluing",
    "simplex_residual",
    "H_N0",
    "grad_HN0",
    "GradientReport",
    "grad_HN0_check",
    "Stratum",
    "StrataReport",
    "strata",
]

UNIT_TOL = 1e-10


def _unit(z: Sequence[complex]) -> np.ndarray:
    v = np.asarray(z, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValidationError("z must be a nonempty complex vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValidationError(f"z must have unit norm (got {np.linalg.norm(v):.3g})")
    return v


def _arg(w: complex) -> float:
    a = math.atan2(w.imag, w.real) / (2 * math.pi)
    return a % 1.0


def join_coords(z: Sequence[complex]) -> tuple[np.ndarray, list[float | None]]:
    """``t_j = |z_j|²`` and ``τ_j = arg z_j`` (``None`` where ``z_j = 0``)."""
    v = _unit(z)
    t = np.abs(v) ** 2
    tau = [(_arg(complex(w)) if abs(w) > 0 else None) for w in v]
    return t, tau


def join_inverse(t: Sequence[float], tau: Sequence[float | None]) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-12) or abs(t.sum() - 1.0) > 1e-10:
        raise ValidationError("t must lie in the simplex")
    if len(tau) != len(t):
        raise ValidationError("t and tau must have the same length")
    out = np.zeros(len(t), dtype=complex)
    for j, (tj, aj) in enumerate(zip(t, tau)):
        if tj > 0:
            if aj is None:
                raise ValidationError(f"tau_{j} is required since t_{j} > 0")
            out[j] = math.sqrt(tj) * np.exp(2j * math.pi * aj)
    return out


def _check_a(a: Sequence[float]) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 1 or np.any(np.diff(arr) <= 0):
        raise ValidationError("coefficients a must be strictly increasing")
    return arr


def morse_value(z: Sequence[complex], a: Sequence[float]) -> float:
    return float(np.dot(np.asarray(a, dtype=float), np.abs(np.asarray(z)) ** 2))


def morse_flow(z0: Sequence[complex], a: Sequence[float], t: float) -> np.ndarray:
    """Gradient flow of ``f̃`` on the unit sphere at time ``t``."""
    v = _unit(z0)
    arr = _check_a(a)
    if arr.size != v.size:
        raise ValidationError("a and z0 must have the same length")
    support = v != 0
    if not support.any():
        raise ValidationError("z0 must be nonzero")
    # factor out the dominant exponent to avoid overflow
    expo = 2 * arr * t
    expo = expo - expo[support].max()
    w = np.where(support, np.exp(expo) * v, 0)
    return w / np.linalg.norm(w)


class SimplexPath:
    """A map ``R -> Δ^N`` evaluated pointwise."""

    def __init__(self, func: Callable[[float], np.ndarray], dimension: int):
        self._func = func
        self.dimension = dimension

    def __call__(self, s: float) -> np.ndarray:
        return self._func(float(s))

    def sample(self, ss: Sequence[float]) -> np.ndarray:
        return np.array([self(s) for s in ss])


def simplex_residual(samples: np.ndarray) -> float:
    """Largest violation of ``t_i >= 0`` and ``Σ t_i = 1`` over sampled rows."""
    samples = np.atleast_2d(samples)
    neg = float(np.max(np.maximum(-samples, 0.0), initial=0.0))
    return max(neg, float(np.max(np.abs(samples.sum(axis=1) - 1.0))))


def rho_moment(z0: Sequence[complex], a: Sequence[float]) -> SimplexPath:
    """``s ↦ (|z_j(-s)|²)``, the moment image of the trajectory through ``z0``.

    The time is reversed so that ``s -> -∞`` sits at the upper critical orbit,
    matching the orientation of :func:`rho_explicit`.
    """
    v = _unit(z0)
    arr = _check_a(a)

    def f(s: float) -> np.ndarray:
        t = np.abs(morse_flow(v, arr, -s)) ** 2
        return t / t.sum()

    return SimplexPath(f, v.size - 1)


def _sigma(s: float) -> float:
    return math.exp(-1.0 / s) if s > 0 else 0.0


def beta(s: float) -> float:
    """Smooth step: 0 for ``s <= 0``, 1 for ``s >= 1``, strictly increasing between."""
    if s <= 0:
        return 0.0
    if s >= 1:
        return 1.0
    a, b = _sigma(s), _sigma(1.0 - s)
    return a / (a + b)


@dataclass(frozen=True)
class GluingParams:
    """Angles ``τ_0 .. τ_(N-1)`` and lengths ``L_1 .. L_(N-1)`` (``lengths[i-1] = L_i``)."""

    angles: tuple[float, ...]
    lengths: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(L < 0 for L in self.lengths):
            raise ValidationError("gluing lengths must be nonnegative")
        if len(self.lengths) != max(len(self.angles) - 1, 0):
            raise ValidationError("need N angles and N-1 lengths")


def rho_explicit(
    N: int, params: GluingParams, step: Callable[[float], float] = beta, k: int | None = None, j: int = 0
) -> SimplexPath:
    """Piecewise formula on ``Δ^N`` supported on vertices ``j..k`` (default ``k = N``).

    ``t_k = 1 - β(s)``, ``t_i = β(s - L_(k-1) - .. - L_(i+1)) - β(s - L_(k-1) - .. - L_i)``
    for ``j < i < k``, and ``t_j = β(s - L_(k-1) - .. - L_(j+1))``.
    """
    if k is None:
        k = N
    if not (N >= k > j >= 0):
        raise ValidationError("need N >= k > j >= 0")
    L = {i + 1: params.lengths[i] for i in range(len(params.lengths))}
    missing = [i for i in range(j + 1, k) if i not in L]
    if missing:
        raise ValidationError(f"missing gluing lengths L_{missing}")

    def f(s: float) -> np.ndarray:
        t = np.zeros(N + 1)
        offs = [0.0]  # offs[m] = L_(k-1) + ... + L_(k-m)
        for i in range(k - 1, j, -1):
            offs.append(offs[-1] + L[i])
        t[k] = 1.0 - step(s)
        for m, i in enumerate(range(k - 1, j, -1)):
            t[i] = step(s - offs[m]) - step(s - offs[m + 1])
        t[j] = step(s - offs[-1])
        return t

    return SimplexPath(f, N)


@dataclass
class GluingReport:
    distances: list[float]
    tolerance: float

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.distances, self.distances[1:]))

    @property
    def ok(self) -> bool:
        if not self.distances:
            return True
        return self.decreasing and self.distances[-1] < self.tolerance


def check_gluing(
    N: int,
    a: Sequence[float] | None = None,
    exponents: Sequence[int] = (2, 3, 4, 5, 6),
    window: float = 5.0,
    tolerance: float = 1e-3,
    middle: int = 1,
    samples: int = 401,
    seed: int = 0,
) -> GluingReport:
    """Shifted moment paths of trajectories through points ``ε``-close to ``S¹·Z_m``.

    The initial points ``(ε c, b, ε c')`` (supported on ``m-1, m, m+1``) flow
    to the broken pair ``M(m+1, m) × M(m, m-1)``.  For each ``ε = 10^(-k)``
    the report records the sup-distance on ``[-window, window]`` between the
    shifted path and the moment paths of the two limit trajectories.
    """
    if N < 1:
        raise ValidationError("N must be >= 1")
    if N == 1:
        return GluingReport([], tolerance)
    arr = _check_a(a if a is not None else list(range(1, N + 2)))
    if arr.size != N + 1:
        raise ValidationError("a must have N + 1 entries")
    if not (1 <= middle <= N - 1):
        raise ValidationError("middle index must satisfy 1 <= m <= N-1")
    rng = np.random.default_rng(seed)
    phases = np.exp(2j * np.pi * rng.random(3))
    m = middle
    lo_lim = np.zeros(N + 1, dtype=complex)
    hi_lim = np.zeros(N + 1, dtype=complex)
    lo_lim[m - 1], lo_lim[m] = phases[0], phases[1]
    hi_lim[m], hi_lim[m + 1] = phases[1], phases[2]
    rho_lo = rho_moment(lo_lim / np.linalg.norm(lo_lim), arr)
    rho_hi = rho_moment(hi_lim / np.linalg.norm(hi_lim), arr)
    grid = np.linspace(-window, window, samples)
    ref_lo = rho_lo.sample(grid)
    ref_hi = rho_hi.sample(grid)
    dists = []
    for k in exponents:
        eps = 10.0 ** (-k)
        z = np.zeros(N + 1, dtype=complex)
        z[m - 1], z[m], z[m + 1] = eps * phases[0], phases[1], eps * phases[2]
        z /= np.linalg.norm(z)
        rho = rho_moment(z, arr)
        # ascending time T with ε·exp(2(a_(m+1) - a_m)T) = 1 reaches the upper piece
        t_hi = math.log(1 / eps) / (2 * (arr[m + 1] - arr[m]))
        t_lo = math.log(1 / eps) / (2 * (arr[m] - arr[m - 1]))
        d_hi = np.max(np.abs(rho.sample(grid - t_hi) - ref_hi))
        d_lo = np.max(np.abs(rho.sample(grid + t_lo) - ref_lo))
        dists.append(float(max(d_hi, d_lo)))
    return GluingReport(dists, tolerance)


def check_explicit_gluing(
    N: int, lengths: Sequence[float], window: float = 5.0, samples: int = 401, step=beta
) -> list[float]:
    """Distances between ``ρ_(N,0)`` with ``L_1 = L`` and the concatenated pieces.

    Only ``N = 2`` is broken here: ``ρ_(2,0)(s) ≈ ρ_(2,1)(s)`` near ``0`` and
    ``ρ_(2,0)(s + L) ≈ ρ_(1,0)(s)``.  Returns one distance per ``L``.
    """
    if N != 2:
        raise ValidationError("explicit gluing check is implemented for N = 2")
    grid = np.linspace(-window, window, samples)
    upper = rho_explicit(2, GluingParams((0.0, 0.0), (0.0,)), step, k=2, j=1).sample(grid)
    lower = rho_explicit(2, GluingParams((0.0, 0.0), (0.0,)), step, k=1, j=0).sample(grid)
    out = []
    for L in lengths:
        full = rho_explicit(2, GluingParams((0.0, 0.0), (float(L),)), step)
        d1 = np.max(np.abs(full.sample(grid) - upper))
        d2 = np.max(np.abs(full.sample(grid + L) - lower))
        out.append(float(max(d1, d2)))
    return out


# ---------------------------------------------------------------------------
# S¹-invariant extension of a time-dependent function

HamiltonianFn = Callable[[float, np.ndarray], float]


def _theta_derivative(H: HamiltonianFn, theta: float, x: np.ndarray, h: float = 1e-6) -> float:
    return (H(theta + h, x) - H(theta - h, x)) / (2 * h)


def H_N0(H: HamiltonianFn, theta: float, x: Sequence[float], z: Sequence[complex]) -> float:
    """``Σ_j |z_j|² H(θ - arg z_j, x)``."""
    xv = np.asarray(x, dtype=float)
    total = 0.0
    for w in np.asarray(z, dtype=complex):
        if w != 0:
            total += abs(w) ** 2 * H(theta - _arg(complex(w)), xv)
    return total


def grad_HN0(
    H: HamiltonianFn,
    theta: float,
    x: Sequence[float],
    z: Sequence[complex],
    dH: HamiltonianFn | None = None,
) -> np.ndarray:
    """Tangential gradient in ``z``: ``2(H_j - H_(N,0)) z_j - (1/2π) Ḣ_j i z_j``."""
    v = _unit(z)
    if np.any(np.abs(v) < 1e-8):
        raise ValidationError("gradient formula requires all components of z to be nonzero")
    xv = np.asarray(x, dtype=float)
    total = H_N0(H, theta, xv, v)
    out = np.zeros_like(v)
    for j, w in enumerate(v):
        th = theta - _arg(complex(w))
        hj = H(th, xv)
        dj = dH(th, xv) if dH is not None else _theta_derivative(H, th, xv)
        out[j] = 2 * (hj - total) * w - dj * 1j * w / (2 * math.pi)
    return out


@dataclass
class GradientReport:
    max_error: float
    formula: np.ndarray
    numeric: np.ndarray
    tolerance: float = 1e-6

    @property
    def ok(self) -> bool:
        return self.max_error < self.tolerance


def grad_HN0_check(
    H: HamiltonianFn,
    z: Sequence[complex],
    theta: float,
    x: Sequence[float],
    step: float = 1e-5,
    dH: HamiltonianFn | None = None,
    tolerance: float = 1e-6,
) -> GradientReport:
    """Compare :func:`grad_HN0` with central differences of ``w ↦ H_(N,0)(w/|w|)``.

    The radial extension has zero radial derivative on the sphere, so its
    Euclidean gradient at a unit vector is the tangential gradient.
    """
    v = _unit(z)
    formula = grad_HN0(H, theta, x, v, dH)
    n = v.size
    numeric = np.zeros(n, dtype=complex)

    def F(w: np.ndarray) -> float:
        return H_N0(H, theta, x, w / np.linalg.norm(w))

    for j in range(n):
        for unit in (1.0, 1j):
            e = np.zeros(n, dtype=complex)
            e[j] = unit * step
            d = (F(v + e) - F(v - e)) / (2 * step)
            numeric[j] += d * unit
    err = float(np.max(np.abs(formula - numeric)))
    return GradientReport(err, formula, numeric, tolerance)


# ---------------------------------------------------------------------------
# Broken-trajectory strata of the compactified moduli spaces


@dataclass(frozen=True)
class Stratum:
    chain: tuple[int, ...]  # k = c_0 > c_1 > ... > c_l = j
    piece_dimensions: tuple[int, ...]

    @property
    def breaks(self) -> int:
        return len(self.chain) - 2

    @property
    def dimension(self) -> int:
        return sum(self.piece_dimensions)


@dataclass
class StrataReport:
    k: int
    j: int
    interior_dimension: int
    strata: list[Stratum]

    @property
    def ok(self) -> bool:
        """Each stratum has codimension equal to its number of breaks."""
        return all(self.interior_dimension - s.dimension == s.breaks for s in self.strata)

    def codimension(self, c: int) -> list[Stratum]:
        return [s for s in self.strata if s.breaks == c]


def moduli_dimension(a: int, b: int) -> int:
    return 2 * (a - b) - 1


def strata(k: int, j: int, N: int | None = None) -> StrataReport:
    """All chains ``k > ... > j`` with piece dimensions ``2(a - b) - 1``; the unbroken one first."""
    if k <= j or j < 0:
        raise ValidationError("need k > j >= 0")
    if N is not None and k > N:
        raise ValidationError("need N >= k")
    between = list(range(k - 1, j, -1))
    out = []
    for r in range(len(between) + 1):
        for mids in itertools.combinations(between, r):
            chain = (k, *mids, j)
            dims = tuple(moduli_dimension(a, b) for a, b in zip(chain, chain[1:]))
            out.append(Stratum(chain, dims))
    return StrataReport(k, j, moduli_dimension(k, j), out)
