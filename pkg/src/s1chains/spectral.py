"""Spectral sequence of a filtered complex over a field.

For a complex with an increasing filtration given by a level per generator,
the pages are computed from approximate cycles

    Z^r_p = {x ∈ F_p : ∂x ∈ F_(p-r)}
    E^r_p = Z^r_p / (Z^(r-1)_(p-1) + ∂ Z^(r-1)_(p+r-1))

with ``d^r`` induced by ``∂`` and bidegree ``(p, q)``, ``q = n - p``.

The u-filtration of an equivariant complex puts ``u^l ⊗ x`` at level ``2l``,
so the second page reads ``E²_{p,q} = H_q(C)`` for even ``p`` and vanishes
for odd ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .chain_complex import ChainComplex, homology
from .errors import UnsupportedRingError, ValidationError
from .exact_linear import Matrix, column_pivots, hstack, kernel_basis, left_inverse, rank
from .s1_complex import S1Complex, equivariant, equivariant_homology

__all__ = [
    "FilteredComplex",
    "SpectralPage",
    "compute_pages",
    "infinity_page",
    "u_filtration",
    "E2Report",
    "check_E2_gysin",
    "ConvergenceReport",
    "check_convergence",
    "check_page_consistency",
]


class FilteredComplex:
    """A chain complex over a field with a nonnegative filtration level per generator."""

    def __init__(self, complex: ChainComplex, levels: Sequence[int] | Mapping[str, int]):
        if not complex.ring.is_field:
            raise UnsupportedRingError("spectral sequences are computed over fields only")
        names = complex.module.names()
        if isinstance(levels, Mapping):
            try:
                lv = [int(levels[n]) for n in names]
            except KeyError as e:
                raise ValidationError(f"missing filtration level for {e.args[0]}") from None
        else:
            lv = [int(x) for x in levels]
        if len(lv) != len(names):
            raise ValidationError("one filtration level per generator is required")
        if any(x < 0 for x in lv):
            raise ValidationError("filtration levels must be nonnegative")
        for i, j, _ in complex.differential.entries():
            if lv[i] > lv[j]:
                raise ValidationError(
                    f"differential raises filtration: {names[j]} (level {lv[j]}) -> {names[i]} (level {lv[i]})"
                )
        self.complex = complex
        self.levels = tuple(lv)
        self.ring = complex.ring

    @property
    def min_level(self) -> int:
        return min(self.levels, default=0)

    @property
    def max_level(self) -> int:
        return max(self.levels, default=0)

    def local_levels(self, n: int) -> list[int]:
        lo, hi = self.complex.module.span(n)
        return list(self.levels[lo:hi])


@dataclass
class SpectralPage:
    """Dimensions of ``E^r_{p,q}`` and the matrices of ``d^r: E^r_{p,q} -> E^r_{p-r,q+r-1}``."""

    r: int
    dims: dict[tuple[int, int], int]
    differentials: dict[tuple[int, int], Matrix] = field(default_factory=dict)

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}

    def total(self, n: int) -> int:
        return sum(d for (p, q), d in self.dims.items() if p + q == n)


@dataclass
class _Subquotient:
    reps: list[list[Any]]
    projector: Matrix | None

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, v: Sequence[Any]) -> list[Any]:
        if self.projector is None:
            return []
        return self.projector.apply(list(v))


class _Engine:
    def __init__(self, F: FilteredComplex):
        self.F = F
        self.C = F.complex
        self.ring = F.ring
        self._Z: dict[tuple[int, int, int], list[list[Any]]] = {}
        self._E: dict[tuple[int, int, int], _Subquotient] = {}

    def _levels(self, n: int) -> list[int]:
        return self.F.local_levels(n)

    def Z(self, r: int, p: int, n: int) -> list[list[Any]]:
        """Basis of ``Z^r_p`` in degree ``n`` as dense vectors on ``C_n``."""
        src = self._levels(n)
        if not src:
            return []
        tgt = self._levels(n - 1)
        t = p - r
        p = min(p, max(src))
        if tgt:
            t = max(t, min(tgt) - 1)
        t = min(t, p)
        key = (p, n, t)
        cached = self._Z.get(key)
        if cached is not None:
            return cached
        cols = [j for j, lv in enumerate(src) if lv <= p]
        rows = [i for i, lv in enumerate(tgt) if lv > t]
        dim = len(src)
        if not cols:
            out: list[list[Any]] = []
        elif not rows:
            out = [[int(j == c) for j in range(dim)] for c in cols]
        else:
            sub = self.C.boundary(n).submatrix(rows, cols)
            out = []
            for v in kernel_basis(sub).vectors:
                full: list[Any] = [0] * dim
                for c, x in zip(cols, v):
                    full[c] = x
                out.append(full)
        self._Z[key] = out
        return out

    def E(self, r: int, p: int, n: int) -> _Subquotient:
        key = (r, p, n)
        cached = self._E.get(key)
        if cached is not None:
            return cached
        num = self.Z(r, p, n)
        dim = self.C.dim(n)
        if not num:
            sq = _Subquotient([], None)
            self._E[key] = sq
            return sq
        den = list(self.Z(r - 1, p - 1, n))
        upper = self.Z(r - 1, p + r - 1, n + 1)
        if upper:
            D = self.C.boundary(n + 1)
            den.extend(D.apply(v) for v in upper)
        ring = self.ring
        M = Matrix.from_columns(ring, den + num, dim)
        piv = column_pivots(M)
        a = len(den)
        dpiv = [den[j] for j in piv if j < a]
        reps = [num[j - a] for j in piv if j >= a]
        if not reps:
            sq = _Subquotient([], None)
        else:
            Q = Matrix.from_columns(ring, dpiv + reps, dim)
            L = left_inverse(Q)
            sq = _Subquotient(reps, L.block(len(dpiv), len(dpiv) + len(reps), 0, dim))
        self._E[key] = sq
        return sq

    def differential(self, r: int, p: int, n: int) -> Matrix:
        sdim = self.E(r, p, n).dim if p in self._levels(n) else 0
        tdim = self.E(r, p - r, n - 1).dim if p - r in self._levels(n - 1) else 0
        if not sdim or not tdim:
            return Matrix.zeros(self.ring, tdim, sdim)
        src = self.E(r, p, n)
        tgt = self.E(r, p - r, n - 1)
        D = self.C.boundary(n)
        cols = [tgt.coordinates(D.apply(x)) for x in src.reps]
        return Matrix.from_columns(self.ring, cols, tgt.dim)


def _window(F: FilteredComplex, window: tuple[int, int] | None) -> tuple[int, int]:
    if window is not None:
        return window
    sup = F.complex.support()
    if sup is None:
        return (0, -1)
    return sup


def _page(eng: _Engine, r: int, lo: int, hi: int, with_differentials: bool) -> SpectralPage:
    F = eng.F
    dims: dict[tuple[int, int], int] = {}
    diffs: dict[tuple[int, int], Matrix] = {}
    for n in range(lo, hi + 1):
        present = set(F.local_levels(n))
        for p in range(F.min_level, F.max_level + 1):
            q = n - p
            # without generators at level p in degree n, F_p = F_(p-1) and E^r_p = 0
            dims[(p, q)] = eng.E(r, p, n).dim if p in present else 0
            if with_differentials:
                diffs[(p, q)] = eng.differential(r, p, n)
    return SpectralPage(r, dims, diffs)


def compute_pages(
    F: FilteredComplex,
    r_max: int,
    window: tuple[int, int] | None = None,
    *,
    with_differentials: bool = True,
) -> list[SpectralPage]:
    """Pages ``E^1 ... E^(r_max)`` for total degrees in ``window`` (inclusive)."""
    if r_max < 1:
        raise ValidationError("r_max must be >= 1")
    lo, hi = _window(F, window)
    eng = _Engine(F)
    return [_page(eng, r, lo, hi, with_differentials) for r in range(1, r_max + 1)]


def stable_index(F: FilteredComplex) -> int:
    """A page index from which the spectral sequence is constant."""
    return F.max_level - F.min_level + 2


def infinity_page(F: FilteredComplex, window: tuple[int, int] | None = None) -> SpectralPage:
    lo, hi = _window(F, window)
    eng = _Engine(F)
    return _page(eng, stable_index(F), lo, hi, False)


def check_page_consistency(pages: Sequence[SpectralPage]) -> bool:
    """``(d^r)² = 0`` and ``dim E^(r+1) = dim ker d^r - dim im d^r`` on every cell.

    A cell is only checked when all cells it touches lie in the computed window.
    """
    for page, nxt in zip(pages, list(pages[1:]) + [None]):
        r = page.r
        for (p, q), d in page.differentials.items():
            tgt = (p - r, q + r - 1)
            d2 = page.differentials.get(tgt)
            if d2 is not None and d.ncols and d2.nrows and d.nrows:
                if not (d2 @ d).is_zero():
                    return False
            if nxt is None:
                continue
            src = (p + r, q - r + 1)
            if src not in page.differentials or (p, q) not in nxt.dims:
                continue
            incoming = page.differentials[src]
            k = page.dims[(p, q)] - (rank(d) if d.nrows and d.ncols else 0)
            im = rank(incoming) if incoming.nrows and incoming.ncols else 0
            if nxt.dims[(p, q)] != k - im:
                return False
    return True


def u_filtration(C: S1Complex, max_degree: int) -> FilteredComplex:
    """Filtration of the equivariant complex by powers of ``u`` (``u^l ⊗ x`` at level ``2l``)."""
    if not C.ring.is_field:
        raise UnsupportedRingError("spectral sequences are computed over fields only")
    E = equivariant(C, max_degree)
    levels = []
    for name, _ in E.complex.module.generators:
        l = int(name[2 : name.index("*")])
        levels.append(2 * l)
    return FilteredComplex(E.complex, levels)


def _field_window(C: S1Complex, max_degree: int) -> tuple[int, int]:
    if not C.ring.is_field:
        raise UnsupportedRingError("spectral sequences are computed over fields only")
    lo = C.module.min_degree
    return (lo if lo is not None else 0, max_degree)


@dataclass
class E2Report:
    ok: bool
    table: dict[tuple[int, int], tuple[int, int]]  # (p, q) -> (E² dimension, expected)

    def mismatches(self) -> dict[tuple[int, int], tuple[int, int]]:
        return {k: v for k, v in self.table.items() if v[0] != v[1]}


def check_E2_gysin(C: S1Complex, max_degree: int) -> E2Report:
    """Compare ``E²_{p,q}`` with ``[p even]·dim H_q(C)`` for total degrees up to ``max_degree``."""
    lo, hi = _field_window(C, max_degree)
    F = u_filtration(C, max_degree)
    page = compute_pages(F, 2, (lo, hi), with_differentials=False)[-1]
    base = homology(C.base)
    table = {}
    for (p, q), d in sorted(page.dims.items()):
        h = base[q].dim if q in base else 0
        expected = h if p % 2 == 0 else 0
        table[(p, q)] = (d, expected)
    return E2Report(all(a == b for a, b in table.values()), table)


@dataclass
class ConvergenceReport:
    ok: bool
    totals: dict[int, tuple[int, int]]  # n -> (Σ_p dim E^∞_{p,n-p}, dim H^S1_n)


def check_convergence(C: S1Complex, max_degree: int) -> ConvergenceReport:
    lo, hi = _field_window(C, max_degree)
    F = u_filtration(C, max_degree)
    inf = infinity_page(F, (lo, hi))
    H = equivariant_homology(C, max_degree)
    totals = {}
    for n in range(lo, hi + 1):
        totals[n] = (inf.total(n), H[n].dim if n in H else 0)
    return ConvergenceReport(all(a == b for a, b in totals.values()), totals)
