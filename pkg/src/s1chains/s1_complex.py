"""Multicomplexes, their equivariant complexes, Gysin maps, S¹-maps and the grid check.

An :class:`S1Complex` is a graded module with operations ``φ_0 = ∂, φ_1,
φ_2, ...`` where ``φ_i`` raises degree by ``2i - 1`` and
``Σ_{i+j=k} φ_i φ_j = 0`` for every ``k``.  Its equivariant complex has
generators ``u^l ⊗ x`` (named ``"u^l*x"``) in degree ``|x| + 2l`` and
differential ``u^l ⊗ x ↦ Σ_j u^(l-j) ⊗ φ_j(x)``.

Every total degree of the equivariant complex is finite, so it is built up to
a top degree ``T``.  Generators of degree ``<= T`` span a subcomplex whose
homology is correct in degrees ``<= T - 1``; functions taking ``max_degree``
use ``T = max_degree + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .chain_complex import (
    ChainComplex,
    ChainMap,
    GradedModule,
    HomologyGroup,
    HomologyMap,
    HomologyResult,
    LongExactSequence,
    ShortExactSequence,
    connecting_map,
    homology,
    homology_group,
    induced_map,
    les_from_ses,
    shift,
)
from .errors import ChainMapError, RelationError, ValidationError
from .exact_linear import Matrix, Ring, inverse

__all__ = [
    "S1Complex",
    "RelationReport",
    "verify_relations",
    "EquivariantComplex",
    "equivariant",
    "equivariant_homology",
    "gysin_maps",
    "GysinReport",
    "gysin_les",
    "S1ChainMap",
    "S1Homotopy",
    "tilde_map",
    "S1Subcomplex",
    "GridSquare",
    "GridReport",
    "QuotientResult",
    "quotient",
    "mixed_complex_check",
    "s1_direct_sum",
    "conjugate",
    "eq_name",
]


def eq_name(level: int, name: str) -> str:
    """Name of the generator ``u^level ⊗ name`` of an equivariant complex."""
    return f"u^{level}*{name}"


# ---------------------------------------------------------------------------
# S¹-complexes


class S1Complex:
    """A multicomplex: ``phis[0]`` is the differential, ``phis[i]`` has degree ``2i-1``."""

    def __init__(self, module: GradedModule, phis: Sequence[Matrix], *, check: bool = True):
        n = len(module)
        if not phis:
            phis = [Matrix.zeros(module.ring, n, n)]
        cleaned = []
        for i, P in enumerate(phis):
            if P.shape != (n, n):
                raise ValidationError(f"phi_{i} must be {n}x{n}")
            if P.ring != module.ring:
                P = P.change_ring(module.ring)
            gens = module.generators
            for r, c, _ in P.entries():
                if gens[r][1] != gens[c][1] + 2 * i - 1:
                    raise ValidationError(
                        f"phi_{i}: entry {gens[c][0]} -> {gens[r][0]} does not have degree {2 * i - 1}"
                    )
            cleaned.append(P)
        while len(cleaned) > 1 and cleaned[-1].is_zero():
            cleaned.pop()
        self.module = module
        self.ring = module.ring
        self.phis: tuple[Matrix, ...] = tuple(cleaned)
        self.base = ChainComplex(module, cleaned[0], check=False)
        self._valid: bool | None = None
        self._equivariant: dict[int, EquivariantComplex] = {}
        if check:
            self.require_valid()

    @classmethod
    def from_entries(
        cls,
        ring: Ring,
        generators: Iterable[tuple[str, int]],
        differential: Iterable[tuple[str, str, Any]] = (),
        phi: Mapping[int, Iterable[tuple[str, str, Any]]] | None = None,
        *,
        check: bool = True,
    ) -> "S1Complex":
        """Entries are ``(source, target, coefficient)``; ``phi`` maps level ``i >= 1`` to entries."""
        module = GradedModule(ring, generators)
        n = len(module)

        def build(entries: Iterable[tuple[str, str, Any]]) -> Matrix:
            trip = []
            for s, t, c in entries:
                if s not in module.index or t not in module.index:
                    raise ValidationError(f"unknown generator in entry {s} -> {t}")
                trip.append((module.index[t], module.index[s], c))
            return Matrix.from_entries(ring, n, n, trip)

        levels = dict(phi or {})
        if any(i < 1 for i in levels):
            raise ValidationError("phi levels must be >= 1")
        top = max(levels, default=0)
        phis = [build(differential)] + [build(levels.get(i, ())) for i in range(1, top + 1)]
        return cls(module, phis, check=check)

    def __repr__(self) -> str:
        return f"S1Complex({self.ring}, {len(self.module)} generators, max index {self.max_index})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, S1Complex) and self.module == other.module and self.phis == other.phis

    __hash__ = None  # type: ignore[assignment]

    @property
    def max_index(self) -> int:
        return len(self.phis) - 1

    @property
    def generators(self) -> tuple[tuple[str, int], ...]:
        return self.module.generators

    def phi(self, i: int) -> Matrix:
        if 0 <= i < len(self.phis):
            return self.phis[i]
        n = len(self.module)
        return Matrix.zeros(self.ring, n, n)

    def require_valid(self) -> None:
        if self._valid is None:
            rep = verify_relations(self)
            self._valid = rep.ok
            self._failure = rep.first_failure
        if not self._valid:
            k = self._failure
            raise RelationError(f"multicomplex relation fails for k = {k}", k)

    def change_ring(self, ring: Ring) -> "S1Complex":
        return S1Complex(self.module.with_ring(ring), [P.change_ring(ring) for P in self.phis], check=False)

    def shift(self, s: int) -> "S1Complex":
        """Raise every generator degree by ``s`` (the operations are unchanged)."""
        module = GradedModule(self.ring, [(n, d + s) for n, d in self.module.generators])
        return S1Complex(module, self.phis, check=False)

    def renamed(self, prefix: str) -> "S1Complex":
        module = GradedModule(self.ring, [(prefix + n, d) for n, d in self.module.generators])
        return S1Complex(module, self.phis, check=False)

    def restrict(self, names: Iterable[str]) -> "S1Complex":
        idx = sorted(self.module.index[n] for n in names)
        module = GradedModule(self.ring, [self.module.generators[i] for i in idx])
        return S1Complex(module, [P.submatrix(idx, idx) for P in self.phis], check=False)

    def equivariant(self, max_degree: int) -> "EquivariantComplex":
        return equivariant(self, max_degree)


def s1_direct_sum(parts: Sequence[S1Complex], prefixes: Sequence[str] | None = None) -> S1Complex:
    if not parts:
        raise ValidationError("direct sum of nothing")
    ring = parts[0].ring
    if prefixes is None:
        prefixes = [f"{i}." for i in range(len(parts))]
    gens: list[tuple[str, int]] = []
    top = max(p.max_index for p in parts)
    levels: dict[int, list[tuple[str, str, Any]]] = {i: [] for i in range(top + 1)}
    for P, pre in zip(parts, prefixes):
        names = P.module.names()
        gens.extend((pre + n, d) for n, d in P.module.generators)
        for i, M in enumerate(P.phis):
            for r, c, v in M.entries():
                levels[i].append((pre + names[c], pre + names[r], v))
    return S1Complex.from_entries(
        ring, gens, levels[0], {i: levels[i] for i in range(1, top + 1)}, check=False
    )


def conjugate(C: S1Complex, P: Matrix, P_inv: Matrix | None = None) -> S1Complex:
    """``φ_i ↦ P φ_i P⁻¹`` for a degree-preserving invertible ``P``."""
    if P_inv is None:
        P_inv = inverse(P)
    return S1Complex(C.module, [P @ M @ P_inv for M in C.phis], check=False)


@dataclass
class RelationReport:
    """Per ``k``: the matrix ``Σ_{i+j=k} φ_i φ_j`` and whether it vanishes."""

    matrices: dict[int, Matrix]

    @property
    def results(self) -> dict[int, bool]:
        return {k: M.is_zero() for k, M in sorted(self.matrices.items())}

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    @property
    def first_failure(self) -> int | None:
        for k, good in self.results.items():
            if not good:
                return k
        return None


def verify_relations(C: S1Complex) -> RelationReport:
    m = C.max_index
    mats = {}
    for k in range(0, 2 * m + 1):
        acc = None
        for i in range(0, k + 1):
            j = k - i
            if i > m or j > m:
                continue
            term = C.phis[i] @ C.phis[j]
            acc = term if acc is None else acc + term
        n = len(C.module)
        mats[k] = acc if acc is not None else Matrix.zeros(C.ring, n, n)
    return RelationReport(mats)


def mixed_complex_check(C: S1Complex) -> bool:
    """True iff only ``b = φ_0`` and ``B = φ_1`` are nonzero and ``b², B², bB + Bb`` vanish."""
    if C.max_index >= 2:
        return False
    b = C.phi(0)
    B = C.phi(1)
    return (b @ b).is_zero() and (B @ B).is_zero() and (b @ B + B @ b).is_zero()


# ---------------------------------------------------------------------------
# Equivariant complex


@dataclass
class EquivariantComplex:
    """The equivariant complex of ``base`` spanned by generators of degree ``<= top``."""

    base: S1Complex
    top: int
    complex: ChainComplex

    @property
    def max_degree(self) -> int:
        """Largest degree in which homology is reliable."""
        return self.top - 1

    def homology(self, max_degree: int | None = None) -> HomologyResult:
        hi = self.max_degree if max_degree is None else min(max_degree, self.max_degree)
        lo = self.base.module.min_degree
        if lo is None:
            return HomologyResult()
        return homology(self.complex, range(lo, hi + 1))


def _equivariant_complex(C: S1Complex, top: int) -> EquivariantComplex:
    cached = C._equivariant.get(top)
    if cached is not None:
        return cached
    C.require_valid()
    gens = []
    base_gens = C.module.generators
    for name, d in base_gens:
        level = 0
        while d + 2 * level <= top:
            gens.append((eq_name(level, name), d + 2 * level))
            level += 1
    module = GradedModule(C.ring, gens)
    index = module.index
    trip = []
    names = [n for n, _ in base_gens]
    columns = [P.T for P in C.phis]
    for name, d in base_gens:
        x = C.module.index[name]
        level = 0
        while d + 2 * level <= top:
            src = index[eq_name(level, name)]
            for j in range(0, min(level, C.max_index) + 1):
                for y, c in columns[j].row(x).items():
                    trip.append((index[eq_name(level - j, names[y])], src, c))
            level += 1
    D = Matrix.from_entries(C.ring, len(module), len(module), trip)
    E = EquivariantComplex(C, top, ChainComplex(module, D, check=False))
    C._equivariant[top] = E
    return E


def equivariant(C: S1Complex, max_degree: int) -> EquivariantComplex:
    """Equivariant complex with reliable homology up to ``max_degree``."""
    return _equivariant_complex(C, max_degree + 1)


def equivariant_homology(C: S1Complex, max_degree: int) -> HomologyResult:
    return equivariant(C, max_degree).homology(max_degree)


# ---------------------------------------------------------------------------
# Gysin sequence


@dataclass
class GysinData:
    """The Gysin short exact sequence ``0 -> C -> C̃ -> C̃[-2] -> 0`` and the maps I, S, B."""

    base: ChainComplex  # C truncated at top
    tilde: EquivariantComplex
    shifted: ChainComplex  # C̃[-2], generators named like those of C̃
    I: ChainMap
    S: ChainMap
    B: ChainMap
    P: ChainMap  # C̃ -> C̃[-2], u^l x ↦ u^(l-1) x

    @property
    def ses(self) -> ShortExactSequence:
        return ShortExactSequence(self.I, self.P, check=False)


def _gysin_data(C: S1Complex, max_degree: int) -> GysinData:
    T = max_degree + 1
    Ct = _equivariant_complex(C, T)
    X = C.base.truncate(T)
    Y = Ct.complex
    Z = shift(Y.truncate(T - 2), -2)
    I = ChainMap.from_entries(X, Y, 0, [(n, eq_name(0, n), 1) for n in X.module.names()])
    s_entries = []
    p_entries = []
    b_entries = []
    cols = [P.T for P in C.phis]
    base_names = C.module.names()
    for name, d in C.module.generators:
        x = C.module.index[name]
        level = 0
        while d + 2 * level <= T:
            src = eq_name(level, name)
            if level >= 1:
                s_entries.append((src, eq_name(level - 1, name), 1))
                p_entries.append((src, eq_name(level - 1, name), 1))
            if d + 2 * level <= T - 2 and level + 1 <= C.max_index:
                for y, c in cols[level + 1].row(x).items():
                    b_entries.append((src, base_names[y], c))
            level += 1
    S = ChainMap.from_entries(Y, Y, -2, s_entries)
    P = ChainMap.from_entries(Y, Z, 0, p_entries)
    B = ChainMap.from_entries(Z, X, -1, b_entries)
    return GysinData(X, Ct, Z, I, S, B, P)  # type: ignore[arg-type]


def gysin_maps(C: S1Complex, max_degree: int) -> tuple[ChainMap, ChainMap, ChainMap]:
    """``I: C -> C̃``, ``S: C̃ -> C̃`` (degree -2) and ``B: C̃[-2] -> C`` (degree -1).

    ``I(x) = u^0 x``, ``S(u^l x) = u^(l-1) x`` and ``B(u^l x) = φ_(l+1)(x)``.
    Each is verified to be a chain map (a :class:`ChainMapError` signals a
    broken relation).
    """
    g = _gysin_data(C, max_degree)
    return g.I, g.S, g.B


@dataclass
class GysinReport:
    les: LongExactSequence
    b_matches_connecting: dict[int, bool]
    max_degree: int

    @property
    def exact(self) -> bool:
        return self.les.exact

    @property
    def ok(self) -> bool:
        return self.exact and all(self.b_matches_connecting.values())

    def rows(self) -> list[tuple[str, str, str]]:
        return [(n.label, n.group.describe(), n.status) for n in self.les.nodes]


def gysin_les(C: S1Complex, max_degree: int) -> GysinReport:
    """Long exact sequence ``H(C) -I-> H^S1 -S-> H^S1[-2] -B-> H(C)[-1]`` with verdicts.

    The third term is the homology of ``C̃[-2]``, i.e. ``H^S1_(k-2)`` in slot
    ``k``.  The connecting maps are computed by the zig-zag and compared
    with the maps induced by ``B``.
    """
    g = _gysin_data(C, max_degree)
    lo = C.module.min_degree
    if lo is None:
        return GysinReport(LongExactSequence([], {}, {}, {}, {}, {}, {}, []), {}, max_degree)
    lo = min(lo, max_degree)
    les = les_from_ses(g.ses, range(lo, max_degree + 1), labels=("C", "S1", "S1[-2]"))
    bmaps = induced_map(g.B, range(lo + 1, max_degree + 1))
    match = {k: bmaps[k] == les.delta[k] for k in les.delta}
    return GysinReport(les, match, max_degree)


# ---------------------------------------------------------------------------
# S¹-chain maps and homotopies


def _sum(terms: list[Matrix], nrows: int, ncols: int, ring: Ring) -> Matrix:
    acc = Matrix.zeros(ring, nrows, ncols)
    for t in terms:
        acc = acc + t
    return acc


class S1ChainMap:
    """``Φ = (Φ_0, Φ_1, ...)`` with ``Φ_i`` of degree ``2i`` and ``Σ (Φ_i φ_j - ψ_j Φ_i) = 0``."""

    def __init__(self, source: S1Complex, target: S1Complex, components: Sequence[Matrix], *, check: bool = True):
        ns, nt = len(source.module), len(target.module)
        comps = []
        for i, M in enumerate(components):
            if M.shape != (nt, ns):
                raise ValidationError(f"Phi_{i} must be {nt}x{ns}")
            if M.ring != source.ring:
                M = M.change_ring(source.ring)
            sg, tg = source.module.generators, target.module.generators
            for r, c, _ in M.entries():
                if tg[r][1] != sg[c][1] + 2 * i:
                    raise ValidationError(f"Phi_{i}: entry {sg[c][0]} -> {tg[r][0]} does not have degree {2 * i}")
            comps.append(M)
        if not comps:
            comps = [Matrix.zeros(source.ring, nt, ns)]
        self.source = source
        self.target = target
        self.components = tuple(comps)
        if check:
            k = self.first_failure()
            if k is not None:
                raise ChainMapError(f"S1 chain map relation fails for k = {k}")

    def component(self, i: int) -> Matrix:
        if 0 <= i < len(self.components):
            return self.components[i]
        return Matrix.zeros(self.source.ring, len(self.target.module), len(self.source.module))

    @property
    def max_index(self) -> int:
        return len(self.components) - 1

    def relation(self, k: int) -> Matrix:
        terms = []
        for i in range(k + 1):
            j = k - i
            Phi = self.component(i)
            terms.append(Phi @ self.source.phi(j))
            terms.append(-(self.target.phi(j) @ Phi))
        return _sum(terms, len(self.target.module), len(self.source.module), self.source.ring)

    def horizon(self) -> int:
        return self.max_index + max(self.source.max_index, self.target.max_index)

    def first_failure(self) -> int | None:
        for k in range(self.horizon() + 1):
            if not self.relation(k).is_zero():
                return k
        return None


class S1Homotopy:
    """``h = (h_0, h_1, ...)``, ``h_i`` of degree ``2i+1``, with ``Φ_k - Ψ_k = Σ (h_i φ_j + ψ_j h_i)``."""

    def __init__(self, Phi: S1ChainMap, Psi: S1ChainMap, components: Sequence[Matrix], *, check: bool = True):
        if Phi.source is not Psi.source or Phi.target is not Psi.target:
            raise ValidationError("homotopic maps must share source and target")
        self.Phi = Phi
        self.Psi = Psi
        self.components = tuple(components)
        if check:
            k = self.first_failure()
            if k is not None:
                raise ChainMapError(f"S1 homotopy relation fails for k = {k}")

    def component(self, i: int) -> Matrix:
        if 0 <= i < len(self.components):
            return self.components[i]
        return Matrix.zeros(self.Phi.source.ring, len(self.Phi.target.module), len(self.Phi.source.module))

    def relation(self, k: int) -> Matrix:
        src, tgt = self.Phi.source, self.Phi.target
        terms = [self.Phi.component(k), -self.Psi.component(k)]
        for i in range(k + 1):
            j = k - i
            h = self.component(i)
            terms.append(-(h @ src.phi(j)))
            terms.append(-(tgt.phi(j) @ h))
        return _sum(terms, len(tgt.module), len(src.module), src.ring)

    def first_failure(self) -> int | None:
        top = max(len(self.components) - 1 + max(self.Phi.source.max_index, self.Phi.target.max_index),
                  self.Phi.max_index, self.Psi.max_index)
        for k in range(top + 1):
            if not self.relation(k).is_zero():
                return k
        return None


def tilde_map(Phi: S1ChainMap, max_degree: int) -> ChainMap:
    """``u^l ⊗ x ↦ Σ_i u^(l-i) ⊗ Φ_i(x)`` between equivariant complexes."""
    T = max_degree + 1
    Es = _equivariant_complex(Phi.source, T)
    Et = _equivariant_complex(Phi.target, T)
    entries = []
    cols = [M.T for M in Phi.components]
    tnames = Phi.target.module.names()
    for name, d in Phi.source.module.generators:
        x = Phi.source.module.index[name]
        level = 0
        while d + 2 * level <= T:
            for i in range(0, min(level, Phi.max_index) + 1):
                for y, c in cols[i].row(x).items():
                    entries.append((eq_name(level, name), eq_name(level - i, tnames[y]), c))
            level += 1
    return ChainMap.from_entries(Es.complex, Et.complex, 0, entries)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Subcomplexes, quotients and the grid


@dataclass(frozen=True)
class S1Subcomplex:
    names: frozenset[str]

    @classmethod
    def of(cls, names: Iterable[str]) -> "S1Subcomplex":
        return cls(frozenset(names))


@dataclass
class GridSquare:
    degree: int
    row: int
    col: int
    kind: str  # "commute" or "anticommute"
    ok: bool
    nonzero: bool  # whether both composites have nonzero source and target


@dataclass
class GridReport:
    squares: list[GridSquare] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.squares)

    def failures(self) -> list[GridSquare]:
        return [s for s in self.squares if not s.ok]


@dataclass
class QuotientResult:
    sub: S1Complex
    quotient: S1Complex
    grid: GridReport


def _check_invariant(C: S1Complex, names: frozenset[str]) -> None:
    unknown = names - set(C.module.index)
    if unknown:
        raise ValidationError(f"unknown generators {sorted(unknown)}")
    inside = {C.module.index[n] for n in names}
    for i, P in enumerate(C.phis):
        for r, c, _ in P.entries():
            if c in inside and r not in inside:
                gens = C.module.generators
                raise ValidationError(
                    f"subset is not invariant: phi_{i}({gens[c][0]}) involves {gens[r][0]}"
                )


def _name_map(src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Inclusion or projection identifying generators with equal names."""
    entries = [(n, n, 1) for n in src.module.names() if n in tgt.module.index]
    return ChainMap.from_entries(src, tgt, 0, entries)  # type: ignore[return-value]


def _grid(rows: list[GysinData], lo: int, hi: int) -> GridReport:
    X = [g.base for g in rows]
    Y = [g.tilde.complex for g in rows]
    Z = [g.shifted for g in rows]
    col_ses = {}
    for key, objs in (("X", X), ("Y", Y), ("Z", Z)):
        col_ses[key] = ShortExactSequence(_name_map(objs[0], objs[1]), _name_map(objs[1], objs[2]), check=False)
    row_ses = [g.ses for g in rows]
    cache_ind: dict[tuple, HomologyMap] = {}

    def ind(f: ChainMap, k: int, key: tuple) -> HomologyMap:
        if key not in cache_ind:
            cache_ind[key] = induced_map(f, [k])[k]
        return cache_ind[key]

    def conn(s: ShortExactSequence, k: int, key: tuple) -> HomologyMap:
        if key not in cache_ind:
            cache_ind[key] = connecting_map(s, k)
        return cache_ind[key]

    def horiz(r: int, j: int, k: int) -> HomologyMap:
        s = row_ses[r]
        if j == 0:
            return ind(s.u, k, ("a", r, k))
        if j == 1:
            return ind(s.v, k, ("b", r, k))
        return conn(s, k, ("c", r, k))

    def vert(i: int, j: int, k: int) -> HomologyMap:
        # column j in {0: X, 1: Y, 2: Z, 3: X one degree lower}
        key = "XYZX"[j]
        kk = k if j < 3 else k - 1
        s = col_ses[key]
        if i == 0:
            return ind(s.u, kk, ("f", key, kk))
        if i == 1:
            return ind(s.v, kk, ("g", key, kk))
        return conn(s, kk, ("h", key, kk))

    def row_map(i: int, j: int, k: int) -> HomologyMap:
        # horizontal map j in grid row i (row 3 is row 0 one degree lower)
        if i < 3:
            return horiz(i, j, k)
        return horiz(0, j, k - 1)

    report = GridReport()
    for k in range(lo, hi + 1):
        for i in range(3):
            for j in range(3):
                top = row_map(i, j, k)
                bottom = row_map(i + 1, j, k)
                left = vert(i, j, k)
                right = vert(i, j + 1, k)
                path1 = right @ top
                path2 = bottom @ left
                anti = i == 2 and j == 2
                ok = (path1 + path2).is_zero() if anti else path1 == path2
                nonzero = bool(top.source.ngens and bottom.target.ngens)
                report.squares.append(GridSquare(k, i, j, "anticommute" if anti else "commute", ok, nonzero))
    return report


def quotient(C: S1Complex, A: S1Subcomplex | Iterable[str], max_degree: int) -> QuotientResult:
    """Sub- and quotient multicomplexes plus the grid check up to ``max_degree``."""
    names = A.names if isinstance(A, S1Subcomplex) else frozenset(A)
    C.require_valid()
    _check_invariant(C, names)
    sub = C.restrict(names)
    rest = [n for n in C.module.names() if n not in names]
    quo = C.restrict(rest)
    rows = [_gysin_data(K, max_degree) for K in (sub, C, quo)]
    lo = C.module.min_degree
    grid = GridReport() if lo is None else _grid(rows, lo, max_degree)
    return QuotientResult(sub, quo, grid)
