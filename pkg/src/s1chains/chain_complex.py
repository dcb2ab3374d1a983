"""Graded modules, chain complexes, homology, chain maps, cones and long exact sequences.

Generators are ordered by ``(degree, name)``.  Every complex carries one
global sparse differential whose per-degree blocks are the matrices
``∂_k : C_k -> C_(k-1)``.  Graded maps are likewise global matrices with a
fixed degree shift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import ChainMapError, NotAComplexError, ValidationError
from .exact_linear import (
    QQ,
    ZZ,
    Matrix,
    Ring,
    column_pivots,
    hstack,
    integer_kernel_basis,
    kernel_basis,
    lattice_contains,
    left_inverse,
    rank,
    smith_normal_form,
    solve_many,
)

__all__ = [
    "GradedModule",
    "ChainComplex",
    "GradedMap",
    "ChainMap",
    "HomologyGroup",
    "HomologyResult",
    "HomologyMap",
    "ShortExactSequence",
    "LESNode",
    "LongExactSequence",
    "homology",
    "homology_group",
    "shift",
    "cone",
    "direct_sum",
    "induced_map",
    "connecting_map",
    "les_from_ses",
    "is_exact_at",
    "is_quasi_isomorphism",
]


# ---------------------------------------------------------------------------
# Graded modules


class GradedModule:
    """Finitely many named generators with integer degrees over a ring."""

    __slots__ = ("ring", "generators", "index", "_ranges")

    def __init__(self, ring: Ring, generators: Iterable[tuple[str, int]]):
        gens = [(str(n), int(d)) for n, d in generators]
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValidationError(f"duplicate generator names: {dup}")
        gens.sort(key=lambda g: (g[1], g[0]))
        self.ring = ring
        self.generators: tuple[tuple[str, int], ...] = tuple(gens)
        self.index: dict[str, int] = {n: i for i, (n, _) in enumerate(gens)}
        ranges: dict[int, tuple[int, int]] = {}
        for i, (_, d) in enumerate(gens):
            lo, _hi = ranges.get(d, (i, i))
            ranges[d] = (lo, i + 1)
        self._ranges = ranges

    def __len__(self) -> int:
        return len(self.generators)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GradedModule)
            and self.ring == other.ring
            and self.generators == other.generators
        )

    def __hash__(self) -> int:
        return hash((self.ring, self.generators))

    @property
    def degrees(self) -> list[int]:
        return sorted(self._ranges)

    @property
    def min_degree(self) -> int | None:
        return min(self._ranges) if self._ranges else None

    @property
    def max_degree(self) -> int | None:
        return max(self._ranges) if self._ranges else None

    def span(self, k: int) -> tuple[int, int]:
        """Global index range ``[start, stop)`` of degree-``k`` generators."""
        if k in self._ranges:
            return self._ranges[k]
        # empty range placed where degree k would sit
        pos = 0
        for d, (_, hi) in self._ranges.items():
            if d < k:
                pos = max(pos, hi)
        return (pos, pos)

    def dim(self, k: int) -> int:
        lo, hi = self.span(k)
        return hi - lo

    def names(self, k: int | None = None) -> list[str]:
        if k is None:
            return [n for n, _ in self.generators]
        lo, hi = self.span(k)
        return [self.generators[i][0] for i in range(lo, hi)]

    def degree_of(self, name: str) -> int:
        return self.generators[self.index[name]][1]

    def local_index(self, name: str) -> int:
        i = self.index[name]
        return i - self.span(self.generators[i][1])[0]

    def with_ring(self, ring: Ring) -> "GradedModule":
        return GradedModule(ring, self.generators)

    def shifted(self, k: int) -> "GradedModule":
        return GradedModule(self.ring, [(n, d - k) for n, d in self.generators])


def _check_degree(module_src: GradedModule, module_tgt: GradedModule, M: Matrix, degree: int, what: str) -> None:
    sg, tg = module_src.generators, module_tgt.generators
    for i, j, _ in M.entries():
        if tg[i][1] != sg[j][1] + degree:
            raise ValidationError(
                f"{what}: entry {sg[j][0]} -> {tg[i][0]} does not have degree {degree}"
            )


# ---------------------------------------------------------------------------
# Chain complexes


class ChainComplex:
    """A bounded chain complex of finitely generated free modules."""

    def __init__(self, module: GradedModule, differential: Matrix, *, check: bool = True):
        n = len(module)
        if differential.shape != (n, n):
            raise ValidationError(f"differential must be {n}x{n}")
        if differential.ring != module.ring:
            differential = differential.change_ring(module.ring)
        self.module = module
        self.ring = module.ring
        self.differential = differential
        self._blocks: dict[int, Matrix] = {}
        self._homology: dict[int, HomologyGroup] = {}
        if check:
            _check_degree(module, module, differential, -1, "differential")
            self.verify()

    @classmethod
    def from_entries(
        cls,
        ring: Ring,
        generators: Iterable[tuple[str, int]],
        entries: Iterable[tuple[str, str, Any]],
        *,
        check: bool = True,
    ) -> "ChainComplex":
        """``entries`` are ``(source, target, coefficient)``: ``∂ source ∋ coeff·target``."""
        module = GradedModule(ring, generators)
        trip = []
        for src, tgt, c in entries:
            if src not in module.index or tgt not in module.index:
                raise ValidationError(f"unknown generator in entry {src} -> {tgt}")
            trip.append((module.index[tgt], module.index[src], c))
        D = Matrix.from_entries(ring, len(module), len(module), trip)
        return cls(module, D, check=check)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ChainComplex)
            and self.module == other.module
            and self.differential == other.differential
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ChainComplex({self.ring}, {len(self.module)} generators, degrees {self.module.degrees})"

    @property
    def generators(self) -> tuple[tuple[str, int], ...]:
        return self.module.generators

    def dim(self, k: int) -> int:
        return self.module.dim(k)

    def verify(self) -> None:
        """Raise :class:`NotAComplexError` unless ``∂∘∂ = 0``."""
        if not (self.differential @ self.differential).is_zero():
            raise NotAComplexError("differential does not square to zero")

    def boundary(self, k: int) -> Matrix:
        """``∂_k`` as a ``dim C_(k-1) x dim C_k`` matrix."""
        B = self._blocks.get(k)
        if B is None:
            r0, r1 = self.module.span(k - 1)
            c0, c1 = self.module.span(k)
            B = self.differential.block(r0, r1, c0, c1)
            self._blocks[k] = B
        return B

    def support(self) -> tuple[int, int] | None:
        if not len(self.module):
            return None
        return (self.module.min_degree, self.module.max_degree)  # type: ignore[return-value]

    def truncate(self, top: int) -> "ChainComplex":
        """Subcomplex spanned by generators of degree ``<= top``."""
        keep = [i for i, (_, d) in enumerate(self.module.generators) if d <= top]
        if len(keep) == len(self.module):
            return self
        module = GradedModule(self.ring, [self.module.generators[i] for i in keep])
        return ChainComplex(module, self.differential.submatrix(keep, keep), check=False)

    def restrict(self, names: Iterable[str]) -> "ChainComplex":
        """Complex on a subset of generators (the caller ensures it is a sub- or quotient complex)."""
        idx = sorted(self.module.index[n] for n in names)
        module = GradedModule(self.ring, [self.module.generators[i] for i in idx])
        return ChainComplex(module, self.differential.submatrix(idx, idx), check=False)

    def change_ring(self, ring: Ring) -> "ChainComplex":
        return ChainComplex(self.module.with_ring(ring), self.differential.change_ring(ring), check=False)

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, 0, Matrix.identity(self.ring, len(self.module)), check=False)

    def homology(self, degrees: Iterable[int] | None = None) -> "HomologyResult":
        return homology(self, degrees)


def shift(C: ChainComplex, k: int) -> ChainComplex:
    """``C[k]_n = C_(n+k)`` with differential ``(-1)^k ∂``."""
    if k == 0:
        return C
    D = C.differential if k % 2 == 0 else -C.differential
    return ChainComplex(C.module.shifted(k), D, check=False)


def direct_sum(complexes: Sequence[ChainComplex], prefixes: Sequence[str] | None = None) -> ChainComplex:
    """Direct sum; generator names get the given prefixes (default ``"0."``, ``"1."``, ...)."""
    if not complexes:
        raise ValidationError("direct_sum of nothing")
    ring = complexes[0].ring
    if prefixes is None:
        prefixes = [f"{i}." for i in range(len(complexes))]
    gens = []
    entries = []
    for C, pre in zip(complexes, prefixes):
        gens.extend((pre + n, d) for n, d in C.generators)
        names = C.module.names()
        for i, j, v in C.differential.entries():
            entries.append((pre + names[j], pre + names[i], v))
    return ChainComplex.from_entries(ring, gens, entries, check=False)


# ---------------------------------------------------------------------------
# Graded maps


class GradedMap:
    """A map ``source -> target`` raising degree by ``degree``, as one global matrix."""

    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int, matrix: Matrix, *, check: bool = True):
        if matrix.shape != (len(target.module), len(source.module)):
            raise ValidationError(
                f"map matrix has shape {matrix.shape}, expected {(len(target.module), len(source.module))}"
            )
        if matrix.ring != source.ring:
            matrix = matrix.change_ring(source.ring)
        self.source = source
        self.target = target
        self.degree = degree
        self.matrix = matrix
        self._blocks: dict[int, Matrix] = {}
        if check:
            _check_degree(source.module, target.module, matrix, degree, "map")

    @classmethod
    def from_entries(
        cls,
        source: ChainComplex,
        target: ChainComplex,
        degree: int,
        entries: Iterable[tuple[str, str, Any]],
        **kwargs: Any,
    ) -> "GradedMap":
        trip = []
        for src, tgt, c in entries:
            if src not in source.module.index or tgt not in target.module.index:
                raise ValidationError(f"unknown generator in map entry {src} -> {tgt}")
            trip.append((target.module.index[tgt], source.module.index[src], c))
        M = Matrix.from_entries(source.ring, len(target.module), len(source.module), trip)
        return cls(source, target, degree, M, **kwargs)

    def block(self, k: int) -> Matrix:
        """The component ``source_k -> target_(k+degree)``."""
        B = self._blocks.get(k)
        if B is None:
            r0, r1 = self.target.module.span(k + self.degree)
            c0, c1 = self.source.module.span(k)
            B = self.matrix.block(r0, r1, c0, c1)
            self._blocks[k] = B
        return B

    def commutator(self) -> Matrix:
        """``f∂ - (-1)^d ∂f``; zero exactly for chain maps."""
        sign = -1 if self.degree % 2 else 1
        return self.matrix @ self.source.differential - (self.target.differential @ self.matrix).scale(sign)


class ChainMap(GradedMap):
    """A graded map with ``f∂ = (-1)^d ∂f``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int, matrix: Matrix, *, check: bool = True):
        super().__init__(source, target, degree, matrix, check=check)
        if check and not self.commutator().is_zero():
            raise ChainMapError("map does not commute with the differentials")

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self ∘ other``."""
        return ChainMap(other.source, self.target, self.degree + other.degree, self.matrix @ other.matrix, check=False)


# ---------------------------------------------------------------------------
# Homology


@dataclass(frozen=True, eq=False)
class HomologyGroup:
    """One homology group with a fixed basis of representative cycles.

    ``orders[i]`` is ``0`` for a free (or field) summand and ``d > 1`` for a
    cyclic summand ``Z/d``.  ``projector`` maps a cycle (dense vector over the
    degree-``k`` generators) to its coordinates in the representative basis.
    """

    degree: int
    ring: Ring
    orders: tuple[int, ...]
    representatives: tuple[tuple[Any, ...], ...]
    projector: Matrix

    @property
    def rank(self) -> int:
        """Free rank over the integers, dimension over a field."""
        return sum(1 for o in self.orders if o == 0)

    dim = rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(o for o in self.orders if o)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def is_zero(self) -> bool:
        return not self.orders

    def coordinates(self, cycle: Sequence[Any]) -> list[Any]:
        """Coordinates of the class of ``cycle``, reduced modulo torsion orders."""
        return self.reduce(self.projector.apply(list(cycle)))

    def reduce(self, coords: Sequence[Any]) -> list[Any]:
        return [c % o if o else c for c, o in zip(coords, self.orders)]

    def describe(self) -> str:
        parts = []
        name = self.ring.name
        if self.rank:
            parts.append(f"{name}^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.describe()


class HomologyResult(dict):
    """Mapping ``degree -> HomologyGroup`` with a few summaries."""

    def ranks(self) -> dict[int, int]:
        return {k: g.rank for k, g in sorted(self.items())}

    def torsion(self) -> dict[int, tuple[int, ...]]:
        return {k: g.torsion for k, g in sorted(self.items())}

    def nonzero_degrees(self) -> list[int]:
        return [k for k, g in sorted(self.items()) if not g.is_zero()]

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.values())


def _field_homology(C: ChainComplex, k: int) -> HomologyGroup:
    ring = C.ring
    n = C.dim(k)
    Dk = C.boundary(k)
    Dk1 = C.boundary(k + 1)
    Z = kernel_basis(Dk) if n else None
    zvecs = list(Z.vectors) if Z is not None else []
    if not zvecs:
        return HomologyGroup(k, ring, (), (), Matrix.zeros(ring, 0, n))
    M = hstack([Dk1, Matrix.from_columns(ring, zvecs, n)]) if Dk1.ncols else Matrix.from_columns(ring, zvecs, n)
    piv = column_pivots(M)
    m = Dk1.ncols
    bcols = [j for j in piv if j < m]
    reps = [zvecs[j - m] for j in piv if j >= m]
    if not reps:
        return HomologyGroup(k, ring, (), (), Matrix.zeros(ring, 0, n))
    Q = Matrix.from_columns(ring, [Dk1.column_vector(j) for j in bcols] + reps, n)
    L = left_inverse(Q)
    a = len(bcols)
    P = L.block(a, a + len(reps), 0, n)
    return HomologyGroup(k, ring, tuple(0 for _ in reps), tuple(tuple(r) for r in reps), P)


def _integer_homology(C: ChainComplex, k: int) -> HomologyGroup:
    n = C.dim(k)
    if n == 0:
        return HomologyGroup(k, ZZ, (), (), Matrix.zeros(ZZ, 0, 0))
    Dk = C.boundary(k)
    Dk1 = C.boundary(k + 1)
    snf = smith_normal_form(Dk)
    r = snf.rank
    z = n - r
    if z == 0:
        return HomologyGroup(k, ZZ, (), (), Matrix.zeros(ZZ, 0, n))
    Kc = snf.V_inv.block(r, n, 0, n)  # cycle -> kernel coordinates
    K = snf.V.block(0, n, r, n)  # kernel basis as columns
    X = Kc @ Dk1
    snf2 = smith_normal_form(X)
    s = snf2.rank
    keep = [i for i in range(z) if i >= s or snf2.diagonal[i] != 1]
    orders = tuple(snf2.diagonal[i] if i < s else 0 for i in keep)
    G = K @ snf2.U_inv
    reps = tuple(tuple(G.column_vector(i)) for i in keep)
    P = (snf2.U @ Kc).submatrix(keep, list(range(n)))
    return HomologyGroup(k, ZZ, orders, reps, P)


def homology_group(C: ChainComplex, k: int) -> HomologyGroup:
    g = C._homology.get(k)
    if g is None:
        g = _integer_homology(C, k) if C.ring is ZZ else _field_homology(C, k)
        C._homology[k] = g
    return g


def homology(C: ChainComplex, degrees: Iterable[int] | None = None) -> HomologyResult:
    """Homology in the given degrees (default: the support of ``C``)."""
    if degrees is None:
        sup = C.support()
        degrees = range(sup[0], sup[1] + 1) if sup else []
    C.verify()
    return HomologyResult({k: homology_group(C, k) for k in degrees})


# ---------------------------------------------------------------------------
# Maps on homology


@dataclass(frozen=True, eq=False)
class HomologyMap:
    """Matrix of a homomorphism between two computed homology groups."""

    source: HomologyGroup
    target: HomologyGroup
    matrix: Matrix

    def _reduced_rows(self) -> list[list[Any]]:
        M = self.matrix.to_dense()
        return [[v % o if o else v for v in row] for row, o in zip(M, self.target.orders)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomologyMap):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and self._reduced_rows() == other._reduced_rows()

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(not any(r) for r in self._reduced_rows())

    def __neg__(self) -> "HomologyMap":
        return HomologyMap(self.source, self.target, -self.matrix)

    def __add__(self, other: "HomologyMap") -> "HomologyMap":
        return HomologyMap(self.source, self.target, self.matrix + other.matrix)

    def __matmul__(self, other: "HomologyMap") -> "HomologyMap":
        """``self ∘ other``."""
        return HomologyMap(other.source, self.target, self.matrix @ other.matrix)

    def is_isomorphism(self) -> bool:
        s, t = self.source, self.target
        if sorted(s.orders) != sorted(t.orders):
            return False
        if s.ring.is_field:
            return rank(self.matrix) == len(s.orders)
        return _integer_bijective(self)

    def to_lists(self) -> list[list[Any]]:
        return self._reduced_rows()


def _integer_bijective(f: HomologyMap) -> bool:
    ok_inj = _integer_kernel_trivial(f)
    ok_surj = is_exact_at(f.matrix, Matrix.zeros(ZZ, 0, f.target.ngens), f.source.orders, f.target.orders, (), ZZ)
    return ok_inj and ok_surj


def _integer_kernel_trivial(f: HomologyMap) -> bool:
    zero = Matrix.zeros(ZZ, f.source.ngens, 0)
    return is_exact_at(zero, f.matrix, (), f.source.orders, f.target.orders, ZZ)


def _map_from_images(src: HomologyGroup, tgt: HomologyGroup, images: Sequence[Sequence[Any]]) -> HomologyMap:
    cols = [tgt.coordinates(v) for v in images]
    M = Matrix.from_columns(src.ring if src.ring is not ZZ else ZZ, cols, tgt.ngens)
    return HomologyMap(src, tgt, M)


def induced_map(f: GradedMap, degrees: Iterable[int] | None = None) -> dict[int, HomologyMap]:
    """Maps ``H_k(source) -> H_(k+d)(target)`` in the representative bases."""
    if isinstance(f, ChainMap):
        pass
    elif not f.commutator().is_zero():
        raise ChainMapError("induced_map needs a chain map")
    if degrees is None:
        sup = f.source.support()
        degrees = range(sup[0], sup[1] + 1) if sup else []
    out = {}
    for k in degrees:
        src = homology_group(f.source, k)
        tgt = homology_group(f.target, k + f.degree)
        B = f.block(k)
        out[k] = _map_from_images(src, tgt, [B.apply(list(r)) for r in src.representatives])
    return out


def is_quasi_isomorphism(f: ChainMap, degrees: Iterable[int] | None = None) -> bool:
    return all(m.is_isomorphism() for m in induced_map(f, degrees).values())


# ---------------------------------------------------------------------------
# Exactness of a sequence of homology maps


def is_exact_at(
    F: Matrix,
    G: Matrix,
    orders_a: Sequence[int],
    orders_b: Sequence[int],
    orders_c: Sequence[int],
    ring: Ring,
) -> bool:
    """Exactness of ``A --F--> B --G--> C`` at ``B``.

    Over a field: ``GF = 0`` and ``rank F + rank G = dim B``.  Over the
    integers, with ``B = ⊕ Z/b_j`` (``b_j = 0`` meaning free), the kernel of
    ``G`` is computed as a lattice and each generator must lie in the span of
    the columns of ``F`` plus the relations of ``B``.
    """
    nb = len(orders_b)
    if ring.is_field:
        if nb == 0:
            return True
        if F.ncols and G.nrows and not (G @ F).is_zero():
            return False
        rf = rank(F) if F.ncols else 0
        rg = rank(G) if G.nrows else 0
        return rf + rg == nb
    if nb == 0:
        return True
    if F.ncols and G.nrows:
        GF = (G @ F).to_dense()
        for row, c in zip(GF, orders_c):
            if any((v % c if c else v) for v in row):
                return False
    # kernel of G: y in Z^nb with G y ∈ diag(c) Z^nc
    rel_c = [j for j, c in enumerate(orders_c) if c]
    if G.nrows:
        cols = [G.column_vector(j) for j in range(nb)]
        for j in rel_c:
            e = [0] * G.nrows
            e[j] = -orders_c[j]
            cols.append(e)
        ker = integer_kernel_basis(Matrix.from_columns(ZZ, cols, G.nrows))
        kernel_gens = [v[:nb] for v in ker.vectors]
    else:
        kernel_gens = [[int(i == j) for i in range(nb)] for j in range(nb)]
    span_cols = [F.column_vector(j) for j in range(F.ncols)]
    for j, b in enumerate(orders_b):
        if b:
            e = [0] * nb
            e[j] = b
            span_cols.append(e)
    S = Matrix.from_columns(ZZ, span_cols, nb)
    return all(lattice_contains(S, v) for v in kernel_gens)


# ---------------------------------------------------------------------------
# Short and long exact sequences


class ShortExactSequence:
    """``0 -> X --u--> Y --v--> Z -> 0`` with degree-0 chain maps."""

    def __init__(self, u: ChainMap, v: ChainMap, *, check: bool = True):
        if u.target is not v.source and u.target != v.source:
            raise ValidationError("u.target must equal v.source")
        if u.degree or v.degree:
            raise ValidationError("maps of a short exact sequence have degree 0")
        self.u = u
        self.v = v
        self.X = u.source
        self.Y = u.target
        self.Z = v.target
        if check:
            self.verify()

    def degrees(self) -> list[int]:
        ds: set[int] = set()
        for C in (self.X, self.Y, self.Z):
            ds.update(C.module.degrees)
        return sorted(ds)

    def verify(self) -> None:
        if not (self.v.matrix @ self.u.matrix).is_zero():
            raise ValidationError("v ∘ u != 0")
        ring = self.X.ring
        for k in self.degrees():
            uk, vk = self.u.block(k), self.v.block(k)
            nx, ny, nz = self.X.dim(k), self.Y.dim(k), self.Z.dim(k)
            ru = rank(uk) if nx else 0
            rv = rank(vk) if nz and ny else 0
            if ru != nx:
                raise ValidationError(f"u is not injective in degree {k}")
            if rv != nz:
                raise ValidationError(f"v is not surjective in degree {k}")
            if ru + rv != ny:
                raise ValidationError(f"im u != ker v in degree {k}")
            if ring is ZZ:
                if nz and any(d != 1 for d in smith_normal_form(vk).diagonal):
                    raise ValidationError(f"v is not surjective over Z in degree {k}")
                if nx and any(d != 1 for d in smith_normal_form(uk).diagonal):
                    raise ValidationError(f"coker u has torsion in degree {k}")


def connecting_map(s: ShortExactSequence, k: int) -> HomologyMap:
    """Zig-zag ``H_k(Z) -> H_(k-1)(X)``: lift through ``v``, apply ``∂``, pull back through ``u``."""
    HZ = homology_group(s.Z, k)
    HX = homology_group(s.X, k - 1)
    ring = s.X.ring
    if not HZ.ngens:
        return HomologyMap(HZ, HX, Matrix.zeros(ring, HX.ngens, 0))
    vk = s.v.block(k)
    reps = Matrix.from_columns(ring, [list(r) for r in HZ.representatives], s.Z.dim(k))
    lifts = solve_many(vk, reps)
    dY = s.Y.boundary(k)
    uk1 = s.u.block(k - 1)
    images = []
    for y in lifts:
        if y is None:
            raise ValidationError("cannot lift a cycle through v")
        w = dY.apply(y) if dY.nrows else []
        if not uk1.ncols:
            images.append([])
            continue
        x = solve_many(uk1, Matrix.from_columns(ring, [w], uk1.nrows))[0]
        if x is None:
            raise ValidationError("boundary of the lift does not come from X")
        images.append(x)
    return _map_from_images(HZ, HX, images)


@dataclass
class LESNode:
    label: str
    group: HomologyGroup
    status: str  # "exact", "not exact" or "unchecked"


@dataclass
class LongExactSequence:
    """``... -> H_k(X) -> H_k(Y) -> H_k(Z) -> H_(k-1)(X) -> ...`` over a window."""

    degrees: list[int]
    HX: dict[int, HomologyGroup]
    HY: dict[int, HomologyGroup]
    HZ: dict[int, HomologyGroup]
    u: dict[int, HomologyMap]
    v: dict[int, HomologyMap]
    delta: dict[int, HomologyMap]
    nodes: list[LESNode] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(n.status != "not exact" for n in self.nodes)

    def failures(self) -> list[str]:
        return [n.label for n in self.nodes if n.status == "not exact"]


def _exact_between(f: HomologyMap, g: HomologyMap) -> bool:
    return is_exact_at(f.matrix, g.matrix, f.source.orders, f.target.orders, g.target.orders, f.source.ring)


def les_from_ses(
    s: ShortExactSequence,
    degrees: Iterable[int] | None = None,
    labels: tuple[str, str, str] = ("X", "Y", "Z"),
) -> LongExactSequence:
    """Homology, induced maps, connecting maps and exactness verdicts.

    Nodes whose incoming or outgoing map leaves the window are reported as
    ``"unchecked"``.
    """
    if degrees is None:
        ds = s.degrees()
        degrees = range(ds[0], ds[-1] + 1) if ds else []
    degs = sorted(set(degrees))
    if not degs:
        return LongExactSequence([], {}, {}, {}, {}, {}, {}, [])
    lo, hi = degs[0], degs[-1]
    window = range(lo, hi + 1)
    HX = {k: homology_group(s.X, k) for k in window}
    HY = {k: homology_group(s.Y, k) for k in window}
    HZ = {k: homology_group(s.Z, k) for k in window}
    u = induced_map(s.u, window)
    v = induced_map(s.v, window)
    delta = {k: connecting_map(s, k) for k in range(lo + 1, hi + 1)}
    lx, ly, lz = labels
    nodes = []
    for k in range(hi, lo - 1, -1):
        if k + 1 <= hi:
            st = "exact" if _exact_between(delta[k + 1], u[k]) else "not exact"
        else:
            st = "unchecked"
        nodes.append(LESNode(f"H_{k}({lx})", HX[k], st))
        st = "exact" if _exact_between(u[k], v[k]) else "not exact"
        nodes.append(LESNode(f"H_{k}({ly})", HY[k], st))
        if k - 1 >= lo:
            st = "exact" if _exact_between(v[k], delta[k]) else "not exact"
        else:
            st = "unchecked"
        nodes.append(LESNode(f"H_{k}({lz})", HZ[k], st))
    return LongExactSequence(degs, HX, HY, HZ, u, v, delta, nodes)


# ---------------------------------------------------------------------------
# Cones


def cone(f: ChainMap) -> tuple[ChainComplex, ShortExactSequence]:
    """``C(f) = B[1] ⊕ A`` with differential ``[[-∂_B, f], [0, ∂_A]]``.

    Generators of ``B[1]`` are renamed ``"B[1]." + name`` (degree lowered by
    one) and those of ``A`` become ``"A." + name``.  Also returns the
    sequence ``0 -> B[1] -> C(f) -> A -> 0``.
    """
    if f.degree != 0:
        raise ValidationError("cone needs a degree-0 chain map")
    if not f.commutator().is_zero():
        raise ChainMapError("cone needs a chain map")
    A, B = f.source, f.target
    ring = A.ring
    Bs = shift(B, 1)
    bnames = ["B[1]." + n for n in B.module.names()]
    anames = ["A." + n for n in A.module.names()]
    gens = [(bn, d) for bn, (_, d) in zip(bnames, Bs.module.generators)]
    gens += [(an, d) for an, (_, d) in zip(anames, A.module.generators)]
    entries = []
    for i, j, c in Bs.differential.entries():
        entries.append((bnames[j], bnames[i], c))
    for i, j, c in A.differential.entries():
        entries.append((anames[j], anames[i], c))
    for i, j, c in f.matrix.entries():
        entries.append((anames[j], bnames[i], c))
    Cf = ChainComplex.from_entries(ring, gens, entries)
    Bshift = ChainComplex.from_entries(
        ring, list(zip(bnames, [d for _, d in Bs.module.generators])),
        [(bnames[j], bnames[i], c) for i, j, c in Bs.differential.entries()],
        check=False,
    )
    Aren = ChainComplex.from_entries(
        ring, list(zip(anames, [d for _, d in A.module.generators])),
        [(anames[j], anames[i], c) for i, j, c in A.differential.entries()],
        check=False,
    )
    incl = ChainMap.from_entries(Bshift, Cf, 0, [(n, n, 1) for n in bnames])
    proj = ChainMap.from_entries(Cf, Aren, 0, [(n, n, 1) for n in anames])
    return Cf, ShortExactSequence(incl, proj)  # type: ignore[arg-type]
