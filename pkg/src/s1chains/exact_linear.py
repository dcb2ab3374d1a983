"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are immutable and stored as one sparse ``dict`` per row.  Elements
of the three rings are plain Python numbers:

* ``ZZ``: ``int``
* ``QQ``: ``int`` when integral, otherwise ``fractions.Fraction``
* ``GF(p)``: ``int`` residue in ``range(p)``

Row reduction over the rationals runs fraction-free on integer rows, which is
much faster than ``Fraction`` arithmetic and still exact.  The Smith normal
form works on dense integer lists with the minimal-absolute-value pivot rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import ValidationError, UnsupportedRingError

__all__ = [
    "Ring",
    "ZZ",
    "QQ",
    "GF",
    "ring_from_tag",
    "Matrix",
    "hstack",
    "vstack",
    "block_diagonal",
    "SNFResult",
    "SubspaceBasis",
    "smith_normal_form",
    "rank",
    "kernel_basis",
    "image_basis",
    "column_pivots",
    "solve",
    "solve_many",
    "left_inverse",
    "inverse",
    "cokernel_presentation",
    "integer_solve",
    "integer_kernel_basis",
    "lattice_contains",
    "is_prime",
]


# ---------------------------------------------------------------------------
# Rings


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Ring:
    """Coefficient ring.  Calling a ring coerces a value into it."""

    name: str = ""
    is_field: bool = False
    characteristic: int = 0

    def __call__(self, x: Any) -> Any:
        raise NotImplementedError

    def parse(self, text: str) -> Any:
        """Parse a decimal integer string or a rational ``"a/b"``."""
        if not isinstance(text, str):
            raise ValidationError(f"coefficient {text!r} must be a string")
        s = text.strip()
        try:
            value = Fraction(s) if "/" in s else int(s)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"malformed coefficient {text!r}") from None
        return self(value)

    def format(self, x: Any) -> str:
        return str(x)

    @property
    def tag(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Ring)
            and self.name == other.name
            and self.characteristic == other.characteristic
        )

    def __hash__(self) -> int:
        return hash((self.name, self.characteristic))


class IntegerRing(Ring):
    name = "Z"

    def __call__(self, x: Any) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValidationError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, str):
            return self.parse(x)
        raise ValidationError(f"cannot coerce {x!r} into Z")


class RationalField(Ring):
    name = "Q"
    is_field = True

    def __call__(self, x: Any) -> int | Fraction:
        if isinstance(x, int):
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, str):
            return self.parse(x)
        raise ValidationError(f"cannot coerce {x!r} into Q")


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValidationError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"F{p}"

    @property
    def tag(self) -> str:
        return "Fp"

    def __call__(self, x: Any) -> int:
        p = self.characteristic
        if isinstance(x, int):
            return x % p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ValidationError(f"{x} has no image in F{p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self.parse(x)
        raise ValidationError(f"cannot coerce {x!r} into F{p}")


ZZ = IntegerRing()
QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def ring_from_tag(tag: str, p: int | None = None) -> Ring:
    """Resolve ``"Z"``, ``"Q"`` or ``"Fp"`` (with ``p``) to a ring."""
    if tag in ("Z", "ZZ"):
        return ZZ
    if tag in ("Q", "QQ"):
        return QQ
    if tag == "Fp":
        if p is None:
            raise ValidationError("ring Fp requires a prime p")
        return GF(int(p))
    if len(tag) > 1 and tag[0] == "F" and tag[1:].isdigit():
        return GF(int(tag[1:]))
    raise ValidationError(f"unknown ring {tag!r}")


# ---------------------------------------------------------------------------
# Matrices


class Matrix:
    """Immutable sparse matrix over a :class:`Ring`."""

    __slots__ = ("ring", "nrows", "ncols", "_rows", "_cache")

    def __init__(
        self,
        ring: Ring,
        nrows: int,
        ncols: int,
        rows: Sequence[Mapping[int, Any]] | None = None,
    ):
        if nrows < 0 or ncols < 0:
            raise ValidationError("matrix dimensions must be nonnegative")
        clean: list[dict[int, Any]] = []
        if rows is None:
            clean = [{} for _ in range(nrows)]
        else:
            if len(rows) != nrows:
                raise ValidationError("row count mismatch")
            for row in rows:
                out = {}
                for j, v in row.items():
                    if not 0 <= j < ncols:
                        raise ValidationError(f"column index {j} out of range")
                    v = ring(v)
                    if v:
                        out[j] = v
                clean.append(out)
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self._rows = clean
        self._cache: dict[str, Any] = {}

    @classmethod
    def _raw(cls, ring: Ring, nrows: int, ncols: int, rows: list[dict[int, Any]]) -> "Matrix":
        m = cls.__new__(cls)
        m.ring = ring
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        m._cache = {}
        return m

    # construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        return cls._raw(ring, nrows, ncols, [{} for _ in range(nrows)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls._raw(ring, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def diagonal(cls, ring: Ring, values: Sequence[Any], nrows: int | None = None, ncols: int | None = None) -> "Matrix":
        nrows = len(values) if nrows is None else nrows
        ncols = len(values) if ncols is None else ncols
        rows: list[dict[int, Any]] = [{} for _ in range(nrows)]
        for i, v in enumerate(values):
            v = ring(v)
            if v:
                rows[i][i] = v
        return cls._raw(ring, nrows, ncols, rows)

    @classmethod
    def from_rows(cls, ring: Ring, data: Sequence[Sequence[Any]], ncols: int | None = None) -> "Matrix":
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValidationError("ragged matrix rows")
            rows.append({j: v for j, v in enumerate(r)})
        return cls(ring, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence[Any]], nrows: int) -> "Matrix":
        rows: list[dict[int, Any]] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValidationError("column length mismatch")
            for i, v in enumerate(col):
                if v:
                    v = ring(v)
                    if v:
                        rows[i][j] = v
        return cls._raw(ring, nrows, len(columns), rows)

    @classmethod
    def from_entries(
        cls, ring: Ring, nrows: int, ncols: int, entries: Iterable[tuple[int, int, Any]]
    ) -> "Matrix":
        """Build from ``(row, col, value)`` triples; repeated positions add."""
        rows: list[dict[int, Any]] = [{} for _ in range(nrows)]
        for i, j, v in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ValidationError(f"entry ({i}, {j}) out of range")
            rows[i][j] = rows[i].get(j, 0) + ring(v)
        for r in rows:
            for j in [j for j, v in r.items() if not ring(v)]:
                del r[j]
            for j, v in r.items():
                r[j] = ring(v)
        return cls._raw(ring, nrows, ncols, rows)

    # access ------------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> Any:
        i, j = key
        return self._rows[i].get(j, 0)

    def row(self, i: int) -> Mapping[int, Any]:
        """Sparse view of row ``i``; do not mutate."""
        return self._rows[i]

    def column(self, j: int) -> Mapping[int, Any]:
        """Sparse view of column ``j``; do not mutate."""
        return self.T._rows[j]

    def entries(self) -> Iterator[tuple[int, int, Any]]:
        for i, r in enumerate(self._rows):
            for j in sorted(r):
                yield i, j, r[j]

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self) -> list[list[Any]]:
        out = []
        for r in self._rows:
            row = [0] * self.ncols
            for j, v in r.items():
                row[j] = v
            out.append(row)
        return out

    def column_vector(self, j: int) -> list[Any]:
        col = [0] * self.nrows
        for i, v in self.column(j).items():
            col[i] = v
        return col

    def columns(self) -> list[list[Any]]:
        return [self.column_vector(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    @property
    def T(self) -> "Matrix":
        t = self._cache.get("T")
        if t is None:
            rows: list[dict[int, Any]] = [{} for _ in range(self.ncols)]
            for i, r in enumerate(self._rows):
                for j, v in r.items():
                    rows[j][i] = v
            t = Matrix._raw(self.ring, self.ncols, self.nrows, rows)
            t._cache["T"] = self
            self._cache["T"] = t
        return t

    # arithmetic ---------------------------------------------------------------

    def _check_ring(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise ValidationError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, Matrix):
            self._check_ring(other)
            if self.ncols != other.nrows:
                raise ValidationError(f"shape mismatch {self.shape} @ {other.shape}")
            ring = self.ring
            orows = other._rows
            p = ring.characteristic
            out = []
            for r in self._rows:
                acc: dict[int, Any] = {}
                for k, a in r.items():
                    for j, b in orows[k].items():
                        acc[j] = acc.get(j, 0) + a * b
                if p:
                    acc = {j: v % p for j, v in acc.items() if v % p}
                elif ring is QQ:
                    acc = {j: ring(v) for j, v in acc.items() if v}
                else:
                    acc = {j: v for j, v in acc.items() if v}
                out.append(acc)
            return Matrix._raw(ring, self.nrows, other.ncols, out)
        return self.apply(other)

    def apply(self, vec: Sequence[Any]) -> list[Any]:
        """Multiply by a dense column vector."""
        if len(vec) != self.ncols:
            raise ValidationError(f"vector length {len(vec)} != {self.ncols}")
        ring = self.ring
        out = []
        for r in self._rows:
            s = 0
            for j, a in r.items():
                x = vec[j]
                if x:
                    s += a * x
            out.append(ring(s) if s else 0)
        return out

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        self._check_ring(other)
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} vs {other.shape}")
        ring = self.ring
        out = []
        for a, b in zip(self._rows, other._rows):
            r = dict(a)
            for j, v in b.items():
                w = ring(r.get(j, 0) + sign * v)
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
            out.append(r)
        return Matrix._raw(ring, self.nrows, self.ncols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c: Any) -> "Matrix":
        ring = self.ring
        c = ring(c)
        if not c:
            return Matrix.zeros(ring, self.nrows, self.ncols)
        out = [{j: ring(v * c) for j, v in r.items()} for r in self._rows]
        return Matrix._raw(ring, self.nrows, self.ncols, out)

    def __rmul__(self, c: Any) -> "Matrix":
        return self.scale(c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.shape == other.shape
            and all(a == b for a, b in zip(self._rows, other._rows))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols}, {self.to_dense()})"

    # slicing -----------------------------------------------------------------

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        """Contiguous submatrix ``[r0:r1, c0:c1]``."""
        out = []
        for r in self._rows[r0:r1]:
            if c0 == 0 and c1 >= self.ncols:
                out.append(dict(r))
            else:
                out.append({j - c0: v for j, v in r.items() if c0 <= j < c1})
        return Matrix._raw(self.ring, r1 - r0, c1 - c0, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        colmap = {c: k for k, c in enumerate(cols)}
        out = []
        for i in rows:
            r = self._rows[i]
            out.append({colmap[j]: v for j, v in r.items() if j in colmap})
        return Matrix._raw(self.ring, len(rows), len(cols), out)

    def change_ring(self, ring: Ring) -> "Matrix":
        out = []
        for r in self._rows:
            d = {}
            for j, v in r.items():
                w = ring(v)
                if w:
                    d[j] = w
            out.append(d)
        return Matrix._raw(ring, self.nrows, self.ncols, out)


def hstack(blocks: Sequence[Matrix], ring: Ring | None = None, nrows: int | None = None) -> Matrix:
    if not blocks:
        if ring is None or nrows is None:
            raise ValidationError("empty hstack needs ring and nrows")
        return Matrix.zeros(ring, nrows, 0)
    ring = blocks[0].ring
    n = blocks[0].nrows
    rows: list[dict[int, Any]] = [{} for _ in range(n)]
    off = 0
    for b in blocks:
        if b.nrows != n or b.ring != ring:
            raise ValidationError("hstack: incompatible blocks")
        for i, r in enumerate(b._rows):
            for j, v in r.items():
                rows[i][j + off] = v
        off += b.ncols
    return Matrix._raw(ring, n, off, rows)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    ring = blocks[0].ring
    n = blocks[0].ncols
    rows: list[dict[int, Any]] = []
    for b in blocks:
        if b.ncols != n or b.ring != ring:
            raise ValidationError("vstack: incompatible blocks")
        rows.extend(dict(r) for r in b._rows)
    return Matrix._raw(ring, len(rows), n, rows)


def block_diagonal(blocks: Sequence[Matrix], ring: Ring) -> Matrix:
    rows: list[dict[int, Any]] = []
    off = 0
    total = sum(b.ncols for b in blocks)
    for b in blocks:
        for r in b._rows:
            rows.append({j + off: v for j, v in r.items()})
        off += b.ncols
    return Matrix._raw(ring, len(rows), total, rows)


# ---------------------------------------------------------------------------
# Row reduction over fields


def _working_rows(rows: Iterable[Mapping[int, Any]], ring: Ring) -> list[dict[int, int]]:
    """Copy rows into the integer representation used by :func:`_rref`."""
    p = ring.characteristic
    out = []
    for r in rows:
        if p:
            out.append({j: v % p for j, v in r.items() if v % p})
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        if den == 1:
            d = {j: int(v) for j, v in r.items() if v}
        else:
            d = {j: int(v * den) for j, v in r.items() if v}
        if d:
            g = gcd(*d.values())
            if g > 1:
                d = {j: v // g for j, v in d.items()}
        out.append(d)
    return out


def _rref(rows: list[dict[int, int]], limit: int, p: int) -> list[int]:
    """Reduce ``rows`` in place to reduced echelon form.

    Pivots are only taken in columns ``< limit``; columns beyond are carried
    along (augmented part).  In characteristic zero the rows stay integral and
    primitive, pivots are arbitrary nonzero integers and every other row is
    zero in a pivot column.  Returns the pivot columns; row ``i`` holds pivot
    ``pivots[i]``.
    """
    nrows = len(rows)
    rank = 0
    pivots: list[int] = []
    for c in range(limit):
        if rank == nrows:
            break
        best = -1
        best_abs = 0
        for i in range(rank, nrows):
            v = rows[i].get(c)
            if v:
                if p:
                    best = i
                    break
                a = abs(v)
                if best < 0 or a < best_abs:
                    best, best_abs = i, a
                    if a == 1:
                        break
        if best < 0:
            continue
        rows[rank], rows[best] = rows[best], rows[rank]
        prow = rows[rank]
        if p:
            inv = pow(prow[c], p - 2, p)
            if inv != 1:
                prow = {j: v * inv % p for j, v in prow.items()}
                rows[rank] = prow
        a = prow[c]
        for i in range(nrows):
            if i == rank:
                continue
            row = rows[i]
            b = row.get(c)
            if not b:
                continue
            if p:
                for j, v in prow.items():
                    w = (row.get(j, 0) - b * v) % p
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
            else:
                g = gcd(a, b)
                sa, sb = a // g, b // g
                new = {j: sa * v for j, v in row.items()} if sa != 1 else dict(row)
                for j, v in prow.items():
                    w = new.get(j, 0) - sb * v
                    if w:
                        new[j] = w
                    else:
                        new.pop(j, None)
                if new:
                    g = gcd(*new.values())
                    if g > 1:
                        new = {j: v // g for j, v in new.items()}
                rows[i] = new
        pivots.append(c)
        rank += 1
    return pivots


def _field_ring(ring: Ring) -> Ring:
    return QQ if ring is ZZ else ring


def column_pivots(A: Matrix) -> list[int]:
    """Indices of the first maximal independent set of columns of ``A``."""
    rows = _working_rows(A._rows, A.ring)
    return _rref(rows, A.ncols, A.ring.characteristic)


def rank(A: Matrix) -> int:
    """Exact rank; integer matrices are ranked over the rationals."""
    cached = A._cache.get("rank")
    if cached is None:
        if A.nrows <= A.ncols:
            cached = len(column_pivots(A))
        else:
            cached = len(column_pivots(A.T))
        A._cache["rank"] = cached
    return cached


@dataclass(frozen=True)
class SubspaceBasis:
    """A list of linearly independent vectors in ``ring^ambient``."""

    ring: Ring
    ambient: int
    vectors: tuple[tuple[Any, ...], ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def matrix(self) -> Matrix:
        """Vectors as the columns of an ``ambient x len`` matrix."""
        return Matrix.from_columns(self.ring, self.vectors, self.ambient)


def _primitive(vec: list[Any]) -> list[int]:
    den = 1
    for v in vec:
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = gcd(*ints) if ints else 0
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def kernel_basis(A: Matrix) -> SubspaceBasis:
    """Basis of ``{v : A v = 0}``.

    Over a field the basis is read off the reduced echelon form: one vector
    per free column, scaled to a primitive integer vector over the rationals.
    Over the integers the result is a basis of the (saturated) kernel lattice.
    """
    cached = A._cache.get("kernel")
    if cached is not None:
        return cached
    ring = A.ring
    if ring is ZZ:
        basis = integer_kernel_basis(A)
        A._cache["kernel"] = basis
        return basis
    p = ring.characteristic
    rows = _working_rows(A._rows, ring)
    pivots = _rref(rows, A.ncols, p)
    pivot_set = set(pivots)
    vectors = []
    for f in range(A.ncols):
        if f in pivot_set:
            continue
        vec: list[Any] = [0] * A.ncols
        vec[f] = 1
        for i, c in enumerate(pivots):
            v = rows[i].get(f)
            if v:
                vec[c] = (-v) % p if p else Fraction(-v, rows[i][c])
        if not p:
            vec = _primitive(vec)
        vectors.append(tuple(vec))
    basis = SubspaceBasis(ring, A.ncols, tuple(vectors))
    A._cache["kernel"] = basis
    return basis


def image_basis(A: Matrix) -> SubspaceBasis:
    """Basis of the column space formed by the pivot columns of ``A``."""
    ring = _field_ring(A.ring)
    piv = column_pivots(A)
    return SubspaceBasis(ring, A.nrows, tuple(tuple(A.column_vector(j)) for j in piv))


def solve_many(A: Matrix, B: Matrix) -> list[list[Any] | None]:
    """Solve ``A x = b`` for every column ``b`` of ``B``.

    Over a field each solution sets free variables to zero; over the integers
    the Smith normal form is used.  Inconsistent columns give ``None``.
    """
    if A.nrows != B.nrows:
        raise ValidationError("solve: row count mismatch")
    if A.ring is ZZ:
        return [integer_solve(A, B.column_vector(j)) for j in range(B.ncols)]
    ring = A.ring
    p = ring.characteristic
    n = A.ncols
    aug = []
    for ra, rb in zip(A._rows, B._rows):
        r = dict(ra)
        for j, v in rb.items():
            r[n + j] = v
        aug.append(r)
    rows = _working_rows(aug, ring)
    pivots = _rref(rows, n, p)
    rk = len(pivots)
    bad = set()
    for r in rows[rk:]:
        for j in r:
            if j >= n:
                bad.add(j - n)
    out: list[list[Any] | None] = []
    for k in range(B.ncols):
        if k in bad:
            out.append(None)
            continue
        x: list[Any] = [0] * n
        for i, c in enumerate(pivots):
            v = rows[i].get(n + k)
            if v:
                x[c] = v if p else ring(Fraction(v, rows[i][c]))
        out.append(x)
    return out


def solve(A: Matrix, b: Sequence[Any]) -> list[Any] | None:
    """One solution of ``A x = b`` or ``None``."""
    B = Matrix.from_columns(A.ring, [list(b)], A.nrows)
    return solve_many(A, B)[0]


def left_inverse(Q: Matrix) -> Matrix:
    """A matrix ``L`` with ``L Q = I`` for ``Q`` of full column rank (fields)."""
    if not Q.ring.is_field:
        raise UnsupportedRingError("left_inverse needs a field")
    m = Q.ncols
    if m == 0:
        return Matrix.zeros(Q.ring, 0, Q.nrows)
    rows_sel = column_pivots(Q.T)
    if len(rows_sel) != m:
        raise ValidationError("left_inverse: matrix does not have full column rank")
    square = Q.submatrix(rows_sel, list(range(m)))
    sols = solve_many(square, Matrix.identity(Q.ring, m))
    # sols[k] is column k of square^{-1}
    out: list[dict[int, Any]] = [{} for _ in range(m)]
    for k, col in enumerate(sols):
        assert col is not None
        for i, v in enumerate(col):
            if v:
                out[i][rows_sel[k]] = v
    return Matrix._raw(Q.ring, m, Q.nrows, out)


def inverse(A: Matrix) -> Matrix:
    """Inverse of a square matrix over a field (or a unimodular integer one)."""
    if A.nrows != A.ncols:
        raise ValidationError("inverse of a non-square matrix")
    sols = solve_many(A, Matrix.identity(A.ring, A.nrows))
    if any(s is None for s in sols):
        raise ValidationError("matrix is not invertible")
    return Matrix.from_columns(A.ring, sols, A.nrows)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Smith normal form and integer lattices


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with unimodular ``U``, ``V``.

    ``U_inv`` and ``V_inv`` are the exact inverses.  ``diagonal`` lists the
    nonzero elementary divisors ``d_1 | d_2 | ...``.
    """

    D: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _snf_dense(M: list[list[int]], m: int, n: int):
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i: int, t: int, q: int) -> None:
        # row_i -= q * row_t
        Mi, Mt = M[i], M[t]
        for k in range(n):
            if Mt[k]:
                Mi[k] -= q * Mt[k]
        Ui_, Ut = U[i], U[t]
        for k in range(m):
            if Ut[k]:
                Ui_[k] -= q * Ut[k]
        for row in Ui:
            if row[i]:
                row[t] += q * row[i]

    def col_op(j: int, t: int, q: int) -> None:
        # col_j -= q * col_t
        for row in M:
            if row[t]:
                row[j] -= q * row[t]
        for row in V:
            if row[t]:
                row[j] -= q * row[t]
        Vt, Vj = Vi[t], Vi[j]
        for k in range(n):
            if Vj[k]:
                Vt[k] += q * Vj[k]

    def swap_rows(a: int, b: int) -> None:
        if a != b:
            M[a], M[b] = M[b], M[a]
            U[a], U[b] = U[b], U[a]
            for row in Ui:
                row[a], row[b] = row[b], row[a]

    def swap_cols(a: int, b: int) -> None:
        if a != b:
            for row in M:
                row[a], row[b] = row[b], row[a]
            for row in V:
                row[a], row[b] = row[b], row[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    t = 0
    while t < min(m, n):
        best = None
        best_abs = 0
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best_abs):
                    best, best_abs = (i, j), abs(v)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            a = M[t][t]
            clean = True
            for i in range(t + 1, m):
                if M[i][t]:
                    row_op(i, t, M[i][t] // a)
                    if M[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if M[t][j]:
                    col_op(j, t, M[t][j] // a)
                    if M[t][j]:
                        clean = False
            if not clean:
                # bring the smallest remainder in row/column t to the pivot
                best = (t, t)
                best_abs = abs(M[t][t])
                for i in range(t + 1, m):
                    v = M[i][t]
                    if v and abs(v) < best_abs:
                        best, best_abs = (i, t), abs(v)
                for j in range(t + 1, n):
                    v = M[t][j]
                    if v and abs(v) < best_abs:
                        best, best_abs = (t, j), abs(v)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            offender = None
            for i in range(t + 1, m):
                row = M[i]
                for j in range(t + 1, n):
                    if row[j] % a:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_op(t, offender, -1)
        if M[t][t] < 0:
            M[t] = [-v for v in M[t]]
            U[t] = [-v for v in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    return M, U, V, Ui, Vi, t


def smith_normal_form(A: Matrix) -> SNFResult:
    """Smith normal form with unimodular transforms and their inverses."""
    cached = A._cache.get("snf")
    if cached is not None:
        return cached
    if A.ring is not ZZ:
        A = A.change_ring(ZZ)
    m, n = A.nrows, A.ncols
    D, U, V, Ui, Vi, r = _snf_dense(A.to_dense(), m, n)
    diag = tuple(D[i][i] for i in range(r))
    res = SNFResult(
        D=Matrix.from_rows(ZZ, D, n),
        U=Matrix.from_rows(ZZ, U, m),
        V=Matrix.from_rows(ZZ, V, n),
        U_inv=Matrix.from_rows(ZZ, Ui, m),
        V_inv=Matrix.from_rows(ZZ, Vi, n),
        diagonal=diag,
    )
    A._cache["snf"] = res
    return res


def cokernel_presentation(A: Matrix) -> tuple[int, list[int]]:
    """``coker A = Z^free ⊕ ⊕ Z/t_i`` with ``t_i | t_(i+1)`` and ``t_i > 1``."""
    snf = smith_normal_form(A)
    free = A.nrows - snf.rank
    return free, [d for d in snf.diagonal if d != 1]


def integer_kernel_basis(A: Matrix) -> SubspaceBasis:
    """A basis of the kernel lattice ``{v in Z^n : A v = 0}``."""
    snf = smith_normal_form(A)
    V = snf.V
    r = snf.rank
    vecs = tuple(tuple(V.column_vector(j)) for j in range(r, A.ncols))
    return SubspaceBasis(ZZ, A.ncols, vecs)


def integer_solve(A: Matrix, b: Sequence[Any]) -> list[int] | None:
    """An integer solution of ``A x = b`` or ``None`` if there is none."""
    snf = smith_normal_form(A)
    y = snf.U.apply([int(v) for v in b])
    r = snf.rank
    x0 = [0] * A.ncols
    for i, d in enumerate(snf.diagonal):
        if y[i] % d:
            return None
        x0[i] = y[i] // d
    if any(y[i] for i in range(r, A.nrows)):
        return None
    return snf.V.apply(x0)


def lattice_contains(G: Matrix, v: Sequence[Any]) -> bool:
    """Whether ``v`` lies in the integer span of the columns of ``G``."""
    if G.ncols == 0:
        return not any(v)
    return integer_solve(G, v) is not None
