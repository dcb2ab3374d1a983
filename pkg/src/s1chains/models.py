"""Concrete multicomplexes: circle models, orbit-spectrum complexes and random corpora.

The orbit-spectrum complex ``SC⁺`` has two generators per circle ``γ``:
``γ_M`` (named ``"<γ>_M"``, degree ``μ``) and ``γ_m`` (``"<γ>_m"``, degree
``μ + 1``).  Its differential is ``d⁰ + d¹ + d²``:

* ``d⁰ γ_m = 2 γ_M`` for bad circles, zero otherwise;
* ``d¹`` on ``CM`` is user data (good sources only), on good ``γ_m`` it is
  ``ε·K A K⁻¹`` where ``A`` is the good-to-good part and ``K = diag(κ)``;
  bad ``γ_m`` map into good ``γ_m`` by user data;
* ``d²`` sends ``CM`` to ``Cm`` lowering ``μ`` by two.

``φ_1 = Δ`` with ``Δ γ_M = κ γ_m`` for good circles.  The invariant complex
has one generator ``"S_<γ>"`` per good circle with differential ``A``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .chain_complex import (
    ChainComplex,
    ChainMap,
    HomologyResult,
    cone,
    homology,
    homology_group,
    induced_map,
)
from .errors import RelationError, ValidationError
from .exact_linear import QQ, ZZ, Matrix, Ring, column_pivots, smith_normal_form
from .s1_complex import (
    S1Complex,
    _gysin_data,
    conjugate,
    eq_name,
    equivariant,
    equivariant_homology,
    s1_direct_sum,
    verify_relations,
)
from .spectral import FilteredComplex, compute_pages

__all__ = [
    "model_ck",
    "model_cbad",
    "Orbit",
    "OrbitSpectrum",
    "SCModel",
    "sc_from_spectrum",
    "pi_map",
    "PiReport",
    "verify_pi_iso",
    "mu_filtration",
    "check_mu_degeneration",
    "sphere_spectrum",
    "AbelianGroup",
    "FillingHomology",
    "subcritical_sh",
    "tensor_with_BS1",
    "random_multicomplex",
    "random_invariant_pair",
    "random_spectrum",
    "random_gauge",
    "gauge_transform",
    "acyclic_model",
    "VanishingReport",
    "vanishing_check",
]


# ---------------------------------------------------------------------------
# Circle models


def model_ck(kappa: int, ring: Ring = ZZ) -> S1Complex:
    """``Λ(a)`` with ``|a| = 1``, zero differential and ``φ_1(1) = κ a``."""
    if int(kappa) < 1:
        raise ValidationError("kappa must be >= 1")
    return S1Complex.from_entries(ring, [("1", 0), ("a", 1)], [], {1: [("1", "a", int(kappa))]})


def model_cbad(ring: Ring = ZZ) -> S1Complex:
    """``Λ(a)`` with ``∂a = 2`` and no higher operations."""
    return S1Complex.from_entries(ring, [("1", 0), ("a", 1)], [("a", "1", 2)])


# ---------------------------------------------------------------------------
# Orbit spectra


@dataclass(frozen=True)
class Orbit:
    name: str
    degree: int
    multiplicity: int = 1
    good: bool = True


Entry = tuple[str, str, Any]


@dataclass(frozen=True)
class OrbitSpectrum:
    """Circles plus optional block data given as ``(source, target, coefficient)``.

    ``d1``: ``γ_M -> γ'_M`` (good sources), ``d2``: ``γ_M -> γ'_m``,
    ``d1_bad_m``: bad ``γ_m`` -> good ``γ'_m``.
    """

    orbits: tuple[Orbit, ...]
    d1: tuple[Entry, ...] = ()
    d2: tuple[Entry, ...] = ()
    d1_bad_m: tuple[Entry, ...] = ()

    def __post_init__(self) -> None:
        names = [o.name for o in self.orbits]
        if len(set(names)) != len(names):
            raise ValidationError("orbit names must be unique")
        for o in self.orbits:
            if o.multiplicity < 1:
                raise ValidationError(f"orbit {o.name}: multiplicity must be >= 1")
            if not o.good and o.multiplicity % 2:
                raise ValidationError(f"bad orbit {o.name} must have even multiplicity")
        by = {o.name: o for o in self.orbits}
        for label, entries, drop in (("d1", self.d1, 1), ("d2", self.d2, 2), ("d1_bad_m", self.d1_bad_m, 1)):
            for s, t, _ in entries:
                if s not in by or t not in by:
                    raise ValidationError(f"{label}: unknown orbit in entry {s} -> {t}")
                if by[t].degree != by[s].degree - drop:
                    raise ValidationError(f"{label}: entry {s} -> {t} must lower the degree by {drop}")
        for s, t, _ in self.d1:
            if not by[s].good:
                raise ValidationError(f"d1: source {s} is bad, but d1 vanishes on bad maxima")
        for s, t, _ in self.d1_bad_m:
            if by[s].good or not by[t].good:
                raise ValidationError(f"d1_bad_m: entry {s} -> {t} must go from a bad to a good orbit")

    def orbit(self, name: str) -> Orbit:
        for o in self.orbits:
            if o.name == name:
                return o
        raise KeyError(name)

    @property
    def good(self) -> list[Orbit]:
        return [o for o in self.orbits if o.good]

    @property
    def max_degree(self) -> int:
        return max((o.degree for o in self.orbits), default=0)


@dataclass
class SCModel:
    spectrum: OrbitSpectrum
    plus: S1Complex
    inv: ChainComplex
    inv_conjugate: ChainComplex  # ∂' = Θ⁻¹ ∂ Θ over Q
    epsilon: int
    pi: ChainMap  # from the equivariant complex of ``plus`` (default truncation)

    @property
    def theta(self) -> Matrix:
        """``Θ(S_γ) = S_γ / κ_γ`` on the invariant generators (over Q)."""
        kap = {o.name: o.multiplicity for o in self.spectrum.orbits}
        vals = [Fraction(1, kap[n[2:]]) for n in self.inv.module.names()]
        return Matrix.diagonal(QQ, vals)


def _plus_complex(s: OrbitSpectrum, ring: Ring, eps: int) -> S1Complex:
    gens = []
    for o in s.orbits:
        gens.append((f"{o.name}_M", o.degree))
        gens.append((f"{o.name}_m", o.degree + 1))
    kap = {o.name: o.multiplicity for o in s.orbits}
    good = {o.name: o.good for o in s.orbits}
    d = []
    for o in s.orbits:
        if not o.good:
            d.append((f"{o.name}_m", f"{o.name}_M", 2))
    for src, tgt, c in s.d1:
        c = QQ(QQ.parse(c) if isinstance(c, str) else c)
        d.append((f"{src}_M", f"{tgt}_M", c))
        if good[tgt]:
            conj = eps * Fraction(c) * kap[tgt] / kap[src]
            if ring is ZZ and Fraction(conj).denominator != 1:
                raise ValidationError(
                    f"conjugated entry {src} -> {tgt} is {conj}, not integral; use rational coefficients"
                )
            d.append((f"{src}_m", f"{tgt}_m", conj))
    for src, tgt, c in s.d1_bad_m:
        d.append((f"{src}_m", f"{tgt}_m", c))
    for src, tgt, c in s.d2:
        d.append((f"{src}_M", f"{tgt}_m", c))
    delta = [(f"{o.name}_M", f"{o.name}_m", o.multiplicity) for o in s.orbits if o.good]
    return S1Complex.from_entries(ring, gens, d, {1: delta}, check=False)


def _inv_complexes(s: OrbitSpectrum, ring: Ring) -> tuple[ChainComplex, ChainComplex]:
    good = {o.name: o for o in s.orbits if o.good}
    gens = [(f"S_{o.name}", o.degree) for o in good.values()]
    entries = []
    conj = []
    for src, tgt, c in s.d1:
        if tgt in good:
            c = QQ(QQ.parse(c) if isinstance(c, str) else c)
            entries.append((f"S_{src}", f"S_{tgt}", c))
            conj.append((f"S_{src}", f"S_{tgt}", Fraction(c) * good[tgt].multiplicity / good[src].multiplicity))
    inv = ChainComplex.from_entries(ring, gens, entries)
    invc = ChainComplex.from_entries(QQ, gens, conj)
    return inv, invc


def pi_map(plus: S1Complex, inv: ChainComplex, max_degree: int) -> ChainMap:
    """``Π: 1 ⊗ γ_M ↦ S_γ`` for good ``γ``, every other generator to zero."""
    E = equivariant(plus, max_degree)
    entries = []
    for name in inv.module.names():
        src = eq_name(0, name[2:] + "_M")
        if src in E.complex.module.index:
            entries.append((src, name, 1))
    return ChainMap.from_entries(E.complex, inv, 0, entries)  # type: ignore[return-value]


def sc_from_spectrum(s: OrbitSpectrum, ring: Ring = QQ) -> SCModel:
    """Build ``SC⁺``, the invariant complex and ``Π`` and verify every invariant.

    The sign ``ε`` of ``d¹`` on good minima is the first of ``-1, +1`` for
    which the multicomplex relations hold.
    """
    failures = {}
    plus = None
    eps_found = 0
    for eps in (-1, 1):
        cand = _plus_complex(s, ring, eps)
        rep = verify_relations(cand)
        if rep.ok:
            plus, eps_found = cand, eps
            break
        failures[eps] = rep.first_failure
    if plus is None:
        if all(k == 0 for k in failures.values()):
            raise RelationError("d squared is not zero for either sign of d1 on good minima", 0)
        raise RelationError("Delta does not anticommute with d for either sign of d1 on good minima", 1)
    plus._valid = True
    inv, invc = _inv_complexes(s, ring)
    top = s.max_degree + 2
    pi = pi_map(plus, inv, top)
    return SCModel(s, plus, inv, invc, eps_found, pi)


# ---------------------------------------------------------------------------
# Π verification


@dataclass
class PiReport:
    max_degree: int
    epsilon: int
    chain_map: bool
    rational_quasi_iso: bool
    ranks: dict[int, tuple[int, int]]  # degree -> (dim H^S1(SC⁺), dim H(SC^inv)) over Q
    first_square: dict[int, bool]
    middle_square: dict[int, bool]
    third_square: dict[int, bool]
    integral_quasi_iso: bool | None
    integral_torsion: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            self.chain_map
            and self.rational_quasi_iso
            and all(self.first_square.values())
            and all(self.middle_square.values())
            and all(self.third_square.values())
        )

    @property
    def integral_failure_detected(self) -> bool:
        """The integral check failed and torsion differs on the two sides."""
        if self.integral_quasi_iso is not False:
            return False
        return any(a != b for a, b in self.integral_torsion.values())


def _cone_acyclic(f: ChainMap, lo: int, hi: int) -> bool:
    Cf, _ = cone(f)
    return all(homology_group(Cf, k).is_zero() for k in range(lo - 1, hi + 1))


def _in_column_span(M: Matrix, v: Sequence[Any]) -> bool:
    if not any(v):
        return True
    if M.ncols == 0:
        return False
    aug = Matrix.from_columns(M.ring, M.columns() + [list(v)], M.nrows)
    return M.ncols not in column_pivots(aug)


def verify_pi_iso(s: OrbitSpectrum, max_degree: int | None = None) -> PiReport:
    """Check that ``Π`` is a chain map and a rational quasi-isomorphism, and check the
    three squares relating the Gysin sequence of ``SC⁺`` to the invariant side.

    Square checks use rational coefficients:

    * first: ``F Π I z`` and the good-maximum part of a cycle ``z`` agree in ``H(SC^inv)``;
    * third: ``B c`` and ``i F' Θ⁻¹ Π c`` agree in ``H(SC⁺)``;
    * middle: ``d̄² F Π c + F' Θ⁻¹ Π S c`` is a boundary of ``(Cm^good, d¹)``.

    The integral quasi-isomorphism is tested with a cone over ``Z`` when the
    model is defined over the integers.
    """
    if max_degree is None:
        max_degree = s.max_degree + 3
    model = sc_from_spectrum(s, QQ)
    plus, inv = model.plus, model.inv
    pi = pi_map(plus, inv, max_degree)
    chain_ok = pi.commutator().is_zero()
    degs = [o.degree for o in s.orbits]
    lo = min(degs) if degs else 0
    window = range(lo, max_degree + 1)
    Htil = equivariant_homology(plus, max_degree)
    ranks = {k: (Htil[k].dim if k in Htil else 0, homology_group(inv, k).dim) for k in window}
    quasi = _cone_acyclic(pi, lo, max_degree) and all(
        m.is_isomorphism() for m in induced_map(pi, window).values()
    )

    g = _gysin_data(plus, max_degree)
    Y = g.tilde.complex
    Xb = g.base
    kap = {o.name: o.multiplicity for o in s.orbits}
    good = {o.name for o in s.orbits if o.good}
    pidx = plus.module.index

    def good_M_part(vec_by_name: Mapping[str, Any], k: int) -> list[Any]:
        return [vec_by_name.get(n[2:] + "_M", 0) for n in inv.module.names(k)]

    def as_names(C: ChainComplex, k: int, vec: Sequence[Any]) -> dict[str, Any]:
        return {n: v for n, v in zip(C.module.names(k), vec) if v}

    first = {}
    for k in window:
        Hk = homology_group(Xb, k)
        Hinv = homology_group(inv, k)
        ok = True
        for z in Hk.representatives:
            Iz = g.I.block(k).apply(list(z))
            path1 = pi.block(k).apply(Iz)
            path2 = good_M_part(as_names(Xb, k, z), k)
            diff = [a - b for a, b in zip(path1, path2)]
            if any(Hinv.coordinates(diff)):
                ok = False
        first[k] = ok

    # third square: H^S1_m -> SH_(m+1) along B versus i F' Θ⁻¹ Π
    third = {}
    for m in range(lo, max_degree):
        Hm = homology_group(Y, m)
        Htgt = homology_group(Xb, m + 1)
        ok = True
        for c in Hm.representatives:
            Bc = g.B.block(m + 2).apply(list(c))
            piC = pi.block(m).apply(list(c))
            other = [0] * Xb.dim(m + 1)
            for name, v in zip(inv.module.names(m), piC):
                if v:
                    other[Xb.module.local_index(name[2:] + "_m")] += v * kap[name[2:]]
            diff = [a - b for a, b in zip(Bc, other)]
            if any(Htgt.coordinates(diff)):
                ok = False
        third[m] = ok

    # middle square
    cm_names = [f"{o.name}_m" for o in s.orbits if o.good]
    cm_good = plus.base.restrict(cm_names)
    D = plus.base.differential
    middle = {}
    for k in window:
        Hk = homology_group(Y, k)
        ok = True
        for c in Hk.representatives:
            x = [0] * len(plus.module)
            for name, v in zip(inv.module.names(k), pi.block(k).apply(list(c))):
                if v:
                    x[pidx[name[2:] + "_M"]] = v
            dx = D.apply(x)
            beta = [0] * len(plus.module)
            for o in s.orbits:
                if not o.good and o.degree == k - 1:
                    val = dx[pidx[f"{o.name}_M"]]
                    if val:
                        beta[pidx[f"{o.name}_m"]] = -Fraction(val) / 2
            y = D.apply([a + b for a, b in zip(x, beta)])
            if any(y[pidx[f"{o.name}_M"]] for o in s.orbits):
                ok = False
            if any(y[pidx[f"{o.name}_m"]] for o in s.orbits if not o.good):
                ok = False
            Sc = g.S.block(k).apply(list(c))
            top = pi.block(k - 2).apply(Sc) if k - 2 >= lo else []
            total = {n: y[pidx[n]] for n in cm_names if plus.module.degree_of(n) == k - 1}
            for name, v in zip(inv.module.names(k - 2), top):
                if v:
                    key = name[2:] + "_m"
                    total[key] = total.get(key, 0) + v * kap[name[2:]]
            vec = [total.get(n, 0) for n in cm_good.module.names(k - 1)]
            if not _in_column_span(cm_good.boundary(k), vec):
                ok = False
        middle[k] = ok

    integral = None
    torsion = {}
    try:
        mz = sc_from_spectrum(s, ZZ)
    except ValidationError:
        mz = None
    if mz is not None:
        piz = pi_map(mz.plus, mz.inv, max_degree)
        integral = _cone_acyclic(piz, lo, max_degree)
        Hz = equivariant_homology(mz.plus, max_degree)
        for k in window:
            torsion[k] = (Hz[k].torsion if k in Hz else (), homology_group(mz.inv, k).torsion)
    return PiReport(
        max_degree, model.epsilon, chain_ok, quasi, ranks, first, middle, third, integral, torsion
    )


# ---------------------------------------------------------------------------
# μ-filtration


def mu_filtration(model: SCModel) -> FilteredComplex:
    """Filtration of ``SC⁺`` by ``μ`` (both generators of a circle at level ``μ - min μ``)."""
    plus = model.plus
    if not plus.ring.is_field:
        plus = plus.change_ring(QQ)
    mus = {f"{o.name}_{t}": o.degree for o in model.spectrum.orbits for t in "Mm"}
    base = min(mus.values(), default=0)
    return FilteredComplex(plus.base, {n: mu - base for n, mu in mus.items()})


def check_mu_degeneration(model: SCModel) -> bool:
    """Pages live on the lines ``q ∈ {0, 1}`` (in ``μ`` units) and ``E³ = E⁴``."""
    F = mu_filtration(model)
    if not len(F.complex.module):
        return True
    shift = min(o.degree for o in model.spectrum.orbits)
    pages = compute_pages(F, 4, None, with_differentials=False)
    for page in pages:
        for (p, q), d in page.dims.items():
            qq = q - shift
            if d and qq not in (0, 1):
                return False
    return pages[2].dims == pages[3].dims


# ---------------------------------------------------------------------------
# Sphere, subcritical and BS¹ formulas


def sphere_spectrum(n: int, degree_cutoff: int) -> OrbitSpectrum:
    """Good circles ``c<k>`` of degree ``n + 1 + 2k <= cutoff`` and multiplicity ``k + 1``."""
    if n < 2:
        raise ValidationError("n must be >= 2")
    orbits = []
    k = 0
    while n + 1 + 2 * k <= degree_cutoff:
        orbits.append(Orbit(f"c{k}", n + 1 + 2 * k, k + 1, True))
        k += 1
    return OrbitSpectrum(tuple(orbits))


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank ⊕ ⊕ Z/t`` with torsion in invariant-factor form."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    @classmethod
    def make(cls, rank: int = 0, torsion: Iterable[int] = ()) -> "AbelianGroup":
        tors = [int(t) for t in torsion if int(t) != 1]
        if any(t <= 0 for t in tors):
            raise ValidationError("torsion orders must be positive")
        if tors:
            snf = smith_normal_form(Matrix.diagonal(ZZ, tors))
            tors = [d for d in snf.diagonal if d != 1]
        return cls(int(rank), tuple(tors))

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.make(self.rank + other.rank, self.torsion + other.torsion)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


ZERO = AbelianGroup()


@dataclass(frozen=True)
class FillingHomology:
    """Relative homology ``H_*(W, ∂W)`` of a filling of half-dimension ``n``."""

    n: int
    groups: Mapping[int, AbelianGroup]

    def group(self, d: int) -> AbelianGroup:
        return self.groups.get(d, ZERO)


def _graded_sum(h: Mapping[int, AbelianGroup], offsets: Iterable[int], d: int) -> AbelianGroup:
    acc = ZERO
    for off in offsets:
        acc = acc + h.get(d - off, ZERO)
    return acc


def tensor_with_BS1(h: Mapping[int, AbelianGroup], max_degree: int) -> dict[int, AbelianGroup]:
    """``out_d = ⊕_(l >= 0) h_(d - 2l)`` for ``d <= max_degree``."""
    nz = [d for d, g in h.items() if not g.is_zero()]
    if not nz:
        return {}
    lo = min(nz)
    out = {}
    for d in range(lo, max_degree + 1):
        out[d] = _graded_sum(h, range(0, d - lo + 1, 2), d)
    return out


def subcritical_sh(f: FillingHomology, max_degree: int) -> dict[int, AbelianGroup]:
    """``out_* = ⊕_(k >= 0) H_(* + n - 1 - 2k)(W, ∂W)``."""
    shifted = {d - (f.n - 1): g for d, g in f.groups.items()}
    return tensor_with_BS1(shifted, max_degree)


# ---------------------------------------------------------------------------
# Random corpora


def _unimodular(rng: random.Random, module_gens: Sequence[tuple[str, int]], allowed=None, steps: int = 3):
    """Random degree-preserving unimodular ``P`` and its inverse as dense lists."""
    n = len(module_gens)
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Pi = [[int(i == j) for j in range(n)] for i in range(n)]
    by_deg: dict[int, list[int]] = {}
    for i, (_, d) in enumerate(module_gens):
        by_deg.setdefault(d, []).append(i)
    for idx in by_deg.values():
        if len(idx) < 2:
            continue
        for _ in range(steps * len(idx)):
            i, j = rng.sample(idx, 2)
            if allowed is not None and not allowed(i, j):
                continue
            c = rng.choice([-2, -1, 1, 2])
            # P <- E P with E = I + c e_i e_j^T ; P^{-1} <- P^{-1} E^{-1}
            P[i] = [a + c * b for a, b in zip(P[i], P[j])]
            for row in Pi:
                row[j] -= c * row[i]
    for i in range(n):
        if rng.random() < 0.3:
            P[i] = [-v for v in P[i]]
            for row in Pi:
                row[i] = -row[i]
    return P, Pi


def gauge_transform(C: S1Complex, Phi1: Matrix) -> S1Complex:
    """``ψ(t) = Φ(t) φ(t) Φ(t)⁻¹`` with ``Φ(t) = 1 + Φ_1 t`` and ``Φ_1`` of degree 2."""
    ring = C.ring
    n = len(C.module)
    ident = Matrix.identity(ring, n)
    inv_terms = [ident]
    neg = -Phi1
    while True:
        nxt = inv_terms[-1] @ neg
        if nxt.is_zero():
            break
        inv_terms.append(nxt)
    Phi_terms = [ident, Phi1]
    top = len(C.phis) - 1 + 1 + len(inv_terms) - 1
    psi = []
    for k in range(top + 1):
        acc = Matrix.zeros(ring, n, n)
        for a in range(min(k, 1) + 1):
            for b in range(min(k - a, len(C.phis) - 1) + 1):
                c = k - a - b
                if c < len(inv_terms):
                    acc = acc + Phi_terms[a] @ C.phis[b] @ inv_terms[c]
        psi.append(acc)
    return S1Complex(C.module, psi, check=False)


def random_gauge(rng: random.Random, C: S1Complex, allowed=None, density: float = 0.15) -> Matrix:
    """A random integer ``Φ_1`` of degree 2 (entries restricted by ``allowed(i, j)``)."""
    gens = C.module.generators
    entries = []
    for j, (_, dj) in enumerate(gens):
        for i, (_, di) in enumerate(gens):
            if di == dj + 2 and rng.random() < density:
                if allowed is None or allowed(i, j):
                    entries.append((i, j, rng.choice([-1, 1, 2])))
    return Matrix.from_entries(C.ring, len(gens), len(gens), entries)


def _small_spectrum_block(rng: random.Random, max_degree: int) -> S1Complex:
    s = random_spectrum(rng.randrange(1 << 30), max_circles=3, max_kappa=4, min_degree=0, max_degree=max(1, max_degree - 1))
    return sc_from_spectrum(s, ZZ).plus


def _random_block(rng: random.Random, max_degree: int, kinds: Sequence[str]) -> tuple[S1Complex, list[str]]:
    """One summand plus the names of an invariant subset of it."""
    kind = rng.choice(list(kinds))
    if kind == "ck":
        B = model_ck(rng.randint(1, 6)).shift(rng.randint(0, max_degree - 1))
        sub = rng.choice([[], ["a"], ["1", "a"]])
    elif kind == "cbad":
        B = model_cbad().shift(rng.randint(0, max_degree - 1))
        sub = rng.choice([[], ["1"], ["1", "a"]])
    elif kind == "point":
        d = rng.randint(0, max_degree)
        B = S1Complex.from_entries(ZZ, [("x", d)])
        sub = rng.choice([[], ["x"]])
    elif kind == "acyclic":
        d = rng.randint(0, max_degree - 1)
        B = S1Complex.from_entries(ZZ, [("x", d + 1), ("y", d)], [("x", "y", 1)])
        sub = rng.choice([[], ["y"], ["x", "y"]])
    else:
        B = _small_spectrum_block(rng, max_degree)
        mus = sorted({d for _, d in B.module.generators})
        cut = rng.choice(mus)
        # generators of one circle share μ; keep circles with μ below the cut
        names = B.module.names()
        sub = [n for n in names if B.module.degree_of(n[:-1] + "M") < cut]
    return B, sub


def _assemble(rng: random.Random, max_generators: int, max_degree: int, kinds: Sequence[str]):
    parts: list[S1Complex] = []
    subs: list[list[str]] = []
    total = 0
    target = rng.randint(4, max_generators)
    while total < target:
        B, sub = _random_block(rng, max_degree, kinds)
        if total + len(B.module) > max_generators:
            if parts:
                break
            continue
        parts.append(B)
        subs.append(sub)
        total += len(B.module)
    prefixes = [f"b{i}." for i in range(len(parts))]
    C = s1_direct_sum(parts, prefixes)
    sub_names = frozenset(p + n for p, sub in zip(prefixes, subs) for n in sub)
    return C, sub_names


def _conjugated(rng: random.Random, C: S1Complex, sub: frozenset[str] | None, gauge: bool) -> S1Complex:
    gens = C.module.generators
    allowed = None
    if sub is not None:
        inside = {C.module.index[n] for n in sub}

        def allowed(i: int, j: int) -> bool:
            # the image of a subset generator must stay in the subset span
            return not (j in inside and i not in inside)

    P, Pi = _unimodular(rng, gens, allowed)
    Pm = Matrix.from_rows(C.ring, P, len(gens))
    Pim = Matrix.from_rows(C.ring, Pi, len(gens))
    D = conjugate(C, Pm, Pim)
    if gauge and rng.random() < 0.7:
        D = gauge_transform(D, random_gauge(rng, D, allowed))
    D.require_valid()
    return D


KINDS = ("ck", "cbad", "point", "acyclic", "spectrum")


def random_multicomplex(
    seed: int,
    max_generators: int = 40,
    max_degree: int = 6,
    ring: Ring = ZZ,
    gauge: bool = True,
    kinds: Sequence[str] = KINDS,
) -> S1Complex:
    """Direct sum of random blocks conjugated by a random unimodular change of basis.

    With ``gauge`` the result is further transformed by ``1 + Φ_1 t``, which
    typically produces a nonzero ``φ_2``.  Relations are re-verified.
    """
    rng = random.Random(seed)
    C, _ = _assemble(rng, max_generators, max_degree, kinds)
    D = _conjugated(rng, C, None, gauge)
    return D if ring is ZZ else D.change_ring(ring)


def random_invariant_pair(
    seed: int,
    max_generators: int = 24,
    max_degree: int = 5,
    ring: Ring = ZZ,
) -> tuple[S1Complex, frozenset[str]]:
    """A random multicomplex with a subset of generators spanning an invariant subcomplex."""
    rng = random.Random(seed)
    C, sub = _assemble(rng, max_generators, max_degree, KINDS)
    D = _conjugated(rng, C, sub, True)
    return (D if ring is ZZ else D.change_ring(ring)), sub


def acyclic_model(seed: int, pairs: int = 3, max_degree: int = 5) -> S1Complex:
    """Conjugated sum of ``x -> y`` pairs (``pairs >= 3``) with a gauge-induced ``φ_1 = Φ_1 ∂ - ∂ Φ_1``."""
    if pairs < 3:
        raise ValidationError("acyclic_model needs at least three pairs")
    rng = random.Random(seed)
    parts = []
    base = rng.randint(0, max(0, max_degree - pairs))
    for i in range(pairs):
        # consecutive degrees leave room for a degree-2 gauge between pairs
        d = base + i
        parts.append(S1Complex.from_entries(ZZ, [("x", d + 1), ("y", d)], [("x", "y", 1)]))
    C = s1_direct_sum(parts, [f"p{i}." for i in range(pairs)])
    D = _conjugated(rng, C, None, False)
    for _ in range(100):
        out = gauge_transform(D, random_gauge(rng, D, density=0.6))
        if out.max_index >= 1:
            return out
    raise ValidationError("could not produce a nonzero phi_1; the pair degrees leave no room")


def random_spectrum(
    seed: int,
    max_circles: int = 20,
    max_kappa: int = 6,
    min_degree: int = 1,
    max_degree: int = 8,
) -> OrbitSpectrum:
    """A random admissible spectrum with nontrivial ``d¹``, ``d²`` and bad-orbit blocks.

    Good circles are split into sources and targets of ``A = N K`` (so that
    ``A² = 0`` and the conjugate is integral); ``d²`` on good circles is
    ``K (A W + W A)``; bad circles either receive ``d¹`` from good maxima or
    emit ``d¹`` into good minima, with even coefficients and the ``d²`` blocks
    those choices force.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_circles)
    orbits = []
    for i in range(n):
        bad = rng.random() < 0.3 and max_kappa >= 2
        if bad:
            kappa = rng.choice([k for k in range(2, max_kappa + 1, 2)])
        else:
            kappa = rng.randint(1, max_kappa)
        orbits.append(Orbit(f"g{i}", rng.randint(min_degree, max_degree), kappa, not bad))
    good = [o for o in orbits if o.good]
    bad = [o for o in orbits if not o.good]
    role = {o.name: rng.random() < 0.5 for o in good}  # True: source
    kap = {o.name: o.multiplicity for o in orbits}
    N: dict[tuple[str, str], int] = {}
    for s in good:
        for t in good:
            if role[s.name] and not role[t.name] and t.degree == s.degree - 1 and rng.random() < 0.5:
                v = rng.choice([-2, -1, 1, 2])
                N[(s.name, t.name)] = v
    A = {(s, t): v * kap[s] for (s, t), v in N.items()}
    W = {}
    for s in good:
        for t in good:
            if t.degree == s.degree - 1 and rng.random() < 0.3:
                W[(s.name, t.name)] = rng.choice([-1, 1])

    def compose(f: Mapping, g: Mapping) -> dict:
        """``f ∘ g`` for maps stored as ``{(source, target): value}``."""
        out: dict = {}
        for (a, b), v in g.items():
            for (c, d), w in f.items():
                if c == b:
                    out[(a, d)] = out.get((a, d), 0) + v * w
        return {k: v for k, v in out.items() if v}

    X = compose(A, W)
    for k, v in compose(W, A).items():
        X[k] = X.get(k, 0) + v
    d2 = {(s, t): kap[t] * v for (s, t), v in X.items() if v}
    receivers = [o for o in bad if rng.random() < 0.5]
    emitters = [o for o in bad if o not in receivers]
    G = {}
    for s in good:
        for t in receivers:
            if t.degree == s.degree - 1 and rng.random() < 0.4:
                G[(s.name, t.name)] = 2 * rng.choice([-1, 1])
    E = {}
    for s in emitters:
        for t in good:
            if t.degree == s.degree - 1 and rng.random() < 0.4:
                E[(s.name, t.name)] = 2 * rng.choice([-1, 1])
    # d²: good M -> bad m is -G A / 2 ; bad M -> good m is K N E / 2
    for k, v in compose(G, A).items():
        d2[k] = d2.get(k, 0) - v // 2
    KN = {(s, t): kap[t] * v for (s, t), v in N.items()}
    for k, v in compose(KN, E).items():
        d2[k] = d2.get(k, 0) + v // 2
    d1 = sorted([(s, t, str(v)) for (s, t), v in A.items()] + [(s, t, str(v)) for (s, t), v in G.items()])
    return OrbitSpectrum(
        tuple(orbits),
        tuple(d1),
        tuple(sorted((s, t, str(v)) for (s, t), v in d2.items() if v)),
        tuple(sorted((s, t, str(v)) for (s, t), v in E.items())),
    )


# ---------------------------------------------------------------------------
# Vanishing


@dataclass
class VanishingReport:
    base_zero: bool
    equivariant_zero: bool

    @property
    def ok(self) -> bool:
        return self.base_zero == self.equivariant_zero


def vanishing_check(C: S1Complex, max_degree: int) -> VanishingReport:
    """Whether ``H(C)`` and ``H^S1(C)`` vanish together in degrees ``<= max_degree``."""
    if not C.ring.is_field:
        C = C.change_ring(QQ)
    lo = C.module.min_degree
    if lo is None:
        return VanishingReport(True, True)
    base = homology(C.base, range(lo, max_degree + 1))
    eq = equivariant_homology(C, max_degree)
    return VanishingReport(base.is_zero(), eq.is_zero())
