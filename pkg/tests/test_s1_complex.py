import random

import pytest

from oracles import integer_homology
from s1chains.chain_complex import homology, induced_map
from s1chains.errors import ChainMapError, RelationError, ValidationError
from s1chains.exact_linear import GF, QQ, ZZ, Matrix
from s1chains.models import (
    gauge_transform,
    model_cbad,
    model_ck,
    random_gauge,
    random_invariant_pair,
    random_multicomplex,
)
from s1chains.s1_complex import (
    S1ChainMap,
    S1Complex,
    S1Homotopy,
    conjugate,
    eq_name,
    equivariant,
    equivariant_homology,
    gysin_les,
    gysin_maps,
    mixed_complex_check,
    quotient,
    s1_direct_sum,
    tilde_map,
    verify_relations,
)


def test_relations_trivial_and_circle_models():
    C = S1Complex.from_entries(ZZ, [("x", 1), ("y", 0)], [("x", "y", 3)])
    assert verify_relations(C).ok
    assert verify_relations(model_ck(4)).ok
    assert verify_relations(model_cbad()).ok


def test_broken_phi_fails_at_k2():
    # a degree-2 generator b receiving Δa makes φ_1² nonzero
    bad = S1Complex.from_entries(
        ZZ, [("1", 0), ("a", 1), ("b", 2)], [], {1: [("1", "a", 3), ("a", "b", 1)]}, check=False
    )
    rep = verify_relations(bad)
    assert not rep.ok and rep.first_failure == 2
    with pytest.raises(RelationError) as err:
        bad.require_valid()
    assert err.value.k == 2


def test_phi_degree_is_validated():
    with pytest.raises(ValidationError):
        S1Complex.from_entries(ZZ, [("x", 0), ("y", 0)], [], {1: [("x", "y", 1)]})


def test_trivial_structure_equivariant_homology_is_sum_of_shifts():
    C = S1Complex.from_entries(QQ, [("a", 0), ("b", 1), ("c", 1), ("d", 2)], [("b", "a", 1)])
    H = homology(C.base)
    Ht = equivariant_homology(C, 10)
    for n in range(0, 11):
        expect = sum(H[n - 2 * l].rank for l in range(0, n // 2 + 1) if (n - 2 * l) in H)
        assert Ht[n].rank == expect


@pytest.mark.parametrize("kappa", [1, 3, 7])
def test_circle_model_rational(kappa):
    H = equivariant_homology(model_ck(kappa, QQ), 20)
    assert [k for k in range(21) if H[k].rank] == [0]
    assert H[0].rank == 1


def test_circle_model_integral_against_two_term_oracle():
    kappa = 3
    H = equivariant_homology(model_ck(kappa), 20)
    # explicit equivariant complex: one generator per degree, ∂ = ×κ from even to odd degree
    dims = {n: 1 for n in range(0, 22)}
    bnd = {n: [[kappa if n % 2 == 0 else 0]] for n in range(1, 22)}
    expect = integer_homology(dims, bnd)
    for n in range(0, 21):
        assert (H[n].rank, list(H[n].torsion)) == expect[n]
    assert H[1].torsion == (3,) and H[2].is_zero() and H[3].torsion == (3,)


def test_bad_model_three_rings():
    HQ = equivariant_homology(model_cbad(QQ), 20)
    assert HQ.is_zero()
    HZ = equivariant_homology(model_cbad(), 20)
    for n in range(0, 21):
        assert HZ[n].torsion == ((2,) if n % 2 == 0 else ())
        assert HZ[n].rank == 0
    HF = equivariant_homology(model_cbad(GF(2)), 20)
    E = equivariant(model_cbad(GF(2)), 20).complex
    dims = {n: len(E.module.names(n)) for n in range(0, 21)}
    assert all(HF[n].dim == dims[n] == 1 for n in range(0, 21))


def test_gysin_maps_formulas():
    I, S, B = gysin_maps(model_ck(5), 6)
    Z = B.source
    Bm = {(Z.module.names()[j], B.target.module.names()[i]): v for i, j, v in B.matrix.entries()}
    assert Bm == {(eq_name(0, "1"), "a"): 5}
    Y = S.source
    Sm = {(Y.module.names()[j], Y.module.names()[i]): v for i, j, v in S.matrix.entries()}
    assert Sm[(eq_name(1, "a"), eq_name(0, "a"))] == 1
    assert all(src != eq_name(0, "a") and src != eq_name(0, "1") for src, _ in Sm)
    trivial = S1Complex.from_entries(ZZ, [("x", 0)], [])
    assert gysin_maps(trivial, 6)[2].matrix.is_zero()


@pytest.mark.parametrize("C", [model_ck(3, QQ), model_cbad(QQ), model_cbad(ZZ), model_ck(2, ZZ)])
def test_gysin_sequence_exact(C):
    rep = gysin_les(C, 12)
    assert rep.exact and rep.ok


def test_gysin_random_models_over_Z_and_F3():
    for seed in range(8):
        C = random_multicomplex(seed, max_generators=14)
        assert gysin_les(C, 8).ok
        assert gysin_les(C.change_ring(GF(3)), 8).ok


def test_tilde_map_identity_and_pure_higher_component():
    C = model_ck(2)
    n = len(C.module)
    Id = S1ChainMap(C, C, [Matrix.identity(ZZ, n)])
    T = tilde_map(Id, 6)
    assert T.matrix == Matrix.identity(ZZ, len(T.source.module))
    # Φ_0 = 0, Φ_1 = f: u^l x ↦ u^(l-1) f(x); a map 1 -> a of degree 2 needs a degree-2 target
    D = S1Complex.from_entries(ZZ, [("x", 0), ("y", 2)], [])
    f1 = Matrix.from_entries(ZZ, 2, 2, [(D.module.index["y"], D.module.index["x"], 1)])
    Phi = S1ChainMap(D, D, [Matrix.zeros(ZZ, 2, 2), f1])
    T = tilde_map(Phi, 6)
    names_s, names_t = T.source.module.names(), T.target.module.names()
    got = {(names_s[j], names_t[i]) for i, j, _ in T.matrix.entries()}
    assert (eq_name(1, "x"), eq_name(0, "y")) in got
    assert all(not s.startswith("u^0*") for s, _ in got)


def _homotopy_pair(seed):
    """``Ψ = Φ - (hφ + ψh)`` for a gauge isomorphism ``Φ`` and a random ``h``."""
    rng = random.Random(seed)
    C = random_multicomplex(seed, max_generators=12, max_degree=5, gauge=False)
    Phi1 = random_gauge(rng, C, density=0.3)
    D = gauge_transform(C, Phi1)
    D.require_valid()
    n = len(C.module)
    Phi = S1ChainMap(C, D, [Matrix.identity(ZZ, n), Phi1])
    gens = C.module.generators
    hs = []
    for i in range(2):
        ent = [
            (r, c, rng.choice([-1, 1]))
            for c, (_, dc) in enumerate(gens)
            for r, (_, dr) in enumerate(gens)
            if dr == dc + 2 * i + 1 and rng.random() < 0.3
        ]
        hs.append(Matrix.from_entries(ZZ, n, n, ent))
    top = max(len(Phi.components), len(hs) + max(C.max_index, D.max_index)) + 1
    comps = []
    for k in range(top):
        acc = Phi.component(k)
        for i in range(min(k, len(hs) - 1) + 1):
            acc = acc - (hs[i] @ C.phi(k - i) + D.phi(k - i) @ hs[i])
        comps.append(acc)
    Psi = S1ChainMap(C, D, comps)
    return Phi, Psi, S1Homotopy(Phi, Psi, hs)


@pytest.mark.parametrize("seed", range(5))
def test_homotopic_maps_induce_equal_maps(seed):
    Phi, Psi, _ = _homotopy_pair(seed)
    a = induced_map(tilde_map(Phi, 8), range(0, 9))
    b = induced_map(tilde_map(Psi, 8), range(0, 9))
    for k in a:
        assert a[k] == b[k]
        # Φ is an isomorphism of multicomplexes, so Φ̃ is a quasi-isomorphism
        if k <= 8:
            assert a[k].is_isomorphism()


def test_s1_map_validation():
    C = model_ck(2)
    with pytest.raises(ChainMapError):
        S1ChainMap(C, model_ck(3), [Matrix.identity(ZZ, 2)])


def test_quotient_empty_and_circle_sum():
    C = s1_direct_sum([model_ck(2, QQ), model_ck(3, QQ)], ["p.", "q."])
    res = quotient(C, [], 6)
    assert res.grid.ok
    assert len(res.quotient.module) == len(C.module)
    res = quotient(C, ["p.1", "p.a"], 6)
    assert res.grid.ok


def test_quotient_rejects_non_invariant_subset():
    C = model_ck(2)
    with pytest.raises(ValidationError):
        quotient(C, ["1"], 4)


@pytest.mark.parametrize("seed", range(4))
def test_grid_on_random_pairs_with_nonzero_groups(seed):
    C, sub = random_invariant_pair(seed, max_generators=14)
    res = quotient(C, sub, 6)
    assert res.grid.ok
    anti = [s for s in res.grid.squares if s.kind == "anticommute"]
    assert anti and all(s.ok for s in anti)


def test_mixed_complex_check():
    assert mixed_complex_check(model_ck(3))
    assert mixed_complex_check(model_cbad())
    C = random_multicomplex(1)
    assert mixed_complex_check(C) == (C.max_index < 2)
    phi2 = S1Complex.from_entries(ZZ, [("x", 0), ("y", 3)], [], {2: [("x", "y", 1)]})
    assert not mixed_complex_check(phi2)


def test_conjugation_preserves_equivariant_homology():
    C = s1_direct_sum([model_ck(2), model_cbad()], ["p.", "q."])
    gens = C.module.generators
    n = len(gens)
    i0, i1 = C.module.index["p.1"], C.module.index["q.1"]
    P = Matrix.identity(ZZ, n) + Matrix.from_entries(ZZ, n, n, [(i0, i1, 1)])
    D = conjugate(C, P)
    assert verify_relations(D).ok
    a, b = equivariant_homology(C, 8), equivariant_homology(D, 8)
    assert all(a[k].describe() == b[k].describe() for k in a)
