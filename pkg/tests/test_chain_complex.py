import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import integer_homology
from s1chains.chain_complex import (
    ChainComplex,
    ChainMap,
    ShortExactSequence,
    cone,
    connecting_map,
    direct_sum,
    homology,
    homology_group,
    induced_map,
    is_quasi_isomorphism,
    les_from_ses,
    shift,
)
from s1chains.errors import ChainMapError, NotAComplexError, ValidationError
from s1chains.exact_linear import QQ, ZZ, Matrix


def times_two(ring=ZZ):
    return ChainComplex.from_entries(ring, [("x", 1), ("y", 0)], [("x", "y", 2)])


def test_times_two_integral_and_rational():
    H = homology(times_two())
    assert H[0].torsion == (2,) and H[0].rank == 0
    assert H[1].is_zero()
    HQ = homology(times_two(QQ))
    assert HQ.is_zero()


def test_zero_differential_homology_is_chains():
    C = ChainComplex.from_entries(ZZ, [("a", 0), ("b", 0), ("c", 3)], [])
    H = homology(C)
    assert H[0].rank == 2 and H[3].rank == 1


def test_rejects_non_complex():
    with pytest.raises(NotAComplexError):
        ChainComplex.from_entries(ZZ, [("x", 2), ("y", 1), ("z", 0)], [("x", "y", 1), ("y", "z", 1)])
    with pytest.raises(ValidationError):
        ChainComplex.from_entries(ZZ, [("x", 2), ("y", 0)], [("x", "y", 1)])


@st.composite
def random_integer_complexes(draw):
    """Two-stage complexes ``C_2 -> C_1 -> C_0`` with ``∂∂ = 0`` built as ``∂_1 = A``, ``∂_2 = K B``."""
    n0, n1, n2 = draw(st.integers(1, 3)), draw(st.integers(1, 4)), draw(st.integers(1, 3))
    ent = st.integers(-3, 3)
    A = [[draw(ent) for _ in range(n1)] for _ in range(n0)]
    M = Matrix.from_rows(ZZ, A)
    from s1chains.exact_linear import integer_kernel_basis

    K = integer_kernel_basis(M).vectors
    if K:
        B = [[draw(ent) for _ in range(n2)] for _ in range(len(K))]
        D2 = [[sum(K[t][i] * B[t][j] for t in range(len(K))) for j in range(n2)] for i in range(n1)]
    else:
        D2 = [[0] * n2 for _ in range(n1)]
    return n0, n1, n2, A, D2


@settings(max_examples=80, deadline=None)
@given(random_integer_complexes())
def test_integer_homology_matches_oracle(data):
    n0, n1, n2, A, D2 = data
    gens = [(f"a{i}", 0) for i in range(n0)] + [(f"b{i}", 1) for i in range(n1)] + [(f"c{i}", 2) for i in range(n2)]
    entries = [(f"b{j}", f"a{i}", A[i][j]) for i in range(n0) for j in range(n1) if A[i][j]]
    entries += [(f"c{j}", f"b{i}", D2[i][j]) for i in range(n1) for j in range(n2) if D2[i][j]]
    C = ChainComplex.from_entries(ZZ, gens, entries)
    expect = integer_homology({0: n0, 1: n1, 2: n2}, {1: A, 2: D2})
    H = homology(C)
    for k, (free, tors) in expect.items():
        assert H[k].rank == free
        assert list(H[k].torsion) == tors


def test_homology_projector_reduces_boundaries_to_zero():
    C = times_two()
    g = homology_group(C, 0)
    assert g.coordinates([2]) == [0]
    assert g.coordinates([1]) == [1]


def test_shift_rules():
    C = times_two()
    assert shift(C, 0).module.generators == C.module.generators
    S = shift(C, 1)
    assert dict(S.module.generators) == {"x": 0, "y": -1}
    y, x = S.module.index["y"], S.module.index["x"]
    assert list(S.differential.entries()) == [(y, x, -2)]
    assert shift(shift(C, 2), 2).differential == shift(C, 4).differential
    H, HS = homology(C), homology(shift(C, 3))
    assert HS[-3].torsion == H[0].torsion


def test_cone_of_identity_is_acyclic():
    A = ChainComplex.from_entries(ZZ, [("z", 0)], [])
    Cf, _ = cone(A.identity())
    assert homology(Cf).is_zero()


def test_cone_of_zero_map_is_direct_sum():
    A = times_two()
    B = ChainComplex.from_entries(ZZ, [("p", 0), ("q", 2)], [])
    f = ChainMap.from_entries(A, B, 0, [])
    Cf, _ = cone(f)
    H = homology(Cf)
    HA, HB = homology(A), homology(B)
    for k in range(-1, 3):
        expect_rank = (HA[k].rank if k in HA else 0) + (HB[k + 1].rank if k + 1 in HB else 0)
        expect_tors = sorted((HA[k].torsion if k in HA else ()) + (HB[k + 1].torsion if k + 1 in HB else ()))
        got = H[k] if k in H else None
        assert (got.rank if got else 0) == expect_rank
        assert sorted(got.torsion if got else ()) == expect_tors


def test_cone_of_times_two_puts_torsion_one_degree_down():
    A = ChainComplex.from_entries(ZZ, [("a", 0)], [])
    B = ChainComplex.from_entries(ZZ, [("b", 0)], [])
    f = ChainMap.from_entries(A, B, 0, [("a", "b", 2)])
    Cf, ses = cone(f)
    assert dict(Cf.module.generators) == {"B[1].b": -1, "A.a": 0}
    H = homology(Cf)
    assert H[-1].torsion == (2,)
    assert H[0].is_zero()
    # the connecting map of 0 -> B[1] -> C(f) -> A -> 0 is f_* = ×2
    delta = connecting_map(ses, 0)
    assert delta.matrix.to_dense() == [[2]]
    assert les_from_ses(ses, range(-1, 1)).exact


def test_connecting_map_of_split_sequence_is_zero():
    X = times_two(QQ)
    Z = ChainComplex.from_entries(QQ, [("w", 1), ("v", 0)], [])
    Y = direct_sum([X, Z], ["X.", "Z."])
    u = ChainMap.from_entries(X, Y, 0, [(n, "X." + n, 1) for n in X.module.names()])
    v = ChainMap.from_entries(Y, Z, 0, [("Z." + n, n, 1) for n in Z.module.names()])
    s = ShortExactSequence(u, v)
    for k in range(0, 3):
        assert connecting_map(s, k).is_zero()


def test_zero_subcomplex_gives_isomorphism():
    X = ChainComplex.from_entries(QQ, [], [])
    Y = ChainComplex.from_entries(QQ, [("a", 0), ("b", 1)], [])
    u = ChainMap.from_entries(X, Y, 0, [])
    v = ChainMap.from_entries(Y, Y, 0, [("a", "a", 1), ("b", "b", 1)])
    s = ShortExactSequence(u, v)
    assert connecting_map(s, 1).is_zero()
    assert all(m.is_isomorphism() for m in induced_map(v, [0, 1]).values())


def test_short_exact_sequence_validation():
    X = ChainComplex.from_entries(ZZ, [("a", 0)], [])
    Y = ChainComplex.from_entries(ZZ, [("a", 0)], [])
    u = ChainMap.from_entries(X, Y, 0, [("a", "a", 2)])
    v = ChainMap.from_entries(Y, X, 0, [])
    with pytest.raises(ValidationError):
        ShortExactSequence(u, v)


def test_induced_maps():
    C = ChainComplex.from_entries(ZZ, [("z", 0)], [])
    assert induced_map(C.identity(), [0])[0].matrix.to_dense() == [[1]]
    f3 = ChainMap.from_entries(C, C, 0, [("z", "z", 3)])
    assert induced_map(f3, [0])[0].matrix.to_dense() == [[3]]
    assert induced_map(ChainMap.from_entries(C, C, 0, []), [0])[0].is_zero()
    assert not is_quasi_isomorphism(f3)
    CQ = C.change_ring(QQ)
    assert is_quasi_isomorphism(ChainMap.from_entries(CQ, CQ, 0, [("z", "z", 3)]))


def test_chain_map_validation():
    A = times_two()
    with pytest.raises(ChainMapError):
        ChainMap.from_entries(A, A, 0, [("x", "x", 1)])


def test_les_exactness_on_random_cones():
    rng = random.Random(3)
    for _ in range(10):
        A = ChainComplex.from_entries(QQ, [("a", 1), ("b", 0)], [("a", "b", rng.choice([0, 1, 2]))])
        f = ChainMap.from_entries(A, A, 0, [])
        Cf, ses = cone(f)
        assert les_from_ses(ses, range(-1, 3)).exact
