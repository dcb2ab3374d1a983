import pytest

from s1chains.chain_complex import ChainComplex
from s1chains.errors import UnsupportedRingError, ValidationError
from s1chains.exact_linear import GF, QQ, ZZ
from s1chains.models import model_cbad, model_ck, random_multicomplex
from s1chains.s1_complex import S1Complex, equivariant_homology
from s1chains.spectral import (
    FilteredComplex,
    check_convergence,
    check_E2_gysin,
    check_page_consistency,
    compute_pages,
    infinity_page,
    u_filtration,
)


def test_circle_model_pages():
    C = model_ck(3, QQ)
    F = u_filtration(C, 10)
    E1, E2, E3 = compute_pages(F, 3, (0, 10))
    # E² = Q at even p, q ∈ {0, 1}
    assert {k for k, v in E2.nonzero().items()} == {(p, q) for p in range(0, 11, 2) for q in (0, 1) if p + q <= 10}
    for p in range(2, 10, 2):
        d = E2.differentials[(p, 0)]
        assert d.to_dense() == [[3]]
    assert E3.nonzero() == {(0, 0): 1}
    assert infinity_page(F, (0, 10)).nonzero() == {(0, 0): 1}
    assert check_page_consistency([E1, E2, E3])


def test_trivial_structure_degenerates_at_E2():
    C = S1Complex.from_entries(QQ, [("a", 0), ("b", 1), ("c", 1)], [("b", "a", 1)])
    F = u_filtration(C, 8)
    pages = compute_pages(F, 4, (0, 8))
    assert pages[1].dims == pages[3].dims
    assert all(M.is_zero() for M in pages[1].differentials.values())


def test_bad_model_mod_two():
    C = model_cbad(GF(2))
    F = u_filtration(C, 10)
    pages = compute_pages(F, 2, (0, 10))
    inf = infinity_page(F, (0, 10))
    assert pages[1].dims == inf.dims
    conv = check_convergence(C, 10)
    assert conv.ok and all(a == 1 for a, _ in conv.totals.values())


def test_E2_checks_on_models():
    rep = check_E2_gysin(model_ck(5, QQ), 10)
    assert rep.ok
    assert rep.table[(0, 0)] == (1, 1) and rep.table[(0, 1)] == (1, 1)
    rep = check_E2_gysin(model_cbad(QQ), 10)
    assert rep.ok and all(a == 0 for a, _ in rep.table.values())


def test_convergence_of_circle_model():
    conv = check_convergence(model_ck(3, QQ), 12)
    assert conv.ok
    assert conv.totals[0] == (1, 1)
    assert all(conv.totals[n] == (0, 0) for n in range(1, 13))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("p", [None, 5])
def test_random_models_E2_and_convergence(seed, p):
    ring = QQ if p is None else GF(p)
    C = random_multicomplex(seed, max_generators=16).change_ring(ring)
    assert check_E2_gysin(C, 9).ok
    assert check_convergence(C, 9).ok
    F = u_filtration(C, 9)
    assert check_page_consistency(compute_pages(F, 4, (C.module.min_degree, 9)))


def test_filtration_validation():
    C = ChainComplex.from_entries(QQ, [("x", 1), ("y", 0)], [("x", "y", 1)])
    with pytest.raises(ValidationError):
        FilteredComplex(C, {"x": 0, "y": 1})
    with pytest.raises(ValidationError):
        FilteredComplex(C, [0])
    with pytest.raises(UnsupportedRingError):
        FilteredComplex(C.change_ring(ZZ), [0, 0])
    with pytest.raises(UnsupportedRingError):
        u_filtration(model_ck(2), 4)


def test_generic_filtration_pages_converge_to_homology():
    # two-step filtration of x -> y: E¹ has both, d¹ kills them
    C = ChainComplex.from_entries(QQ, [("x", 1), ("y", 0), ("z", 0)], [("x", "y", 1)])
    F = FilteredComplex(C, {"x": 1, "y": 0, "z": 0})
    E1, E2 = compute_pages(F, 2)
    assert E1.dims[(1, 0)] == 1 and E1.dims[(0, 0)] == 2
    assert E2.nonzero() == {(0, 0): 1}
