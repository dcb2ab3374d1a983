from fractions import Fraction

import pytest

from s1chains.chain_complex import homology, homology_group
from s1chains.errors import RelationError, ValidationError
from s1chains.exact_linear import QQ, ZZ
from s1chains.models import (
    AbelianGroup,
    FillingHomology,
    Orbit,
    OrbitSpectrum,
    acyclic_model,
    check_mu_degeneration,
    model_cbad,
    model_ck,
    random_invariant_pair,
    random_multicomplex,
    random_spectrum,
    sc_from_spectrum,
    sphere_spectrum,
    subcritical_sh,
    tensor_with_BS1,
    vanishing_check,
    verify_pi_iso,
)
from s1chains.s1_complex import equivariant_homology, gysin_les, verify_relations
from s1chains.spectral import check_E2_gysin


def test_circle_model_base_homology():
    for kappa in (1, 4):
        H = homology(model_ck(kappa, QQ).base)
        assert H[0].rank == 1 and H[1].rank == 1


def test_model_ck_rejects_bad_kappa():
    with pytest.raises(ValidationError):
        model_ck(0)


def test_single_good_orbit():
    s = OrbitSpectrum((Orbit("g", 5, 1, True),))
    m = sc_from_spectrum(s)
    H = equivariant_homology(m.plus, 12)
    assert [k for k in H if H[k].rank] == [5]
    assert homology_group(m.inv, 5).rank == 1
    rep = verify_pi_iso(s)
    assert rep.ok


def test_single_bad_orbit():
    s = OrbitSpectrum((Orbit("b", 5, 2, False),))
    m = sc_from_spectrum(s)
    assert equivariant_homology(m.plus, 12).is_zero()
    assert len(m.inv.module) == 0
    rep = verify_pi_iso(s)
    assert rep.ok and rep.rational_quasi_iso


def test_empty_spectrum():
    m = sc_from_spectrum(OrbitSpectrum(()))
    assert len(m.plus.module) == 0 and len(m.inv.module) == 0


def test_mixed_spectrum_rational_pass_integral_fail():
    s = OrbitSpectrum((Orbit("g", 4, 2, True), Orbit("b", 5, 2, False)))
    rep = verify_pi_iso(s)
    assert rep.ok
    assert rep.integral_quasi_iso is False
    assert rep.integral_failure_detected
    # the equivariant side carries Z/2 torsion from the bad circle
    assert any(2 in a for a, _ in rep.integral_torsion.values())


def test_sign_choice_and_conjugate_entries():
    s = OrbitSpectrum(
        (Orbit("x", 5, 2, True), Orbit("y", 4, 4, True)),
        d1=(("x", "y", "3"),),
    )
    m = sc_from_spectrum(s, QQ)
    assert m.epsilon in (-1, 1)
    P = m.plus
    i, j = P.module.index["y_m"], P.module.index["x_m"]
    assert P.phi(0)[i, j] == m.epsilon * 3 * 4 / 2
    c = m.inv_conjugate.differential
    assert c[m.inv_conjugate.module.index["S_y"], m.inv_conjugate.module.index["S_x"]] == 6
    assert m.theta.to_dense() == [[Fraction(1, 4), 0], [0, Fraction(1, 2)]]


def test_non_integral_conjugate_is_rejected_over_Z():
    s = OrbitSpectrum((Orbit("x", 5, 3, True), Orbit("y", 4, 1, True)), d1=(("x", "y", "1"),))
    with pytest.raises(ValidationError):
        sc_from_spectrum(s, ZZ)
    assert sc_from_spectrum(s, QQ).plus is not None


def test_inadmissible_blocks_are_reported():
    # d² block that breaks d² = 0: x_M -> z_m with nothing to cancel A W + W A
    s = OrbitSpectrum(
        (Orbit("x", 6, 1, True), Orbit("y", 5, 1, True), Orbit("z", 4, 1, True)),
        d1=(("x", "y", "1"), ("y", "z", "1")),
    )
    with pytest.raises(RelationError) as err:
        sc_from_spectrum(s)
    assert err.value.k == 0


def test_spectrum_validation():
    with pytest.raises(ValidationError):
        OrbitSpectrum((Orbit("b", 3, 3, False),))
    with pytest.raises(ValidationError):
        OrbitSpectrum((Orbit("a", 3), Orbit("a", 4)))
    with pytest.raises(ValidationError):
        OrbitSpectrum((Orbit("a", 3), Orbit("b", 1)), d1=(("a", "b", "1"),))
    with pytest.raises(ValidationError):
        OrbitSpectrum((Orbit("a", 3, 2, False), Orbit("b", 2)), d1=(("a", "b", "1"),))


@pytest.mark.parametrize("n", [2, 4])
def test_sphere_degrees(n):
    s = sphere_spectrum(n, 15)
    assert [o.degree for o in s.orbits] == list(range(n + 1, 16, 2))
    assert [o.multiplicity for o in s.orbits] == list(range(1, len(s.orbits) + 1))
    m = sc_from_spectrum(s)
    H = equivariant_homology(m.plus, 15)
    assert [k for k in sorted(H) if H[k].rank] == list(range(n + 1, 16, 2))
    assert sphere_spectrum(n, n).orbits == ()


def test_subcritical_examples():
    ball = subcritical_sh(FillingHomology(2, {4: AbelianGroup.make(1)}), 11)
    assert [d for d, g in ball.items() if not g.is_zero()] == [3, 5, 7, 9, 11]
    assert subcritical_sh(FillingHomology(2, {}), 9) == {}
    W = FillingHomology(2, {2: AbelianGroup.make(2), 4: AbelianGroup.make(1)})
    out = subcritical_sh(W, 9)
    assert out[1] == AbelianGroup.make(2)
    assert out[3] == AbelianGroup.make(3)
    assert out[2].is_zero()


def test_tensor_examples():
    out = tensor_with_BS1({2: AbelianGroup.make(1)}, 10)
    assert all(out[d] == (AbelianGroup.make(1) if d % 2 == 0 else AbelianGroup()) for d in range(2, 11))
    assert tensor_with_BS1({}, 10) == {}
    out = tensor_with_BS1({1: AbelianGroup.make(0, [3])}, 9)
    assert [d for d, g in out.items() if g.torsion == (3,)] == [1, 3, 5, 7, 9]


def test_abelian_group_normal_form():
    g = AbelianGroup.make(0, [2, 3])
    assert g.torsion == (6,)
    assert str(AbelianGroup.make(1, [2, 4])) == "Z^1 + Z/2 + Z/4"


def test_random_multicomplex_is_deterministic_and_valid():
    a = random_multicomplex(11)
    b = random_multicomplex(11)
    assert a == b
    assert verify_relations(a).ok
    assert len(a.module) <= 40
    aq = a.change_ring(QQ)
    assert gysin_les(aq, 9).ok and check_E2_gysin(aq, 9).ok


def test_random_multicomplex_corpus_has_higher_operations():
    assert any(random_multicomplex(s).max_index >= 2 for s in range(10))


def test_random_invariant_pair_subset_is_invariant():
    C, sub = random_invariant_pair(5)
    idx = {C.module.index[n] for n in sub}
    for P in C.phis:
        for r, c, _ in P.entries():
            assert not (c in idx and r not in idx)


def test_random_spectrum_admissible():
    for seed in range(15):
        s = random_spectrum(seed)
        assert len(s.orbits) <= 20
        m = sc_from_spectrum(s)
        assert verify_relations(m.plus).ok
        assert check_mu_degeneration(m)


def test_vanishing_examples():
    assert vanishing_check(model_cbad(), 10).ok
    rep = vanishing_check(model_ck(3), 10)
    assert rep.ok and not rep.base_zero and not rep.equivariant_zero
    A = acyclic_model(2)
    assert A.max_index >= 1
    rep = vanishing_check(A, 8)
    assert rep.base_zero and rep.equivariant_zero
