import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from s1chains.errors import ValidationError
from s1chains import join_morse as jm


def test_join_coords_examples():
    t, tau = jm.join_coords([1, 0, 0])
    assert list(t) == [1, 0, 0] and tau[0] == 0 and tau[1] is None
    t, tau = jm.join_coords([0, 1j])
    assert list(t) == [0, 1] and tau[1] == pytest.approx(0.25, abs=1e-15)


def test_join_roundtrip():
    rng = np.random.default_rng(0)
    for _ in range(200):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        z /= np.linalg.norm(z)
        t, tau = jm.join_coords(z)
        assert np.max(np.abs(jm.join_inverse(t, tau) - z)) < 1e-12


def test_join_rejects_non_unit():
    with pytest.raises(ValidationError):
        jm.join_coords([1, 1])


def _gradient_rhs(a):
    a = np.asarray(a, dtype=float)

    def rhs(_, y):
        n = len(y) // 2
        z = y[:n] + 1j * y[n:]
        f = float(np.dot(a, np.abs(z) ** 2))
        dz = 2 * (a - f) * z
        return np.concatenate([dz.real, dz.imag])

    return rhs


def test_morse_flow_matches_ode_integration():
    a = [1.0, 2.0]
    z0 = np.array([1, 1], dtype=complex) / math.sqrt(2)
    ts = np.linspace(0, 10, 41)
    sol = solve_ivp(_gradient_rhs(a), (0, 10), np.concatenate([z0.real, z0.imag]), t_eval=ts, rtol=1e-12, atol=1e-13)
    values = []
    for k, t in enumerate(ts):
        ode = sol.y[:2, k] + 1j * sol.y[2:, k]
        closed = jm.morse_flow(z0, a, t)
        assert np.max(np.abs(ode - closed)) < 1e-8
        values.append(jm.morse_value(closed, a))
    assert values[0] == pytest.approx(1.5)
    assert all(b >= c for c, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(2.0, abs=1e-6)


def test_morse_flow_fixed_points_and_support():
    a = [0.0, 1.0, 3.0]
    Z1 = np.array([0, 1j, 0])
    assert np.allclose(jm.morse_flow(Z1, a, 7.0), Z1)
    z = np.array([0.6, 0, 0.8j])
    w = jm.morse_flow(z, a, 0.3)
    assert w[1] == 0 and abs(np.linalg.norm(w) - 1) < 1e-12
    with pytest.raises(ValidationError):
        jm.morse_flow(z, [1, 1, 2], 0.1)


def test_rho_moment_limits_and_simplex():
    a = [1.0, 2.0]
    const = jm.rho_moment([0, 1], a)
    assert np.allclose(const(-3), [0, 1]) and np.allclose(const(5), [0, 1])
    rho = jm.rho_moment(np.array([1, 1]) / math.sqrt(2), a)
    assert np.allclose(rho(-40), [0, 1], atol=1e-12)
    assert np.allclose(rho(40), [1, 0], atol=1e-12)
    samples = rho.sample(np.linspace(-10, 10, 201))
    assert jm.simplex_residual(samples) < 1e-12


def test_beta_profile():
    assert jm.beta(-1) == 0 and jm.beta(0) == 0 and jm.beta(1) == 1 and jm.beta(3) == 1
    assert jm.beta(0.5) == pytest.approx(0.5)
    xs = np.linspace(0, 1, 101)
    vals = [jm.beta(x) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_rho_explicit_examples():
    p = jm.rho_explicit(2, jm.GluingParams((0.0, 0.0), (2.0,)))
    assert list(p(-5)) == [0, 0, 1]
    assert list(p(10)) == [1, 0, 0]
    t = p(0.5)
    assert t[0] == 0 and t[1] == pytest.approx(jm.beta(0.5)) and t[2] == pytest.approx(1 - jm.beta(0.5))
    assert sum(t) == pytest.approx(1, abs=1e-15)


def test_rho_explicit_partition_of_unity():
    rng = np.random.default_rng(4)
    for N in (1, 2, 3, 5):
        L = tuple(float(x) for x in rng.uniform(0, 3, size=N - 1))
        p = jm.rho_explicit(N, jm.GluingParams(tuple([0.0] * N), L))
        assert jm.simplex_residual(p.sample(rng.uniform(-3, 15, size=300))) < 1e-12
    with pytest.raises(ValidationError):
        jm.GluingParams((0.0, 0.0), (-1.0,))


def test_gluing_family():
    assert jm.check_gluing(1).ok
    rep = jm.check_gluing(2, [1, 2, 3], (2, 3, 4, 5, 6), window=5.0)
    assert rep.decreasing and rep.distances[-1] < 1e-3 and rep.ok


def test_explicit_gluing_telescopes():
    d = jm.check_explicit_gluing(2, [20.0, 40.0])
    assert max(d) < 1e-12


def _H(theta, x):
    return math.cos(2 * math.pi * theta) * x[0] + x[1] ** 2


def test_gradient_formula_examples():
    rng = np.random.default_rng(2)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    z /= np.linalg.norm(z)
    assert jm.grad_HN0_check(_H, z, 0.3, [0.4, -1.2]).ok
    # θ-independent H: no iz term, f̃-type gradient with a_j = H
    Hx = lambda th, x: x[0] * 2.0  # noqa: E731
    g = jm.grad_HN0(Hx, 0.1, [1.5], z)
    assert np.allclose(g, 0)
    const = jm.grad_HN0(lambda th, x: 4.0, 0.0, [0.0], z)
    assert np.allclose(const, 0)
    with pytest.raises(ValidationError):
        jm.grad_HN0(_H, 0.0, [0, 0], np.array([1, 0, 0], dtype=complex))


def test_strata_examples():
    r = jm.strata(1, 0)
    assert r.interior_dimension == 1 and len(r.strata) == 1
    r = jm.strata(3, 0)
    assert r.interior_dimension == 5
    codim1 = {(s.chain, s.dimension) for s in r.codimension(1)}
    assert codim1 == {((3, 2, 0), 4), ((3, 1, 0), 4)}
    assert [(s.chain, s.dimension) for s in r.codimension(2)] == [((3, 2, 1, 0), 3)]
    r = jm.strata(2, 0)
    assert r.interior_dimension == 3 and [s.dimension for s in r.codimension(1)] == [2]
    with pytest.raises(ValidationError):
        jm.strata(1, 1)
