import numpy as np
import pytest

from dgader.errors import InadmissibleStateError
from dgader.laws import (
    DEFAULT_EPS, advection_law, blend_to_frontier, burgers_law, euler_law, make_law)


def random_euler_states(rng, n, law):
    rho = rng.uniform(1e-3, 10, n)
    u = rng.uniform(-5, 5, n)
    p = rng.uniform(1e-3, 10, n)
    return law.conserved(rho, u, p)


def fd_jacobian(law, W):
    m = W.size
    J = np.empty((m, m))
    for j in range(m):
        h = 1e-6 * (1 + abs(W[j]))
        e = np.zeros(m)
        e[j] = h
        J[:, j] = (law.flux(W + e) - law.flux(W - e)) / (2 * h)
    return J


@pytest.mark.parametrize("a, u, flux, alpha", [(1, 2, 2, 1), (-3, 0.5, -1.5, 3), (0, 4, 0, 0)])
def test_advection_examples(a, u, flux, alpha):
    law = advection_law(a)
    assert law.flux(np.array([u]))[0] == flux
    assert law.alpha(np.array([u])) == alpha


@pytest.mark.parametrize("u, flux, alpha", [(2, 2, 2), (-1, 0.5, 1), (0, 0, 0)])
def test_burgers_examples(u, flux, alpha):
    law = burgers_law()
    assert law.flux(np.array([u]))[0] == flux
    assert law.alpha(np.array([u])) == alpha


def test_euler_examples():
    law = euler_law(1.4)
    W = law.conserved(1.0, 0.0, 1.0)
    np.testing.assert_allclose(W, [1.0, 0.0, 2.5])
    np.testing.assert_allclose(law.flux(W), [0.0, 1.0, 0.0], atol=1e-15)
    assert law.alpha(W) == pytest.approx(np.sqrt(1.4), abs=1e-15)
    assert law.alpha(law.conserved(1.0, 1.0, 1.0)) == pytest.approx(1 + np.sqrt(1.4), abs=1e-15)
    assert not law.admissible(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(InadmissibleStateError):
        law.alpha(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        euler_law(1.0)


def test_alpha_dominates_jacobian_spectrum(rng):
    for law, states in [
        (advection_law(-1.7), rng.uniform(-10, 10, (1000, 1))),
        (burgers_law(), rng.uniform(-10, 10, (1000, 1))),
        (euler_law(1.4), random_euler_states(rng, 1000, euler_law(1.4))),
    ]:
        for W in states:
            eig = np.linalg.eigvals(fd_jacobian(law, W))
            assert np.max(np.abs(eig.imag)) <= 1e-5
            assert law.alpha(W) >= np.max(np.abs(eig)) - 1e-6


def test_euler_jacobian_eigenvalues_are_u_and_u_pm_c():
    law = euler_law(1.4)
    W = law.conserved(1.0, 1.0, 1.0)
    eig = np.sort(np.linalg.eigvals(fd_jacobian(law, W)).real)
    c = np.sqrt(1.4)
    np.testing.assert_allclose(eig, [1 - c, 1, 1 + c], atol=1e-6)


def test_euler_admissible_set_is_convex(rng):
    law = euler_law(1.4)
    A = random_euler_states(rng, 1000, law)
    B = random_euler_states(rng, 1000, law)
    t = rng.uniform(0, 1, (1000, 1))
    assert np.all(law.admissible(0.5 * (A + B)))
    assert np.all(law.admissible(t * A + (1 - t) * B))


def test_scalar_blend_example():
    law = advection_law(1.0, lower_bound=0.0)
    theta = blend_to_frontier(law, np.array([-0.5]), np.array([1.0]), eps=0.0)
    assert abs(theta - 2 / 3) <= 1e-12


@pytest.mark.parametrize("law, point, mean", [
    (advection_law(1.0, lower_bound=0.0), [0.3], [1.0]),
    (advection_law(1.0, lower_bound=0.0), [1.0], [1.0]),
    (euler_law(), [1.0, 0.2, 2.0], [1.0, 0.0, 2.5]),
    (burgers_law(), [-4.0], [1.0]),
])
def test_blend_trivial_cases(law, point, mean):
    assert blend_to_frontier(law, np.array(point), np.array(mean)) == 1.0


def test_blend_rejects_bad_mean():
    with pytest.raises(InadmissibleStateError):
        blend_to_frontier(euler_law(), np.array([1.0, 0, 1.0]), np.array([-1.0, 0, 1.0]))
    with pytest.raises(InadmissibleStateError):
        blend_to_frontier(advection_law(1.0, 0.0), np.array([1.0]), np.array([-1.0]))


def test_blend_is_maximal(rng):
    law = euler_law(1.4)
    means = random_euler_states(rng, 300, law)
    # push each point outside the set in density, pressure or both
    points = means + rng.normal(0, 3, means.shape) * np.abs(means)
    checked = 0
    for Wp, Wm in zip(points, means):
        theta = blend_to_frontier(law, Wp, Wm)
        blended = theta * Wp + (1 - theta) * Wm
        assert law.admissible_interior(blended, DEFAULT_EPS)
        if theta < 1.0:
            t2 = min(theta + 1e-6, 1.0)
            assert not law.admissible_interior(t2 * Wp + (1 - t2) * Wm, DEFAULT_EPS)
            checked += 1
    assert checked > 50


def test_scalar_blend_is_maximal(rng):
    law = burgers_law(lower_bound=-0.25)
    for _ in range(200):
        mean = np.array([rng.uniform(0, 3)])
        point = np.array([rng.uniform(-5, -0.3)])
        theta = blend_to_frontier(law, point, mean)
        assert law.admissible_interior(theta * point + (1 - theta) * mean)
        t2 = min(theta + 1e-6, 1.0)
        assert not law.admissible_interior(t2 * point + (1 - t2) * mean)


def test_make_law():
    assert make_law("advection", a=2.0).a == 2.0
    assert make_law("euler", gamma=5 / 3).gamma == 5 / 3
    assert make_law("burgers").label == "burgers"
    with pytest.raises(ValueError):
        make_law("maxwell")


def test_vectorized_evaluation():
    law = euler_law()
    W = law.conserved(np.ones((4, 3)), np.zeros((4, 3)), np.ones((4, 3)))
    assert law.flux(W).shape == (4, 3, 3)
    assert law.alpha(W).shape == (4, 3)
    assert law.admissible(W).all()
    fields = law.derived_fields(W)
    np.testing.assert_allclose(fields["pressure"], 1.0)
    np.testing.assert_allclose(fields["velocity"], 0.0)
