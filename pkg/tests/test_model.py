import itertools

import numpy as np
import pytest

from cayley_contours import DegenerateSpecError, DomainError, ValidationError
from cayley_contours.group import FiniteQuotient, periodic_configuration
from cayley_contours.model import (
    ModelSpec,
    boundary_hamiltonian,
    check_condition9,
    edge_energy,
    edge_sum,
    ground_state_bruteforce,
    lambda0,
    lemma8_check,
    relative_hamiltonian,
    site_field_hamiltonian,
)
from cayley_contours.tree import build_volume

import oracles


def _spec_from_u(k, U):
    """Zero-field spec whose edge table is exactly U."""
    U = np.asarray(U, dtype=float)
    return ModelSpec(k, len(U), U, np.zeros(len(U)))


def test_edge_energy_examples():
    spec = ModelSpec(2, 2, [[0.0, 0.5], [0.5, 0.0]], [1.0, 2.0])
    assert edge_energy(spec, 1, 2) == pytest.approx(1.5)
    assert edge_energy(spec, 2, 1) == edge_energy(spec, 1, 2)
    potts = ModelSpec.potts(2, 3)
    assert np.array_equal(potts.U, -np.eye(3))
    with pytest.raises(DomainError):
        edge_energy(potts, 0, 1)


def test_uniform_field_shifts_table():
    lam = np.array([[0.3, -1.0, 2.0], [-1.0, 0.0, 0.7], [2.0, 0.7, 1.1]])
    spec = ModelSpec(3, 3, lam, [0.8, 0.8, 0.8])
    assert np.allclose(spec.U, lam + 2 * 0.8 / 4, atol=1e-15)


def test_asymmetric_lambda_rejected():
    with pytest.raises(ValidationError, match=r"lambda\[1\]\[2\]"):
        ModelSpec(2, 2, [[0.0, 1.0], [0.5, 0.0]], [0.0, 0.0])
    with pytest.raises(ValidationError):
        ModelSpec(2, 3, np.zeros((2, 2)), np.zeros(3))


def test_boundary_hamiltonian_examples():
    spec = ModelSpec.potts(2, 2)
    vol = build_volume(2, 2)
    omega = np.ones(vol.size, dtype=int)
    sigma = {x: 1 for x in range(vol.interior_size)}
    assert boundary_hamiltonian(spec, vol, sigma, omega) == pytest.approx(21 * spec.U[0, 0])
    sigma[0] = 2
    assert boundary_hamiltonian(spec, vol, sigma, omega) == pytest.approx(-18)
    full = omega.copy()
    full[0] = 2
    assert boundary_hamiltonian(spec, vol, sigma, omega) == pytest.approx(oracles.edge_scan_energy(spec.U, vol, full))
    assert boundary_hamiltonian(spec, vol, {}, omega) == 0
    with pytest.raises(DomainError):
        boundary_hamiltonian(spec, vol, {0: 1}, {1: 1, 2: 1})


def test_site_field_form_differs_by_outer_field_share():
    k, n = 2, 2
    h = np.array([0.4, -0.3, 1.2])
    spec = ModelSpec(k, 3, [[-1, 0.2, 0.1], [0.2, -1, 0.3], [0.1, 0.3, -1]], h)
    vol = build_volume(k, n)
    rng = np.random.default_rng(7)
    for i in (1, 2, 3):
        sigma = rng.integers(1, 4, vol.interior_size)
        omega = np.full(vol.size, i)
        d = site_field_hamiltonian(spec, vol, sigma, omega) - boundary_hamiltonian(spec, vol, sigma, omega)
        # the U form hands h_i/(k+1) to each halo endpoint and takes back the interior share
        interior_share = h[sigma - 1].sum() - sum(
            len(vol.neighbors(x)) * h[sigma[x] - 1] / (k + 1) for x in range(vol.interior_size)
        )
        assert d == pytest.approx(interior_share - len(vol.halo) * h[i - 1] / (k + 1), abs=1e-12)
        assert interior_share == pytest.approx(0, abs=1e-12)


def test_relative_hamiltonian_examples():
    spec = ModelSpec.potts(2, 2)
    vol = build_volume(2, 2)
    phi = np.ones(vol.size, dtype=int)
    sigma = phi.copy()
    sigma[0] = 2
    assert relative_hamiltonian(spec, vol, phi, phi) == 0
    assert relative_hamiltonian(spec, vol, sigma, phi) == pytest.approx(3)
    assert relative_hamiltonian(spec, vol, phi, sigma) == pytest.approx(-3)
    halo = phi.copy()
    halo[vol.halo.start] = 2
    with pytest.raises(DomainError):
        relative_hamiltonian(spec, vol, halo, phi)


def test_relative_hamiltonian_matches_boundary_difference():
    spec = ModelSpec(2, 3, [[-1, 0.5, 0.2], [0.5, -0.7, 0.1], [0.2, 0.1, -1.3]], [0.3, 0.0, -0.4])
    vol = build_volume(2, 3)
    rng = np.random.default_rng(3)
    for _ in range(50):
        phi = rng.integers(1, 4, vol.size)
        sigma = phi.copy()
        D = rng.choice(vol.ball(2), size=3, replace=False)
        sigma[D] = rng.integers(1, 4, 3)
        region = range(vol.ball(2).stop)
        lhs = relative_hamiltonian(spec, vol, sigma, phi)
        rhs = boundary_hamiltonian(spec, vol, {x: sigma[x] for x in region}, phi) - boundary_hamiltonian(
            spec, vol, {x: phi[x] for x in region}, phi
        )
        assert lhs == pytest.approx(rhs, abs=1e-9)
        assert lhs == pytest.approx(edge_sum(spec, vol, sigma) - edge_sum(spec, vol, phi), abs=1e-9)


def test_lambda0_examples():
    assert lambda0(ModelSpec.potts(2, 2)) == 1
    assert lambda0(_spec_from_u(2, [[-2, 0.5], [0.5, -2]])) == pytest.approx(2.5)
    assert lambda0(_spec_from_u(2, [[-2, 1], [1, 0.5]])) == pytest.approx(2.5)
    with pytest.raises(DegenerateSpecError):
        lambda0(_spec_from_u(2, np.full((3, 3), 0.25)))


def test_condition9_examples():
    assert check_condition9(ModelSpec.potts(2, 3))
    fielded = check_condition9(ModelSpec(2, 2, -np.eye(2), [0.1, 0.2]))
    assert not fielded and "U_22" in fielded.violations[0]
    flat = check_condition9(ModelSpec(2, 2, np.zeros((2, 2)), np.zeros(2)))
    assert not flat and "U_12" in flat.violations[0]


def test_ground_state_examples():
    vol = build_volume(2, 2)
    phi = np.ones(vol.size, dtype=int)
    assert ground_state_bruteforce(ModelSpec.potts(2, 2), vol, phi, [0])
    assert ground_state_bruteforce(ModelSpec.potts(2, 2), vol, phi, [])
    anti = _spec_from_u(2, [[0, -1], [-1, 0]])
    verdict = ground_state_bruteforce(anti, vol, phi, [0])
    assert not verdict
    assert verdict.witness[0] == 2 and np.all(verdict.witness[1:] == 1)
    assert verdict.energy_drop == pytest.approx(3)


def test_condition9_gives_constant_ground_states():
    spec = ModelSpec(2, 3, [[-1, 0.2, 0.5], [0.2, -1, 0.1], [0.5, 0.1, -1]], np.zeros(3))
    assert check_condition9(spec)
    vol = build_volume(2, 3)
    for i in (1, 2, 3):
        phi = np.full(vol.size, i)
        for size in (1, 2, 3):
            for D in itertools.combinations(range(vol.interior_size), size):
                assert ground_state_bruteforce(spec, vol, phi, D)


def test_lemma8_examples():
    vol = build_volume(2, 3)
    potts = ModelSpec.potts(2, 2)
    alt = periodic_configuration(vol, FiniteQuotient.parity(2), [1, 2])
    assert lemma8_check(potts, vol, np.ones(vol.size, dtype=int))
    assert not lemma8_check(potts, vol, alt)
    anti = _spec_from_u(2, [[0, -1], [-1, 0]])
    assert lemma8_check(anti, vol, alt)
    assert not lemma8_check(anti, vol, np.ones(vol.size, dtype=int))
