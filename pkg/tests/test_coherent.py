import numpy as np
import pytest

from spinwehrl.coherent import (
    closest_coherent,
    coherent_state,
    completeness_defect,
    husimi,
    overlap_sq,
    state_from_roots,
    stellar_roots,
)
from spinwehrl.errors import QuadratureOrderError
from spinwehrl.quadrature import QuadratureSpec, sphere_nodes
from spinwehrl.su2 import DensityMatrix, PureState, SphereDirection, SpinLabel, geodesic_angle, random_pure, rotate


def test_north_pole_is_highest_weight():
    for tl in range(1, 9):
        psi = coherent_state(SpinLabel(tl), SphereDirection(0.0, 0.0))
        expected = np.zeros(tl + 1)
        expected[0] = 1.0
        assert np.allclose(psi.amplitudes, expected, atol=1e-14)


def test_south_pole_is_lowest_weight():
    psi = coherent_state(SpinLabel(4), SphereDirection(np.pi, 0.0))
    expected = np.zeros(5)
    expected[-1] = 1.0
    assert np.allclose(np.abs(psi.amplitudes), expected, atol=1e-14)


def test_spin_half_explicit_amplitudes():
    # [TRIVIAL] for l = 1/2: (cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{+i phi/2})
    th, ph = 0.7, 1.9
    psi = coherent_state(SpinLabel(1), SphereDirection(th, ph))
    assert psi.amplitudes[0] == pytest.approx(np.cos(th / 2) * np.exp(-1j * ph / 2))
    assert psi.amplitudes[1] == pytest.approx(np.sin(th / 2) * np.exp(1j * ph / 2))


def test_coherent_matches_rotated_highest_weight():
    # dual route: rotate |l,l> by R(Omega) and compare up to overall phase
    rng = np.random.default_rng(0)
    for tl in (1, 2, 5):
        spin = SpinLabel(tl)
        top = np.zeros(spin.dim)
        top[0] = 1.0
        for _ in range(4):
            d = SphereDirection(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            a = coherent_state(spin, d).amplitudes
            b = rotate(PureState(spin, top), d).amplitudes
            assert abs(abs(np.vdot(a, b)) - 1.0) < 1e-12


def test_overlap_sq_formula():
    rng = np.random.default_rng(1)
    for tl in (1, 3, 6):
        spin = SpinLabel(tl)
        for _ in range(5):
            d1 = SphereDirection(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            d2 = SphereDirection(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
            direct = abs(np.vdot(coherent_state(spin, d1).amplitudes,
                                 coherent_state(spin, d2).amplitudes)) ** 2
            assert overlap_sq(spin, d1, d2) == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("tl", [1, 2, 4, 8])
def test_completeness_defect(tl):
    spec = QuadratureSpec(2 * tl + 4, 4 * tl + 4)
    assert completeness_defect(SpinLabel(tl), spec) < 1e-12


def test_completeness_quadrature_guard():
    with pytest.raises(QuadratureOrderError):
        completeness_defect(SpinLabel(8), QuadratureSpec(4, 4))


def test_husimi_normalization_and_range():
    rng = np.random.default_rng(2)
    spin = SpinLabel(5)
    psi = random_pure(spin, rng)
    rho = DensityMatrix(spin, np.outer(psi.amplitudes, psi.amplitudes.conj()))
    thetas, phis, wt, wp = sphere_nodes(QuadratureSpec(16, 24))
    total = 0.0
    for t, w1 in zip(thetas, wt):
        for p in phis:
            q = husimi(rho, SphereDirection(t, p))
            assert 0.0 <= q <= 1.0
            total += spin.dim * q * w1 * wp
    assert total == pytest.approx(1.0, abs=1e-10)


def test_stellar_roots_roundtrip():
    rng = np.random.default_rng(3)
    for tl in (2, 3, 6):
        spin = SpinLabel(tl)
        for _ in range(5):
            psi = random_pure(spin, rng)
            roots = stellar_roots(psi)
            assert len(roots.roots) == tl
            back = state_from_roots(roots)
            assert abs(abs(np.vdot(psi.amplitudes, back.amplitudes)) - 1.0) < 1e-9


def test_stellar_roots_of_coherent_state_coincide():
    # all zeros of a coherent state coincide at its own direction; a root of
    # multiplicity 2l is only resolvable to about eps^(1/2l)
    d = SphereDirection(1.0, 0.5)
    psi = coherent_state(SpinLabel(4), d)
    for r in stellar_roots(psi).roots:
        assert geodesic_angle(r, d) < 1e-3


def test_stellar_roots_lowest_weight_all_south():
    spin = SpinLabel(3)
    v = np.zeros(4)
    v[-1] = 1.0
    for r in stellar_roots(PureState(spin, v)).roots:
        assert r.theta == pytest.approx(np.pi)


def test_closest_coherent_recovers_direction():
    d = SphereDirection(2.0, 4.0)
    psi = coherent_state(SpinLabel(6), d)
    found, fid = closest_coherent(psi)
    assert fid == pytest.approx(1.0, abs=1e-10)
    assert geodesic_angle(found, d) < 1e-4
