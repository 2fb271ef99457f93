import numpy as np
import pytest

from spinwehrl.entropy import entropy_of_spectrum
from spinwehrl.majorize import (
    majorizes,
    minimize_entropy,
    schur_concave_check,
    worst_majorization_violation,
)
from spinwehrl.su2 import SpinLabel


def test_majorizes_basic():
    assert majorizes([0.5, 0.5], [0.5, 0.5])
    assert majorizes([1.0, 0.0], [0.5, 0.5])
    assert not majorizes([0.5, 0.5], [1.0, 0.0])
    # unsorted input is sorted internally
    assert majorizes([0.0, 1.0], [0.5, 0.5])


def test_majorizes_handles_unequal_lengths():
    assert majorizes([1.0], [0.5, 0.3, 0.2])
    assert not majorizes([0.4, 0.3, 0.3], [0.6, 0.4])


def test_majorizes_trace_mismatch():
    with pytest.raises(ValueError):
        majorizes([0.7, 0.2], [0.5, 0.5])


def test_worst_violation_sign():
    assert worst_majorization_violation([1.0, 0.0], [0.5, 0.5]) <= 0
    assert worst_majorization_violation([0.5, 0.5], [0.8, 0.2]) == pytest.approx(0.3)


def test_schur_concavity_of_entropy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.dirichlet(np.ones(4))
        b = rng.dirichlet(np.ones(4))
        if majorizes(a, b):
            assert schur_concave_check(entropy_of_spectrum, a, b)


def test_minimize_wehrl_spin_half():
    # smallest case: every pure state is coherent, minimum 2l/(2l+1) = 1/2
    res = minimize_entropy(SpinLabel(1), "wehrl", restarts=4, seed=0)
    assert res.best_value == pytest.approx(0.5, abs=1e-6)
    assert res.coherent_fidelity == pytest.approx(1.0, abs=1e-9)
    assert res.converged


def test_minimize_wehrl_spin_one():
    res = minimize_entropy(SpinLabel(2), "wehrl", restarts=8, seed=1)
    assert res.best_value == pytest.approx(2.0 / 3.0, abs=1e-6)
    assert res.coherent_fidelity >= 1 - 1e-6


def test_minimize_projection_objective():
    res = minimize_entropy(SpinLabel(2), ("projection", SpinLabel(2)), restarts=6, seed=2)
    assert res.converged
    # minimum should be attained on (numerically) coherent states
    assert res.coherent_fidelity >= 1 - 1e-5


def test_minimize_guard():
    with pytest.raises(ValueError):
        minimize_entropy(SpinLabel(10), "wehrl")
