"""Entropy functionals: von Neumann, POVM, Wehrl, closed forms, Renyi moments.

The Wehrl integral is evaluated by Gauss-Legendre x uniform-phi quadrature
with node doubling until successive values agree to the requested tolerance.
Integer Renyi moments are polynomial integrands, so they are integrated
exactly at a quadrature order derived from the degree; the same moments are
also available through projection onto the maximum-spin part of rho^(x)n,
which serves as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np
from scipy.special import xlogy

from .coherent import amplitude_grid, stellar_roots
from .errors import ConvergenceError, QuadratureOrderError, ResourceGuardError
from .quadrature import QuadratureSpec
from .su2 import (
    EIGENVALUE_CLAMP,
    DensityMatrix,
    PureState,
    SphereDirection,
    SpinLabel,
    coupling_isometry,
    geodesic_angle,
)

#: Calibrated scale of the "squared chordal distance" entering the spin-1 and
#: spin-3/2 closed forms: mu = CHORDAL_SCALE * sin^2(Theta/2) for geodesic
#: angle Theta, i.e. the chordal distance on a Bloch sphere of radius 1/2.
#: The domain constraint 1/c = 1 - mu/2 > 0 rules out larger radii; the value
#: is pinned by matching the quadrature route on random spin-1 states.
CHORDAL_SCALE = 1.0

MAX_N_THETA = 4096


@dataclass(frozen=True)
class ChordalData:
    """Squared chordal distances between stellar roots (1 value for spin 1,
    3 values for spin 3/2)."""

    values: tuple

    def __post_init__(self):
        for v in self.values:
            if v < -1e-12:
                raise ValueError(f"negative squared distance {v}")


def clamped_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Descending eigenvalues with PSD noise in [-1e-12, 0) clamped to 0."""
    vals = np.linalg.eigvalsh(matrix)[::-1]
    if np.min(vals) < -EIGENVALUE_CLAMP:
        raise ValueError(f"eigenvalue {np.min(vals)} below the -1e-12 clamp window")
    return np.maximum(vals, 0.0)


def entropy_of_spectrum(vals: np.ndarray) -> float:
    """Shannon entropy -sum x ln x with x ln x := 0 at x = 0."""
    vals = np.asarray(vals, dtype=float)
    pos = vals[vals > 0]
    return float(-np.sum(pos * np.log(pos)))


def von_neumann(rho: DensityMatrix) -> float:
    return entropy_of_spectrum(clamped_spectrum(rho.matrix))


def povm_entropy(rho: DensityMatrix, effects) -> float:
    """Shannon entropy of the outcome distribution p_n = tr(rho E_n)."""
    total = sum(np.asarray(e, dtype=complex) for e in effects)
    if np.max(np.abs(total - np.eye(rho.spin.dim))) > 1e-10:
        raise ValueError("effects do not sum to the identity within 1e-10")
    probs = []
    for e in effects:
        e = np.asarray(e, dtype=complex)
        if np.min(np.linalg.eigvalsh((e + e.conj().T) / 2)) < -1e-10:
            raise ValueError("effect is not positive semidefinite")
        probs.append(max(np.trace(rho.matrix @ e).real, 0.0))
    return entropy_of_spectrum(np.array(probs))


def _husimi_on_grid(rho: DensityMatrix, V: np.ndarray) -> np.ndarray:
    f = np.einsum("ni,ij,nj->n", V.conj(), rho.matrix, V).real
    return np.clip(f, 0.0, 1.0)


def _wehrl_fixed(rho: DensityMatrix, spec: QuadratureSpec) -> float:
    V, w = amplitude_grid(rho.spin, spec)
    f = _husimi_on_grid(rho, V)
    flnf = xlogy(f, f)
    return float(-rho.spin.dim * np.sum(w * flnf))


def _starting_spec(twice_l: int, spec: QuadratureSpec | None) -> QuadratureSpec:
    if spec is not None:
        return spec
    return QuadratureSpec(max(32, 2 * twice_l + 2), max(64, 4 * twice_l + 4))


def wehrl(rho: DensityMatrix, spec: QuadratureSpec | None = None) -> float:
    """Wehrl entropy -(2l+1) \\int dOmega/4pi rho(Omega) ln rho(Omega)."""
    spec = _starting_spec(rho.spin.twice_l, spec)
    prev = _wehrl_fixed(rho, spec)
    while True:
        spec = spec.doubled()
        if spec.n_theta > MAX_N_THETA:
            raise ConvergenceError(f"Wehrl quadrature did not converge below tol={spec.tol}")
        cur = _wehrl_fixed(rho, spec)
        if abs(cur - prev) < spec.tol:
            return cur
        prev = cur


def wehrl_pure(psi: PureState, spec: QuadratureSpec | None = None) -> float:
    return wehrl(psi.density(), spec)


_BATCH_NODE_BUDGET = 32 * 2 ** 20  # max grid-nodes x states processed at once


def wehrl_pure_batch(l: SpinLabel, amplitudes: np.ndarray,
                     spec: QuadratureSpec | None = None) -> np.ndarray:
    """Wehrl entropies of many pure states at once; rows of `amplitudes` are
    unit vectors.

    Each doubling level builds its grid once and streams all not-yet-converged
    states through it in column blocks sized to a fixed node-times-states
    budget; states drop out of the loop as soon as they converge."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    n = len(amplitudes)
    spec = _starting_spec(l.twice_l, spec)

    def level(s: QuadratureSpec, amps: np.ndarray) -> np.ndarray:
        V, w = amplitude_grid(l, s)
        block = max(1, _BATCH_NODE_BUDGET // len(w))
        vals = np.empty(len(amps))
        for i in range(0, len(amps), block):
            f = np.abs(V.conj() @ amps[i:i + block].T) ** 2  # (nodes, block)
            vals[i:i + block] = -l.dim * (w @ xlogy(f, f))
        return vals

    prev = level(spec, amplitudes)
    result = np.empty(n)
    alive = np.arange(n)
    while alive.size:
        spec = spec.doubled()
        if spec.n_theta > MAX_N_THETA:
            raise ConvergenceError(f"Wehrl quadrature did not converge below tol={spec.tol}")
        cur = level(spec, amplitudes[alive])
        done = np.abs(cur - prev[alive]) < spec.tol
        result[alive[done]] = cur[done]
        prev[alive] = cur
        alive = alive[~done]
    return result


def chordal_sq(a: SphereDirection, b: SphereDirection) -> float:
    """Squared chordal distance in the calibrated convention (radius 1/2)."""
    return float(CHORDAL_SCALE * np.sin(geodesic_angle(a, b) / 2) ** 2)


def chordal_data(psi: PureState) -> ChordalData:
    """Pairwise squared chordal distances between the stellar roots of psi."""
    roots = stellar_roots(psi).roots
    n = len(roots)
    vals = tuple(chordal_sq(roots[i], roots[j]) for i in range(n) for j in range(i + 1, n))
    return ChordalData(vals)


def wehrl_closed(spin: SpinLabel, chordal: ChordalData) -> float:
    """Closed-form Wehrl entropy for spin 1 (one distance mu) and spin 3/2
    (three distances eps, mu, nu)."""
    if spin.twice_l == 2:
        if len(chordal.values) != 1:
            raise ValueError("spin 1 needs exactly one squared distance")
        (mu,) = chordal.values
        inv_c = 1.0 - mu / 2.0
        if inv_c <= 0:
            raise ValueError("1/c <= 0: squared distance violates the calibrated convention")
        c = 1.0 / inv_c
        return 2.0 / 3.0 + c * (mu / 2.0 + inv_c * log(inv_c))
    if spin.twice_l == 3:
        if len(chordal.values) != 3:
            raise ValueError("spin 3/2 needs exactly three squared distances")
        eps, mu, nu = chordal.values
        e1 = (eps + mu + nu) / 3.0
        e2 = (eps * mu + eps * nu + mu * nu) / 6.0
        inv_c = 1.0 - e1
        if inv_c <= 0:
            raise ValueError("1/c <= 0: squared distances violate the calibrated convention")
        c = 1.0 / inv_c
        return 3.0 / 4.0 + c * (e1 - e2 + inv_c * log(inv_c))
    raise ValueError(f"closed form only available for spin 1 and 3/2, got l={spin.l}")


def renyi_wehrl_moment(rho: DensityMatrix, n: int, spec: QuadratureSpec) -> float:
    """Moment M_n = (2l+1) \\int dOmega/4pi rho(Omega)^n, exact for the
    supplied quadrature when it resolves the degree-4ln integrand."""
    if n < 1:
        raise ValueError("Renyi order must be a positive integer")
    tl = rho.spin.twice_l
    if spec.n_theta < tl * n + 1 or spec.n_phi < 2 * tl * n + 1:
        raise QuadratureOrderError(
            f"need n_theta >= {tl * n + 1}, n_phi >= {2 * tl * n + 1} for twice_l={tl}, n={n}"
        )
    V, w = amplitude_grid(rho.spin, spec)
    f = _husimi_on_grid(rho, V)
    return float(rho.spin.dim * np.sum(w * f ** n))


def stretched_chain_isometry(l: SpinLabel, n: int) -> np.ndarray:
    """Isometry [n*l] -> [l]^(x)n whose columns are the |nl, M> states."""
    d = l.dim
    W = np.eye(d)
    for k in range(1, n):
        V = coupling_isometry(SpinLabel(k * l.twice_l), l)
        W = np.kron(W, np.eye(d)) @ V
    return W


def _apply_kron_power(rho: np.ndarray, n: int, vec: np.ndarray) -> np.ndarray:
    """(rho^(x)n) @ vec without forming the Kronecker power."""
    d = rho.shape[0]
    t = vec.reshape((d,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(rho, t, axes=([1], [axis])), 0, axis)
    return t.ravel()


def renyi_wehrl_projector(rho: DensityMatrix, n: int) -> float:
    """Moment M_n from the projection of rho^(x)n onto its maximum-spin part,
    normalized once per (l, n) so that coherent input reproduces the analytic
    value (2l+1)/(2ln+1)."""
    if n < 1:
        raise ValueError("Renyi order must be a positive integer")
    d = rho.spin.dim
    if d ** n > 100_000:
        raise ResourceGuardError(f"(2l+1)^n = {d ** n} exceeds the desk-scale guard")
    W = stretched_chain_isometry(rho.spin, n)
    tl = rho.spin.twice_l

    def raw(mat: np.ndarray) -> float:
        total = 0.0
        for col in range(W.shape[1]):
            wv = W[:, col]
            total += np.vdot(wv, _apply_kron_power(mat, n, wv)).real
        return total

    # coherent reference: |l,l> amplitudes (1, 0, ..., 0)
    coh = np.zeros((d, d), dtype=complex)
    coh[0, 0] = 1.0
    norm = (tl + 1) / (tl * n + 1) / raw(coh)
    return float(norm * raw(rho.matrix))
