"""Spin coherent states, Husimi symbols, and the stellar representation.

Phase convention: the coherent state at Omega = (theta, phi) has amplitudes

    a_m = C(2l, l+m)^(1/2) cos^(l+m)(theta/2) sin^(l-m)(theta/2) e^(-i m phi)

which keeps the state single-valued in phi. All rotation-invariant outputs
(entropies, spectra, overlaps) are independent of this choice.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, pi

import numpy as np
from scipy.optimize import minimize

from .errors import QuadratureOrderError
from .quadrature import QuadratureSpec, sphere_nodes
from .su2 import DensityMatrix, PureState, SphereDirection, SpinLabel, geodesic_angle

__all__ = [
    "StellarRoots",
    "coherent_state",
    "amplitude_grid",
    "husimi",
    "overlap_sq",
    "completeness_defect",
    "stellar_roots",
    "state_from_roots",
    "closest_coherent",
]


@dataclass(frozen=True)
class StellarRoots:
    """Unordered multiset of 2l Bloch-sphere points encoding a pure state."""

    spin: SpinLabel
    roots: tuple

    def __post_init__(self):
        if len(self.roots) != self.spin.twice_l:
            raise ValueError(f"expected {self.spin.twice_l} roots, got {len(self.roots)}")


def _log_binom_sqrt(twice_l: int) -> np.ndarray:
    """0.5*log C(2l, l+m) for m descending."""
    ks = np.arange(twice_l, -1, -1)  # l+m
    return 0.5 * np.array([lgamma(twice_l + 1) - lgamma(k + 1) - lgamma(twice_l - k + 1) for k in ks])


def coherent_state(l: SpinLabel, direction: SphereDirection) -> PureState:
    amps = _amplitudes(l, np.array([direction.theta]), np.array([direction.phi]))[0, 0]
    return PureState(l, amps, normalize=True)


def _amplitudes(l: SpinLabel, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Coherent amplitudes on a theta x phi product grid, shape (nt, np, d)."""
    tl = l.twice_l
    m2 = np.arange(tl, -tl - 1, -2)
    c = np.cos(thetas / 2)[:, None]
    s = np.sin(thetas / 2)[:, None]
    radial = np.exp(_log_binom_sqrt(tl))[None, :] * c ** ((tl + m2) / 2) * s ** ((tl - m2) / 2)
    phase = np.exp(-1j * np.outer(phis, m2 / 2))
    return radial[:, None, :] * phase[None, :, :]


_GRID_CACHE: dict = {}
_GRID_CACHE_ENTRY_BYTES = 64 * 2 ** 20


def amplitude_grid(l: SpinLabel, spec: QuadratureSpec):
    """Coherent amplitudes on the quadrature grid plus flattened weights.

    Returns (V, w) with V of shape (n_theta * n_phi, d) and w summing to 1.
    Small grids are cached (read-only arrays): repeated entropy evaluations at
    a fixed grid dominate the optimizer cost otherwise.  Grids above 64 MiB
    are rebuilt on demand instead of pinned in memory.
    """
    key = (l, spec.n_theta, spec.n_phi)
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit
    thetas, phis, wt, wp = sphere_nodes(spec)
    V = _amplitudes(l, thetas, phis).reshape(-1, l.dim)
    w = np.outer(wt, wp).ravel()
    V.flags.writeable = False
    w.flags.writeable = False
    if V.nbytes <= _GRID_CACHE_ENTRY_BYTES:
        if len(_GRID_CACHE) >= 64:
            _GRID_CACHE.pop(next(iter(_GRID_CACHE)))
        _GRID_CACHE[key] = (V, w)
    return V, w


def husimi(rho: DensityMatrix, direction: SphereDirection) -> float:
    """Lower symbol <Omega|rho|Omega>, clamped into [0, 1]."""
    a = coherent_state(rho.spin, direction).amplitudes
    val = np.vdot(a, rho.matrix @ a).real
    return float(min(max(val, 0.0), 1.0))


def overlap_sq(l: SpinLabel, a: SphereDirection, b: SphereDirection) -> float:
    """|<Omega_l|Omega'_l>|^2 = cos^(4l)(Theta/2) with Theta the geodesic angle."""
    cos_half_sq = (1.0 + np.cos(geodesic_angle(a, b))) / 2.0
    return float(cos_half_sq ** l.twice_l)


def completeness_defect(l: SpinLabel, spec: QuadratureSpec) -> float:
    """Max-norm of (2l+1) \\int dOmega/4pi |Omega><Omega| minus the identity."""
    if spec.n_theta < l.twice_l + 1 or spec.n_phi < 2 * l.twice_l + 1:
        raise QuadratureOrderError(
            f"need n_theta >= {l.twice_l + 1} and n_phi >= {2 * l.twice_l + 1} "
            f"for twice_l={l.twice_l}, got ({spec.n_theta}, {spec.n_phi})"
        )
    V, w = amplitude_grid(l, spec)
    resolution = (l.dim) * np.einsum("n,ni,nj->ij", w, V, V.conj())
    return float(np.max(np.abs(resolution - np.eye(l.dim))))


def _root_to_direction(z: complex) -> SphereDirection:
    # stereographic chart: z = tan(theta/2) e^{i phi}, north pole at z = 0
    return SphereDirection(2 * np.arctan(abs(z)), float(np.angle(z)))


def stellar_roots(psi: PureState) -> StellarRoots:
    """Majorana roots of a pure state.

    The polynomial has coefficient (-1)^(l-m) C(2l,l+m)^(1/2) a_m at z^(l+m);
    degree deficiency (vanishing leading coefficients) contributes roots at
    the south pole.
    """
    tl = psi.spin.twice_l
    if np.linalg.norm(psi.amplitudes) == 0:
        raise ValueError("zero state has no stellar representation")
    # coefficients in ascending powers z^0 .. z^(2l)
    signs = (-1.0) ** np.arange(tl, -1, -1)  # (-1)^(l-m) with l+m = 0..2l
    coefs = signs * np.exp(_log_binom_sqrt(tl))[::-1] * psi.amplitudes[::-1]
    scale = np.max(np.abs(coefs))
    coefs = coefs / scale
    # strip numerically vanishing leading coefficients -> south-pole roots
    deg = tl
    while deg > 0 and abs(coefs[deg]) < 1e-13:
        deg -= 1
    finite = np.roots(coefs[deg::-1]) if deg > 0 else np.array([])
    finite = _newton_polish(coefs[: deg + 1], finite)
    dirs = [_root_to_direction(z) for z in finite]
    dirs += [SphereDirection(pi, 0.0)] * (tl - deg)
    return StellarRoots(psi.spin, tuple(dirs))


def _newton_polish(asc_coefs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    if len(roots) == 0:
        return roots
    dcoefs = asc_coefs[1:] * np.arange(1, len(asc_coefs))
    p = np.polynomial.polynomial.polyval(roots, asc_coefs)
    dp = np.polynomial.polynomial.polyval(roots, dcoefs)
    step = np.where(np.abs(dp) > 1e-14, p / np.where(np.abs(dp) > 1e-14, dp, 1.0), 0.0)
    polished = roots - step
    # keep the polish only where it actually reduced the residual
    better = np.abs(np.polynomial.polynomial.polyval(polished, asc_coefs)) <= np.abs(p)
    return np.where(better, polished, roots)


def state_from_roots(roots: StellarRoots) -> PureState:
    """Normalized symmetrized product state of the given Bloch-sphere points."""
    tl = roots.spin.twice_l
    finite = []
    n_south = 0
    for d in roots.roots:
        if pi - d.theta < 1e-9:
            n_south += 1
        else:
            finite.append(np.tan(d.theta / 2) * np.exp(1j * d.phi))
    # polynomial prod (z - z_i), truncated by south-pole (infinite) roots
    coefs = np.zeros(tl + 1, dtype=complex)
    base = np.polynomial.polynomial.polyfromroots(finite) if finite else np.array([1.0 + 0j])
    coefs[: len(base)] = base
    if n_south + len(base) - 1 != tl:
        raise ValueError("inconsistent root multiplicities")
    signs = (-1.0) ** np.arange(tl, -1, -1)
    amps_asc = coefs / (signs * np.exp(_log_binom_sqrt(tl))[::-1])
    return PureState(roots.spin, amps_asc[::-1], normalize=True)


def closest_coherent(psi: PureState) -> tuple[SphereDirection, float]:
    """Coherent state of maximal Husimi overlap with psi.

    Coarse 32x64 grid search followed by a local simplex refinement; when the
    maximum is degenerate (e.g. rotationally symmetric states) any one
    maximizer is returned.
    """
    l = psi.spin
    thetas = np.arccos(np.linspace(1, -1, 32))
    phis = 2 * pi * np.arange(64) / 64
    V = _amplitudes(l, thetas, phis).reshape(-1, l.dim)
    vals = np.abs(V.conj() @ psi.amplitudes) ** 2
    i = int(np.argmax(vals))
    t0, p0 = thetas[i // 64], phis[i % 64]

    def neg(x):
        a = _amplitudes(l, np.array([x[0]]), np.array([x[1]]))[0, 0]
        return -abs(np.vdot(a, psi.amplitudes)) ** 2

    res = minimize(neg, [t0, p0], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400})
    # fold theta outside [0, pi] back onto the sphere
    t, p = res.x
    t = t % (2 * pi)
    if t > pi:
        t, p = 2 * pi - t, p + pi
    best = SphereDirection(float(t), float(p))
    return best, float(-neg([best.theta, best.phi]))
