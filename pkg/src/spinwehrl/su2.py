"""Finite-dimensional SU(2) representation machinery.

Conventions used everywhere in this package:

* a spin label is stored exactly as ``twice_l`` (an integer), so l = twice_l/2
  and the representation dimension is d = twice_l + 1;
* basis vectors are ordered by magnetic quantum number m = l, l-1, ..., -l
  (highest weight first);
* Clebsch-Gordan coefficients follow the Condon-Shortley phase convention;
* the rotation taking the north pole to (theta, phi) is
  R = exp(-i phi Lz) exp(-i theta L2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lgamma, log, pi

import numpy as np
from scipy.linalg import expm

HERMITICITY_TOL = 1e-12
EIGENVALUE_CLAMP = 1e-12


@dataclass(frozen=True)
class SpinLabel:
    """Half-integer spin stored as twice its value."""

    twice_l: int

    def __post_init__(self):
        if not isinstance(self.twice_l, (int, np.integer)) or self.twice_l < 0:
            raise ValueError(f"twice_l must be a non-negative integer, got {self.twice_l!r}")

    @classmethod
    def from_l(cls, l) -> "SpinLabel":
        twice = 2 * l
        if abs(twice - round(twice)) > 1e-12:
            raise ValueError(f"{l} is not a half-integer")
        return cls(int(round(twice)))

    @property
    def l(self) -> float:
        return self.twice_l / 2

    @property
    def dim(self) -> int:
        return self.twice_l + 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (l down to -l)."""
        return np.arange(self.twice_l, -self.twice_l - 1, -2) / 2


@dataclass(frozen=True)
class SphereDirection:
    """A point Omega = (theta, phi) on the Bloch sphere; phi reduced mod 2*pi."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (-1e-12 <= self.theta <= pi + 1e-12):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "theta", float(min(max(self.theta, 0.0), pi)))
        object.__setattr__(self, "phi", float(self.phi) % (2 * pi))

    def unit3(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    def antipode(self) -> "SphereDirection":
        return SphereDirection(pi - self.theta, self.phi + pi)


def geodesic_angle(a: SphereDirection, b: SphereDirection) -> float:
    """Angle between two sphere directions, in [0, pi]."""
    return float(np.arccos(np.clip(np.dot(a.unit3(), b.unit3()), -1.0, 1.0)))


class PureState:
    """Normalized amplitude vector over |l,m> with m descending."""

    def __init__(self, spin: SpinLabel, amplitudes, normalize: bool = False):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if amplitudes.shape != (spin.dim,):
            raise ValueError(f"expected {spin.dim} amplitudes, got shape {amplitudes.shape}")
        norm = np.linalg.norm(amplitudes)
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amplitudes = amplitudes / norm
        elif abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-12")
        self.spin = spin
        self.amplitudes = amplitudes
        self.amplitudes.flags.writeable = False

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.spin, np.outer(self.amplitudes, self.amplitudes.conj()))

    def fidelity(self, other: "PureState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


class DensityMatrix:
    """Hermitian PSD unit-trace matrix over |l,m> with m descending."""

    def __init__(self, spin: SpinLabel, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (spin.dim, spin.dim):
            raise ValueError(f"expected {spin.dim}x{spin.dim} matrix, got {matrix.shape}")
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        if abs(np.trace(matrix).real - 1.0) > 1e-12:
            raise ValueError("trace deviates from 1 beyond 1e-12")
        if np.min(np.linalg.eigvalsh(matrix)) < -EIGENVALUE_CLAMP:
            raise ValueError("matrix has an eigenvalue below -1e-12")
        self.spin = spin
        self.matrix = matrix
        self.matrix.flags.writeable = False

    @classmethod
    def maximally_mixed(cls, spin: SpinLabel) -> "DensityMatrix":
        return cls(spin, np.eye(spin.dim) / spin.dim)


def random_pure(spin: SpinLabel, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: normalized complex standard-normal vector."""
    v = rng.standard_normal(spin.dim) + 1j * rng.standard_normal(spin.dim)
    return PureState(spin, v, normalize=True)


def random_density(spin: SpinLabel, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state from a Ginibre matrix of the given rank."""
    rank = spin.dim if rank is None else rank
    g = rng.standard_normal((spin.dim, rank)) + 1j * rng.standard_normal((spin.dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(spin, m / np.trace(m).real)


def generators(spin: SpinLabel):
    """Angular momentum matrices (Lz, Lplus, Lminus, L1, L2, L3) for one spin.

    Lz is diagonal with entries m; Lplus|l,m> = sqrt(l(l+1)-m(m+1)) |l,m+1>.
    In the m-descending basis Lplus therefore sits on the first superdiagonal.
    """
    m = spin.m_values()
    l = spin.l
    d = spin.dim
    Lz = np.diag(m).astype(complex)
    Lp = np.zeros((d, d), dtype=complex)
    for i in range(1, d):
        Lp[i - 1, i] = np.sqrt(l * (l + 1) - m[i] * (m[i] + 1))
    Lm = Lp.conj().T
    L1 = (Lp + Lm) / 2
    L2 = (Lp - Lm) / (2j)
    L3 = Lz
    return Lz, Lp, Lm, L1, L2, L3


def _lgf(twice_n: int) -> float:
    """log((twice_n/2)!) for an even, non-negative twice-value."""
    if twice_n < 0 or twice_n % 2:
        raise ValueError(f"invalid factorial argument twice-value {twice_n}")
    return lgamma(twice_n // 2 + 1)


def cg_twice(tl1: int, tm1: int, tl2: int, tm2: int, tL: int, tM: int) -> float:
    """Clebsch-Gordan coefficient with all arguments as twice-values.

    Racah's single-sum formula evaluated in log space, which stays accurate
    up to twice_l of a few hundred. For the stretched case tL = tl1 + tl2 the
    sum has a single term, so there is no cancellation at large spins.
    """
    if tm1 + tm2 != tM:
        return 0.0
    if abs(tm1) > tl1 or abs(tm2) > tl2 or abs(tM) > tL:
        return 0.0
    if not (abs(tl1 - tl2) <= tL <= tl1 + tl2) or (tl1 + tl2 + tL) % 2:
        return 0.0
    pref = 0.5 * (
        log(tL + 1.0)
        + _lgf(tl1 + tl2 - tL) + _lgf(tl1 - tl2 + tL) + _lgf(-tl1 + tl2 + tL)
        - _lgf(tl1 + tl2 + tL + 2)
        + _lgf(tL + tM) + _lgf(tL - tM)
        + _lgf(tl1 - tm1) + _lgf(tl1 + tm1)
        + _lgf(tl2 - tm2) + _lgf(tl2 + tm2)
    )
    kmin = max(0, -(tL - tl2 + tm1) // 2, -(tL - tl1 - tm2) // 2)
    kmax = min((tl1 + tl2 - tL) // 2, (tl1 - tm1) // 2, (tl2 + tm2) // 2)
    total = 0.0
    for k in range(kmin, kmax + 1):
        ln_den = (
            _lgf(2 * k)
            + _lgf(tl1 + tl2 - tL - 2 * k)
            + _lgf(tl1 - tm1 - 2 * k)
            + _lgf(tl2 + tm2 - 2 * k)
            + _lgf(tL - tl2 + tm1 + 2 * k)
            + _lgf(tL - tl1 - tm2 + 2 * k)
        )
        total += (-1.0) ** k * np.exp(pref - ln_den)
    return float(total)


def _as_twice_m(m, name: str) -> int:
    twice = 2 * m
    if abs(twice - round(twice)) > 1e-9:
        raise ValueError(f"{name}={m} is not a half-integer")
    return int(round(twice))


def clebsch_gordan(l1: SpinLabel, l2: SpinLabel, L: SpinLabel, m1, m2, M) -> float:
    """<l1 m1; l2 m2 | L M> in the Condon-Shortley convention.

    Raises ValueError when the triangle condition or the magnetic ranges are
    violated; returns 0 when m1 + m2 != M.
    """
    tm1, tm2, tM = _as_twice_m(m1, "m1"), _as_twice_m(m2, "m2"), _as_twice_m(M, "M")
    if not (abs(l1.twice_l - l2.twice_l) <= L.twice_l <= l1.twice_l + l2.twice_l):
        raise ValueError(f"triangle condition violated for (l1,l2,L)=({l1.l},{l2.l},{L.l})")
    if (l1.twice_l + l2.twice_l + L.twice_l) % 2:
        raise ValueError("l1 + l2 + L must be an integer")
    if abs(tm1) > l1.twice_l or abs(tm2) > l2.twice_l or abs(tM) > L.twice_l:
        raise ValueError("magnetic quantum number out of range")
    if (l1.twice_l + tm1) % 2 or (l2.twice_l + tm2) % 2 or (L.twice_l + tM) % 2:
        raise ValueError("m must differ from l by an integer")
    return cg_twice(l1.twice_l, tm1, l2.twice_l, tm2, L.twice_l, tM)


@lru_cache(maxsize=64)
def coupling_isometry(l: SpinLabel, j: SpinLabel) -> np.ndarray:
    """Isometry [l+j] -> [l] (x) [j] whose columns are the |l+j, M> states.

    Shape (d_l * d_j, 2(l+j)+1); product-basis row index is i_l * d_j + i_j
    with both factors m-descending, columns are M-descending.
    """
    tl, tj = l.twice_l, j.twice_l
    tL = tl + tj
    V = np.zeros((l.dim * j.dim, tL + 1))
    for col, tM in enumerate(range(tL, -tL - 1, -2)):
        for i1, tm1 in enumerate(range(tl, -tl - 1, -2)):
            tm2 = tM - tm1
            if abs(tm2) <= tj:
                i2 = (tj - tm2) // 2
                V[i1 * j.dim + i2, col] = cg_twice(tl, tm1, tj, tm2, tL, tM)
    V.flags.writeable = False
    return V


def symmetric_projector(l: SpinLabel, j: SpinLabel) -> np.ndarray:
    """Orthogonal projector onto the highest-spin component [l+j] of [l] (x) [j]."""
    V = coupling_isometry(l, j)
    return V @ V.T


def rotation_matrix(spin: SpinLabel, direction: SphereDirection) -> np.ndarray:
    """Wigner rotation R(Omega) = exp(-i phi Lz) exp(-i theta L2)."""
    Lz, _, _, _, L2, _ = generators(spin)
    return expm(-1j * direction.phi * Lz) @ expm(-1j * direction.theta * L2)


def rotate(state, direction: SphereDirection):
    """Rotate a PureState or DensityMatrix by R(Omega)."""
    R = rotation_matrix(state.spin, direction)
    if isinstance(state, PureState):
        return PureState(state.spin, R @ state.amplitudes)
    if isinstance(state, DensityMatrix):
        return DensityMatrix(state.spin, R @ state.matrix @ R.conj().T)
    raise TypeError(f"cannot rotate object of type {type(state).__name__}")
