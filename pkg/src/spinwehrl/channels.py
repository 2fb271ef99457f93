"""Covariant SU(2) channels: projection channel (primal / Kraus / dual Gram)
and the angular channel with its 3x3 Gram dual.

The projection channel maps a state on [l] to
(2l+1)/(2(l+j)+1) * P_(l+j) (rho (x) 1_j) P_(l+j), stored directly in the
|l+j, m> eigenbasis of the image so the output is a (2(l+j)+1)-dimensional
density matrix. For pure inputs the (2j+1)-dimensional dual Gram matrix has
the same nonzero spectrum and is the only route used at large j.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

import numpy as np

from .entropy import clamped_spectrum, entropy_of_spectrum
from .errors import ResourceGuardError
from .su2 import (
    DensityMatrix,
    PureState,
    SphereDirection,
    SpinLabel,
    cg_twice,
    coupling_isometry,
    generators,
    rotation_matrix,
)

TENSOR_DIM_GUARD = 40_000


@dataclass(frozen=True)
class ChannelOutput:
    spin_out: SpinLabel
    matrix: DensityMatrix
    spectrum: np.ndarray


def _as_output(spin_out: SpinLabel, mat: np.ndarray) -> ChannelOutput:
    mat = (mat + mat.conj().T) / 2
    mat = mat / np.trace(mat).real
    return ChannelOutput(spin_out, DensityMatrix(spin_out, mat), clamped_spectrum(mat))


def projection_channel(rho: DensityMatrix, j: SpinLabel) -> ChannelOutput:
    l = rho.spin
    if l.dim * j.dim > TENSOR_DIM_GUARD:
        raise ResourceGuardError(
            f"tensor dimension {l.dim * j.dim} exceeds the guard {TENSOR_DIM_GUARD}"
        )
    out_spin = SpinLabel(l.twice_l + j.twice_l)
    V = coupling_isometry(l, j).reshape(l.dim, j.dim, out_spin.dim)
    out = np.einsum("ajM,ab,bjN->MN", V.conj(), rho.matrix, V) * (l.dim / out_spin.dim)
    return _as_output(out_spin, out)


def projection_kraus(l: SpinLabel, j: SpinLabel) -> list[np.ndarray]:
    """Kraus operators A_M (shape 2(l+j)+1 x 2l+1) for M = j, ..., -j."""
    out_spin = SpinLabel(l.twice_l + j.twice_l)
    V = coupling_isometry(l, j).reshape(l.dim, j.dim, out_spin.dim)
    scale = np.sqrt(l.dim / out_spin.dim)
    return [scale * V[:, idx, :].T.conj() for idx in range(j.dim)]


def apply_kraus(kraus, rho_matrix: np.ndarray) -> np.ndarray:
    return sum(A @ rho_matrix @ A.conj().T for A in kraus)


def projection_dual_gram(psi: PureState, j: SpinLabel) -> np.ndarray:
    """(2j+1)-dimensional dual Gram matrix with the same nonzero spectrum as
    the primal projection-channel output; built from stretched Clebsch-Gordan
    coefficients only, so it stays cheap at large j."""
    tl, tj = psi.spin.twice_l, j.twice_l
    tL = tl + tj
    D = tL + 1
    W = np.zeros((D, j.dim), dtype=complex)
    for col, tM in enumerate(range(tj, -tj - 1, -2)):
        for row_l, tm in enumerate(range(tl, -tl - 1, -2)):
            tK = tm + tM
            if abs(tK) <= tL:
                W[(tL - tK) // 2, col] += psi.amplitudes[row_l] * cg_twice(tl, tm, tj, tM, tL, tK)
    G = (W.conj().T @ W) * ((tl + 1) / D)
    return G


def projection_entropy(rho: DensityMatrix, j: SpinLabel) -> float:
    """von Neumann entropy of the projection-channel output; <= ln(2j+1)."""
    return entropy_of_spectrum(projection_channel(rho, j).spectrum)


def projection_entropy_pure(psi: PureState, j: SpinLabel) -> float:
    """Projection entropy of a pure state through the dual Gram route."""
    return entropy_of_spectrum(clamped_spectrum(projection_dual_gram(psi, j)))


def projection_shift(l: SpinLabel, j: SpinLabel) -> float:
    """Entropy shift ln[(2l+1)/(2(l+j)+1)] relating projection and Wehrl."""
    return log(l.dim / (l.twice_l + j.twice_l + 1))


def angular_channel(rho: DensityMatrix) -> ChannelOutput:
    l = rho.spin
    if l.twice_l < 1:
        raise ValueError("angular channel needs l >= 1/2")
    _, _, _, L1, L2, L3 = generators(l)
    c = 1.0 / (l.l * (l.l + 1))
    out = c * sum(Li @ rho.matrix @ Li for Li in (L1, L2, L3))
    return _as_output(l, out)


def angular_gram(psi: PureState) -> np.ndarray:
    """3x3 Gram matrix G_ij = <psi|L_i L_j|psi> / (l(l+1)); PSD with the same
    nonzero spectrum as the angular-channel output."""
    l = psi.spin
    _, _, _, L1, L2, L3 = generators(l)
    vs = [Li @ psi.amplitudes for Li in (L1, L2, L3)]
    G = np.array([[np.vdot(vi, vj) for vj in vs] for vi in vs])
    return G / (l.l * (l.l + 1))


def channel_covariance_defect(channel: str, rho: DensityMatrix, direction: SphereDirection,
                              j: SpinLabel | None = None) -> float:
    """Max-norm of Phi(U rho U^dag) - U' Phi(rho) U'^dag for matching input
    and output rotations; `channel` is "projection" (needs j) or "angular"."""
    R_in = rotation_matrix(rho.spin, direction)
    rotated = DensityMatrix(rho.spin, R_in @ rho.matrix @ R_in.conj().T)
    if channel == "projection":
        if j is None:
            raise ValueError("projection channel needs the ancilla spin j")
        out_a = projection_channel(rotated, j)
        out_b = projection_channel(rho, j)
    elif channel == "angular":
        out_a = angular_channel(rotated)
        out_b = angular_channel(rho)
    else:
        raise ValueError(f"unknown channel {channel!r}")
    R_out = rotation_matrix(out_a.spin_out, direction)
    diff = out_a.matrix.matrix - R_out @ out_b.matrix.matrix @ R_out.conj().T
    return float(np.max(np.abs(diff)))
