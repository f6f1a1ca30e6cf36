"""Split operators for the lattice-discretized Schrödinger equation.

The kinetic half is diagonal in coefficient space with phases proportional
to the squared norms of the anti-aliasing frequencies; the potential half is
diagonal in nodal space and is applied through an inverse/forward transform
pair.  Both are unitary, so the discrete L2 norm is preserved.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.fft

from .antialias import AntiAliasingSet
from .lattice import Rank1Lattice
from .transform import NodalValues, SpectralState, forward

__all__ = [
    "KineticTable",
    "PotentialField",
    "POTENTIAL_KINDS",
    "make_kinetic",
    "kinetic_apply",
    "make_potential",
    "potential_apply",
    "make_gaussian",
    "smooth_product_potential",
    "harmonic_potential",
    "smooth_potential_coefficients",
    "korobov_norm_estimate",
]


@dataclass(frozen=True)
class KineticTable:
    """Per-residue kinetic phase rates ``2 pi^2 eps ||h_xi||^2`` (rad per unit a*dt)."""

    phases_base: np.ndarray
    epsilon: float


@dataclass(frozen=True)
class PotentialField:
    """Potential values at the lattice points, kind is one of POTENTIAL_KINDS."""

    values: np.ndarray
    kind: str


def make_kinetic(aa: AntiAliasingSet, epsilon: float = 1.0) -> KineticTable:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    phases = 2.0 * np.pi**2 * epsilon * aa.norms2.astype(np.float64)
    return KineticTable(phases, epsilon)


def kinetic_apply(state: SpectralState, kt: KineticTable, a: float, dt: float) -> SpectralState:
    """Multiply each coefficient by ``exp(-i a dt * phase_xi)``."""
    if kt.phases_base.shape != state.coeffs.shape:
        raise ValueError("kinetic table and state have different sizes")
    if a == 0.0 or dt == 0.0:
        return state.copy()
    coeffs = state.coeffs * np.exp(-1j * a * dt * kt.phases_base)
    return SpectralState(coeffs, state.aa, state.time)


def potential_apply(state: SpectralState, pf: PotentialField, b: float, dt: float,
                    epsilon: float) -> SpectralState:
    """Apply ``exp(-i b dt v(p_k) / eps)`` pointwise in nodal space.

    Implemented as inverse transform, diagonal phase multiply, forward
    transform; the 1/n and n normalization factors cancel.
    """
    if pf.values.shape != state.coeffs.shape:
        raise ValueError("potential field and state have different sizes")
    if b == 0.0 or dt == 0.0:
        return state.copy()
    phase = np.exp(-1j * (b * dt / epsilon) * pf.values)
    coeffs = scipy.fft.fft(scipy.fft.ifft(state.coeffs) * phase)
    return SpectralState(coeffs, state.aa, state.time)


def smooth_product_potential(x: np.ndarray) -> np.ndarray:
    """v(x) = prod_j (1 - cos(2 pi x_j)), an analytic trigonometric polynomial."""
    return np.prod(1.0 - np.cos(2.0 * np.pi * np.atleast_2d(x)), axis=-1)


def harmonic_potential(x: np.ndarray) -> np.ndarray:
    """v(x) = 1/2 sum_j (2 pi x_j - pi)^2 (periodic extension has a kink)."""
    return 0.5 * np.sum((2.0 * np.pi * np.atleast_2d(x) - np.pi) ** 2, axis=-1)


POTENTIAL_KINDS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "smooth_v1": smooth_product_potential,
    "harmonic_v2": harmonic_potential,
}


def make_potential(kind: str, lattice: Rank1Lattice,
                   func: Callable[[np.ndarray], np.ndarray] | None = None) -> PotentialField:
    """Tabulate a named or custom potential at all lattice points."""
    if func is not None:
        values = np.asarray(func(lattice.node_coords()), dtype=np.float64)
        return PotentialField(values, "custom")
    try:
        f = POTENTIAL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown potential kind {kind!r}") from None
    return PotentialField(f(lattice.node_coords()).astype(np.float64), kind)


def smooth_potential_coefficients(d: int) -> dict[tuple[int, ...], float]:
    """Exact Fourier coefficients of the smooth product potential.

    Per dimension 1 - cos(2 pi x) has coefficients {0: 1, +-1: -1/2}; the
    product potential is their tensor product on {-1, 0, 1}^d.
    """
    one_d = {0: 1.0, 1: -0.5, -1: -0.5}
    out: dict[tuple[int, ...], float] = {}
    for h in itertools.product((-1, 0, 1), repeat=d):
        out[h] = math.prod(one_d[hj] for hj in h)
    return out


def make_gaussian(aa: AntiAliasingSet, epsilon: float = 1.0) -> SpectralState:
    """Gaussian wave packet centered at (1/2, ..., 1/2), as a unit-norm state.

    Samples ``(2/(pi eps))^(d/4) exp(-sum_j (2 pi x_j - pi)^2 / eps)`` on the
    lattice, transforms, and normalizes the coefficient vector to unit l2
    norm (the discrete Parseval-consistent normalization).
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    lat = aa.lattice
    x = lat.node_coords()
    amp = (2.0 / (np.pi * epsilon)) ** (lat.d / 4.0)
    vals = amp * np.exp(-np.sum((2.0 * np.pi * x - np.pi) ** 2, axis=1) / epsilon)
    state = forward(NodalValues(vals, lat), aa)
    state.coeffs /= np.linalg.norm(state.coeffs)
    return state


def korobov_norm_estimate(coeffs: Mapping[Sequence[int], complex], alpha: float) -> float:
    """Weighted-coefficient norm ``sqrt(sum |c_h|^2 prod_j max(|h_j|^(2a), 1))``.

    Diagnostic for checking smoothness-class membership of sparse
    trigonometric polynomials.
    """
    if alpha < 0.5:
        raise ValueError("alpha must be >= 1/2")
    total = 0.0
    for h, c in coeffs.items():
        w = math.prod(max(abs(hj) ** (2.0 * alpha), 1.0) for hj in h)
        total += abs(c) ** 2 * w
    return math.sqrt(total)
