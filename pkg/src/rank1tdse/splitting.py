"""Exponential splitting schemes and the time-stepping loop.

One step applies the stage product right-to-left: for j = s down to 1 the
kinetic phase with weight ``a_j`` and then the potential phase with weight
``b_j``.  All shipped coefficient tables are real and palindromic, each sums
to one, and stages with a zero weight are skipped (no transform executed).
"""

from __future__ import annotations

import json
import time as _time
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .operators import KineticTable, PotentialField
from .transform import SpectralState

__all__ = [
    "SplittingScheme",
    "EvolutionRecord",
    "SCHEME_NAMES",
    "scheme",
    "scheme_from_json",
    "step",
    "evolve",
    "empirical_order",
    "ORDER_FIT_FLOOR",
]

#: Errors at or below this are treated as roundoff noise when fitting slopes.
ORDER_FIT_FLOOR = 1e-11


@dataclass(frozen=True)
class SplittingScheme:
    """Named stage table ``(a_j, b_j)`` with nominal convergence order."""

    name: str
    order_p: int
    stages: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        sa = sum(a for a, _ in self.stages)
        sb = sum(b for _, b in self.stages)
        if abs(sa - 1.0) > 1e-12 or abs(sb - 1.0) > 1e-12:
            raise ValueError(
                f"scheme {self.name!r}: stage sums ({sa}, {sb}) must both equal 1"
            )


@dataclass
class EvolutionRecord:
    steps_taken: int
    dt: float
    wall_time: float
    final_norm: float


# Sixth-order "s9odr6a" table: entries j=1..5 shown, the rest by symmetry
# a_j = a_{10-j}, b_j = b_{11-j}, and a_10 = 0.
_A6 = (
    0.392161444007314,
    0.332599136789359,
    -0.706246172557639,
    0.0822135962935508,
    0.798543990934830,
)
_B6 = (
    0.196080722003657,
    0.362380290398337,
    -0.186823517884140,
    -0.312016288132044,
    0.440378793614190,
)

# Eighth-order "s17odr8a" table: entries j=1..9 shown, the rest by symmetry
# a_j = a_{18-j}, b_j = b_{19-j}, and a_18 = 0.
_A8 = (
    0.130202483088890,
    0.561162981775108,
    -0.389474962644847,
    0.158841906555156,
    -0.395903894133238,
    0.184539640978316,
    0.258374387686322,
    0.295011723609310,
    -0.605508533830035,
)
_B8 = (
    0.0651012415444450,
    0.345682732431999,
    0.0858440095651306,
    -0.115316528044846,
    -0.118530993789041,
    -0.105682126577461,
    0.221457014332319,
    0.276693055647816,
    -0.155248405110362,
)


def _palindromic(name: str, order: int, a_half, b_half) -> SplittingScheme:
    a = tuple(a_half) + tuple(a_half[-2::-1]) + (0.0,)
    b = tuple(b_half) + tuple(b_half[::-1])
    return SplittingScheme(name, order, tuple(zip(a, b)))


_REGISTRY: dict[str, SplittingScheme] = {
    "strang": SplittingScheme("strang", 2, ((1.0, 0.5), (0.0, 0.5))),
    "s9odr6a": _palindromic("s9odr6a", 6, _A6, _B6),
    "s17odr8a": _palindromic("s17odr8a", 8, _A8, _B8),
}

SCHEME_NAMES = tuple(_REGISTRY)


def scheme(name: str) -> SplittingScheme:
    """Look up a registered scheme by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; known: {', '.join(_REGISTRY)}") from None


def scheme_from_json(doc) -> SplittingScheme:
    """Build a scheme from ``{name, order, a: [...], b: [...]}`` (dict or JSON text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    a, b = doc["a"], doc["b"]
    if len(a) != len(b):
        raise ValueError("coefficient lists a and b must have equal length")
    return SplittingScheme(doc["name"], int(doc["order"]), tuple(zip(map(float, a), map(float, b))))


def _stage_multipliers(sch: SplittingScheme, kt: KineticTable, pf: PotentialField,
                       dt: float, epsilon: float):
    """Precompute per-stage phase vectors in right-to-left application order."""
    mults = []
    for a, b in reversed(sch.stages):
        kin = np.exp(-1j * a * dt * kt.phases_base) if a != 0.0 else None
        pot = np.exp(-1j * (b * dt / epsilon) * pf.values) if b != 0.0 else None
        mults.append((kin, pot))
    return mults


def _check_components(state: SpectralState, kt: KineticTable, pf: PotentialField) -> None:
    n = state.coeffs.shape[0]
    if kt.phases_base.shape[0] != n or pf.values.shape[0] != n:
        raise ValueError("state, kinetic table and potential field sizes disagree")


def step(state: SpectralState, sch: SplittingScheme, kt: KineticTable, pf: PotentialField,
         dt: float, epsilon: float) -> SpectralState:
    """One splitting step of size ``dt``; advances the state time by ``dt``."""
    _check_components(state, kt, pf)
    coeffs = state.coeffs.copy()
    for kin, pot in _stage_multipliers(sch, kt, pf, dt, epsilon):
        if kin is not None:
            coeffs *= kin
        if pot is not None:
            coeffs = scipy.fft.fft(scipy.fft.ifft(coeffs, overwrite_x=True) * pot,
                                   overwrite_x=True)
    return SpectralState(coeffs, state.aa, state.time + dt)


def evolve(state: SpectralState, sch: SplittingScheme, kt: KineticTable, pf: PotentialField,
           m: int, dt: float, epsilon: float) -> tuple[SpectralState, EvolutionRecord]:
    """Run ``m`` successive steps of size ``dt``; deterministic for fixed inputs."""
    if m < 1:
        raise ValueError("step count m must be >= 1")
    _check_components(state, kt, pf)
    mults = _stage_multipliers(sch, kt, pf, dt, epsilon)
    coeffs = state.coeffs.copy()
    t0 = _time.perf_counter()
    for k in range(m):
        for kin, pot in mults:
            if kin is not None:
                coeffs *= kin
            if pot is not None:
                coeffs = scipy.fft.fft(scipy.fft.ifft(coeffs, overwrite_x=True) * pot,
                                       overwrite_x=True)
        if not np.all(np.isfinite(coeffs)):
            raise FloatingPointError(f"non-finite coefficients after step {k + 1} of {m}")
    wall = _time.perf_counter() - t0
    out = SpectralState(coeffs, state.aa, state.time + m * dt)
    rec = EvolutionRecord(m, dt, wall, float(np.linalg.norm(coeffs)))
    return out, rec


def empirical_order(errors, floor: float = ORDER_FIT_FLOOR) -> float:
    """Least-squares slope of log(err) against log(dt).

    Points with ``err < floor`` are discarded as roundoff noise; at least
    three usable points are required.
    """
    pts = [(dt, err) for dt, err in errors if err >= floor]
    if len(pts) < 3:
        raise ValueError(f"only {len(pts)} points above the floor {floor}; need >= 3")
    log_dt = np.log([dt for dt, _ in pts])
    log_err = np.log([err for _, err in pts])
    slope, _ = np.polyfit(log_dt, log_err, 1)
    return float(slope)
