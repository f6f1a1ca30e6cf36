"""Anti-aliasing frequency sets with minimal-l2 representatives.

For a rank-1 lattice (z, n) the anti-aliasing set picks, for every residue
``xi = h . z mod n``, one integer frequency vector ``h_xi`` of that residue
with the smallest Euclidean norm.  The build enumerates integer vectors in
balls of growing radius, sorts them by (squared norm, lexicographic order)
and keeps the first vector seen per residue, so the result is reproducible
bit for bit.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .lattice import Rank1Lattice

__all__ = [
    "AntiAliasingSet",
    "BudgetExceededError",
    "build",
    "cache_path",
    "load_cache",
    "save_cache",
    "cached_build",
]

_MAGIC = b"AASET1"


class BudgetExceededError(RuntimeError):
    """Raised when the enumeration ball outgrows the candidate budget."""


@dataclass(frozen=True)
class AntiAliasingSet:
    """Frequency table ``freq[xi] = h_xi`` with ``h_xi . z == xi (mod n)``."""

    lattice: Rank1Lattice
    freq: np.ndarray    # (n, d) int32
    norms2: np.ndarray  # (n,) int64, squared l2 norms

    def __post_init__(self) -> None:
        n, d = self.lattice.n, self.lattice.d
        if self.freq.shape != (n, d):
            raise ValueError(f"freq has shape {self.freq.shape}, expected {(n, d)}")
        res = self.residues(self.freq)
        if not np.array_equal(np.sort(res), np.arange(n)):
            raise ValueError("representatives do not cover every residue exactly once")

    @property
    def n(self) -> int:
        return self.lattice.n

    def residues(self, h) -> np.ndarray:
        """``h . z mod n`` for a (..., d) array of frequency vectors."""
        z = np.asarray(self.lattice.z, dtype=np.int64)
        return (np.asarray(h, dtype=np.int64) @ z) % self.lattice.n

    def residue_lookup(self, h) -> int:
        """The residue class index of a single frequency vector."""
        return int(self.residues(np.asarray(h, dtype=np.int64)))

    def max_norm2(self) -> int:
        """Largest squared l2 norm among the representatives."""
        return int(self.norms2.max())

    def sha256(self) -> str:
        """Content hash of the serialized set (same bytes as the cache file)."""
        return hashlib.sha256(_serialize(self)).hexdigest()


def _zhash(lattice: Rank1Lattice) -> int:
    raw = np.asarray(lattice.z, dtype="<i8").tobytes()
    return int.from_bytes(hashlib.sha256(raw).digest()[:8], "little")


def _ball(d: int, r2: int, budget: int) -> tuple[np.ndarray, np.ndarray]:
    """All integer vectors with squared norm <= r2, with their squared norms."""
    rmax = math.isqrt(r2)
    vals = np.arange(-rmax, rmax + 1, dtype=np.int64)
    pts = vals[:, None]
    ssq = vals * vals
    for _ in range(1, d):
        parts, sq = [], []
        total = 0
        for v in vals:
            mask = ssq + v * v <= r2
            cnt = int(mask.sum())
            if cnt == 0:
                continue
            total += cnt
            if total > budget:
                raise BudgetExceededError(
                    f"enumeration ball r2={r2} exceeds candidate budget {budget}"
                )
            sub = pts[mask]
            parts.append(np.hstack([sub, np.full((cnt, 1), v, dtype=np.int64)]))
            sq.append(ssq[mask] + v * v)
        pts = np.vstack(parts)
        ssq = np.concatenate(sq)
    if len(pts) > budget:
        raise BudgetExceededError(f"enumeration ball r2={r2} exceeds candidate budget {budget}")
    return pts, ssq


def _initial_r2(d: int, n: int) -> int:
    # d-ball volume heuristic aiming at >= 2n candidates
    vol_unit = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)
    r = (2.0 * n / vol_unit) ** (1.0 / d)
    return max(1, math.ceil(r * r))


def build(lattice: Rank1Lattice, budget: int = 1 << 28) -> AntiAliasingSet:
    """Construct the minimal-l2 anti-aliasing set for ``lattice``.

    Candidates are scanned in ascending squared-norm order with ties broken
    lexicographically on the signed coordinates; the first vector of each
    unseen residue wins.  The radius doubles (in r^2) until all ``n``
    residues are covered.

    Raises :class:`BudgetExceededError` if the enumeration would exceed
    ``budget`` candidate vectors.
    """
    n, d = lattice.n, lattice.d
    z = np.asarray(lattice.z, dtype=np.int64)
    freq = np.zeros((n, d), dtype=np.int32)
    norms2 = np.full(n, -1, dtype=np.int64)
    found = np.zeros(n, dtype=bool)

    r2_prev = -1
    r2 = _initial_r2(d, n)
    while True:
        pts, ssq = _ball(d, r2, budget)
        ann = ssq > r2_prev  # only the new annulus; earlier shells already scanned
        pts, ssq = pts[ann], ssq[ann]
        order = np.lexsort(tuple(pts[:, j] for j in range(d - 1, -1, -1)) + (ssq,))
        pts, ssq = pts[order], ssq[order]
        res = (pts @ z) % n
        new = ~found[res]
        if new.any():
            res_new, pts_new, ssq_new = res[new], pts[new], ssq[new]
            uniq, first = np.unique(res_new, return_index=True)
            freq[uniq] = pts_new[first]
            norms2[uniq] = ssq_new[first]
            found[uniq] = True
        if found.all():
            break
        r2_prev = r2
        r2 *= 2
    return AntiAliasingSet(lattice, freq, norms2)


def _serialize(aa: AntiAliasingSet) -> bytes:
    lat = aa.lattice
    header = _MAGIC + struct.pack("<IQQ", lat.d, lat.n, _zhash(lat))
    return header + aa.freq.astype("<i4").tobytes()


def save_cache(aa: AntiAliasingSet, path) -> None:
    Path(path).write_bytes(_serialize(aa))


def load_cache(path, lattice: Rank1Lattice) -> AntiAliasingSet:
    """Read a cached set, verifying the header against ``lattice``."""
    raw = Path(path).read_bytes()
    if len(raw) < 26 or raw[:6] != _MAGIC:
        raise ValueError(f"{path}: not an anti-aliasing cache")
    d, n, zh = struct.unpack("<IQQ", raw[6:26])
    if (d, n, zh) != (lattice.d, lattice.n, _zhash(lattice)):
        raise ValueError(f"{path}: cache header does not match lattice")
    expected = 26 + 4 * n * d
    if len(raw) != expected:
        raise ValueError(f"{path}: truncated cache ({len(raw)} bytes, expected {expected})")
    freq = np.frombuffer(raw[26:], dtype="<i4").reshape(n, d).astype(np.int32)
    norms2 = np.einsum("ij,ij->i", freq.astype(np.int64), freq.astype(np.int64))
    return AntiAliasingSet(lattice, freq, norms2)


def cache_path(lattice: Rank1Lattice, cache_dir) -> Path:
    name = f"aaset_d{lattice.d}_n{lattice.n}_{_zhash(lattice):016x}.bin"
    return Path(cache_dir).expanduser() / name


def cached_build(lattice: Rank1Lattice, cache_dir=None, budget: int = 1 << 28) -> AntiAliasingSet:
    """Build the set, reusing (or writing) a disk cache when a directory is given."""
    if cache_dir is None:
        return build(lattice, budget)
    path = cache_path(lattice, cache_dir)
    if path.exists():
        try:
            return load_cache(path, lattice)
        except ValueError:
            path.unlink()  # corrupt cache: rebuild
    aa = build(lattice, budget)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_cache(aa, path)
    return aa
