"""Periodic-box grid, sampled fields, and the NFS1 dump format.

The box is [-L, L)^d with n samples per axis (n a power of two); the dual
lattice carries frequencies p_k = (pi/L) k with k in [-n/2, n/2)^d.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, NFSError

MAGIC = b"NFS1"

DEFAULT_MEMORY_BUDGET_MB = 4096


def _memory_budget_bytes() -> int:
    mb = int(os.environ.get("NFS_MEMORY_BUDGET_MB", DEFAULT_MEMORY_BUDGET_MB))
    return mb * 1024 * 1024


@dataclass(frozen=True)
class GridSpec:
    """Discretization of the periodic box [-L, L)^d."""

    d: int
    n: int
    half_width: float

    def __post_init__(self):
        if self.d < 1:
            raise NFSError(f"dimension must be >= 1, got {self.d}")
        if self.n < 4 or (self.n & (self.n - 1)) != 0:
            raise NFSError(f"n must be a power of two >= 4, got {self.n}")
        if not (self.half_width > 0):
            raise NFSError(f"half_width must be positive, got {self.half_width}")
        if self.size * 8 > _memory_budget_bytes():
            raise NFSError(
                f"grid of {self.size} points exceeds the memory budget "
                f"(set NFS_MEMORY_BUDGET_MB to raise it)"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d

    def axis_coords(self) -> np.ndarray:
        """Sample positions along one axis."""
        return -self.half_width + self.spacing * np.arange(self.n)

    def axis_freqs(self) -> np.ndarray:
        """Dual frequencies p_k = (pi/L) k in FFT layout."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def freq_spacing(self) -> float:
        """Dual lattice spacing pi/L (the dp of spectral quadratures)."""
        return np.pi / self.half_width


@dataclass
class RealField:
    """Real-valued samples on a grid, row-major, flat storage."""

    spec: GridSpec
    values: np.ndarray
    role: str = "generic"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.values.size != self.spec.size:
            raise NFSError(
                f"field length {self.values.size} != grid size {self.spec.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise NFSError("field contains non-finite values")

    def reshaped(self) -> np.ndarray:
        return self.values.reshape(self.spec.shape)

    def copy(self, role: str | None = None) -> "RealField":
        return RealField(self.spec, self.values.copy(), role or self.role)


@dataclass
class SpectralField:
    """Complex Fourier coefficients on the dual lattice, FFT layout."""

    spec: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != self.spec.shape:
            self.coeffs = self.coeffs.reshape(self.spec.shape)


def check_same_grid(a, b):
    if a.spec != b.spec:
        raise GridMismatch(f"grids differ: {a.spec} vs {b.spec}")


def zeros_like(spec: GridSpec, role: str = "generic") -> RealField:
    return RealField(spec, np.zeros(spec.size), role)


def write_field(path: str, f: RealField) -> None:
    """Dump a field in the NFS1 format (atomic: temp file + rename)."""
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", f.spec.d, f.spec.n))
        fh.write(struct.pack("<d", f.spec.half_width))
        fh.write(f.values.astype("<f8").tobytes())
    os.replace(tmp, path)


def read_field(path: str, role: str = "generic") -> RealField:
    """Read an NFS1 dump; rejects wrong magic or truncated payload."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise NFSError(f"bad magic {magic!r} in {path}")
        d, n = struct.unpack("<II", fh.read(8))
        (half_width,) = struct.unpack("<d", fh.read(8))
        spec = GridSpec(d, n, half_width)
        payload = fh.read()
        if len(payload) != spec.size * 8:
            raise NFSError(
                f"payload length {len(payload)} != expected {spec.size * 8} in {path}"
            )
        values = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return RealField(spec, values, role)
