"""Forward / inverse transforms, Fourier symbols, convolution, and norms.

The discrete transform is calibrated to the continuum unitary convention

    F(p) = (2 pi)^(-d/2) * integral f(x) exp(-i p x) dx,

realized as the rectangle-rule quadrature (dx)^d (2 pi)^(-d/2) * DFT with a
per-axis phase (-1)^k that accounts for the box starting at -L. Spectral
quadratures carry the dual weight (dp)^d = (pi/L)^d, so Parseval reads

    ||f||_{L2}^2 = (dp)^d * sum_k |coeff(k)|^2.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NFSError, NonHermitianInput
from .grid import GridSpec, RealField, SpectralField, check_same_grid

HERMITIAN_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-10


@lru_cache(maxsize=32)
def _phase(d: int, n: int) -> np.ndarray:
    """Per-axis (-1)^k factors combined into the full lattice, FFT layout."""
    alt = (-1.0) ** np.arange(n)
    out = alt
    for _ in range(d - 1):
        out = np.multiply.outer(out, alt)
    return out.reshape((n,) * d)


@lru_cache(maxsize=32)
def _sq_freq(d: int, n: int, half_width: float) -> np.ndarray:
    """|p_k|^2 on the dual lattice, FFT layout."""
    pk = 2.0 * np.pi * np.fft.fftfreq(n, d=2.0 * half_width / n)
    acc = np.zeros((n,) * d)
    for axis in range(d):
        shape = [1] * d
        shape[axis] = n
        acc = acc + (pk**2).reshape(shape)
    return acc


def squared_freq(spec: GridSpec) -> np.ndarray:
    return _sq_freq(spec.d, spec.n, spec.half_width)


SYMBOLS = {
    "laplacian": lambda p2: -p2,
    "bilaplacian": lambda p2: p2**2,
    "l_symbol": lambda p2: p2 + p2**2,
    "h4_weight": lambda p2: p2**4,
}


def _scale(spec: GridSpec) -> float:
    return spec.spacing**spec.d * (2.0 * np.pi) ** (-spec.d / 2.0)


def forward_transform(f: RealField) -> SpectralField:
    """Quadrature approximation of the continuum unitary Fourier transform."""
    spec = f.spec
    coeffs = np.fft.fftn(f.reshaped())
    coeffs *= _phase(spec.d, spec.n)
    coeffs *= _scale(spec)
    return SpectralField(spec, coeffs)


def is_hermitian(F: SpectralField, tol: float = HERMITIAN_TOL) -> bool:
    """Check coeff(-k) == conj(coeff(k)) to a relative tolerance."""
    c = F.coeffs
    rev = c
    for axis in range(F.spec.d):
        rev = np.roll(np.flip(rev, axis=axis), 1, axis=axis)
    scale = np.max(np.abs(c))
    if scale == 0:
        return True
    return np.max(np.abs(c - np.conj(rev))) <= tol * scale


def inverse_transform(F: SpectralField, check_hermitian: bool = True) -> RealField:
    """Exact inverse of forward_transform; the imaginary residue is discarded."""
    spec = F.spec
    if check_hermitian and not is_hermitian(F, 1e-8):
        raise NonHermitianInput("spectrum lacks Hermitian symmetry for a real result")
    work = F.coeffs * (_phase(spec.d, spec.n) / _scale(spec))
    values = np.fft.ifftn(work)
    scale = np.max(np.abs(values))
    if scale > 0 and np.max(np.abs(values.imag)) > IMAG_RESIDUE_TOL * scale:
        raise NonHermitianInput(
            f"imaginary residue {np.max(np.abs(values.imag)) / scale:.3e} too large"
        )
    return RealField(spec, values.real.reshape(-1))


def apply_symbol(F: SpectralField, symbol: str) -> SpectralField:
    """Multiply the spectrum by a named function of |p_k|."""
    if symbol not in SYMBOLS:
        raise NFSError(f"unknown symbol {symbol!r}; choose from {sorted(SYMBOLS)}")
    p2 = squared_freq(F.spec)
    if symbol == "l_symbol":
        # summed mode by mode so it equals bilaplacian minus laplacian exactly
        return SpectralField(F.spec, F.coeffs * p2 + F.coeffs * p2**2)
    return SpectralField(F.spec, F.coeffs * SYMBOLS[symbol](p2))


def convolve(k: RealField, g: RealField) -> RealField:
    """Periodic quadrature of the continuum convolution integral.

    Equals (dx)^d * sum_y k(x - y) g(y) over the grid, computed spectrally
    as the inverse transform of (2 pi)^(d/2) * khat * ghat.
    """
    check_same_grid(k, g)
    spec = k.spec
    kh = forward_transform(k)
    gh = forward_transform(g)
    prod = (2.0 * np.pi) ** (spec.d / 2.0) * kh.coeffs * gh.coeffs
    return inverse_transform(SpectralField(spec, prod), check_hermitian=False)


def norm_l1(f: RealField) -> float:
    return f.spec.spacing**f.spec.d * float(np.sum(np.abs(f.values)))


def norm_l2(f: RealField) -> float:
    return float(np.sqrt(f.spec.spacing**f.spec.d * np.sum(f.values**2)))


def norm_linf(f: RealField) -> float:
    return float(np.max(np.abs(f.values)))


def norm_l2_spectral(F: SpectralField) -> float:
    """L2 norm via Parseval on the dual lattice."""
    w = F.spec.freq_spacing() ** F.spec.d
    return float(np.sqrt(w * np.sum(np.abs(F.coeffs) ** 2)))


def norm_h4(f: RealField) -> float:
    """Two-term Sobolev norm (||f||_{L2}^2 + ||lap^2 f||_{L2}^2)^(1/2).

    The bi-Laplacian part is evaluated spectrally through the |p|^8 weight.
    """
    F = forward_transform(f)
    return norm_h4_spectral(F)


def norm_h4_spectral(F: SpectralField) -> float:
    w = F.spec.freq_spacing() ** F.spec.d
    p2 = squared_freq(F.spec)
    mag2 = np.abs(F.coeffs) ** 2
    return float(np.sqrt(w * np.sum((1.0 + p2**4) * mag2)))


def outer_shell_mass_fraction(f: RealField, shell: float = 0.1) -> float:
    """Fraction of the L1 mass carried by points with any |x_i| >= (1-shell) L."""
    spec = f.spec
    coords = np.abs(spec.axis_coords())
    edge = (1.0 - shell) * spec.half_width
    outer = coords >= edge
    mask = np.zeros(spec.shape, dtype=bool)
    for axis in range(spec.d):
        shape = [1] * spec.d
        shape[axis] = spec.n
        mask |= outer.reshape(shape)
    total = np.sum(np.abs(f.values))
    if total == 0:
        return 0.0
    return float(np.sum(np.abs(f.values.reshape(spec.shape))[mask]) / total)
