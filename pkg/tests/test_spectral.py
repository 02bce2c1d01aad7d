"""Transform, symbol, convolution, and norm tests against independent oracles."""

import numpy as np
import pytest
from scipy.special import gamma

from nfs import builders
from nfs.errors import GridMismatch, NFSError
from nfs.grid import GridSpec, RealField, SpectralField, read_field, write_field
from nfs.spectral import (
    apply_symbol,
    convolve,
    forward_transform,
    inverse_transform,
    norm_h4,
    norm_l1,
    norm_l2,
    norm_l2_spectral,
    norm_linf,
    squared_freq,
)


def smooth_random_field(spec: GridSpec, seed: int) -> RealField:
    """Band-limited random field: a few low-frequency cosine modes."""
    rng = np.random.default_rng(seed)
    x = spec.axis_coords()
    scale = np.pi / spec.half_width
    vals = np.zeros(spec.shape)
    for _ in range(5):
        ks = rng.integers(-2, 3, size=spec.d)
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.normal()
        arg = np.zeros(spec.shape)
        for axis in range(spec.d):
            shape = [1] * spec.d
            shape[axis] = spec.n
            arg = arg + (ks[axis] * scale * x).reshape(shape)
        vals += amp * np.cos(arg + phase)
    return RealField(spec, vals.reshape(-1))


def brute_force_forward(f: RealField) -> np.ndarray:
    """O(n^(2d)) direct summation of the calibrated DFT."""
    spec = f.spec
    x = spec.axis_coords()
    p = spec.axis_freqs()
    vals = f.reshaped()
    out = np.zeros(spec.shape, dtype=complex)
    scale = spec.spacing**spec.d * (2 * np.pi) ** (-spec.d / 2)
    for kidx in np.ndindex(*spec.shape):
        acc = 0.0 + 0.0j
        for xidx in np.ndindex(*spec.shape):
            dot = sum(p[kidx[a]] * x[xidx[a]] for a in range(spec.d))
            acc += vals[xidx] * np.exp(-1j * dot)
        out[kidx] = scale * acc
    return out


def cos_axis_field(spec: GridSpec, freq: int = 1, fn=np.cos) -> RealField:
    x = fn(freq * spec.axis_coords())
    vals = np.broadcast_to(
        x.reshape((spec.n,) + (1,) * (spec.d - 1)), spec.shape
    ).copy()
    return RealField(spec, vals.reshape(-1))


class TestForwardTransform:
    def test_constant_field_single_mode(self):
        spec = GridSpec(3, 8, 2.0)
        F = forward_transform(RealField(spec, np.ones(spec.size)))
        expected = (2 * spec.half_width) ** 3 * (2 * np.pi) ** (-1.5)
        assert abs(F.coeffs[0, 0, 0] - expected) < 1e-12 * expected
        rest = F.coeffs.copy()
        rest[0, 0, 0] = 0
        assert np.max(np.abs(rest)) < 1e-12 * expected

    def test_cosine_two_modes(self):
        spec = GridSpec(2, 8, np.pi)
        F = forward_transform(cos_axis_field(spec))
        expected = (2 * np.pi) ** (spec.d / 2) / 2
        assert abs(F.coeffs[1, 0] - expected) < 1e-12
        assert abs(F.coeffs[-1, 0] - expected) < 1e-12
        keep = np.zeros(spec.shape, dtype=bool)
        keep[1, 0] = keep[-1, 0] = True
        assert np.max(np.abs(F.coeffs[~keep])) < 1e-12

    def test_matches_brute_force_dft(self):
        spec = GridSpec(2, 8, 1.5)
        f = smooth_random_field(spec, seed=7)
        F = forward_transform(f)
        oracle = brute_force_forward(f)
        assert np.max(np.abs(F.coeffs - oracle)) < 1e-12 * np.max(np.abs(oracle))


class TestInverseTransform:
    def test_zero_spectrum(self):
        spec = GridSpec(2, 8, 1.0)
        out = inverse_transform(SpectralField(spec, np.zeros(spec.shape, complex)))
        assert np.all(out.values == 0)

    def test_cosine_round_trip(self):
        spec = GridSpec(2, 8, np.pi)
        f = cos_axis_field(spec)
        out = inverse_transform(forward_transform(f))
        assert np.max(np.abs(out.values - f.values)) < 1e-12

    def test_random_round_trip(self):
        spec = GridSpec(2, 8, 2.5)
        f = smooth_random_field(spec, seed=3)
        out = inverse_transform(forward_transform(f))
        scale = np.max(np.abs(f.values))
        assert np.max(np.abs(out.values - f.values)) < 1e-12 * scale


class TestApplySymbol:
    def test_l_symbol_on_cosine(self):
        spec = GridSpec(2, 8, np.pi)
        F = forward_transform(cos_axis_field(spec))
        G = apply_symbol(F, "l_symbol")
        # |p| = 1 on the two active modes: 1 + 1 = 2
        assert np.max(np.abs(G.coeffs - 2.0 * F.coeffs)) < 1e-12

    def test_bilaplacian_on_sin2(self):
        spec = GridSpec(2, 8, np.pi)
        F = forward_transform(cos_axis_field(spec, freq=2, fn=np.sin))
        G = apply_symbol(F, "bilaplacian")
        assert np.max(np.abs(G.coeffs - 16.0 * F.coeffs)) < 1e-11

    def test_laplacian_vs_finite_differences(self):
        spec = GridSpec(2, 64, np.pi)
        f = smooth_random_field(spec, seed=11)
        lap = inverse_transform(apply_symbol(forward_transform(f), "laplacian"))
        vals = f.reshaped()
        fd = np.zeros_like(vals)
        h = spec.spacing
        for axis in range(spec.d):
            fd += (
                np.roll(vals, -1, axis) - 2 * vals + np.roll(vals, 1, axis)
            ) / h**2
        rel = np.max(np.abs(lap.reshaped() - fd)) / np.max(np.abs(lap.values))
        assert rel < 1e-2

    def test_l_symbol_is_bilaplacian_minus_laplacian(self):
        spec = GridSpec(2, 8, 1.7)
        F = forward_transform(smooth_random_field(spec, seed=5))
        combo = apply_symbol(F, "bilaplacian").coeffs - apply_symbol(F, "laplacian").coeffs
        assert np.array_equal(apply_symbol(F, "l_symbol").coeffs, combo)

    def test_unknown_symbol(self):
        spec = GridSpec(1, 8, 1.0)
        F = forward_transform(RealField(spec, np.ones(8)))
        with pytest.raises(NFSError):
            apply_symbol(F, "gradient")


class TestConvolve:
    def test_delta_identity(self):
        spec = GridSpec(2, 8, np.pi)
        delta = np.zeros(spec.shape)
        delta[spec.n // 2, spec.n // 2] = 1.0 / spec.spacing**2  # spike at x = 0
        k = RealField(spec, delta.reshape(-1))
        g = smooth_random_field(spec, seed=2)
        out = convolve(k, g)
        assert np.max(np.abs(out.values - g.values)) < 1e-12 * np.max(np.abs(g.values))

    def test_constant_total_mass(self):
        spec = GridSpec(2, 8, 1.5)
        one = RealField(spec, np.ones(spec.size))
        out = convolve(one, one)
        expected = (2 * spec.half_width) ** spec.d
        assert np.max(np.abs(out.values - expected)) < 1e-12 * expected

    def test_matches_direct_double_sum(self):
        spec = GridSpec(2, 8, 1.0)
        rng = np.random.default_rng(9)
        k = RealField(spec, rng.normal(size=spec.size))
        g = RealField(spec, rng.normal(size=spec.size))
        out = convolve(k, g)
        oracle = direct_convolution(k, g)
        assert np.max(np.abs(out.values - oracle.reshape(-1))) < 1e-12 * np.max(
            np.abs(oracle)
        )

    def test_commutes(self):
        spec = GridSpec(2, 8, 2.0)
        rng = np.random.default_rng(4)
        k = RealField(spec, rng.normal(size=spec.size))
        g = RealField(spec, rng.normal(size=spec.size))
        a, b = convolve(k, g), convolve(g, k)
        assert np.max(np.abs(a.values - b.values)) < 1e-12 * np.max(np.abs(a.values))

    def test_grid_mismatch(self):
        a = RealField(GridSpec(1, 8, 1.0), np.ones(8))
        b = RealField(GridSpec(1, 16, 1.0), np.ones(16))
        with pytest.raises(GridMismatch):
            convolve(a, b)


def direct_convolution(k: RealField, g: RealField) -> np.ndarray:
    """O(n^(2d)) quadrature (dx)^d sum_y k(x - y) g(y), periodic coordinates."""
    spec = k.spec
    n = spec.n
    kv, gv = k.reshaped(), g.reshaped()
    out = np.zeros(spec.shape)
    for xidx in np.ndindex(*spec.shape):
        acc = 0.0
        for yidx in np.ndindex(*spec.shape):
            # x - y = (xi - yi) dx, sampled at index (xi - yi + n/2) mod n
            kidx = tuple((xidx[a] - yidx[a] + n // 2) % n for a in range(spec.d))
            acc += kv[kidx] * gv[yidx]
        out[xidx] = acc * spec.spacing**spec.d
    return out


class TestNorms:
    def test_cos_d5(self):
        spec = GridSpec(5, 8, np.pi)
        f = cos_axis_field(spec)
        l2sq = (2 * np.pi) ** 5 / 2
        assert abs(norm_l2(f) ** 2 - l2sq) < 1e-9 * l2sq
        h4 = (2 * np.pi) ** 2.5
        assert abs(norm_h4(f) - h4) < 1e-10 * h4

    def test_zero_field(self):
        spec = GridSpec(2, 8, 1.0)
        z = RealField(spec, np.zeros(spec.size))
        assert norm_l1(z) == norm_l2(z) == norm_linf(z) == norm_h4(z) == 0.0

    def test_gaussian_closed_forms(self):
        d, s, amp = 3, 1.0, 0.7
        spec = GridSpec(d, 32, 8.0)
        f = RealField(
            spec, amp * builders._gaussian_hump(spec, np.zeros(d), s)
        )
        l1 = amp * (np.sqrt(2 * np.pi) * s) ** d
        l2 = amp * (np.pi * s**2) ** (d / 4)
        bilap_sq = (
            amp**2
            * s ** (2 * d)
            * (2 * np.pi ** (d / 2) / gamma(d / 2))
            * gamma((d + 8) / 2)
            / (2 * s ** (d + 8))
        )
        h4 = np.sqrt(l2**2 + bilap_sq)
        assert abs(norm_l1(f) - l1) < 1e-6 * l1
        assert abs(norm_l2(f) - l2) < 1e-6 * l2
        assert abs(norm_h4(f) - h4) < 1e-6 * h4

    def test_parseval(self):
        spec = GridSpec(2, 16, 1.3)
        rng = np.random.default_rng(12)
        f = RealField(spec, rng.normal(size=spec.size))
        F = forward_transform(f)
        assert abs(norm_l2(f) - norm_l2_spectral(F)) < 1e-10 * norm_l2(f)

    def test_transform_linearity(self):
        spec = GridSpec(2, 8, 1.0)
        rng = np.random.default_rng(21)
        a = RealField(spec, rng.normal(size=spec.size))
        b = RealField(spec, rng.normal(size=spec.size))
        lam = 2.375
        combo = RealField(spec, lam * a.values + b.values)
        lhs = forward_transform(combo).coeffs
        rhs = lam * forward_transform(a).coeffs + forward_transform(b).coeffs
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))


class TestFieldDump:
    def test_round_trip(self, tmp_path):
        spec = GridSpec(3, 4, 2.25)
        rng = np.random.default_rng(1)
        f = RealField(spec, rng.normal(size=spec.size))
        path = str(tmp_path / "field.nfs1")
        write_field(path, f)
        g = read_field(path)
        assert g.spec == spec
        assert np.array_equal(g.values, f.values)

    def test_rejects_bad_magic(self, tmp_path):
        path = tmp_path / "bad.nfs1"
        path.write_bytes(b"XXXX" + b"\0" * 32)
        with pytest.raises(NFSError, match="magic"):
            read_field(str(path))

    def test_rejects_short_payload(self, tmp_path):
        spec = GridSpec(1, 4, 1.0)
        path = str(tmp_path / "f.nfs1")
        write_field(path, RealField(spec, np.ones(4)))
        data = open(path, "rb").read()
        with open(path, "wb") as fh:
            fh.write(data[:-8])
        with pytest.raises(NFSError, match="length"):
            read_field(path)
