"""Spectral solver for [-lap + lap^2] u = f and the sequence-convergence check.

The Fourier symbol |p|^2 + |p|^4 vanishes only at p = 0, so the solve divides
mode by mode away from zero. On the discrete torus the zero mode is a genuine
obstruction: under the default `reject` policy a source with too much mean
mass is refused; under `project` the mean is subtracted and recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .bounds import sphere_measure
from .errors import NonDecayingSource, TrivialSource
from .grid import GridSpec, RealField, SpectralField


@dataclass(frozen=True)
class LinearSolveOptions:
    zero_mode_tol: float = 1e-10
    mean_policy: str = "reject"  # or "project"

    def __post_init__(self):
        if self.zero_mode_tol < 0:
            raise ValueError("zero_mode_tol must be nonnegative")
        if self.mean_policy not in ("reject", "project"):
            raise ValueError(f"unknown mean_policy {self.mean_policy!r}")


@dataclass
class LinearSolution:
    u: RealField
    mean_adjustment: float  # zero-mode coefficient removed from f (0 if none)


@dataclass
class SequenceReport:
    df_l1: list[float] = field(default_factory=list)
    df_l2: list[float] = field(default_factory=list)
    du_h4: list[float] = field(default_factory=list)
    majorant: list[float] = field(default_factory=list)
    ok: list[bool] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(self.ok)


def _zero_index(spec: GridSpec) -> tuple:
    return (0,) * spec.d


def solve_linear_full(
    f: RealField, opts: LinearSolveOptions = LinearSolveOptions()
) -> LinearSolution:
    """Solve the fourth-order problem spectrally, reporting the mean handling."""
    l2 = spectral.norm_l2(f)
    if l2 == 0.0:
        raise TrivialSource("right-hand side is identically zero")
    fh = spectral.forward_transform(f)
    zero = _zero_index(f.spec)
    zero_mass = abs(fh.coeffs[zero])
    if opts.mean_policy == "reject" and zero_mass > opts.zero_mode_tol * l2:
        raise NonDecayingSource(
            f"zero-mode mass {zero_mass:.3e} exceeds {opts.zero_mode_tol:.1e} * "
            f"||f||_L2 = {opts.zero_mode_tol * l2:.3e}; use mean_policy=project"
        )
    mean_adjustment = float(fh.coeffs[zero].real)
    p2 = spectral.squared_freq(f.spec)
    denom = p2 + p2**2
    denom[zero] = 1.0  # symbol zero; mode set to zero below
    coeffs = fh.coeffs / denom
    coeffs[zero] = 0.0
    u = spectral.inverse_transform(SpectralField(f.spec, coeffs), check_hermitian=False)
    u.role = "solution"
    return LinearSolution(u=u, mean_adjustment=mean_adjustment)


def solve_linear(
    f: RealField, opts: LinearSolveOptions = LinearSolveOptions()
) -> RealField:
    return solve_linear_full(f, opts).u


def verify_h4(u: RealField) -> float:
    """H4 norm of a solution, stated with the norm used everywhere else."""
    return spectral.norm_h4(u)


def sequence_majorant(df_l1: float, df_l2: float, d: int) -> float:
    """Explicit convergence majorant for ||u_n - u||_H4.

    The bi-Laplacian part is bounded by ||f_n - f||_L2; the L2 part splits at
    |p| = 1 into  (1/2) ||f_n - f||_L2  plus
    (2 pi)^(-d/2) sqrt(|S^d| / (d - 4)) ||f_n - f||_L1.
    """
    low_high = 0.5 * df_l2 + (2.0 * np.pi) ** (-d / 2.0) * np.sqrt(
        sphere_measure(d) / (d - 4)
    ) * df_l1
    return float(np.sqrt(df_l2**2 + low_high**2))


SEQUENCE_SLACK = 0.01


def sequence_experiment(
    f: RealField,
    perturbations: list[RealField],
    opts: LinearSolveOptions = LinearSolveOptions(),
    slack: float = SEQUENCE_SLACK,
) -> SequenceReport:
    """Solve for f and each f + perturbation; check the majorant dominates."""
    d = f.spec.d
    u = solve_linear(f, opts)
    report = SequenceReport()
    for pert in perturbations:
        fn = RealField(f.spec, f.values + pert.values, role="source")
        un = solve_linear(fn, opts)
        diff_f = RealField(f.spec, fn.values - f.values)
        diff_u = RealField(f.spec, un.values - u.values)
        df_l1 = spectral.norm_l1(diff_f)
        df_l2 = spectral.norm_l2(diff_f)
        du_h4 = spectral.norm_h4(diff_u)
        maj = sequence_majorant(df_l1, df_l2, d)
        report.df_l1.append(df_l1)
        report.df_l2.append(df_l2)
        report.du_h4.append(du_h4)
        report.majorant.append(maj)
        report.ok.append(du_h4 <= maj * (1.0 + slack))
    return report
