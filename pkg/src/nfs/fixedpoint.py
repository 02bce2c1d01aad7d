"""Picard iteration for the perturbative solution and its certified checks.

The auxiliary map sends v to the solution u of

    [-lap + lap^2] u = eps * K conv g(u0 + v),

a strict contraction on the closed ball of radius rho in H4 whenever the
coupling eps stays below the certified threshold. The iteration is plain
(no acceleration): its geometric decay is itself one of the measured
quantities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import spectral
from .bounds import BoundsSnapshot, continuity_bound
from .errors import DegeneratePair, Diverged, NotConverged, OutsideBall
from .grid import GridSpec, RealField, SpectralField, check_same_grid, zeros_like
from .linear import LinearSolveOptions, solve_linear, solve_linear_full
from .nonlinearity import IntervalI, Nonlinearity, c2_distance, compose

BALL_SLACK = 1e-12
DEFAULT_DISCRETE_SLACK = 0.05


@dataclass
class ProblemSpec:
    """One fully assembled problem instance (diffusion constant fixed to 1)."""

    grid: GridSpec
    kernel: RealField
    source: RealField
    g: Nonlinearity
    epsilon: float
    rho: float = 1.0
    bounds: Optional[BoundsSnapshot] = None
    interval: Optional[IntervalI] = None
    tol_fp: float = 1e-10
    max_iter: int = 200
    mean_policy: str = "reject"

    def __post_init__(self):
        check_same_grid(self.kernel, self.source)
        if self.kernel.spec != self.grid:
            raise ValueError("kernel grid differs from problem grid")
        if not (0.0 < self.rho <= 1.0):
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if not np.any(self.kernel.values) or not np.any(self.source.values):
            raise ValueError("kernel and source must be nontrivial")

    @property
    def certified(self) -> bool:
        return self.bounds is not None and self.epsilon <= self.bounds.epsilon_max


@dataclass
class IterationTrace:
    iterate_h4: list[float] = field(default_factory=list)
    step_h4: list[float] = field(default_factory=list)
    ratio: list[float] = field(default_factory=list)
    residual: list[float] = field(default_factory=list)


@dataclass
class SolveReport:
    u0: RealField
    u_p: RealField
    u: RealField
    trace: IterationTrace
    bounds: Optional[BoundsSnapshot]
    converged: bool
    guarantee: str  # "certified" or "uncertified"


@dataclass
class ContractionStats:
    ratios: list[float]
    distances: list[float]
    max_ratio: float
    mean_ratio: float
    bound: Optional[float]  # eps * sigma when a snapshot is present


@dataclass
class ContinuityReport:
    measured: float
    bound: float
    g_distance: float
    verdict: bool


def apply_tg(v: RealField, ps: ProblemSpec, u0: RealField) -> RealField:
    """One application of the auxiliary map; mean of the convolution projected."""
    h4 = spectral.norm_h4(v)
    if h4 > ps.rho * (1.0 + BALL_SLACK):
        raise OutsideBall(f"||v||_H4 = {h4} exceeds rho = {ps.rho}")
    if ps.epsilon == 0.0:
        return zeros_like(ps.grid, role="iterate")
    big_g = compose(ps.g, u0, v, ps.interval)
    conv = spectral.convolve(ps.kernel, big_g)
    rhs = RealField(ps.grid, ps.epsilon * conv.values, role="source")
    if not np.any(rhs.values):
        return zeros_like(ps.grid, role="iterate")
    sol = solve_linear_full(rhs, LinearSolveOptions(mean_policy="project"))
    out = sol.u
    out.role = "iterate"
    return out


def solve_fixed_point(ps: ProblemSpec, v_start: Optional[RealField] = None) -> SolveReport:
    """Iterate v <- t_g(v) from v = 0 until the relative H4 step converges."""
    u0 = solve_linear(ps.source, LinearSolveOptions(mean_policy=ps.mean_policy))
    u0.role = "solution"
    v = v_start.copy("iterate") if v_start is not None else zeros_like(ps.grid, "iterate")
    trace = IterationTrace()
    converged = False
    grow_streak = 0
    for _ in range(ps.max_iter):
        v_next = apply_tg(v, ps, u0)
        step = spectral.norm_h4(RealField(ps.grid, v_next.values - v.values))
        trace.iterate_h4.append(spectral.norm_h4(v_next))
        trace.step_h4.append(step)
        if len(trace.step_h4) >= 2 and trace.step_h4[-2] > 0:
            trace.ratio.append(step / trace.step_h4[-2])
        else:
            trace.ratio.append(float("nan"))
        u_now = RealField(ps.grid, u0.values + v_next.values, role="solution")
        trace.residual.append(residual(u_now, ps))
        if len(trace.step_h4) >= 2 and step > trace.step_h4[-2]:
            grow_streak += 1
            if grow_streak >= 5:
                raise Diverged("fixed-point step grew for 5 consecutive iterations")
        else:
            grow_streak = 0
        v = v_next
        if step <= ps.tol_fp * max(1.0, spectral.norm_h4(v)):
            converged = True
            break
    if not converged:
        raise NotConverged(f"no convergence within {ps.max_iter} iterations")
    u_p = v.copy("solution")
    u = RealField(ps.grid, u0.values + u_p.values, role="solution")
    return SolveReport(
        u0=u0,
        u_p=u_p,
        u=u,
        trace=trace,
        bounds=ps.bounds,
        converged=True,
        guarantee="certified" if ps.certified else "uncertified",
    )


def residual(u: RealField, ps: ProblemSpec) -> float:
    """L2 norm of [lap - lap^2] u + eps * K conv g(u) + f, zero mode projected.

    The zero mode of the differential part vanishes identically, so the
    residual is meaningful only on the projected complement; projection here
    matches the mean handling of the solve.
    """
    uh = spectral.forward_transform(u)
    lu = spectral.apply_symbol(uh, "l_symbol")  # |p|^2 + |p|^4
    rhs = RealField(ps.grid, ps.source.values.copy())
    if ps.epsilon != 0.0:
        gu = RealField(ps.grid, np.asarray(ps.g.g(u.values)))
        conv = spectral.convolve(ps.kernel, gu)
        rhs.values = rhs.values + ps.epsilon * conv.values
    rh = spectral.forward_transform(rhs)
    res = rh.coeffs - lu.coeffs  # [lap - lap^2]u = -(l u)
    res[(0,) * ps.grid.d] = 0.0
    return spectral.norm_l2_spectral(SpectralField(ps.grid, res))


def sample_ball(
    grid: GridSpec, rho: float, rng: np.random.Generator
) -> RealField:
    """Draw a field with H4 norm uniform in (0, rho].

    Spectral coefficients are independent complex Gaussians damped by
    (1 + |p|^4)^(-1), Hermitian-symmetrized, transformed, then rescaled;
    the damping spans rough-to-smooth directions while staying in H4.
    """
    shape = grid.shape
    raw = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    p2 = spectral.squared_freq(grid)
    raw = raw / (1.0 + p2**2)
    rev = raw
    for axis in range(grid.d):
        rev = np.roll(np.flip(rev, axis=axis), 1, axis=axis)
    sym = 0.5 * (raw + np.conj(rev))
    f = spectral.inverse_transform(SpectralField(grid, sym), check_hermitian=False)
    h4 = spectral.norm_h4(f)
    if h4 == 0.0:
        raise DegeneratePair("sampled field vanished; retry with a new draw")
    target = rho * (1.0 - rng.uniform(0.0, 1.0))  # uniform in (0, rho]
    if target == 0.0:
        target = rho
    return RealField(grid, f.values * (target / h4), role="iterate")


def measure_contraction(
    ps: ProblemSpec, trials: int, seed: int, u0: Optional[RealField] = None
) -> ContractionStats:
    """Sample iterate pairs in the ball and measure the Lipschitz ratio."""
    if u0 is None:
        u0 = solve_linear(ps.source, LinearSolveOptions(mean_policy=ps.mean_policy))
    rng = np.random.default_rng(seed)
    ratios: list[float] = []
    distances: list[float] = []
    while len(ratios) < trials:
        v1 = sample_ball(ps.grid, ps.rho, rng)
        v2 = sample_ball(ps.grid, ps.rho, rng)
        dist = spectral.norm_h4(RealField(ps.grid, v1.values - v2.values))
        if dist < 1e-14:
            continue  # degenerate pair, resample
        t1 = apply_tg(v1, ps, u0)
        t2 = apply_tg(v2, ps, u0)
        num = spectral.norm_h4(RealField(ps.grid, t1.values - t2.values))
        ratios.append(num / dist)
        distances.append(dist)
    bound = ps.epsilon * ps.bounds.sigma if ps.bounds is not None else None
    return ContractionStats(
        ratios=ratios,
        distances=distances,
        max_ratio=max(ratios),
        mean_ratio=float(np.mean(ratios)),
        bound=bound,
    )


def continuity_experiment(
    ps1: ProblemSpec, ps2: ProblemSpec, slack: float = DEFAULT_DISCRETE_SLACK
) -> ContinuityReport:
    """Solve with two nonlinearities and compare against the sensitivity bound.

    The shared snapshot must be conservative for both nonlinearities (its
    C2 bound at least the larger of the two), so ps1.bounds is used and the
    caller is responsible for assembling it with max(M1, M2).
    """
    if ps1.epsilon != ps2.epsilon:
        raise ValueError("continuity experiment needs a shared epsilon")
    check_same_grid(ps1.kernel, ps2.kernel)
    snapshot = ps1.bounds
    if snapshot is None:
        raise ValueError("continuity experiment needs a bounds snapshot")
    r1 = solve_fixed_point(ps1)
    r2 = solve_fixed_point(ps2)
    measured = spectral.norm_h4(RealField(ps1.grid, r1.u.values - r2.u.values))
    interval = ps1.interval
    g_dist = c2_distance(ps1.g, ps2.g, interval)
    bound = continuity_bound(ps1.epsilon, snapshot, g_dist)
    return ContinuityReport(
        measured=measured,
        bound=bound,
        g_distance=g_dist,
        verdict=measured <= bound * (1.0 + slack) + 1e-15,
    )
