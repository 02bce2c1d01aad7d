"""Assembly of a fully certified problem from raw fields and a nonlinearity.

The dependency order matters: the threshold formula needs ||u0||_H4, so the
linear problem is solved before any constant is evaluated. `epsilon=None`
("auto") resolves to the certified maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import spectral
from .bounds import BoundsSnapshot, embedding_constant, make_snapshot
from .fixedpoint import ProblemSpec
from .grid import GridSpec, RealField
from .linear import LinearSolveOptions, solve_linear
from .nonlinearity import IntervalI, Nonlinearity, build_interval, c2_norm


@dataclass
class AssembledProblem:
    ps: ProblemSpec
    u0: RealField
    interval: IntervalI
    snapshot: BoundsSnapshot


def assemble_problem(
    grid: GridSpec,
    kernel: RealField,
    source: RealField,
    g: Nonlinearity,
    epsilon: Optional[float] = None,
    rho: float = 1.0,
    tol_fp: float = 1e-10,
    max_iter: int = 200,
    mean_policy: str = "reject",
    big_m: Optional[float] = None,
    g_other: Optional[Nonlinearity] = None,
) -> AssembledProblem:
    """Solve u0, derive all constants, and build the ProblemSpec.

    When `g_other` is given (continuity experiments), the snapshot's C2 bound
    covers both nonlinearities, so the certified range is valid for either.
    """
    u0 = solve_linear(source, LinearSolveOptions(mean_policy=mean_policy))
    u0_h4 = spectral.norm_h4(u0)
    c_e = embedding_constant(grid.d)
    interval = build_interval(u0_h4, c_e)
    m = c2_norm(g, interval, big_m=big_m).big_m
    if g_other is not None:
        m = max(m, c2_norm(g_other, interval).c2_norm)
    k_l1 = spectral.norm_l1(kernel)
    k_l2 = spectral.norm_l2(kernel)
    snapshot = make_snapshot(grid.d, rho, m, u0_h4, k_l1, k_l2)
    eps = snapshot.epsilon_max if epsilon is None else epsilon
    ps = ProblemSpec(
        grid=grid,
        kernel=kernel,
        source=source,
        g=g,
        epsilon=eps,
        rho=rho,
        bounds=snapshot,
        interval=interval,
        tol_fp=tol_fp,
        max_iter=max_iter,
        mean_policy=mean_policy,
    )
    return AssembledProblem(ps=ps, u0=u0, interval=interval, snapshot=snapshot)
