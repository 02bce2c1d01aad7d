import numpy as np
import pytest

from nfs import builders, pipeline
from nfs.grid import GridSpec
from nfs.nonlinearity import Nonlinearity


@pytest.fixture(scope="session")
def standard_scenario():
    """d = 5, n = 8, L = 4*pi, unit Gaussian kernel, two-hump source, g = z^2."""
    gs = GridSpec(5, 8, 4.0 * np.pi)
    kernel = builders.build_gaussian_kernel(gs, 1.0, 1.0)
    source = builders.build_gaussian_diff_source(gs)
    g = Nonlinearity(coeffs=[1.0])
    return pipeline.assemble_problem(gs, kernel, source, g)
