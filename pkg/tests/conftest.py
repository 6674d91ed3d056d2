import warnings

import pytest

from ptdarboux import ginocchio as gin
from ptdarboux.core import build_contour


@pytest.fixture(scope="session")
def osc_contour():
    return build_contour(1.0, 8.0, 1601)


@pytest.fixture(scope="session")
def fine_contour():
    # analytic checks only, so a coarse-ish grid with wide window is fine
    return build_contour(1.0, 8.0, 801)


@pytest.fixture(scope="session")
def gin1():
    p = gin.GinocchioParams(gamma=1.0, s=2.0, alpha=0.75, q=1, epsilon=1.0)
    c = build_contour(1.0, 40.0, 4001)
    return p, gin.u_of_r(p, c)


@pytest.fixture(scope="session")
def gin2():
    """gamma = 2 inside the confining limit, used for spectra."""
    p = gin.GinocchioParams(gamma=2.0, s=2.0, alpha=0.75, q=1, epsilon=0.25)
    c = build_contour(0.25, 30.0, 6001)
    return p, gin.u_of_r(p, c)


@pytest.fixture(scope="session")
def gin2_eps1():
    """gamma = 2 at eps = 1: the map itself is well defined, spectra are not."""
    p = gin.GinocchioParams(gamma=2.0, s=2.0, alpha=0.75, q=1, epsilon=1.0)
    c = build_contour(1.0, 20.0, 2001)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return p, gin.u_of_r(p, c)
