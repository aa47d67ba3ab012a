import os
import tempfile

# The run ledger must point at a scratch database before skewlab is imported
os.environ.setdefault("SKEWLAB_DATABASE_URL", f"sqlite:///{tempfile.mkdtemp()}/runs.db")

import pytest

from skewlab.services.examples import build_quantum_plane, build_swap_product, build_truncpoly, build_zmod
from skewlab.services.skew_series import SeriesRing

ZMOD_CONFIG = """
[base]
family = zmod
prime = 2
exponent = 3

[layer]
var = y
precision = 3
"""

TRUNCPOLY_CONFIG = """
[base]
family = truncpoly
prime = 2
length = 4

[layer]
var = y
precision = 3
tau = map x + x^2
delta = tau-minus-id
"""

PRODUCT_CONFIG = """
[base]
family = product
prime = 2
copies = 2

[layer]
var = y
precision = 2
tau = cycle
"""

PLANE_CONFIG = """
[base]
family = quantum-plane
prime = 5
q = 2
precision = 6
"""


@pytest.fixture
def zmod8():
    return build_zmod(2, 3)


@pytest.fixture
def zmod8_series(zmod8):
    ring, skew = zmod8
    return SeriesRing(ring, skew, 3)


@pytest.fixture
def truncpoly():
    """F2[x]/(x^4) with tau(x) = x + x^2 and delta = tau - id."""
    return build_truncpoly(2, 4, (0, 1, 1), "tau-minus-id")


@pytest.fixture
def truncpoly_series(truncpoly):
    ring, skew = truncpoly
    return SeriesRing(ring, skew, 3)


@pytest.fixture
def swap():
    return build_swap_product(2, 2)


@pytest.fixture
def plane():
    return build_quantum_plane(5, 2, 6)
