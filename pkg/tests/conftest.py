import pytest

from magnetoguide.coupling import AtomSite, build_sigma
from magnetoguide.geometry import WaveguideGeometry

# 3 pi / (8 sqrt(1 - pi^2/16)), evaluated independently in mpmath at 30 digits
GAMMA_PRIME_CENTER = 1.9032545704179131
TE10_AXIAL = 0.618990892446662


@pytest.fixture
def geom():
    return WaveguideGeometry(4.0, 2.0)


@pytest.fixture
def center_atom(geom):
    return build_sigma(geom, [AtomSite(2.0, 1.0, 0.0)])
