"""Shared scenario fixtures: the recorded default configuration used by
the acceptance suite and several module tests."""

import numpy as np
import pytest

from leoris.channel import DirectPath, LinkConfig, RisLink
from leoris.fading import KappaMuParams
from leoris.geometry import Constellation, CylinderGeometry

# Recorded draw of the per-RIS user-hop exponents (sub-seed 370899, [2, 3)).
EXPONENT_SEED = 370899
RHO0_DEFAULT = 1.0e14  # 10 W over -100 dBm


def default_user_exponents(n: int) -> list[float]:
    rng = np.random.default_rng(EXPONENT_SEED)
    return (2.0 + rng.random(n)).tolist()


def default_links(n: int, elements: int = 20, rho0: float = RHO0_DEFAULT,
                  direct: bool = True) -> LinkConfig:
    eps = default_user_exponents(n)
    return LinkConfig(
        ris=tuple(
            RisLink(
                elements=elements,
                sat_fading=KappaMuParams(1.0, 2.0),
                user_fading=KappaMuParams(3.0, 3.0),
                sat_exponent=2.0,
                user_exponent=eps[i],
            )
            for i in range(n)
        ),
        direct=DirectPath(enabled=direct, fading=KappaMuParams(0.0, 1.0), exponent=2.0),
        transmit_snr=rho0,
    )


@pytest.fixture
def default_geometry() -> CylinderGeometry:
    return CylinderGeometry(base_radius=120.0, height=120.0)


@pytest.fixture
def default_constellation() -> Constellation:
    return Constellation(satellites=1000, altitude=1.0e6)
