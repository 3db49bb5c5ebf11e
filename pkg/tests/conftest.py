from fractions import Fraction as F

import pytest

from persuasion.model import canonical_params, phi_ai_floor


@pytest.fixture
def canon():
    return canonical_params()


@pytest.fixture
def halluc(canon):
    """Canonical point with phi_ai halfway between its floor and 1."""
    floor = phi_ai_floor(canon.with_(phi_ai=F(1, 2)))
    return canon.with_(phi_ai=(floor + 1) / 2)
