"""Shared fixtures.

The genus-6 zeta computation for the representative parameter c = g
(packed index 2 in GF(16)) is by far the most expensive single object in
the suite; it is computed once per session and shared between the curve
module tests and the acceptance run.
"""

import pytest

from excpoly import FieldElem, make_field, plane_model, zeta


@pytest.fixture(scope="session")
def zeta_c2():
    ctx = make_field(2, 4)
    model = plane_model(4, FieldElem(ctx, 2))
    return zeta(model, 6)
