import numpy as np
import pytest
from hypothesis import settings

from conelat import ConeSpec, GmlsContext, MixedLatticeContext

settings.register_profile("conelat", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("conelat")

BUILTIN_CONES = {
    "orthant2": ConeSpec.orthant(2),
    "orthant4": ConeSpec.orthant(4),
    "lorentz3": ConeSpec.lorentz(3),
    "lorentz4": ConeSpec.lorentz(4),
    "pyramid": ConeSpec.pyramid(),
    "diamond": ConeSpec.diamond(),
}


@pytest.fixture(params=list(BUILTIN_CONES), ids=list(BUILTIN_CONES))
def cone(request):
    return BUILTIN_CONES[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def orthant_ctx():
    return GmlsContext(ConeSpec.orthant(2), ConeSpec.orthant(2))


@pytest.fixture(scope="session")
def pyramid_ctx():
    P = ConeSpec.pyramid()
    return GmlsContext(P, P)


@pytest.fixture(scope="session")
def dp_ctx():
    return GmlsContext(ConeSpec.diamond(), ConeSpec.pyramid())


REALIZED = {
    "orthant3": lambda: MixedLatticeContext(ConeSpec.orthant(3)),
    "lorentz3": lambda: MixedLatticeContext(ConeSpec.lorentz(3)),
    "lorentz4": lambda: MixedLatticeContext(ConeSpec.lorentz(4)),
    "diamond_pyramid": lambda: MixedLatticeContext(ConeSpec.diamond(), ConeSpec.pyramid()),
}


@pytest.fixture(params=list(REALIZED), ids=list(REALIZED))
def realized_ctx(request):
    return REALIZED[request.param]()
