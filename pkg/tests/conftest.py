import numpy as np
import pytest

from colliderbias import ColliderCpt, EdgeCpt, StructureKind, StructureParams

# Shared reference point: collider table with a strong positive risk-ratio
# interaction (P(C=1|0,0)=0.15, off-diagonals 0.25, P(C=1|1,1)=0.75) and
# balanced causes.  Hand-checkable: P(C=1)=0.35, cross-product difference
# 0.05 at level 1 and -0.35 at level 0.
REFERENCE_CPT = ColliderCpt(given_00=0.15, given_01=0.25, given_10=0.25, given_11=0.75)
UNIFORM_CPT = ColliderCpt(given_00=0.5, given_01=0.5, given_10=0.5, given_11=0.5)


@pytest.fixture
def reference_v_params() -> StructureParams:
    return StructureParams(
        kind=StructureKind.V, p_left=0.5, p_right=0.5, p_c_given=REFERENCE_CPT
    )


@pytest.fixture
def uniform_v_params() -> StructureParams:
    return StructureParams(
        kind=StructureKind.V, p_left=0.5, p_right=0.5, p_c_given=UNIFORM_CPT
    )


@pytest.fixture
def reference_y_params() -> StructureParams:
    return StructureParams(
        kind=StructureKind.Y,
        p_left=0.5,
        p_right=0.5,
        p_c_given=REFERENCE_CPT,
        p_d_given_c=EdgeCpt(given_0=0.2, given_1=0.7),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240214)
