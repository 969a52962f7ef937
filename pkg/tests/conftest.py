import numpy as np
import pytest

from ordinal_did import CellParams, Cutoffs, DgpSpec


@pytest.fixture(scope="session")
def base_dgp():
    """Benchmark J=3 design: counterfactual derived, treated arm explicit."""
    return DgpSpec(
        theta00=CellParams(-0.5, 1.5),
        theta01=CellParams(1.0, 1.0),
        theta10=CellParams(-1.5, 2.0),
        treated_params=CellParams(1.5, 1.5),
        cutoffs=Cutoffs((0.0, 1.0)),
        n_per_cell=2000,
        seed=20240501,
    )


@pytest.fixture(scope="session")
def nonparallel_dgp(base_dgp):
    """Same design but with an explicit theta11 that breaks the trend
    assumption (used by the equivalence-test studies)."""
    from dataclasses import replace
    return replace(base_dgp, theta11=CellParams(1.5, 1.5))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
