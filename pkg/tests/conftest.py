import numpy as np
import pytest

from app.tableaux import MethodSpec


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "results"
    path.mkdir()
    return path


@pytest.fixture
def imex_dec_glb2() -> MethodSpec:
    return MethodSpec(family="dec", kind="glb", order=2, mode="imex")
