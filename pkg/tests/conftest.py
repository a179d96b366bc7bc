import pytest

from pneumahand.config import build_hand_model, config_digest, load_config
from pneumahand.experiments import build_default_library


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def model(cfg):
    return build_hand_model(cfg)


@pytest.fixture(scope="session")
def digest(cfg):
    return config_digest(cfg)


@pytest.fixture(scope="session")
def library(model):
    return build_default_library(model)
