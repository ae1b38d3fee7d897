import pytest

from geodoc.config import PipelineConfig
from geodoc.pipeline import Resources


@pytest.fixture(scope="session")
def config():
    return PipelineConfig()


@pytest.fixture(scope="session")
def resources(config):
    return Resources.load(config)


@pytest.fixture(scope="session")
def gazetteer(resources):
    return resources.gazetteer


@pytest.fixture(scope="session")
def store(resources):
    return resources.store


@pytest.fixture(scope="session")
def fr_rules(resources):
    return resources.rulesets["fr"]


@pytest.fixture(scope="session")
def en_rules(resources):
    return resources.rulesets["en"]
