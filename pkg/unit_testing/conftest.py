import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import create_app  # noqa: E402
from config import Config  # noqa: E402
from app.services.foundation import enumerate_sing  # noqa: E402
from app.services.semigroup_core import sing_table  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive n=5 runs")


class TestingConfig(Config):
    TESTING = True
    LOG_LEVEL = 'WARNING'


@pytest.fixture
def app():
    """
    创建一个测试用的应用实例。
    """
    return create_app(TestingConfig)


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture(scope="session")
def sing3():
    """Sing(3) 的全部 21 个元素，按字典序。"""
    return enumerate_sing(3)


@pytest.fixture(scope="session")
def sing4():
    return enumerate_sing(4)


@pytest.fixture(scope="session")
def sing3_table():
    """
    Sing(3) 的凯莱表，整个测试会话共用一份。
    """
    return sing_table(3)
