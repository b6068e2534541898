import pytest

from config import Config


@pytest.fixture(autouse=True)
def reset_config():
    """每个测试前后恢复默认配置"""
    Config.reset()
    yield
    Config.reset()
