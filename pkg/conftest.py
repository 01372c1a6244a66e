"""
Shared pytest fixtures
"""

import pytest

from curvkit.utils.logger import logger


@pytest.fixture
def caplog_loguru():
    """Messages logged through loguru while the test runs"""
    messages = []
    handler_id = logger.add(lambda message: messages.append(message.record['message']), level='DEBUG')
    yield messages
    logger.remove(handler_id)


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Results and logs under tmp_path, single worker thread"""
    monkeypatch.setenv('CURVKIT_OUTPUT_DIR', str(tmp_path / 'results'))
    monkeypatch.setenv('CURVKIT_THREADS', '2')
    monkeypatch.setenv('LOG_EXPERIMENTS', 'false')
    monkeypatch.chdir(tmp_path)
    return tmp_path
