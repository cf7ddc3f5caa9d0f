import json

import pytest
from click.testing import CliRunner

from sumprod.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner):
    def _invoke(*args):
        return runner.invoke(cli, list(args))

    return _invoke


@pytest.fixture
def invoke_json(invoke):
    def _invoke(*args):
        result = invoke("--format", "json", "--no-timestamp", *args)
        assert result.exit_code == 0, result.output
        return json.loads(result.output)

    return _invoke
