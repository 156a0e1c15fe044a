from typing import List

import pytest
from click.testing import CliRunner, Result

from rolling_sphere._cli import cli


@pytest.fixture(scope="session")
def rolling_sphere_cli():
    yield cli


class RollingSphereCliRunner:
    runner = CliRunner()

    def __init__(self, cli, base_cmd: List[str]):
        self._cli = cli
        self.base_cmd = base_cmd

    def invoke(self, *cmd, ensure_successful: bool = True) -> str:
        return self.run(*cmd, ensure_successful=ensure_successful).output

    def run(self, *cmd, ensure_successful: bool = False) -> Result:
        full_cmd = self._get_cmd(*cmd)
        result = self.runner.invoke(self._cli, full_cmd, catch_exceptions=not ensure_successful)

        if ensure_successful:
            cmd_str = " ".join(full_cmd)
            msg = f"CMD '{cmd_str}' failed with output '{result.output}'"
            assert result.exit_code == 0, msg

        return result

    def _get_cmd(self, *args) -> List[str]:
        return [*self.base_cmd, *[str(a) for a in args]]


@pytest.fixture
def simulate(rolling_sphere_cli):
    return RollingSphereCliRunner(rolling_sphere_cli, ["simulate"])


@pytest.fixture
def holonomy(rolling_sphere_cli):
    return RollingSphereCliRunner(rolling_sphere_cli, ["holonomy"])


@pytest.fixture
def controllability(rolling_sphere_cli):
    return RollingSphereCliRunner(rolling_sphere_cli, ["controllability"])


@pytest.fixture
def ocp(rolling_sphere_cli):
    return RollingSphereCliRunner(rolling_sphere_cli, ["ocp"])


@pytest.fixture
def root(rolling_sphere_cli):
    return RollingSphereCliRunner(rolling_sphere_cli, [])
