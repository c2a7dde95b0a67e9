import pytest
from mock import patch

from heunflow import cli
from heunflow.lib.loader import load_defaults
from heunflow.lib.perturbation import rs_expand


@pytest.fixture(scope="session")
def defaults():
    return load_defaults()


@pytest.fixture(scope="session")
def ground_series_eps():
    # 2q-1 of the m=0 ground state, exact, up to eps^23
    return rs_expand(0, 0, 24)


@pytest.fixture()
def run_cli(monkeypatch, capsys):
    def _run(*argv):
        monkeypatch.setattr("sys.argv", ["heunflow", *argv])
        with patch("sys.exit") as exit_mock:
            cli.main()
        return exit_mock, capsys.readouterr()

    return _run
