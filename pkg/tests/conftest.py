import pytest

from minins.golden import golden_dir
from minins.scenario import parse_scenario
from minins.sim import Simulation


class GoldenRun:
    """One executed golden scenario with everything tests want to poke at."""

    def __init__(self, name, tmp_dir):
        self.name = name
        self.spec = parse_scenario((golden_dir() / f"{name}.scn").read_text())
        self.trace_path = tmp_dir / f"{name}.tr"
        self.sim = Simulation(self.spec, trace_path=str(self.trace_path))
        self.result = self.sim.run()

    def trace_lines(self):
        return self.trace_path.read_text().splitlines()


@pytest.fixture(scope="session")
def cbr_run(tmp_path_factory):
    """The deterministic CBR-only golden scenario, run once per session."""
    return GoldenRun("cbr_golden", tmp_path_factory.mktemp("cbr_golden"))


@pytest.fixture(scope="session")
def paper_run(tmp_path_factory):
    """The full two-generator scenario at its bundled seed, run once."""
    return GoldenRun("paper", tmp_path_factory.mktemp("paper"))
