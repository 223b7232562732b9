import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citepath.network import CitationNetwork  # noqa: E402
from citepath.weighting import WeightedNetwork  # noqa: E402


def weighted(arcs_with_weights, scheme="SPC"):
    """WeightedNetwork from {(tail, head): weight}."""
    arcs = list(arcs_with_weights)
    nodes = sorted({n for a in arcs for n in a})
    return WeightedNetwork(CitationNetwork(nodes, arcs), dict(arcs_with_weights), scheme)


@pytest.fixture
def diamond():
    return CitationNetwork(["S", "a", "b", "T"], [("S", "a"), ("S", "b"), ("a", "T"), ("b", "T")])


@pytest.fixture
def sample_paths():
    from citepath.synthetic import sample_dir

    d = sample_dir()
    return {
        "records": d / "records.jsonl",
        "gender_map": d / "gender_map.csv",
        "mentions": d / "mentions.csv",
    }


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
