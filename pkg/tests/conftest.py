import json
from pathlib import Path

import pytest

from passmine.config import AnalysisParams
from passmine.fca.context import FormalContext
from passmine.ingest import parse_events_file

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def events_path() -> Path:
    return FIXTURES / "events_test.json"


@pytest.fixture(scope="session")
def matches_path() -> Path:
    return FIXTURES / "matches_test.json"


@pytest.fixture(scope="session")
def players_path() -> Path:
    return FIXTURES / "players_test.json"


@pytest.fixture(scope="session")
def fixture_events(events_path):
    return parse_events_file(events_path).events


@pytest.fixture(scope="session")
def default_params() -> AnalysisParams:
    return AnalysisParams()


@pytest.fixture()
def sample_record() -> dict:
    """The documented single-event shape of the source dataset."""
    return {
        "eventId": 8,
        "subEventName": "Simple pass",
        "tags": [{"id": 1801}],
        "playerId": 3542,
        "positions": [{"y": 50, "x": 50}, {"y": 53, "x": 35}],
        "matchId": 2565548,
        "eventName": "Pass",
        "teamId": 682,
        "matchPeriod": "1H",
        "eventSec": 2.9945919000000004,
        "subEventId": 85,
        "id": 180864419,
    }


@pytest.fixture()
def toy_context() -> FormalContext:
    """g1={a}, g2={a,b} over {a,b,c}; its basis is known exactly."""
    return FormalContext.from_row_labels(
        ["g1", "g2"], ["a", "b", "c"], {"g1": {"a"}, "g2": {"a", "b"}}
    )


@pytest.fixture()
def lineup_context() -> FormalContext:
    """Five passers against three receivers; every attribute set is closed."""
    rows = {
        "Rakitic": {"Suarez", "Neymar"},
        "Sergio": {"Messi", "Suarez"},
        "Busquet": {"Messi", "Suarez"},
        "Pique": {"Messi", "Neymar"},
        "Alba": {"Messi"},
    }
    return FormalContext.from_row_labels(
        list(rows), ["Messi", "Suarez", "Neymar"], rows
    )


def write_events(path: Path, records: list) -> Path:
    path.write_text(json.dumps(records), encoding="utf-8")
    return path
