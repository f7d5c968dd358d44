# tests/test_config_errors.py
import pytest

from src.config import DEFAULT_CONFIG, SolverConfig
from src.errors import (  # noqa
    EventBudgetExceeded, FeedLinkError, GeometryError, InputFormatError, NoEventFound, SweepError,
    TerminalStateMismatch, TooFewVertices,
)


def test_defaults():
    assert DEFAULT_CONFIG.eps_param(4.0) == pytest.approx(4e-9)
    assert DEFAULT_CONFIG.eps_contact(4.0) == pytest.approx(4e-7)
    assert DEFAULT_CONFIG.eps_tie(4.0) == pytest.approx(4e-12)
    assert DEFAULT_CONFIG.event_budget(10) == 600


def test_replace_keeps_other_fields():
    cfg = DEFAULT_CONFIG.replace(scan_samples=16)
    assert cfg.scan_samples == 16
    assert cfg.param_rel == DEFAULT_CONFIG.param_rel


@pytest.mark.parametrize(
    "kwargs, match",
    [({"param_rel": 0.0}, "param_rel must be > 0"), ({"tie_rel": -1.0}, "tie_rel must be > 0"),
     ({"contact_rel": 0.0}, "contact_rel must be > 0"),
     ({"scan_samples": 1}, "scan_samples must be >= 2"), ({"budget_factor": 0}, "event budget")],
)
def test_invalid_config(kwargs, match):
    with pytest.raises(ValueError, match=match):
        SolverConfig(**kwargs)


def test_hierarchy():
    assert issubclass(TooFewVertices, GeometryError) and issubclass(GeometryError, ValueError)
    assert issubclass(InputFormatError, FeedLinkError)
    for exc in (NoEventFound, EventBudgetExceeded, TerminalStateMismatch):
        assert issubclass(exc, SweepError) and issubclass(exc, RuntimeError)
