import json
import logging

from motives.shared.logging_utils import log_event


def test_log_event_always_contains_context_keys(caplog) -> None:
    with caplog.at_level(logging.INFO, logger="motives"):
        log_event("info", "test_event", custom="value")

    payload = json.loads(caplog.records[-1].message)
    assert payload["message"] == "test_event"
    assert payload["trace_id"] is None
    assert payload["motive"] is None
    assert payload["command"] is None
    assert payload["window"] is None
    assert payload["custom"] == "value"


def test_log_event_routes_levels(caplog) -> None:
    with caplog.at_level(logging.INFO, logger="motives"):
        log_event("warning", "window_extended", motive="[Z -> 0]")

    record = caplog.records[-1]
    assert record.levelno == logging.WARNING
    assert json.loads(record.message)["motive"] == "[Z -> 0]"
