from __future__ import annotations

import json
import logging

import pytest

from xmodkit.observability import (
    JsonLogFormatter,
    Observability,
    SpanContext,
    configure_logging,
    emit_metric,
    get_observability,
    init_observability,
)


@pytest.fixture
def obs() -> Observability:
    return Observability("xmodkit-test", "0.0.1")


def test_span_records_tags_and_duration(obs: Observability) -> None:
    with obs.trace_operation("classify", tags={"xm": "inversion"}) as span:
        span.set_tag("classes", 2)
        span.log_event("enumerated", candidates=4)
    data = span.to_dict()
    assert data["status"] == "ok"
    assert data["tags"] == {"xm": "inversion", "version": "0.0.1", "classes": 2}
    assert data["elapsed_ms"] is not None and data["elapsed_ms"] >= 0
    assert data["events"][0]["name"] == "enumerated"
    assert data["events"][0]["fields"] == {"candidates": 4}


def test_span_marks_errors_and_reraises(obs: Observability) -> None:
    with pytest.raises(ValueError):
        with obs.trace_operation("reduce") as span:
            raise ValueError("bad stick")
    assert span.status == "error"
    assert span.tags["error.message"] == "bad stick"
    assert span.events[-1].fields["exception"] == "ValueError"


def test_child_spans_share_the_trace(obs: Observability) -> None:
    parent = SpanContext()
    with obs.trace_operation("check", parent_context=parent) as span:
        pass
    assert span.context.trace_id == parent.trace_id
    assert span.context.parent_span_id == parent.span_id


def test_metrics_summary(obs: Observability) -> None:
    obs.emit_metric("candidates", 4)
    obs.emit_metric("candidates", 512)
    summary = obs.get_metrics_summary()
    assert summary["xmodkit-test.candidates"] == {"count": 2, "sum": 516, "min": 4, "max": 512}
    obs.reset_metrics()
    assert obs.get_metrics_summary() == {}


def test_json_formatter_includes_context() -> None:
    record = logging.LogRecord("xmodkit", logging.INFO, __file__, 1, "found %d classes", (2,), None)
    record.context = {"command": "classify"}
    payload = json.loads(JsonLogFormatter().format(record))
    assert payload["message"] == "found 2 classes"
    assert payload["level"] == "INFO"
    assert payload["context"] == {"command": "classify"}


def test_configure_logging_replaces_handlers() -> None:
    root = logging.getLogger()
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        configure_logging("debug", json_format=True)
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, JsonLogFormatter)
        assert root.level == logging.DEBUG
        configure_logging("warning", json_format=False)
        assert not isinstance(root.handlers[0].formatter, JsonLogFormatter)
    finally:
        root.handlers[:] = saved_handlers
        root.setLevel(saved_level)


def test_finished_spans_keep_their_duration(obs: Observability) -> None:
    with obs.trace_operation("derive") as span:
        pass
    assert span.duration_ms() == span.elapsed_ms


def test_process_wide_instance() -> None:
    obs = init_observability("xmodkit-global", "0.0.2")
    assert get_observability() is obs
    emit_metric("classes", 3)
    assert obs.get_metrics_summary()["xmodkit-global.classes"]["count"] == 1
