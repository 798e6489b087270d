"""
Run tracing, search metrics and JSON logging.

CLI commands and battery checks run inside spans; exhaustive searches
record candidate and class counts as metrics. None of this reaches the
reports, which stay byte-identical between runs.
"""

from __future__ import annotations

import json
import logging
import math
import time
import uuid
from contextlib import contextmanager
from typing import Any, ContextManager, Dict, Iterator, List, Literal, Optional

from pydantic import BaseModel, Field, PrivateAttr


def _new_id() -> str:
    return uuid.uuid4().hex


class JsonLogFormatter(logging.Formatter):
    """One JSON object per log line."""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        context = getattr(record, "context", None)
        if context:
            payload["context"] = context
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str)


def configure_logging(level: str = "WARNING", json_format: bool = True) -> None:
    """Point the root logger at stderr, replacing any existing handlers."""
    handler = logging.StreamHandler()
    handler.setFormatter(
        JsonLogFormatter() if json_format else logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level.upper())


class SpanContext(BaseModel):
    """Identifiers tying a span to its trace and parent."""

    trace_id: str = Field(default_factory=_new_id)
    span_id: str = Field(default_factory=_new_id)
    parent_span_id: Optional[str] = None

    def child(self) -> SpanContext:
        return SpanContext(trace_id=self.trace_id, parent_span_id=self.span_id)


class SpanEvent(BaseModel):
    name: str
    offset_ms: float
    fields: Dict[str, Any] = Field(default_factory=dict)


class Span(BaseModel):
    """One traced run: a command, a check or a search."""

    operation: str
    component: str
    context: SpanContext = Field(default_factory=SpanContext)
    tags: Dict[str, Any] = Field(default_factory=dict)
    status: Literal["ok", "error"] = "ok"
    events: List[SpanEvent] = Field(default_factory=list)
    elapsed_ms: Optional[float] = Field(None, description="Set when the span finishes")

    _started: float = PrivateAttr(default_factory=time.perf_counter)

    def set_tag(self, key: str, value: Any) -> None:
        self.tags[key] = value

    def log_event(self, event: str, **fields: Any) -> None:
        self.events.append(SpanEvent(name=event, offset_ms=self.duration_ms(), fields=fields))

    def set_status(self, status: Literal["ok", "error"]) -> None:
        self.status = status

    def finish(self) -> None:
        if self.elapsed_ms is None:
            self.elapsed_ms = self.duration_ms()

    def duration_ms(self) -> float:
        """Elapsed time so far, frozen once the span finishes."""
        if self.elapsed_ms is not None:
            return self.elapsed_ms
        return (time.perf_counter() - self._started) * 1000

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class MetricSeries(BaseModel):
    """Running count, total and range of one metric."""

    count: int = 0
    total: float = 0.0
    low: float = math.inf
    high: float = -math.inf

    def add(self, value: float) -> None:
        self.count += 1
        self.total += value
        self.low = min(self.low, value)
        self.high = max(self.high, value)

    def summary(self) -> Dict[str, float]:
        return {"count": self.count, "sum": self.total, "min": self.low, "max": self.high}


class Observability:
    """Spans, metrics and structured events for one component."""

    def __init__(self, component: str, version: str) -> None:
        self.component = component
        self.version = version
        self.logger = logging.getLogger(component)
        self.metrics: Dict[str, MetricSeries] = {}

    @contextmanager
    def trace_operation(
        self,
        operation: str,
        parent_context: Optional[SpanContext] = None,
        tags: Optional[Dict[str, Any]] = None,
    ) -> Iterator[Span]:
        """Run a block inside a span; exceptions mark it failed and propagate.

        Example:
            with obs.trace_operation("classify", tags={"xm": "inversion"}) as span:
                span.set_tag("classes", len(classify(xm, psi)))
        """
        span = Span(
            operation=operation,
            component=self.component,
            context=parent_context.child() if parent_context else SpanContext(),
            tags={**(tags or {}), "version": self.version},
        )
        self.logger.debug("%s started (span %s)", operation, span.context.span_id)
        try:
            yield span
        except Exception as exc:
            span.set_status("error")
            span.set_tag("error.message", str(exc))
            span.log_event("exception", exception=type(exc).__name__)
            raise
        finally:
            span.finish()
            self.logger.log(
                logging.WARNING if span.status == "error" else logging.INFO,
                "%s finished in %.2f ms (%s)",
                operation,
                span.duration_ms(),
                span.status,
                extra={"context": span.to_dict()},
            )

    def emit_metric(self, name: str, value: float, tags: Optional[Dict[str, str]] = None) -> None:
        """Record one value, e.g. ``emit_metric("candidates", 512)``."""
        key = f"{self.component}.{name}"
        self.metrics.setdefault(key, MetricSeries()).add(value)
        self.logger.debug("%s = %s", key, value, extra={"context": {"metric": key, "value": value, "tags": tags or {}}})

    def log_event(self, level: str, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        numeric = logging.getLevelName(level.upper())
        self.logger.log(
            numeric if isinstance(numeric, int) else logging.INFO,
            message,
            extra={"context": {"component": self.component, **(context or {})}},
        )

    def get_metrics_summary(self) -> Dict[str, Dict[str, float]]:
        return {key: series.summary() for key, series in self.metrics.items()}

    def reset_metrics(self) -> None:
        self.metrics = {}


_current: Optional[Observability] = None


def init_observability(component: str, version: str) -> Observability:
    """Install the process-wide instance used by the helpers below."""
    global _current
    _current = Observability(component, version)
    return _current


def get_observability() -> Observability:
    return _current if _current is not None else init_observability("xmodkit", "unknown")


def trace_operation(
    operation: str,
    parent_context: Optional[SpanContext] = None,
    tags: Optional[Dict[str, Any]] = None,
) -> ContextManager[Span]:
    return get_observability().trace_operation(operation, parent_context, tags)


def emit_metric(name: str, value: float, tags: Optional[Dict[str, str]] = None) -> None:
    get_observability().emit_metric(name, value, tags)


def log_event(level: str, message: str, context: Optional[Dict[str, Any]] = None) -> None:
    get_observability().log_event(level, message, context)
