"""Compile filter rules into record predicates and emit tagged messages.

A rule is a conjunction of attribute threshold tests with an area label as
consequent. Records whose message matches a rule are worth publishing; the
outgoing text carries the campaign hashtag and never exceeds 140
characters (the comment is truncated, the hashtag is not).
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import IO

from .dataset import FEATURE_SCHEMA
from .errors import DeliveryError, RuleConfigError
from .records import TouristRecord

HASHTAG = "#KankouMap"
MAX_MESSAGE_LENGTH = 140

_OPS = {
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
}

# Hand-written rules may use the bare "tfidf" aggregate; it resolves to
# tfidf_sum by default (tfidf_max via the tfidf_field argument).
KNOWN_ATTRIBUTES = tuple(FEATURE_SCHEMA) + ("tfidf",)

_LOWER_OPS = (">", ">=")
_UPPER_OPS = ("<", "<=")


@dataclass(frozen=True)
class Condition:
    attr: str
    op: str
    value: float

    def __post_init__(self):
        if self.op not in _OPS:
            raise RuleConfigError(f"unknown comparator {self.op!r}")

    def holds(self, attributes: dict[str, float]) -> bool:
        return _OPS[self.op](attributes[self.attr], self.value)


@dataclass(frozen=True)
class FilterRule:
    conditions: tuple[Condition, ...]
    area: str

    def __post_init__(self):
        bounds: dict[str, dict[str, float]] = {}
        for c in self.conditions:
            slot = "lower" if c.op in _LOWER_OPS else "upper"
            per_attr = bounds.setdefault(c.attr, {})
            if slot in per_attr:
                raise RuleConfigError(
                    f"rule for {self.area!r} has two {slot} bounds on {c.attr}"
                )
            per_attr[slot] = c.value
        for attr, per_attr in bounds.items():
            if "lower" in per_attr and "upper" in per_attr:
                if per_attr["lower"] >= per_attr["upper"]:
                    raise RuleConfigError(
                        f"rule for {self.area!r} is unsatisfiable on {attr}: "
                        f"> {per_attr['lower']} and < {per_attr['upper']}"
                    )

    def matches(self, attributes: dict[str, float]) -> bool:
        return all(c.holds(attributes) for c in self.conditions)


def rule_attributes(
    record: TouristRecord, tfidf_max: float, tfidf_sum: float,
    tfidf_field: str = "tfidf_sum",
) -> dict[str, float]:
    """The attribute view of a record that rules evaluate against."""
    if tfidf_field not in ("tfidf_sum", "tfidf_max"):
        raise RuleConfigError(f"tfidf_field must be tfidf_sum or tfidf_max, got {tfidf_field}")
    attrs = {
        "lat": record.lat,
        "lon": record.lon,
        "alt": record.alt,
        "evaluation": float(record.evaluation),
        "tfidf_max": tfidf_max,
        "tfidf_sum": tfidf_sum,
    }
    attrs["tfidf"] = attrs[tfidf_field]
    return attrs


def evaluate(rules: list[FilterRule], attributes: dict[str, float]) -> str | None:
    """Area label of the first matching rule, or None."""
    for rule in rules:
        if rule.matches(attributes):
            return rule.area
    return None


def parse_rules(payload) -> list[FilterRule]:
    """Load rules from the JSON list format [{if: [{attr,op,value}...], then: area}]."""
    if isinstance(payload, str):
        payload = json.loads(payload)
    if not isinstance(payload, list):
        raise RuleConfigError("rule file must be a JSON list")
    rules = []
    for i, entry in enumerate(payload):
        try:
            conditions = tuple(
                Condition(attr=c["attr"], op=c["op"], value=float(c["value"]))
                for c in entry["if"]
            )
        except KeyError as exc:
            raise RuleConfigError(f"rule {i} missing key {exc}")
        for c in conditions:
            if c.attr not in KNOWN_ATTRIBUTES:
                raise RuleConfigError(
                    f"rule {i} references unknown attribute {c.attr!r}; "
                    f"valid: {', '.join(KNOWN_ATTRIBUTES)}"
                )
        if "then" not in entry:
            raise RuleConfigError(f"rule {i} missing key 'then'")
        rules.append(FilterRule(conditions=conditions, area=str(entry["then"])))
    return rules


def rules_to_json(rules: list[FilterRule]) -> list[dict]:
    return [
        {
            "if": [{"attr": c.attr, "op": c.op, "value": c.value} for c in r.conditions],
            "then": r.area,
        }
        for r in rules
    ]


@dataclass(frozen=True)
class OutgoingMessage:
    text: str
    area: str
    record_id: int


def format_message(record: TouristRecord, area: str) -> OutgoingMessage:
    """Comment plus hashtag, truncating the comment so the total fits 140."""
    budget = MAX_MESSAGE_LENGTH - len(HASHTAG) - 1
    comment = record.comment[:budget]
    text = f"{comment} {HASHTAG}" if comment else HASHTAG
    return OutgoingMessage(text=text, area=area, record_id=record.id)


class ListSink:
    """In-memory sink, mainly for tests and the HTTP service."""

    def __init__(self):
        self.messages: list[OutgoingMessage] = []

    def deliver(self, message: OutgoingMessage) -> None:
        self.messages.append(message)


class StdoutSink:
    def __init__(self, stream: IO[str] | None = None):
        self.stream = stream or sys.stdout

    def deliver(self, message: OutgoingMessage) -> None:
        self.stream.write(_json_line(message))
        self.stream.flush()


class JsonLinesSink:
    """One JSON object per line: {record_id, area, text}."""

    def __init__(self, path):
        self.path = path

    def deliver(self, message: OutgoingMessage) -> None:
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(_json_line(message))


def _json_line(message: OutgoingMessage) -> str:
    return json.dumps(
        {"record_id": message.record_id, "area": message.area, "text": message.text},
        ensure_ascii=False,
    ) + "\n"


def emit(record: TouristRecord, area: str, sink) -> OutgoingMessage:
    """Format and deliver exactly once; sink failures surface with the message."""
    message = format_message(record, area)
    try:
        sink.deliver(message)
    except Exception as exc:
        raise DeliveryError(message, exc) from exc
    return message
