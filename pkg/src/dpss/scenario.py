"""Scenario documents (JSON) and trace files (CSV)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, TextIO

from dpss.ensemble import Direction, Ensemble, Scalar, format_rational, parse_rational
from dpss.errors import ScenarioError

TRACE_HEADER = ("time", "uav", "location", "direction", "event")


@dataclass(frozen=True)
class Scenario:
    perimeter: Scalar
    n: int
    uavs: tuple[tuple[Scalar, Direction], ...]

    def to_ensemble(self) -> Ensemble:
        return Ensemble.build(self.perimeter, self.uavs)

    @classmethod
    def from_ensemble(cls, ens: Ensemble) -> "Scenario":
        return cls(ens.perimeter, ens.n, tuple(ens.pairs()))

    def to_json(self) -> dict:
        return {
            "perimeter": format_rational(self.perimeter),
            "n": self.n,
            "uavs": [
                {"location": format_rational(loc), "direction": int(d)} for loc, d in self.uavs
            ],
        }


def _rational(text, what):
    if not isinstance(text, str):
        raise ScenarioError("rational-format", f"{what} must be a string like \"3/2\", got {text!r}")
    try:
        return parse_rational(text)
    except ValueError:
        raise ScenarioError("rational-format", f"{what} is not p/q or p text: {text!r}") from None


def parse_scenario(document) -> Scenario:
    """Validate a scenario document, raising :class:`ScenarioError` at the first broken rule."""
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioError("encoding", str(exc)) from None
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ScenarioError("json", str(exc)) from None
    if not isinstance(doc, dict) or not {"perimeter", "n", "uavs"} <= doc.keys():
        raise ScenarioError("schema", "expected an object with perimeter, n and uavs")
    perimeter = _rational(doc["perimeter"], "perimeter")
    if perimeter <= 0:
        raise ScenarioError("perimeter", f"perimeter must be positive, got {doc['perimeter']}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ScenarioError("count", f"n must be an integer >= 1, got {n!r}")
    uavs = doc["uavs"]
    if not isinstance(uavs, list):
        raise ScenarioError("schema", "uavs must be a list")
    if len(uavs) != n:
        raise ScenarioError("count-mismatch", f"n is {n} but {len(uavs)} UAVs were given")
    states = []
    prev = None
    for i, entry in enumerate(uavs):
        if not isinstance(entry, dict) or not {"location", "direction"} <= entry.keys():
            raise ScenarioError("schema", f"uav {i} needs location and direction")
        loc = _rational(entry["location"], f"uav {i} location")
        d = entry["direction"]
        if isinstance(d, bool) or d not in (-1, 1):
            raise ScenarioError("direction", f"uav {i} direction must be -1 or 1, got {d!r}")
        if not 0 <= loc <= perimeter:
            raise ScenarioError("out-of-range", f"uav {i} location {entry['location']} outside [0, {doc['perimeter']}]")
        if prev is not None and loc < prev:
            raise ScenarioError("ordering", f"uav {i} at {entry['location']} is left of uav {i - 1}")
        prev = loc
        states.append((loc, Direction(d)))
    return Scenario(perimeter, n, tuple(states))


def emit_scenario(scenario) -> str:
    if isinstance(scenario, Ensemble):
        scenario = Scenario.from_ensemble(scenario)
    return json.dumps(scenario.to_json(), indent=2)


def load_scenario(path) -> Scenario:
    with open(path, "rb") as fh:
        return parse_scenario(fh.read())


class TraceRecord(NamedTuple):
    time: Scalar
    uav: int
    location: Scalar
    direction: Direction
    event: int

    def row(self):
        return (
            format_rational(self.time),
            self.uav,
            format_rational(self.location),
            int(self.direction),
            self.event,
        )


def write_trace(records: Iterable[TraceRecord], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for rec in records:
        writer.writerow(rec.row())


def read_trace(text: str) -> list[TraceRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != TRACE_HEADER:
        raise ValueError(f"unexpected trace header {header}")
    return [
        TraceRecord(parse_rational(t), int(u), parse_rational(loc), Direction(int(d)), int(ev))
        for t, u, loc, d, ev in reader
    ]
