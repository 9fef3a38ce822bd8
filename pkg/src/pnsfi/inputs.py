"""Readers for experiment tables.

Two schemas, each as CSV with a header row or as a JSON array of objects:

counts
    ``feature, arm, total`` plus either ``recognized`` or
    ``true_positive_rate`` (optionally with ``false_positive_rate``, which
    must be its complement).  Two rows per feature, ``arm`` being
    ``controlled`` (feature revealed) or ``experimental`` (covered).
rates
    ``feature, p_y_given_x, p_y_given_xp`` with optional ``arm_size`` or
    ``controlled_total`` / ``experimental_total``.  JSON reports written by
    ``pnsfi bounds`` are valid rates input.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .bounds import ConditionalRates
from .estimation import ArmCounts, RctResult, counts_from_rate, rates_from_counts

__all__ = ["InputError", "FeatureInput", "load_features", "parse_features", "bundled_path"]

log = logging.getLogger(__name__)

ARMS = ("controlled", "experimental")
TP_FP_TOL = 1e-9


class InputError(ValueError):
    """Malformed input, with an optional source location."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None, source: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def located(self, source: str) -> InputError:
        return InputError(self.message, self.line, self.column, source)

    def __str__(self) -> str:
        where = self.source or "<input>"
        if self.line is not None:
            where += f":{self.line}"
        if self.column is not None:
            where += f":{self.column}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class FeatureInput:
    name: str
    rates: ConditionalRates
    rct: Optional[RctResult] = None
    flags: frozenset[str] = field(default_factory=frozenset)


@dataclass
class _Record:
    line: Optional[int]
    fields: dict[str, Any]
    columns: dict[str, int]
    index: Optional[int] = None

    def loc(self, key: str) -> Optional[str]:
        if self.index is not None:
            return f"record {self.index} field {key!r}"
        if key in self.columns:
            return f"{self.columns[key]} ({key})"
        return key

    def has(self, key: str) -> bool:
        value = self.fields.get(key)
        return value is not None and not (isinstance(value, str) and value.strip() == "")

    def error(self, message: str, key: Optional[str] = None) -> InputError:
        column = self.loc(key) if key else (f"record {self.index}" if self.index is not None else None)
        return InputError(message, self.line, column)

    def text(self, key: str) -> str:
        if not self.has(key):
            raise self.error(f"missing value for {key!r}", key)
        return str(self.fields[key]).strip()

    def number(self, key: str) -> float:
        raw = self.fields.get(key)
        if not self.has(key):
            raise self.error(f"missing value for {key!r}", key)
        if isinstance(raw, bool):
            raise self.error(f"{key!r} must be numeric, got {raw!r}", key)
        if isinstance(raw, (int, float)):
            value = float(raw)
        else:
            text = str(raw).strip()
            try:
                value = float(text[:-1]) / 100.0 if text.endswith("%") else float(text)
            except ValueError:
                raise self.error(f"{key!r} must be numeric, got {text!r}", key) from None
        if not math.isfinite(value):
            raise self.error(f"{key!r} must be finite, got {raw!r}", key)
        return value

    def probability(self, key: str) -> float:
        value = self.number(key)
        if not 0.0 <= value <= 1.0:
            raise self.error(f"{key!r} must lie in [0, 1], got {value!r}", key)
        return value

    def integer(self, key: str) -> int:
        value = self.number(key)
        if value != int(value):
            raise self.error(f"{key!r} must be an integer, got {value!r}", key)
        return int(value)

    def optional_integer(self, key: str) -> Optional[int]:
        return self.integer(key) if self.has(key) else None


def _csv_records(text: str) -> list[_Record]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("empty input: no header row", line=1) from None
    header = [h.strip() for h in header]
    if len(set(header)) != len(header):
        raise InputError("duplicate column names in header", line=1)
    columns = {name: i + 1 for i, name in enumerate(header)}
    records = []
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        if len(row) > len(header):
            raise InputError(f"expected {len(header)} fields, got {len(row)}", line=reader.line_num, column=str(len(header) + 1))
        fields = dict(zip(header, row))
        records.append(_Record(reader.line_num, fields, columns))
    return records


def _json_records(text: str) -> list[_Record]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=str(exc.colno)) from None
    if isinstance(data, dict) and "features" in data:
        data = data["features"]
    if not isinstance(data, list):
        raise InputError("JSON input must be an array of objects")
    records = []
    for i, item in enumerate(data):
        if not isinstance(item, dict):
            raise InputError(f"record {i} is not an object")
        # no stable line numbers per JSON record; locate by record index
        records.append(_Record(None, item, {}, index=i))
    return records


def _looks_like_json(text: str, source: str) -> bool:
    if source.lower().endswith(".json"):
        return True
    return text.lstrip()[:1] in ("[", "{")


def _feature_of(rec: _Record) -> str:
    return rec.text("feature")


def _parse_rates(records: list[_Record]) -> list[FeatureInput]:
    features = []
    seen: set[str] = set()
    for rec in records:
        name = _feature_of(rec)
        if name in seen:
            raise rec.error(f"duplicate feature {name!r}", "feature")
        seen.add(name)
        rates = ConditionalRates(rec.probability("p_y_given_x"), rec.probability("p_y_given_xp"))
        arm_size = rec.optional_integer("arm_size")
        n_x = rec.optional_integer("controlled_total") or arm_size
        n_xp = rec.optional_integer("experimental_total") or arm_size
        rct = None
        if n_x is not None and n_xp is not None:
            try:
                rct = RctResult(
                    controlled=counts_from_rate(rates.p_y_given_x, n_x),
                    experimental=counts_from_rate(rates.p_y_given_xp, n_xp),
                )
            except ValueError as exc:
                raise rec.error(str(exc), "arm_size" if arm_size is not None else "controlled_total") from None
        features.append(FeatureInput(name, rates, rct))
    return features


def _arm_counts(rec: _Record) -> ArmCounts:
    total = rec.integer("total")
    if total < 1:
        raise rec.error(f"arm total must be >= 1, got {total}", "total")
    if rec.has("recognized"):
        recognized = rec.integer("recognized")
        if not 0 <= recognized <= total:
            raise rec.error(f"recognized must lie in [0, {total}], got {recognized}", "recognized")
        return ArmCounts(recognized, total)
    if not rec.has("true_positive_rate"):
        raise rec.error("counts row needs 'recognized' or 'true_positive_rate'", "recognized")
    tp = rec.probability("true_positive_rate")
    if rec.has("false_positive_rate"):
        fp = rec.probability("false_positive_rate")
        if abs(tp + fp - 1.0) > TP_FP_TOL:
            raise rec.error(
                f"true_positive_rate + false_positive_rate = {tp + fp!r}, expected 1", "false_positive_rate"
            )
    try:
        return counts_from_rate(tp, total)
    except ValueError as exc:
        raise rec.error(str(exc), "true_positive_rate") from None


def _parse_counts(records: list[_Record]) -> list[FeatureInput]:
    groups: dict[str, list[_Record]] = {}
    for rec in records:
        groups.setdefault(_feature_of(rec), []).append(rec)
    features = []
    for name, rows in groups.items():
        if len(rows) != 2:
            raise rows[-1].error(f"feature {name!r} needs exactly 2 arm rows, got {len(rows)}", "arm")
        labels = [r.text("arm").lower() for r in rows]
        flags = frozenset()
        if all(label in ARMS for label in labels):
            if labels[0] == labels[1]:
                raise rows[1].error(f"feature {name!r} has two {labels[0]!r} rows", "arm")
            by_arm = dict(zip(labels, rows))
        else:
            # malformed label: row order (experimental, controlled) decides
            bad = next(r for r, label in zip(rows, labels) if label not in ARMS)
            log.warning(
                "line %s: unrecognized arm label %r for feature %r; using row order (experimental, controlled)",
                bad.line, bad.fields.get("arm"), name,
            )
            by_arm = {"experimental": rows[0], "controlled": rows[1]}
            flags = frozenset({"arm-label-inferred"})
        rct = RctResult(
            controlled=_arm_counts(by_arm["controlled"]),
            experimental=_arm_counts(by_arm["experimental"]),
        )
        features.append(FeatureInput(name, rates_from_counts(rct), rct, flags))
    return features


def parse_features(text: str, source: str = "") -> list[FeatureInput]:
    """Parse an experiment table from ``text``; the schema is detected from its columns."""
    try:
        records = _json_records(text) if _looks_like_json(text, source) else _csv_records(text)
        if not records:
            raise InputError("no features in input")
        keys = set(records[0].fields)
        if "arm" in keys:
            features = _parse_counts(records)
        elif "p_y_given_x" in keys:
            features = _parse_rates(records)
        else:
            raise InputError(
                "unrecognized schema: expected columns 'feature, arm, recognized, total' "
                "or 'feature, p_y_given_x, p_y_given_xp'",
                line=1 if records[0].line is not None else None,
            )
    except InputError as exc:
        raise exc.located(source) from None
    return features


def load_features(path: str | Path) -> list[FeatureInput]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read input: {exc.strerror}", source=str(path)) from None
    return parse_features(text, str(path))


def bundled_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``table4_rates`` or ``table3_counts.csv``."""
    from importlib.resources import files

    root = files("pnsfi.data")
    for candidate in (name, f"{name}.csv", f"{name}.json"):
        entry = root / candidate
        if entry.is_file():
            return Path(str(entry))
    raise FileNotFoundError(f"no bundled fixture named {name!r}")
