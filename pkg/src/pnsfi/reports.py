"""Report rows and their table / CSV / JSON renderings.

Machine formats carry full float precision (``repr``), intervals as two
numeric fields, and absent components as nulls plus a reason field.  The
human table rounds to 3 decimals, half-to-even.  All output is ASCII with
LF line endings so identical inputs give byte-identical reports.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Optional, Sequence

from .bounds import CausationBounds, ConditionalRates, ProbabilityInterval, Undefined
from .estimation import bounds_with_uncertainty
from .inputs import FeatureInput
from .ranking import FeatureRecord, RankedFeature, RankingCriterion
from .study import KEYS, DistributionSummary

__all__ = [
    "FORMATS",
    "ReportRow",
    "build_rows",
    "render_bounds",
    "render_ranking",
    "render_simulation",
    "fmt_number",
]

FORMATS = ("table", "csv", "json")
_LABELS = {"pn": "PN-FI", "ps": "PS-FI", "pns": "PNS-FI"}


def fmt_number(value: Optional[float], places: int = 3) -> str:
    if value is None:
        return "n/a"
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN))


def fmt_interval(component, places: int = 3) -> str:
    if isinstance(component, ProbabilityInterval):
        return f"[{fmt_number(component.lower, places)}, {fmt_number(component.upper, places)}]"
    return f"n/a ({component.reason})"


def _interval_fields(prefix: str, component) -> dict[str, Any]:
    if isinstance(component, ProbabilityInterval):
        return {f"{prefix}_lower": component.lower, f"{prefix}_upper": component.upper, f"{prefix}_reason": None}
    return {f"{prefix}_lower": None, f"{prefix}_upper": None, f"{prefix}_reason": component.reason}


def _component_from(data: dict[str, Any], prefix: str):
    lower, upper = data.get(f"{prefix}_lower"), data.get(f"{prefix}_upper")
    if lower is None or upper is None:
        return Undefined(data.get(f"{prefix}_reason") or "undefined")
    return ProbabilityInterval(float(lower), float(upper))


@dataclass(frozen=True)
class ReportRow:
    feature: str
    rates: ConditionalRates
    bounds: CausationBounds
    controlled_total: Optional[int] = None
    experimental_total: Optional[int] = None
    confidence: Optional[float] = None
    envelope: Optional[CausationBounds] = None
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "feature": self.feature,
            "p_y_given_x": self.rates.p_y_given_x,
            "p_y_given_xp": self.rates.p_y_given_xp,
            "controlled_total": self.controlled_total,
            "experimental_total": self.experimental_total,
        }
        for key in KEYS:
            out.update(_interval_fields(key, self.bounds.get(key)))
        if self.confidence is not None:
            out["confidence"] = self.confidence
            for key in KEYS:
                comp = self.envelope.get(key) if self.envelope else Undefined("no_counts")
                out.update(_interval_fields(f"{key}_env", comp))
        out["flags"] = list(self.flags)
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ReportRow:
        bounds = CausationBounds(*(_component_from(data, k) for k in KEYS))
        envelope = None
        if data.get("confidence") is not None:
            parts = [_component_from(data, f"{k}_env") for k in KEYS]
            if isinstance(parts[2], ProbabilityInterval):
                envelope = CausationBounds(*parts)
        return cls(
            feature=data["feature"],
            rates=ConditionalRates(data["p_y_given_x"], data["p_y_given_xp"]),
            bounds=bounds,
            controlled_total=data.get("controlled_total"),
            experimental_total=data.get("experimental_total"),
            confidence=data.get("confidence"),
            envelope=envelope,
            flags=tuple(data.get("flags", ())),
        )


def build_rows(features: Sequence[FeatureInput], confidence: Optional[float] = None) -> list[ReportRow]:
    rows = []
    for feat in features:
        record = FeatureRecord.from_rates(feat.name, feat.rates, feat.flags)
        flags = set(record.flags)
        envelope = None
        if confidence is not None:
            if feat.rct is None:
                flags.add("no-counts")
            else:
                envelope = bounds_with_uncertainty(feat.rct, confidence)
        rows.append(
            ReportRow(
                feature=feat.name,
                rates=feat.rates,
                bounds=record.bounds,
                controlled_total=feat.rct.controlled.total if feat.rct else None,
                experimental_total=feat.rct.experimental.total if feat.rct else None,
                confidence=confidence,
                envelope=envelope,
                flags=tuple(sorted(flags)),
            )
        )
    return rows


def _csv_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ";".join(str(v) for v in value)
    return str(value)


def _to_csv(records: list[dict[str, Any]], columns: Optional[list[str]] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = columns or (list(records[0]) if records else [])
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_csv_value(rec.get(c)) for c in columns])
    return buf.getvalue()


def _to_json(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def _aligned(header: list[str], body: list[list[str]], footer: Sequence[str] = ()) -> str:
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.extend(footer)
    return "\n".join(lines) + "\n"


def render_bounds(rows: Sequence[ReportRow], fmt: str = "table") -> str:
    if fmt == "json":
        return _to_json([r.to_dict() for r in rows])
    if fmt == "csv":
        return _to_csv([r.to_dict() for r in rows])
    header = ["feature", "P(y|x)", "P(y|x')", *(_LABELS[k] for k in KEYS)]
    with_env = any(r.confidence is not None for r in rows)
    if with_env:
        level = next(r.confidence for r in rows if r.confidence is not None)
        header += [f"{_LABELS[k]} {fmt_number(level * 100, 0)}% env" for k in KEYS]
    header.append("flags")
    body = []
    for r in rows:
        line = [r.feature, fmt_number(r.rates.p_y_given_x), fmt_number(r.rates.p_y_given_xp)]
        line += [fmt_interval(r.bounds.get(k)) for k in KEYS]
        if with_env:
            line += [fmt_interval(r.envelope.get(k)) if r.envelope else "n/a (no counts)" for k in KEYS]
        line.append(",".join(r.flags))
        body.append(line)
    return _aligned(header, body)


def render_ranking(
    ranked: Sequence[RankedFeature],
    criterion: RankingCriterion,
    fmt: str = "table",
    threshold: Optional[float] = None,
    selected: Optional[Sequence[str]] = None,
    flags: Optional[dict[str, Sequence[str]]] = None,
) -> str:
    flags = flags or {}
    records = []
    for i, r in enumerate(ranked, start=1):
        records.append(
            {
                "rank": i,
                "feature": r.name,
                "score": r.score,
                "lower": r.interval.lower if r.interval else None,
                "upper": r.interval.upper if r.interval else None,
                "overlaps_next": r.overlaps_next,
                "flags": list(flags.get(r.name, ())),
            }
        )
    if fmt == "json":
        doc: dict[str, Any] = {"criterion": str(criterion), "ranking": records}
        if threshold is not None:
            doc["threshold"] = threshold
            doc["selected"] = list(selected or [])
        return _to_json(doc)
    if fmt == "csv":
        out = _to_csv(records, ["rank", "feature", "score", "lower", "upper", "overlaps_next", "flags"])
        if threshold is not None:
            out += f"# selected (score >= {threshold!r}): {';'.join(selected or [])}\n"
        return out
    header = ["rank", "feature", f"score ({criterion})", _LABELS[criterion.target], "note"]
    body = []
    for rec, r in zip(records, ranked):
        notes = list(rec["flags"])
        if r.overlaps_next:
            notes.append("overlaps next")
        body.append(
            [
                str(rec["rank"]),
                r.name,
                fmt_number(r.score) if r.score is not None else "n/a (undefined)",
                fmt_interval(r.interval) if r.interval else "n/a",
                ", ".join(notes),
            ]
        )
    footer = []
    if threshold is not None:
        footer.append(f"selected (score >= {fmt_number(threshold)}): {', '.join(selected or []) or '(none)'}")
    return _aligned(header, body, footer)


def _summary_dict(s: DistributionSummary) -> dict[str, Any]:
    d: dict[str, Any] = {"name": s.name}
    d.update(zip(("p_always", "p_causative", "p_preventive", "p_never"), s.dist.as_tuple()))
    d["monotone"] = s.monotone
    for key in KEYS:
        d[f"truth_{key}"] = s.truths[key]
    for key in KEYS:
        d.update(_interval_fields(key, s.exact_bounds.get(key)))
    for key in KEYS:
        d[f"contained_{key}"] = s.contained[key]
    d["contained_all"] = s.all_contained
    d["replications"] = s.replications
    for key in KEYS:
        d[f"coverage_{key}"] = s.coverage.get(key)
    d["coverage_all"] = s.coverage_all
    return d


def render_simulation(summaries: Sequence[DistributionSummary], fmt: str = "table", meta: Optional[dict] = None) -> str:
    records = [_summary_dict(s) for s in summaries]
    if fmt == "json":
        return _to_json({**(meta or {}), "distributions": records})
    if fmt == "csv":
        return _to_csv(records)

    def verdict(v: Optional[bool]) -> str:
        return "n/a" if v is None else ("yes" if v else "NO")

    header = ["distribution", "(a, c, p, n)", "key", "truth", "exact bounds", "contained", "coverage"]
    body = []
    for s in summaries:
        masses = "(" + ", ".join(fmt_number(m) for m in s.dist.as_tuple()) + ")"
        for j, key in enumerate(KEYS):
            cov = s.coverage.get(key)
            body.append(
                [
                    s.name if j == 0 else "",
                    masses if j == 0 else ("monotone" if j == 1 and s.monotone else ""),
                    key.upper(),
                    fmt_number(s.truths[key]),
                    fmt_interval(s.exact_bounds.get(key)),
                    verdict(s.contained[key]),
                    "-" if not s.replications else fmt_number(cov),
                ]
            )
    footer = []
    for s in summaries:
        if s.replications:
            footer.append(
                f"{s.name}: all defined truths covered in {fmt_number(s.coverage_all)} of {s.replications} replications"
            )
    return _aligned(header, body, footer)
