"""Bound reports and their JSON/CSV forms."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .errors import DomainError


class BoundKind(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: BoundKind
    value: float
    source: str
    certified: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundEntry":
        return cls(
            name=str(d["name"]),
            kind=BoundKind(d["kind"]),
            value=float(d["value"]),
            source=str(d["source"]),
            certified=_as_bool(d.get("certified", True)),
        )


def _as_bool(v) -> bool:
    if isinstance(v, str):
        return v.strip().lower() in ("true", "1", "yes")
    return bool(v)


@dataclass
class BoundReport:
    """Named lower/upper bounds for one problem instance."""

    problem: dict = field(default_factory=dict)
    entries: list[BoundEntry] = field(default_factory=list)

    def add(self, entry: BoundEntry) -> None:
        self.entries.append(entry)

    @property
    def lowers(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.kind is BoundKind.LOWER]

    @property
    def uppers(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.kind is BoundKind.UPPER]

    def best_lower(self) -> BoundEntry | None:
        return max(self.lowers, key=lambda e: e.value, default=None)

    def best_upper(self) -> BoundEntry | None:
        return min(self.uppers, key=lambda e: e.value, default=None)

    def get(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def is_consistent(self, rtol: float = 1e-12) -> bool:
        """Every lower value is at most every upper value."""
        lo, up = self.best_lower(), self.best_upper()
        if lo is None or up is None:
            return True
        return lo.value <= up.value * (1.0 + rtol)

    def to_dict(self) -> dict:
        return {"problem": dict(self.problem), "bounds": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(dict(d.get("problem", {})), [BoundEntry.from_dict(e) for e in d["bounds"]])

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "BoundReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        return rows_to_csv([e.to_dict() for e in self.entries])


@dataclass
class EigenBoundReport(BoundReport):
    """Lower bounds for the first eigenvalue; ``best`` is the largest."""

    def add(self, entry: BoundEntry) -> None:
        if entry.kind is not BoundKind.LOWER:
            raise DomainError("eigenvalue reports hold lower bounds only")
        super().add(entry)

    @property
    def best(self) -> BoundEntry:
        return self.best_lower()


def format_csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def rows_to_csv(rows: list[dict]) -> str:
    """CSV with a mandatory header; floats use shortest round-trip repr."""
    columns: list[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_csv_value(row.get(c)) for c in columns])
    return buf.getvalue()


def format_table_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return f"{v:.11e}"
    if v is None:
        return "-"
    return str(v)


def rows_to_table(rows: list[dict]) -> str:
    """Fixed-width text table, floats at 12 significant digits."""
    columns: list[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    cells = [[format_table_value(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"
