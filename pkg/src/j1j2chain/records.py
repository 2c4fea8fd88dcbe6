"""Run configuration, result records and CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Optional, Sequence

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "J1J2CHAIN_OUTPUT_DIR"
FLOAT_DIGITS = 12

SCHEMAS = {
    "spectrum": ("index", "re", "im", "multiplicity"),
    "bethe": ("M", "root_index", "re", "im", "residual", "energy_re", "energy_im"),
    "density": ("u", "rho"),
    "dispersion": ("u_r", "u_s", "K", "dE"),
    "gap": ("a", "gap", "branch"),
    "reality": ("a", "all_real", "max_imag_rel"),
    "verify": ("check", "residual", "passed"),
}


def format_value(x: Any) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.{FLOAT_DIGITS}g}"
    return str(x)


def csv_text(kind: str, rows: Iterable[Sequence[Any]]) -> str:
    """Render rows under the fixed header for ``kind``; line endings are always '\\n'."""
    header = SCHEMAS[kind]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"{kind} row has {len(row)} fields, expected {len(header)}")
        w.writerow([format_value(_plain(v)) for v in row])
    return buf.getvalue()


def _plain(v):
    # numpy scalars -> python scalars so formatting is uniform
    if hasattr(v, "item"):
        return v.item()
    return v


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def resolve_output(path: Optional[str], command: str, fmt: str) -> Path:
    if path:
        return Path(path)
    return default_output_dir() / f"{command}.{fmt}"


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    grid: dict = field(default_factory=dict)
    output: Optional[str] = None
    fmt: str = "csv"
    tolerances: dict = field(default_factory=dict)
    seed: int = 0


def _encode(v):
    if isinstance(v, complex):
        return {"__complex__": [v.real, v.imag]}
    if isinstance(v, float) and not math.isfinite(v):
        return {"__float__": repr(v)}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    return _plain(v)


def _decode(v):
    if isinstance(v, dict):
        if set(v) == {"__complex__"}:
            re, im = v["__complex__"]
            return complex(re, im)
        if set(v) == {"__float__"}:
            return float(v["__float__"])
        return {k: _decode(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode(x) for x in v]
    return v


@dataclass
class ResultRecord:
    command: str
    params: dict
    kind: str
    rows: list
    created: str = ""
    failures: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        body = {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": _encode(self.params),
            "kind": self.kind,
            "columns": list(SCHEMAS[self.kind]),
            "rows": _encode([list(map(_plain, r)) for r in self.rows]),
            "failures": _encode(self.failures),
            "created": self.created,
        }
        return json.dumps(body, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        d = json.loads(text)
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {d.get('schema_version')}")
        return cls(d["command"], _decode(d["params"]), d["kind"], _decode(d["rows"]),
                   d.get("created", ""), _decode(d.get("failures", [])), d["schema_version"])

    def to_csv(self) -> str:
        return csv_text(self.kind, self.rows)


@dataclass(frozen=True)
class SweepPoint:
    index: int
    point: Any
    rows: list
    error: Optional[str] = None


def sweep(points: Sequence[Any], fn: Callable[[Any], list]) -> Iterator[SweepPoint]:
    """Apply ``fn`` to each grid point in order; failures are recorded and the sweep goes on."""
    if len(points) == 0:
        raise ValueError("sweep grid is empty")
    for i, pt in enumerate(points):
        try:
            yield SweepPoint(i, pt, list(fn(pt)))
        except (ArithmeticError, RuntimeError, ValueError, FloatingPointError) as exc:
            yield SweepPoint(i, pt, [], f"{type(exc).__name__}: {exc}")
