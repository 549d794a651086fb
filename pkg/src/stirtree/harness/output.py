"""JSON-lines and CSV writers with stable field order."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable
from typing import TextIO


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_records(records: Iterable[dict], fmt: str, stream: TextIO) -> None:
    records = [{k: _clean(v) for k, v in rec.items()} for rec in records]
    if fmt == "json":
        for rec in records:
            stream.write(json.dumps(rec) + "\n")
        return
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    fields: list[str] = []
    for rec in records:
        fields.extend(k for k in rec if k not in fields)
    writer = csv.DictWriter(stream, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: ("" if v is None else v) for k, v in rec.items()})
