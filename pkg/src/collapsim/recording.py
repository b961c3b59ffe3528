"""Time-series serialization: CSV and JSON, lossless round trip.

CSV columns: ``t_s,sigma_x_m,sigma_y_m,sigma_z_m,n_collisions,n_collapses,
regime,last_event``.  Floats are written in scientific notation with 17
significant digits, which round-trips every binary64 value exactly, so a
written file parses back to bit-identical records.
"""

from __future__ import annotations

import json
from typing import IO, Iterable, Sequence

from .engine import LastEvent, Regime, TimeSeriesRecord

CSV_HEADER = "t_s,sigma_x_m,sigma_y_m,sigma_z_m,n_collisions,n_collapses,regime,last_event"

FIELD_NAMES = tuple(CSV_HEADER.split(","))


class RecordWriteError(IOError):
    """Writing records failed; the sink may hold partial output."""


def _fmt(x: float) -> str:
    return format(x, ".16e")


def _record_row(r: TimeSeriesRecord) -> str:
    return (
        f"{_fmt(r.t)},{_fmt(r.sigma[0])},{_fmt(r.sigma[1])},{_fmt(r.sigma[2])},"
        f"{r.n_collisions},{r.n_collapses},{r.regime.value},{r.last_event.value}"
    )


def _record_obj(r: TimeSeriesRecord) -> dict:
    return {
        "t_s": r.t,
        "sigma_x_m": r.sigma[0],
        "sigma_y_m": r.sigma[1],
        "sigma_z_m": r.sigma[2],
        "n_collisions": r.n_collisions,
        "n_collapses": r.n_collapses,
        "regime": r.regime.value,
        "last_event": r.last_event.value,
    }


def write_records(records: Sequence[TimeSeriesRecord], format: str, sink: IO[str]) -> None:
    """Serialize time-ordered records to an open text sink."""
    try:
        if format == "csv":
            sink.write(CSV_HEADER + "\n")
            for r in records:
                sink.write(_record_row(r) + "\n")
        elif format == "json":
            json.dump([_record_obj(r) for r in records], sink, indent=1)
            sink.write("\n")
        else:
            raise ValueError(f"unknown record format {format!r}")
    except OSError as exc:
        raise RecordWriteError(
            f"failed while writing records ({exc}); output may be partial"
        ) from exc


def _from_fields(t, sx, sy, sz, ncoll, ncolp, regime, last_event) -> TimeSeriesRecord:
    return TimeSeriesRecord(
        t=float(t),
        sigma=(float(sx), float(sy), float(sz)),
        n_collisions=int(ncoll),
        n_collapses=int(ncolp),
        regime=Regime(regime),
        last_event=LastEvent(last_event),
    )


def read_records(source: IO[str], format: str) -> list[TimeSeriesRecord]:
    """Parse records previously produced by :func:`write_records`."""
    if format == "csv":
        lines: Iterable[str] = (line.rstrip("\n") for line in source)
        header = next(iter(lines), None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        out = []
        for line in lines:
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 8:
                raise ValueError(f"malformed CSV row: {line!r}")
            out.append(_from_fields(*parts))
        return out
    if format == "json":
        doc = json.load(source)
        return [_from_fields(*(obj[name] for name in FIELD_NAMES)) for obj in doc]
    raise ValueError(f"unknown record format {format!r}")
