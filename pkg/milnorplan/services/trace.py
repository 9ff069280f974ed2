"""
Trace files: sampled paths as CSV (`t,x1,...,xk[,f1,...,fp]`) or JSON.

CSV floats use 17 significant digits, '.' as decimal separator and '\\n' line
endings, so identical inputs give identical bytes.
"""
import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path as FilePath
from typing import Optional, Union

import numpy as np
import structlog
from pydantic import ValidationError

from ..exceptions import TraceExportError
from ..germs.models import GermSpec
from ..models import TraceHeader
from ..spheres.paths import Path

logger = structlog.get_logger(__name__)

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class TraceFile:
    header: TraceHeader
    rows: np.ndarray


def _number(value: float) -> str:
    return format(float(value), ".17g")


def sample_trace(
    path: Path,
    samples: int,
    germ: Optional[GermSpec] = None,
    kind: str = "path",
    planner: Optional[str] = None,
    region: Optional[int] = None,
) -> TraceFile:
    """
    Samples `path` at `samples` equally spaced parameters. When `germ` is given
    and the path lives in its domain, the values f1..fp are appended.
    """
    if samples < 2:
        raise TraceExportError(f"A trace needs at least 2 samples, got {samples}.")
    ts = np.linspace(0.0, 1.0, samples)
    xs = path.sample_at(ts)
    columns = ["t"] + [f"x{i}" for i in range(1, xs.shape[1] + 1)]
    blocks = [ts[:, None], xs]
    if germ is not None and xs.shape[1] == germ.n:
        blocks.append(germ.map.eval_many(xs))
        columns += [f"f{i}" for i in range(1, germ.p + 1)]

    header = TraceHeader(
        kind=kind,
        germ=None if germ is None else germ.name,
        planner=planner,
        region=region,
        columns=columns,
        samples=samples,
    )
    return TraceFile(header=header, rows=np.hstack(blocks))


def render_trace(trace: TraceFile, fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = [",".join(trace.header.columns)]
        lines += [",".join(_number(v) for v in row) for row in trace.rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        document = {"header": trace.header.model_dump(), "rows": trace.rows.tolist()}
        return json.dumps(document) + "\n"
    raise TraceExportError(f"Unknown trace format '{fmt}'; expected one of {FORMATS}.")


def export_trace(
    path: Path,
    samples: int,
    file: Optional[Union[str, FilePath]] = None,
    fmt: str = "csv",
    **metadata,
) -> TraceFile:
    """
    Samples `path` and writes the trace to `file` (if given).

    Raises:
        TraceExportError: On fewer than two samples, an unknown format or an
            I/O failure.
    """
    trace = sample_trace(path, samples, **metadata)
    if file is not None:
        text = render_trace(trace, fmt)
        try:
            with open(file, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        except OSError as e:
            logger.error("Trace export failed", file=str(file), error=str(e))
            raise TraceExportError(f"Cannot write trace to {file}: {e}") from e
        logger.info("Trace written", file=str(file), format=fmt, samples=samples)
    return trace


def _validated(header: TraceHeader, rows: np.ndarray) -> TraceFile:
    if rows.ndim != 2 or rows.shape[1] != len(header.columns):
        raise TraceExportError("Trace rows do not match the header columns.")
    ts = rows[:, 0]
    if ts[0] != 0.0 or ts[-1] != 1.0 or np.any(np.diff(ts) <= 0.0):
        raise TraceExportError("Trace parameter t must increase strictly from 0 to 1.")
    return TraceFile(header=header, rows=rows)


def parse_trace(text: str, fmt: str = "csv") -> TraceFile:
    """Parses a rendered trace back into a TraceFile."""
    try:
        if fmt == "json":
            document = json.loads(text)
            header = TraceHeader.model_validate(document["header"])
            return _validated(header, np.array(document["rows"], dtype=float))
        if fmt == "csv":
            reader = csv.reader(io.StringIO(text))
            columns = next(reader)
            rows = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
            header = TraceHeader(kind="path", columns=columns, samples=len(rows))
            return _validated(header, rows)
    except (ValueError, KeyError, StopIteration, ValidationError) as e:
        raise TraceExportError(f"Malformed trace: {e}") from e
    raise TraceExportError(f"Unknown trace format '{fmt}'; expected one of {FORMATS}.")


def read_trace(file: Union[str, FilePath], fmt: Optional[str] = None) -> TraceFile:
    """Reads a trace file; the format defaults to the file suffix."""
    fmt = fmt or ("json" if str(file).endswith(".json") else "csv")
    try:
        text = FilePath(file).read_text(encoding="utf-8")
    except OSError as e:
        raise TraceExportError(f"Cannot read trace {file}: {e}") from e
    return parse_trace(text, fmt)
