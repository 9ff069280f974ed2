"""
Helpers shared by the command modules: argument parsing, germ resolution and
output. stdout carries exactly one document per run (a report, or a trace
when no --out file is given); logs go to stderr.
"""
import argparse
import json
import sys
from typing import Optional, Union

import numpy as np
import structlog
from pydantic import BaseModel

from ..exceptions import DimensionMismatchError, MilnorError
from ..fibration.tube import in_tube, project_to_level
from ..germs.catalog import germ_catalog
from ..germs.models import GermSpec
from ..services.trace import FORMATS, TraceFile, render_trace

logger = structlog.get_logger(__name__)


def add_output_arguments(parser: argparse.ArgumentParser, samples: int = 256) -> None:
    parser.add_argument("--samples", type=int, default=samples, help=f"Trace samples (default: {samples}).")
    parser.add_argument("--out", default=None, help="Trace file; without it the trace is printed on stdout.")
    parser.add_argument("--format", choices=FORMATS, default="csv", help="Trace format (default: csv).")


def add_germ_argument(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--germ",
        required=required,
        help=f"Catalog germ ({', '.join(germ_catalog.names())}) or a path to a JSON germ document.",
    )


def parse_point(text: str) -> np.ndarray:
    """Parses a comma-separated point such as '0.01,0,0.2'."""
    try:
        return np.array([float(v) for v in text.split(",")], dtype=float)
    except ValueError as e:
        raise MilnorError(f"Cannot parse point '{text}': {e}", exit_code=2) from e


def resolve_germ(name: str) -> GermSpec:
    return germ_catalog.resolve(name)


def tube_start(g: GermSpec, x: np.ndarray) -> np.ndarray:
    """
    Returns x if it lies in the tube, otherwise its retraction onto the level
    through the radial projection of f(x) to the delta-sphere.
    """
    if x.shape != (g.n,):
        raise DimensionMismatchError(g.n, x.size)
    if in_tube(g, x).inside:
        return x
    fx = g.map.eval(x)
    norm = float(np.linalg.norm(fx))
    if norm == 0.0:
        raise MilnorError("Start point maps to 0; it cannot be placed in the tube.", exit_code=2)
    retracted = project_to_level(g, x, g.delta * fx / norm)
    logger.warning("Start point retracted into the tube", germ=g.name, moved=float(np.linalg.norm(retracted - x)))
    return retracted


def emit(payload: Union[BaseModel, dict]) -> None:
    """Prints a report as one JSON document on stdout."""
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json()
    else:
        text = json.dumps(payload)
    sys.stdout.write(text + "\n")


def emit_run(trace: TraceFile, report: Union[BaseModel, dict], args: argparse.Namespace) -> None:
    """Writes the trace to --out and the report to stdout, or the trace alone to stdout."""
    if args.out is None:
        sys.stdout.write(render_trace(trace, args.format))
        logger.info("Run report", report=report.model_dump() if isinstance(report, BaseModel) else report)
        return
    emit(report)


def status(passed: Optional[bool]) -> int:
    return 0 if passed else 1


