"""Deterministic CSV/JSON writers shared by the data types and the CLI.

All floats are rendered with 12 significant digits and no locale
dependence, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import sys
from contextlib import contextmanager
from typing import Iterable


def fmt(x: float) -> str:
    """12-significant-digit text form of a float."""
    return f"{x:.12g}"


def round12(x: float) -> float:
    """Float rounded to 12 significant digits (for JSON payloads)."""
    return float(fmt(x))


@contextmanager
def _open_out(out):
    """Yield a text stream for ``out``: a path, an open stream, or None (stdout)."""
    if out is None:
        yield sys.stdout
    elif hasattr(out, "write"):
        yield out
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_rows(out, header: tuple[str, ...], rows: Iterable[tuple[str, ...]]) -> None:
    """Write a comma-delimited table with a mandatory header row."""
    with _open_out(out) as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_json(out, payload: dict) -> None:
    """Write a JSON object with stable key order and a trailing newline."""
    with _open_out(out) as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")
