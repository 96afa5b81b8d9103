"""Helpers shared by the experiment scripts."""

from __future__ import annotations

import sys
from contextlib import contextmanager


@contextmanager
def output_stream(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def write_reports(reports, stream, timing: bool = False) -> None:
    """Concatenate convergence CSVs under a single header block."""
    for i, report in enumerate(reports):
        lines = report.to_csv(timing).splitlines(keepends=True)
        stream.writelines(lines if i == 0 else lines[2:])
