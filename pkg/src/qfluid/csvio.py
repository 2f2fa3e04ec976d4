"""Deterministic CSV output with a re-run header.

Every file starts with a comment line holding the exact command that
produced it, so outputs are reproducible from their own header.  Values
are written in scientific notation with 17 significant digits and files
are replaced atomically (write to a temporary name, then rename).
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

__all__ = ["write_csv", "read_csv", "format_value"]

COMMAND_PREFIX = "# command: "


def format_value(x) -> str:
    if isinstance(x, (str, bool)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def write_csv(path, columns: list[tuple[str, np.ndarray]],
              command: str | None = None, extra_comments: tuple[str, ...] = ()) -> None:
    """Write named columns atomically; ``command`` goes into the header."""
    names = [name for name, _ in columns]
    arrays = [np.atleast_1d(np.asarray(col)) for _, col in columns]
    n_rows = len(arrays[0])
    if any(len(a) != n_rows for a in arrays):
        raise ValueError("columns must have equal length")

    lines = []
    if command is not None:
        lines.append(COMMAND_PREFIX + command)
    lines.extend(f"# {c}" for c in extra_comments)
    lines.append(",".join(names))
    for i in range(n_rows):
        lines.append(",".join(format_value(a[i]) for a in arrays))
    text = "\n".join(lines) + "\n"

    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path) -> tuple[str | None, dict[str, np.ndarray]]:
    """Read a file written by ``write_csv``: (command, column mapping).

    Columns convert to float where possible and stay strings otherwise.
    """
    command = None
    with open(path, "r", encoding="utf-8") as fh:
        line = fh.readline()
        while line.startswith("#"):
            if line.startswith(COMMAND_PREFIX):
                command = line[len(COMMAND_PREFIX):].strip()
            line = fh.readline()
        names = line.strip().split(",")
        data = np.loadtxt(fh, delimiter=",", dtype=str, ndmin=2)
    out = {}
    for i, name in enumerate(names):
        col = data[:, i]
        try:
            out[name] = col.astype(float)
        except ValueError:
            out[name] = col
    return command, out
