"""Signal file format: one-line JSON header plus a float64 payload.

Binary layout: a single UTF-8 JSON line (terminated by a newline) holding
{"format", "dims", "axes": [{"origin","step","count"}...], "domain_tag",
"params"}, followed by the samples as interleaved little-endian real/imag
float64 pairs in row-major axis order.  Binary round trips are byte-exact.

The CSV variant stores the same header as a leading "# " comment line and one
row per sample with index coordinates, axis coordinates, and re/im columns.

All writes are whole-file atomic (temp file in the target directory, then
rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import Field, Grid, QpftParams, validate_params
from .errors import DimMismatch

FORMAT_NAME = "qpft-signal"
FORMAT_VERSION = 1


def _header_dict(field: Field, params: QpftParams | None) -> dict:
    head = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "dims": field.grid.dims,
        "axes": [
            {"origin": field.grid.origins[k], "step": field.grid.steps[k],
             "count": field.grid.counts[k]}
            for k in range(field.grid.dims)
        ],
        "domain_tag": field.domain_tag,
        "params": None if params is None else [list(q) for q in params.quintuples],
    }
    return head


def _header_bytes(field: Field, params: QpftParams | None) -> bytes:
    return json.dumps(_header_dict(field, params), sort_keys=True,
                      separators=(",", ":")).encode() + b"\n"


def _parse_header(head: dict) -> tuple[Grid, str, QpftParams | None]:
    if head.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} file")
    axes = head["axes"]
    if len(axes) != head["dims"]:
        raise DimMismatch("header dims disagree with axis list")
    grid = Grid(
        tuple(a["origin"] for a in axes),
        tuple(a["step"] for a in axes),
        tuple(a["count"] for a in axes),
    )
    params = None
    if head.get("params") is not None:
        params = validate_params(head["params"])
    return grid, head["domain_tag"], params


def _atomic_write(path: Path, data: bytes):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_signal(path, field: Field, params: QpftParams | None = None):
    """Write the binary container."""
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    _atomic_write(Path(path), _header_bytes(field, params) + payload)


def read_signal(path) -> tuple[Field, QpftParams | None]:
    """Read either container, dispatching on the leading byte."""
    path = Path(path)
    with open(path, "rb") as fh:
        first = fh.read(1)
        fh.seek(0)
        if first == b"#":
            return _read_csv(fh)
        header_line = fh.readline()
        head = json.loads(header_line.decode())
        grid, tag, params = _parse_header(head)
        payload = fh.read()
    expected = grid.size * 16
    if len(payload) != expected:
        raise ValueError(
            f"payload holds {len(payload)} bytes, header promises {expected}"
        )
    values = np.frombuffer(payload, dtype="<c16").reshape(grid.shape)
    return Field(grid, values, tag), params


def write_signal_csv(path, field: Field, params: QpftParams | None = None):
    """Write the CSV container (index coords, axis coords, re, im)."""
    grid = field.grid
    n = grid.dims
    lines = ["# " + _header_bytes(field, params).decode().strip()]
    cols = [f"i{k}" for k in range(n)] + [f"x{k}" for k in range(n)] + ["re", "im"]
    lines.append(",".join(cols))
    flat = field.values.ravel()
    for idx, value in zip(np.ndindex(*grid.shape), flat):
        coords = [repr(grid.origins[k] + idx[k] * grid.steps[k]) for k in range(n)]
        lines.append(",".join(
            [str(i) for i in idx] + coords + [repr(value.real), repr(value.imag)]
        ))
    _atomic_write(Path(path), ("\n".join(lines) + "\n").encode())


def _read_csv(fh) -> tuple[Field, QpftParams | None]:
    header_line = fh.readline().decode()
    head = json.loads(header_line.lstrip("#").strip())
    grid, tag, params = _parse_header(head)
    fh.readline()  # column names
    n = grid.dims
    values = np.empty(grid.size, dtype=complex)
    for row, line in enumerate(fh):
        parts = line.decode().strip().split(",")
        if len(parts) != 2 * n + 2:
            raise ValueError(f"row {row}: expected {2*n+2} columns, got {len(parts)}")
        values[row] = float(parts[2 * n]) + 1j * float(parts[2 * n + 1])
    if row + 1 != grid.size:
        raise ValueError(f"expected {grid.size} rows, got {row + 1}")
    return Field(grid, values, tag), params


def write_report(path, report: dict):
    """Atomic JSON report write with stable key order."""
    _atomic_write(Path(path), json.dumps(report, indent=2, sort_keys=True).encode() + b"\n")


def flatten_report(report: dict, prefix: str = "") -> list[tuple[str, str]]:
    """Dotted-key flattening for the optional CSV rendering of reports."""
    rows: list[tuple[str, str]] = []
    for key in sorted(report):
        value = report[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(flatten_report(value, name + "."))
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                if isinstance(item, dict):
                    rows.extend(flatten_report(item, f"{name}[{i}]."))
                else:
                    rows.append((f"{name}[{i}]", str(item)))
        else:
            rows.append((name, str(value)))
    return rows
