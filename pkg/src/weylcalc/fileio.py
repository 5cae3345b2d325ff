"""Binary field and matrix files.

Field file: 16-byte magic ``WCLFIELD`` (NUL padded), little-endian u32 ``d``,
u32 ``N``, then ``N**d`` (state field) or ``N**(2d)`` (phase field) complex
values as interleaved little-endian float64 ``(re, im)`` in row-major order.

Matrix file: 16-byte magic ``WCLMATRX``, u32 rows, u32 cols, then
``rows*cols`` interleaved complex float64 values, row-major.
"""
import struct
from pathlib import Path

import numpy as np

from .errors import ShapeError

FIELD_MAGIC = b"WCLFIELD".ljust(16, b"\0")
MATRIX_MAGIC = b"WCLMATRX".ljust(16, b"\0")
_COMPLEX_LE = np.dtype("<c16")


def write_field(path, values, d, N):
    values = np.asarray(values, dtype=complex).reshape(-1)
    if values.size not in (N ** d, N ** (2 * d)):
        raise ShapeError(f"{values.size} values fit neither a state nor a phase field (d={d}, N={N})")
    with open(path, "wb") as fh:
        fh.write(FIELD_MAGIC)
        fh.write(struct.pack("<II", d, N))
        fh.write(values.astype(_COMPLEX_LE).tobytes())


def read_field(path):
    """Return ``(values, d, N)``; ``values`` is shaped ``(N,)*d`` or ``(N,)*2d``."""
    raw = Path(path).read_bytes()
    if raw[:16] != FIELD_MAGIC:
        raise ShapeError(f"{path}: not a WCLFIELD file")
    d, N = struct.unpack("<II", raw[16:24])
    values = np.frombuffer(raw[24:], dtype=_COMPLEX_LE).astype(complex)
    if values.size == N ** d:
        return values.reshape((N,) * d), d, N
    if values.size == N ** (2 * d):
        return values.reshape((N,) * (2 * d)), d, N
    raise ShapeError(f"{path}: payload of {values.size} values inconsistent with d={d}, N={N}")


def write_matrix(path, M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ShapeError("matrix file needs a 2-D array")
    with open(path, "wb") as fh:
        fh.write(MATRIX_MAGIC)
        fh.write(struct.pack("<II", *M.shape))
        fh.write(np.ascontiguousarray(M).astype(_COMPLEX_LE).tobytes())


def read_matrix(path):
    raw = Path(path).read_bytes()
    if raw[:16] != MATRIX_MAGIC:
        raise ShapeError(f"{path}: not a WCLMATRX file")
    rows, cols = struct.unpack("<II", raw[16:24])
    values = np.frombuffer(raw[24:], dtype=_COMPLEX_LE).astype(complex)
    if values.size != rows * cols:
        raise ShapeError(f"{path}: expected {rows * cols} values, found {values.size}")
    return values.reshape(rows, cols)
