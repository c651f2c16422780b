"""Dataset container format and plain-text import.

Binary layout, little-endian throughout:

    bytes 0..7   magic "PDSQDAT1"
    bytes 8..11  uint32 header length H
    bytes 12..   UTF-8 JSON header (model, theta, n, seed, created), H bytes
    then         n IEEE-754 float64 samples (8 n bytes, nothing after)

The header JSON is canonical (sorted keys, no spaces), so write(read(f))
reproduces f byte for byte.  Text import accepts one float per line with
'#'-prefixed metadata lines ignored.
"""

from __future__ import annotations

import json
import math
import struct

import numpy as np

from .errors import DataFormatError
from .sampler import DatasetMeta, QuadratureDataset

__all__ = ["MAGIC", "write_dataset", "read_dataset", "import_csv"]

MAGIC = b"PDSQDAT1"
_HEADER_KEYS = ("created", "model", "n", "seed", "theta")
_MAX_HEADER = 1 << 20


def _header_bytes(data):
    header = {
        "model": data.meta.model,
        "theta": data.theta,
        "n": data.meta.n,
        "seed": data.meta.seed,
        "created": data.meta.created,
    }
    return json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")


def write_dataset(data, path):
    """Write a dataset container; returns the byte count written."""
    if not isinstance(data, QuadratureDataset):
        raise TypeError("data must be a QuadratureDataset")
    hb = _header_bytes(data)
    payload = np.ascontiguousarray(data.samples, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(hb)))
        fh.write(hb)
        fh.write(payload)
    return len(MAGIC) + 4 + len(hb) + len(payload)


def read_dataset(path):
    """Read a dataset container written by write_dataset.

    Raises DataFormatError for a bad magic, malformed or incomplete header,
    or a payload whose length disagrees with the header's sample count.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 4:
        raise DataFormatError(f"{path}: file too short for a dataset container")
    if blob[: len(MAGIC)] != MAGIC:
        raise DataFormatError(f"{path}: bad magic, not a dataset container")
    (hlen,) = struct.unpack_from("<I", blob, len(MAGIC))
    if hlen > _MAX_HEADER or len(MAGIC) + 4 + hlen > len(blob):
        raise DataFormatError(f"{path}: header length {hlen} exceeds the file")
    start = len(MAGIC) + 4
    try:
        header = json.loads(blob[start : start + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"{path}: malformed header: {exc}") from exc
    if not isinstance(header, dict) or set(header) != set(_HEADER_KEYS):
        raise DataFormatError(f"{path}: header must carry exactly {_HEADER_KEYS}")
    n = header["n"]
    if not isinstance(n, int) or n < 1:
        raise DataFormatError(f"{path}: header sample count {n!r} invalid")
    theta = header["theta"]
    if not isinstance(theta, (int, float)) or not math.isfinite(theta):
        raise DataFormatError(f"{path}: header theta {theta!r} invalid")
    payload = blob[start + hlen :]
    if len(payload) != 8 * n:
        raise DataFormatError(
            f"{path}: payload holds {len(payload) // 8} samples, header says {n}"
        )
    samples = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    if not np.all(np.isfinite(samples)):
        raise DataFormatError(f"{path}: payload contains non-finite samples")
    meta = DatasetMeta(model=header["model"], seed=header["seed"], n=n,
                       created=header["created"])
    return QuadratureDataset(samples=samples, theta=float(theta), meta=meta)


def import_csv(path, theta=0.0):
    """Import pre-calibrated quadrature samples from plain text.

    One float per line; lines starting with '#' and blank lines are
    ignored.  The resulting dataset carries no model or seed provenance.
    """
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError as exc:
                raise DataFormatError(
                    f"{path}:{lineno}: not a number: {text!r}"
                ) from exc
            if not math.isfinite(value):
                raise DataFormatError(f"{path}:{lineno}: non-finite sample")
            values.append(value)
    if not values:
        raise DataFormatError(f"{path}: no samples found")
    samples = np.array(values, dtype=np.float64)
    meta = DatasetMeta(model=None, seed=None, n=samples.size)
    return QuadratureDataset(samples=samples, theta=float(theta), meta=meta)
