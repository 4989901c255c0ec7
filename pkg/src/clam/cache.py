"""Binary cache files for the spf, phi and lambda tables.

Layout (little-endian)::

    magic     4 bytes   b"CLAM"
    version   u16       1
    kind      u8        0 = spf, 1 = phi, 2 = lambda
    limit     u64
    entries   (limit + 1) x u32
    checksum  u64       sum of the entry bytes, mod 2**64
"""
from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

MAGIC = b"CLAM"
VERSION = 1
HEADER = struct.Struct("<4sHBQ")
TRAILER = struct.Struct("<Q")

KINDS = {"spf": 0, "phi": 1, "lambda": 2}
KIND_NAMES = {v: k for k, v in KINDS.items()}


class CacheError(Exception):
    """A cache file failed one of its integrity checks.

    ``check`` names the failing check: magic, version, kind, length or checksum.
    """

    def __init__(self, check: str, path, detail: str = ""):
        self.check = check
        self.path = path
        msg = f"{path}: cache {check} check failed"
        super().__init__(f"{msg} ({detail})" if detail else msg)


def payload_checksum(values: np.ndarray) -> int:
    raw = np.ascontiguousarray(values, dtype="<u4").view(np.uint8)
    return int(raw.sum(dtype=np.uint64))


def write_table(path, kind: str, values: np.ndarray) -> Path:
    path = Path(path)
    values = np.ascontiguousarray(values, dtype="<u4")
    limit = len(values) - 1
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, KINDS[kind], limit))
        fh.write(values.tobytes())
        fh.write(TRAILER.pack(payload_checksum(values)))
    os.replace(tmp, path)
    return path


def read_table(path, kind: str | None = None) -> tuple[str, np.ndarray]:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(HEADER.size)
        if len(head) < HEADER.size:
            raise CacheError("length", path, "truncated header")
        magic, version, kind_byte, limit = HEADER.unpack(head)
        if magic != MAGIC:
            raise CacheError("magic", path, repr(magic))
        if version != VERSION:
            raise CacheError("version", path, str(version))
        if kind_byte not in KIND_NAMES:
            raise CacheError("kind", path, str(kind_byte))
        name = KIND_NAMES[kind_byte]
        if kind is not None and name != kind:
            raise CacheError("kind", path, f"expected {kind}, found {name}")
        body = fh.read(4 * (limit + 1))
        tail = fh.read(TRAILER.size + 1)
    if len(body) != 4 * (limit + 1) or len(tail) != TRAILER.size:
        raise CacheError("length", path)
    values = np.frombuffer(body, dtype="<u4").astype(np.uint32)
    (stored,) = TRAILER.unpack(tail)
    if stored != payload_checksum(values):
        raise CacheError("checksum", path)
    return name, values


def default_cache_dir() -> Path:
    env = os.environ.get("CLAM_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "clam"


def table_path(directory, kind: str, limit: int) -> Path:
    return Path(directory) / f"{kind}-{limit}.clam"


def find_cached(directory, min_limit: int) -> int | None:
    """Smallest cached limit >= ``min_limit`` with all three tables present."""
    directory = Path(directory)
    if not directory.is_dir():
        return None
    best = None
    for p in directory.glob("spf-*.clam"):
        try:
            limit = int(p.stem.split("-", 1)[1])
        except ValueError:
            continue
        if limit < min_limit:
            continue
        if all(table_path(directory, k, limit).exists() for k in KINDS):
            best = limit if best is None else min(best, limit)
    return best
