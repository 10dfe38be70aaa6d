"""
Checkpoint files for long exhaustive searches

Layout (all integers little-endian):

    header  : magic b"GF2CKPT\\0", u16 version, u8 kind (0 = f, 1 = g),
              u16 n, u8 partition_bits, u8 min_range_bits
    records : u32 payload length, payload

An f payload is (u16 degree, u64 lo, u64 hi, u64 examined, u32 value, witness);
a g payload adds (u64 self-conjugate chains, u32 entries, entries * (u32 length,
u64 count)) after the witness. Polynomials are written as a u32 byte count
followed by their little-endian bytes. Only the parent process writes; a torn
last record (killed mid-append) is dropped on load.
"""
import logging
import os
import struct
from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

from app.exceptions import CheckpointError

logger = logging.getLogger(__name__)

MAGIC = b"GF2CKPT\x00"
VERSION = 1
KIND_F = 0
KIND_G = 1

_HEADER = struct.Struct("<8sHBHBB")
_LENGTH = struct.Struct("<I")
_F_BODY = struct.Struct("<HQQQI")
_G_EXTRA = struct.Struct("<QI")
_HIST_ENTRY = struct.Struct("<IQ")

RangeKey = Tuple[int, int, int]


@dataclass(frozen=True)
class FRangeResult:
    """Best trajectory length over one range of odd cores of one degree"""
    degree: int
    lo: int
    hi: int
    examined: int
    value: int
    witness: int

    @property
    def key(self) -> RangeKey:
        return (self.degree, self.lo, self.hi)


@dataclass(frozen=True)
class GRangeResult:
    """Within-degree chains starting in one range of odd polynomials"""
    degree: int
    lo: int
    hi: int
    examined: int
    value: int
    witness: int
    self_conjugate: int
    histogram: Dict[int, int] = field(default_factory=dict)

    @property
    def key(self) -> RangeKey:
        return (self.degree, self.lo, self.hi)


RangeResult = Union[FRangeResult, GRangeResult]


def _pack_int(value: int) -> bytes:
    raw = value.to_bytes((value.bit_length() + 7) // 8, "little")
    return _LENGTH.pack(len(raw)) + raw


def _unpack_int(buffer: bytes, offset: int) -> Tuple[int, int]:
    (size,) = _LENGTH.unpack_from(buffer, offset)
    offset += _LENGTH.size
    if offset + size > len(buffer):
        raise CheckpointError("truncated polynomial field")
    return int.from_bytes(buffer[offset:offset + size], "little"), offset + size


def encode_result(result: RangeResult) -> bytes:
    payload = _F_BODY.pack(result.degree, result.lo, result.hi, result.examined, result.value)
    payload += _pack_int(result.witness)
    if isinstance(result, GRangeResult):
        entries = sorted(result.histogram.items())
        payload += _G_EXTRA.pack(result.self_conjugate, len(entries))
        payload += b"".join(_HIST_ENTRY.pack(length, count) for length, count in entries)
    return _LENGTH.pack(len(payload)) + payload


def decode_result(kind: int, payload: bytes) -> RangeResult:
    try:
        degree, lo, hi, examined, value = _F_BODY.unpack_from(payload, 0)
        witness, offset = _unpack_int(payload, _F_BODY.size)
        if kind == KIND_F:
            if offset != len(payload):
                raise CheckpointError("trailing bytes in f record")
            return FRangeResult(degree, lo, hi, examined, value, witness)
        self_conjugate, entries = _G_EXTRA.unpack_from(payload, offset)
        offset += _G_EXTRA.size
        histogram = {}
        for _ in range(entries):
            length, count = _HIST_ENTRY.unpack_from(payload, offset)
            offset += _HIST_ENTRY.size
            histogram[length] = count
        if offset != len(payload):
            raise CheckpointError("trailing bytes in g record")
        return GRangeResult(degree, lo, hi, examined, value, witness, self_conjugate, histogram)
    except struct.error as exc:
        raise CheckpointError(f"corrupt checkpoint record: {exc}") from None


class CheckpointStore:
    """Append-only checkpoint for one (kind, n, partition) search"""

    def __init__(self, path: str, kind: int, n: int, partition_bits: int, min_range_bits: int):
        self.path = path
        self.kind = kind
        self.n = n
        self.partition_bits = partition_bits
        self.min_range_bits = min_range_bits

    def _header(self) -> bytes:
        return _HEADER.pack(MAGIC, VERSION, self.kind, self.n, self.partition_bits, self.min_range_bits)

    def start(self) -> None:
        """Create (or truncate) the file with a fresh header"""
        with open(self.path, "wb") as f:
            f.write(self._header())
            f.flush()
            os.fsync(f.fileno())
        logger.info(f"Checkpoint started at {self.path}")

    def load(self) -> Dict[RangeKey, RangeResult]:
        """Completed ranges recorded so far; the header must match this run"""
        with open(self.path, "rb") as f:
            data = f.read()
        if len(data) < _HEADER.size:
            raise CheckpointError(f"{self.path}: file shorter than its header")
        magic, version, kind, n, partition_bits, min_range_bits = _HEADER.unpack_from(data, 0)
        if magic != MAGIC:
            raise CheckpointError(f"{self.path}: not a checkpoint file")
        if version != VERSION:
            raise CheckpointError(f"{self.path}: checkpoint version {version}, expected {VERSION}")
        if (kind, n, partition_bits, min_range_bits) != (self.kind, self.n, self.partition_bits, self.min_range_bits):
            raise CheckpointError(
                f"{self.path}: checkpoint is for kind={kind} n={n} partition=({partition_bits},{min_range_bits}), "
                f"run is kind={self.kind} n={self.n} partition=({self.partition_bits},{self.min_range_bits})"
            )
        results: Dict[RangeKey, RangeResult] = {}
        offset = _HEADER.size
        while offset < len(data):
            end = offset + _LENGTH.size
            if end <= len(data):
                end += _LENGTH.unpack_from(data, offset)[0]
            if end > len(data):
                # a record torn by a kill mid-append; the ranges before it are intact
                logger.warning(f"Checkpoint {self.path}: dropping {len(data) - offset} bytes of an incomplete last record")
                os.truncate(self.path, offset)
                break
            result = decode_result(self.kind, data[offset + _LENGTH.size:end])
            offset = end
            results[result.key] = result
        logger.info(f"Checkpoint {self.path}: {len(results)} completed ranges loaded")
        return results

    def append(self, result: RangeResult) -> None:
        with open(self.path, "ab") as f:
            f.write(encode_result(result))
            f.flush()
            os.fsync(f.fileno())
