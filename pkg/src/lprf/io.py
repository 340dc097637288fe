"""On-disk formats for keystreams and keys.

Keystream (binary, all integers big-endian)::

    b"LXKS" | version:u8 = 1 | desc_len:u16 | desc (ascii field description)
    | mode:u8 (0 counter, 1 geometric)
    | counter: start:u64   or   geometric: r coefficients of g as u64
    | M:u64 | ceil(M/8) bytes of packed bits

Key (text)::

    lprf-key 1
    field p=<p> r=<r> I=<c0,...,cr>
    degree <d>
    coeff <c0,...,c_{r-1}>     (d lines, K_{d-1} first)
"""

from __future__ import annotations

import struct
from pathlib import Path

from .exceptions import FormatError
from .field import FieldParams
from .prf import COUNTER, GEOMETRIC, Keystream, PrfKey

__all__ = ["dumps_keystream", "loads_keystream", "save_keystream", "load_keystream",
           "dumps_key", "loads_key", "save_key", "load_key"]

MAGIC = b"LXKS"
VERSION = 1
_MODES = {COUNTER: 0, GEOMETRIC: 1}


def dumps_keystream(ks: Keystream) -> bytes:
    desc = ks.params.describe().encode("ascii")
    out = [MAGIC, struct.pack(">BH", VERSION, len(desc)), desc, struct.pack(">B", _MODES[ks.mode])]
    if ks.mode == COUNTER:
        out.append(struct.pack(">Q", ks.start))
    else:
        out.append(struct.pack(f">{ks.params.r}Q", *ks.generator.coeffs))
    out.append(struct.pack(">Q", ks.length))
    out.append(ks.packed)
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError(f"keystream truncated at byte {len(self.data)} (needed {self.pos + n})")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def loads_keystream(data: bytes) -> Keystream:
    rd = _Reader(data)
    if rd.take(4) != MAGIC:
        raise FormatError("not a keystream file (bad magic)")
    version, dlen = rd.unpack(">BH")
    if version != VERSION:
        raise FormatError(f"unsupported keystream version {version}")
    try:
        params = FieldParams.parse(rd.take(dlen).decode("ascii"), allow_large=True)
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError(f"bad field description: {exc}") from exc
    (mode_byte,) = rd.unpack(">B")
    start = generator = None
    if mode_byte == 0:
        mode = COUNTER
        (start,) = rd.unpack(">Q")
    elif mode_byte == 1:
        mode = GEOMETRIC
        coeffs = rd.unpack(f">{params.r}Q")
        if any(c >= params.p for c in coeffs):
            raise FormatError("generator coefficient out of range")
        generator = params(coeffs)
    else:
        raise FormatError(f"unknown mode byte {mode_byte}")
    (M,) = rd.unpack(">Q")
    packed = rd.take((M + 7) // 8)
    if rd.pos != len(data):
        raise FormatError(f"{len(data) - rd.pos} trailing bytes after keystream")
    try:
        return Keystream(params, mode, M, packed, start=start, generator=generator)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def save_keystream(ks: Keystream, path) -> None:
    Path(path).write_bytes(dumps_keystream(ks))


def load_keystream(path) -> Keystream:
    return loads_keystream(Path(path).read_bytes())


def dumps_key(key: PrfKey) -> str:
    lines = ["lprf-key 1", f"field {key.field.describe()}", f"degree {key.degree}"]
    lines += [f"coeff {','.join(map(str, c.coeffs))}" for c in key.coefficients]
    return "\n".join(lines) + "\n"


def loads_key(text: str) -> PrfKey:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    try:
        if lines[0] != "lprf-key 1":
            raise FormatError("not a key file")
        tag, desc = lines[1].split(" ", 1)
        if tag != "field":
            raise FormatError("missing field line")
        params = FieldParams.parse(desc, allow_large=True)
        tag, d = lines[2].split()
        if tag != "degree":
            raise FormatError("missing degree line")
        d = int(d)
        rows = lines[3:]
        if len(rows) != d:
            raise FormatError(f"degree {d} but {len(rows)} coefficient lines")
        coeffs = []
        for row in rows:
            tag, vals = row.split()
            if tag != "coeff":
                raise FormatError(f"unexpected line {row!r}")
            coeffs.append(params([int(v) for v in vals.split(",")]))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed key file: {exc}") from exc
    return PrfKey(tuple(coeffs))


def save_key(key: PrfKey, path) -> None:
    Path(path).write_text(dumps_key(key))


def load_key(path) -> PrfKey:
    return loads_key(Path(path).read_text())
