"""Line-oriented text files for params, keys and ciphertexts.

::

    QHIBE1 ciphertext
    a = 4
    c.0 = 13
    ...

Integers are lowercase big-endian hex without leading zeros; byte strings
(identities) are plain hex of the raw bytes. List members are indexed
``name.<i>``; ring elements expand to ``name.0`` (constant) and ``name.1``.
"""
from __future__ import annotations

import re

from .anonymizer import AnonCiphertext
from .cocks import IdentityKey
from .errors import FormatError
from .numtheory import HASH_NAME, MasterSecret, PublicParams
from .qring import RingElement
from .xhibe import Ciphertext

MAGIC = "QHIBE1"
KINDS = ("params", "master", "key", "ciphertext", "anon-ciphertext")

_INT_RE = re.compile(r"0|[1-9a-f][0-9a-f]*")
_BYTES_RE = re.compile(r"(?:[0-9a-f]{2})*")
_NAME_RE = re.compile(r"[a-z][a-z0-9_]*(?:\.[0-9]+)*")


def hex_int(x: int) -> str:
    if x < 0:
        raise ValueError("only non-negative integers are serialized")
    return format(x, "x")


def parse_int(text: str) -> int:
    if not _INT_RE.fullmatch(text):
        raise FormatError(f"not a canonical hex integer: {text!r}")
    return int(text, 16)


def parse_bytes(text: str) -> bytes:
    if not _BYTES_RE.fullmatch(text):
        raise FormatError(f"not a hex byte string: {text!r}")
    return bytes.fromhex(text)


def dumps_fields(kind: str, fields: list[tuple[str, str]]) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown file kind {kind!r}")
    lines = [f"{MAGIC} {kind}"] + [f"{name} = {value}" for name, value in fields]
    return "\n".join(lines) + "\n"


def loads_fields(text: str) -> tuple[str, dict[str, str]]:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file")
    head = lines[0].split()
    if len(head) != 2 or not head[0].startswith("QHIBE"):
        raise FormatError("missing QHIBE header")
    if head[0] != MAGIC:
        raise FormatError(f"unsupported format version {head[0]!r}")
    if head[1] not in KINDS:
        raise FormatError(f"unknown file kind {head[1]!r}")
    fields: dict[str, str] = {}
    for n, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        name, sep, value = line.partition(" = ")
        if not sep or not _NAME_RE.fullmatch(name):
            raise FormatError(f"line {n}: expected 'name = value'")
        if name in fields:
            raise FormatError(f"line {n}: duplicate field {name!r}")
        fields[name] = value.strip()
    return head[1], fields


def _ring_fields(name: str, e: RingElement) -> list[tuple[str, str]]:
    return [(f"{name}.0", hex_int(e.c0)), (f"{name}.1", hex_int(e.c1))]


class _Reader:
    def __init__(self, kind: str, fields: dict[str, str]):
        self.kind, self.fields, self.used = kind, fields, set()

    def raw(self, name: str) -> str:
        try:
            value = self.fields[name]
        except KeyError:
            raise FormatError(f"{self.kind} file lacks field {name!r}") from None
        self.used.add(name)
        return value

    def int(self, name: str) -> int:
        return parse_int(self.raw(name))

    def ring(self, name: str) -> RingElement:
        return RingElement(self.int(f"{name}.0"), self.int(f"{name}.1"))

    def finish(self):
        extra = set(self.fields) - self.used
        if extra:
            raise FormatError(f"unexpected fields in {self.kind} file: {sorted(extra)}")


def dumps(obj) -> str:
    """Serialize any of the five file types."""
    if isinstance(obj, PublicParams):
        return dumps_fields("params", [("n", hex_int(obj.N)), ("bits", hex_int(obj.bits)), ("hash", HASH_NAME)])
    if isinstance(obj, MasterSecret):
        return dumps_fields("master", [("p", hex_int(obj.p)), ("q", hex_int(obj.q))])
    if isinstance(obj, IdentityKey):
        return dumps_fields("key", [("id", obj.id.hex()), ("r", hex_int(obj.r))])
    if isinstance(obj, Ciphertext):
        return dumps_fields("ciphertext", [("a", hex_int(obj.a))] + _ring_fields("c", obj.c) + _ring_fields("d", obj.d))
    if isinstance(obj, AnonCiphertext):
        fields = [("m", hex_int(obj.m))] + _ring_fields("z1", obj.z1)
        for i, t in enumerate(obj.tlist, start=1):
            fields += _ring_fields(f"t.{i}", t)
        fields += _ring_fields("z2", obj.z2)
        for i, v in enumerate(obj.vlist, start=1):
            fields += _ring_fields(f"v.{i}", v)
        return dumps_fields("anon-ciphertext", fields)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def loads(text: str, expect: str | None = None):
    kind, fields = loads_fields(text)
    if expect is not None and kind != expect:
        raise FormatError(f"expected a {expect} file, got {kind}")
    rd = _Reader(kind, fields)
    try:
        if kind == "params":
            if rd.raw("hash") != HASH_NAME:
                raise FormatError(f"unsupported hash {fields['hash']!r}")
            obj = PublicParams(rd.int("n"), rd.int("bits"))
        elif kind == "master":
            obj = MasterSecret(rd.int("p"), rd.int("q"))
        elif kind == "key":
            obj = IdentityKey(parse_bytes(rd.raw("id")), rd.int("r"))
        elif kind == "ciphertext":
            obj = Ciphertext(rd.ring("c"), rd.ring("d"), rd.int("a"))
        else:
            m = rd.int("m")
            obj = AnonCiphertext(
                rd.ring("z1"),
                tuple(rd.ring(f"t.{i}") for i in range(1, m + 1)),
                rd.ring("z2"),
                tuple(rd.ring(f"v.{i}") for i in range(1, m + 1)),
            )
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    rd.finish()
    return obj


def read(path, expect: str | None = None):
    with open(path, encoding="ascii") as fh:
        return loads(fh.read(), expect)


def write(path, obj) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(obj))
