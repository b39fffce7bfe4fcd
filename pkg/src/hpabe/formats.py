"""Binary encodings for keys and ciphertexts.

Every artifact starts with::

    magic (4) | version (1) | group params block | universe digest (32)

followed by a type-specific body. Integers are big-endian; elements and
scalars use the fixed width of the group. Keys embed the universe text so
they can be used on their own; ciphertexts only carry the digest.
"""

from __future__ import annotations

import struct

from .errors import FormatError, GroupError
from .pairing import GElement, GroupParams, GTElement, Scalar
from .policy import AttributeList, Universe
from .scheme import Ciphertext, MasterKey, PublicKey, SecretKey

VERSION = 1
PK_MAGIC = b"ABPK"
MK_MAGIC = b"ABMK"
SK_MAGIC = b"ABSK"
CT_MAGIC = b"ABCT"


class _Reader:
    def __init__(self, data: bytes):
        self.data = memoryview(bytes(data))
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise FormatError("truncated input")
        out = bytes(self.data[self.pos : self.pos + n])
        self.pos += n
        return out

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def done(self):
        if self.pos != len(self.data):
            raise FormatError(f"{len(self.data) - self.pos} trailing bytes")

    def header(self, magic: bytes) -> tuple[GroupParams, bytes]:
        if self.take(4) != magic:
            raise FormatError(f"bad magic, expected {magic.decode()}")
        version = self.take(1)[0]
        if version != VERSION:
            raise FormatError(f"unsupported version {version}")
        try:
            params, used = GroupParams.from_bytes(self.data[self.pos :])
        except GroupError as exc:
            raise FormatError(str(exc)) from None
        self.pos += used
        return params, self.take(32)

    def universe(self, digest: bytes) -> Universe:
        raw = self.take(self.u32())
        try:
            universe = Universe.parse(raw.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise FormatError(f"bad embedded universe: {exc}") from None
        if universe.digest != digest:
            raise FormatError("embedded universe does not match its digest")
        return universe

    def element(self, params: GroupParams, kind: type):
        width = params.backend.element_width(kind is GTElement)
        try:
            return kind(params, params.backend.decode(self.take(width), kind is GTElement))
        except GroupError as exc:
            raise FormatError(str(exc)) from None

    def scalar(self, params: GroupParams) -> Scalar:
        width = (params.bits + 7) // 8
        value = int.from_bytes(self.take(width), "big")
        if value >= params.p:
            raise FormatError("scalar out of range")
        return Scalar(params, value)

    def element_array(self, params: GroupParams, expected: int) -> list[GElement]:
        count = self.u32()
        if count != expected:
            raise FormatError(f"expected {expected} elements, found {count}")
        return [self.element(params, GElement) for _ in range(count)]


def _header(magic: bytes, params: GroupParams, digest: bytes) -> bytes:
    return magic + bytes([VERSION]) + params.to_bytes() + digest


def _universe_block(universe: Universe) -> bytes:
    raw = universe.to_text().encode("utf-8")
    return struct.pack(">I", len(raw)) + raw


def _array(items) -> bytes:
    items = list(items)
    return struct.pack(">I", len(items)) + b"".join(x.to_bytes() for x in items)


def _scalar_bytes(x: Scalar) -> bytes:
    return x.value.to_bytes((x.params.bits + 7) // 8, "big")


def _regroup(flat: list, sizes) -> tuple:
    out, k = [], 0
    for n in sizes:
        out.append(tuple(flat[k : k + n]))
        k += n
    return tuple(out)


def dump_public_key(pk: PublicKey) -> bytes:
    return (
        _header(PK_MAGIC, pk.params, pk.universe.digest)
        + _universe_block(pk.universe)
        + pk.Y.to_bytes()
        + _array(x for row in pk.T for x in row)
    )


def load_public_key(data: bytes) -> PublicKey:
    r = _Reader(data)
    params, digest = r.header(PK_MAGIC)
    universe = r.universe(digest)
    Y = r.element(params, GTElement)
    flat = r.element_array(params, sum(universe.sizes()))
    r.done()
    return PublicKey(params, universe, Y, _regroup(flat, universe.sizes()))


def dump_master_key(mk: MasterKey) -> bytes:
    flat = [x for row in mk.a for x in row]
    return (
        _header(MK_MAGIC, mk.params, mk.universe.digest)
        + _universe_block(mk.universe)
        + _scalar_bytes(mk.alpha)
        + struct.pack(">I", len(flat))
        + b"".join(_scalar_bytes(x) for x in flat)
    )


def load_master_key(data: bytes) -> MasterKey:
    r = _Reader(data)
    params, digest = r.header(MK_MAGIC)
    universe = r.universe(digest)
    alpha = r.scalar(params)
    count = r.u32()
    if count != sum(universe.sizes()):
        raise FormatError("master key size does not match its universe")
    flat = [r.scalar(params) for _ in range(count)]
    r.done()
    if alpha.value == 0 or any(x.value == 0 for x in flat):
        raise FormatError("master key contains a zero exponent")
    return MasterKey(params, universe, alpha, _regroup(flat, universe.sizes()))


def dump_secret_key(sk: SecretKey) -> bytes:
    n = len(sk.attrs)
    return (
        _header(SK_MAGIC, sk.params, sk.universe.digest)
        + _universe_block(sk.universe)
        + struct.pack(f">H{n}H", n, *sk.attrs.indices)
        + sk.D0.to_bytes()
        + _array(x for pair in sk.D for x in pair)
    )


def load_secret_key(data: bytes) -> SecretKey:
    r = _Reader(data)
    params, digest = r.header(SK_MAGIC)
    universe = r.universe(digest)
    n = r.u16()
    if n != len(universe):
        raise FormatError("secret key attribute count does not match its universe")
    try:
        attrs = AttributeList(universe, tuple(r.u16() for _ in range(n)))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    D0 = r.element(params, GElement)
    flat = r.element_array(params, 2 * n)
    r.done()
    return SecretKey(params, attrs, D0, tuple(zip(flat[::2], flat[1::2])))


def dump_ciphertext(ct: Ciphertext) -> bytes:
    sizes = [len(row) for row in ct.components]
    return (
        _header(CT_MAGIC, ct.params, ct.universe_digest)
        + ct.C.to_bytes()
        + ct.C0.to_bytes()
        + struct.pack(f">H{len(sizes)}H", len(sizes), *sizes)
        + _array(x for row in ct.components for pair in row for x in pair)
        + ct.tag
    )


def load_ciphertext(data: bytes) -> Ciphertext:
    r = _Reader(data)
    params, digest = r.header(CT_MAGIC)
    C = r.element(params, GTElement)
    C0 = r.element(params, GElement)
    n = r.u16()
    sizes = [r.u16() for _ in range(n)]
    if n == 0 or 0 in sizes:
        raise FormatError("ciphertext has an empty attribute layout")
    flat = r.element_array(params, 2 * sum(sizes))
    tag = r.take(32)
    r.done()
    pairs = list(zip(flat[::2], flat[1::2]))
    return Ciphertext(params, digest, C, C0, _regroup(pairs, sizes), tag)

