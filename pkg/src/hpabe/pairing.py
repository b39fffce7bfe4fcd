"""Symmetric bilinear groups ``e: G x G -> GT`` of prime order.

Group elements are written multiplicatively: ``x * y`` is the group law,
``x ** k`` exponentiation and ``pair(x, y)`` the bilinear map.

Only the *transparent* backend is implemented. In it an element of ``G`` is
stored as its discrete log base ``g`` and an element of ``GT`` as its discrete
log base ``e(g, g)``, so the pairing is multiplication of exponents mod ``p``.
That makes every scheme equation exactly checkable, and it also means the
backend hides nothing. It must never be used to protect real data.
"""

from __future__ import annotations

import abc
import enum
import hashlib
import random
import secrets
import struct
from dataclasses import dataclass, field
from typing import Union

from sympy import isprime

from .errors import GroupError

PARAMS_MAGIC = b"ABEG"
PARAMS_VERSION = 1
MIN_TRANSPARENT_BITS = 61
MAX_BITS = 4096


class BackendId(enum.IntEnum):
    TRANSPARENT = 0
    EXTERNAL = 1


class PairingBackend(abc.ABC):
    """Arithmetic on opaque element representations for one group instance.

    The scheme layer only ever talks to elements through this interface, so a
    curve-based backend can be slotted in under ``BackendId.EXTERNAL``.
    """

    backend_id: BackendId

    def __init__(self, p: int):
        self.p = p

    @abc.abstractmethod
    def identity(self, in_gt: bool): ...

    @abc.abstractmethod
    def generator(self): ...

    @abc.abstractmethod
    def mul(self, a, b, in_gt: bool): ...

    @abc.abstractmethod
    def inverse(self, a, in_gt: bool): ...

    @abc.abstractmethod
    def power(self, a, k: int, in_gt: bool): ...

    @abc.abstractmethod
    def pair(self, a, b): ...

    @abc.abstractmethod
    def encode(self, a, in_gt: bool) -> bytes: ...

    @abc.abstractmethod
    def decode(self, data: bytes, in_gt: bool): ...

    @abc.abstractmethod
    def element_width(self, in_gt: bool) -> int: ...


class TransparentBackend(PairingBackend):
    """Elements are their own discrete logs. Insecure by design."""

    backend_id = BackendId.TRANSPARENT

    def __init__(self, p: int):
        super().__init__(p)
        self._width = (p.bit_length() + 7) // 8

    def identity(self, in_gt):
        return 0

    def generator(self):
        return 1

    def mul(self, a, b, in_gt):
        return (a + b) % self.p

    def inverse(self, a, in_gt):
        return -a % self.p

    def power(self, a, k, in_gt):
        return a * k % self.p

    def pair(self, a, b):
        return a * b % self.p

    def encode(self, a, in_gt):
        return a.to_bytes(self._width, "big")

    def decode(self, data, in_gt):
        if len(data) != self._width:
            raise GroupError(f"element encoding must be {self._width} bytes, got {len(data)}")
        value = int.from_bytes(data, "big")
        if value >= self.p:
            raise GroupError("encoded element is out of range")
        return value

    def element_width(self, in_gt):
        return self._width


_BACKENDS = {BackendId.TRANSPARENT: TransparentBackend}


@dataclass(frozen=True)
class GroupParams:
    """A concrete bilinear group: prime order, backend and bit length."""

    p: int
    bits: int
    backend_id: BackendId = BackendId.TRANSPARENT
    backend: PairingBackend = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.backend is None:
            object.__setattr__(self, "backend", _BACKENDS[self.backend_id](self.p))

    @property
    def g(self) -> GElement:
        return GElement(self, self.backend.generator())

    @property
    def gt(self) -> GTElement:
        """``e(g, g)``, the generator of GT."""
        return pair(self.g, self.g)

    def identity_g(self) -> GElement:
        return GElement(self, self.backend.identity(False))

    def identity_gt(self) -> GTElement:
        return GTElement(self, self.backend.identity(True))

    def scalar(self, value: int) -> Scalar:
        return Scalar(self, value)

    @property
    def insecure(self) -> bool:
        return self.backend_id == BackendId.TRANSPARENT

    def to_bytes(self) -> bytes:
        """Header: magic, version, backend id, 2-byte bit length, then ``p``."""
        width = (self.bits + 7) // 8
        return (
            PARAMS_MAGIC
            + struct.pack(">BBH", PARAMS_VERSION, int(self.backend_id), self.bits)
            + self.p.to_bytes(width, "big")
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> tuple[GroupParams, int]:
        """Parse a params header. Returns the params and the bytes consumed."""
        if len(data) < 8 or data[:4] != PARAMS_MAGIC:
            raise GroupError("bad group params header")
        version, backend, bits = struct.unpack(">BBH", data[4:8])
        if version != PARAMS_VERSION:
            raise GroupError(f"unsupported params version {version}")
        try:
            backend_id = BackendId(backend)
        except ValueError:
            raise GroupError(f"unknown backend id {backend}") from None
        width = (bits + 7) // 8
        if len(data) < 8 + width:
            raise GroupError("truncated group params")
        p = int.from_bytes(data[8 : 8 + width], "big")
        if p.bit_length() != bits or not isprime(p):
            raise GroupError("group order in header is not a prime of the stated size")
        if backend_id not in _BACKENDS:
            raise GroupError(f"backend {backend_id.name.lower()} is not available")
        return cls(p, bits, backend_id), 8 + width


def _check_same(a, b):
    if a.params is not b.params and a.params != b.params:
        raise GroupError("operands belong to different groups")


@dataclass(frozen=True, slots=True)
class Scalar:
    """An element of Z_p."""

    params: GroupParams
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.params.p)

    def _other(self, other) -> int:
        if isinstance(other, Scalar):
            _check_same(self, other)
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Scalar(self.params, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Scalar(self.params, self.value - v)

    def __rsub__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Scalar(self.params, v - self.value)

    def __mul__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else Scalar(self.params, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.params, -self.value)

    def inverse(self) -> Scalar:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in Z_p")
        return Scalar(self.params, pow(self.value, -1, self.params.p))

    def __int__(self):
        return self.value


Exponent = Union[Scalar, int]


class _Element:
    __slots__ = ("params", "rep")
    _in_gt = False

    def __init__(self, params: GroupParams, rep):
        self.params = params
        self.rep = rep

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        _check_same(self, other)
        return type(self)(self.params, self.params.backend.mul(self.rep, other.rep, self._in_gt))

    def __truediv__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: Exponent):
        if isinstance(k, Scalar):
            _check_same(self, k)
            k = k.value
        elif not isinstance(k, int):
            return NotImplemented
        return type(self)(self.params, self.params.backend.power(self.rep, k, self._in_gt))

    def inverse(self):
        return type(self)(self.params, self.params.backend.inverse(self.rep, self._in_gt))

    def is_identity(self) -> bool:
        return self.rep == self.params.backend.identity(self._in_gt)

    def to_bytes(self) -> bytes:
        return self.params.backend.encode(self.rep, self._in_gt)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.params == other.params and self.rep == other.rep

    def __hash__(self):
        return hash((type(self).__name__, self.params.p, self.rep))

    def __repr__(self):
        return f"{type(self).__name__}({self.rep!r})"


class GElement(_Element):
    """Element of the source group G."""

    __slots__ = ()


class GTElement(_Element):
    """Element of the target group GT."""

    __slots__ = ()
    _in_gt = True


def group_setup(
    bits: int,
    backend_id: BackendId | str = BackendId.TRANSPARENT,
    seed: bytes | None = None,
    *,
    prime: int | None = None,
) -> GroupParams:
    """Generate group parameters with a ``bits``-bit prime order.

    With ``seed`` the prime is derived deterministically. ``prime`` forces the
    order directly; it exists for small hand-worked vectors and bypasses the
    minimum size.
    """
    if isinstance(backend_id, str):
        try:
            backend_id = BackendId[backend_id.upper()]
        except KeyError:
            raise GroupError(f"unknown backend {backend_id!r}") from None
    backend_id = BackendId(backend_id)
    if backend_id not in _BACKENDS:
        raise GroupError(f"backend {backend_id.name.lower()} is not available")

    if prime is not None:
        if not isprime(prime) or prime.bit_length() != bits:
            raise GroupError(f"forced order {prime} is not a {bits}-bit prime")
        return GroupParams(prime, bits, backend_id)

    if not MIN_TRANSPARENT_BITS <= bits <= MAX_BITS:
        raise GroupError(f"unsupported bit length {bits}")
    rng = random.Random(seed) if seed is not None else secrets.SystemRandom()
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        while candidate.bit_length() == bits:
            if isprime(candidate):
                return GroupParams(candidate, bits, backend_id)
            candidate += 2


def power(base, exp: Exponent):
    return base ** exp


def mul(x, y):
    return x * y


def inverse(x):
    return x.inverse()


def pair(x: GElement, y: GElement) -> GTElement:
    if not isinstance(x, GElement) or not isinstance(y, GElement):
        raise TypeError("pair() takes two elements of G")
    _check_same(x, y)
    return GTElement(x.params, x.params.backend.pair(x.rep, y.rep))


def random_scalar(params: GroupParams, rng: random.Random | None = None) -> Scalar:
    """Uniform draw from Z_p* (never zero)."""
    rng = rng or secrets.SystemRandom()
    return Scalar(params, rng.randrange(1, params.p))


def hash_to_scalar(params: GroupParams, data: bytes) -> Scalar:
    digest = hashlib.sha512(b"ABE-H2S\x00" + data).digest()
    return Scalar(params, int.from_bytes(digest, "big"))


def serialize_element(x: _Element) -> bytes:
    return x.to_bytes()


def deserialize_element(params: GroupParams, data: bytes, kind: type = GElement):
    if kind not in (GElement, GTElement):
        raise TypeError("kind must be GElement or GTElement")
    return kind(params, params.backend.decode(bytes(data), kind is GTElement))
