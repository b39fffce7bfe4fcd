"""Hybrid file encryption: a random GT element is the ABE-encapsulated key.

Container layout::

    "ABHY" | version (1) | KEM length (4) | KEM block (ABCT)
    | algorithm id (1) | nonce (16) | body ... | mac (32)

The body is the plaintext XORed with a SHA-256 counter keystream; the MAC is
SHA-256 over the key, the DEM header and the body. The body has no length
field, so truncation surfaces as a MAC failure.
"""

from __future__ import annotations

import hashlib
import hmac
import random
import secrets
import struct
from dataclasses import dataclass

from .errors import FormatError, IntegrityError
from .formats import dump_ciphertext, load_ciphertext
from .pairing import GTElement
from .policy import Policy
from .scheme import Ciphertext, PublicKey, SecretKey, decrypt, encrypt, random_message

MAGIC = b"ABHY"
VERSION = 1
ALG_SHA256_CTR = 1
NONCE_LEN = 16
MAC_LEN = 32


@dataclass(frozen=True)
class HybridCiphertext:
    kem: Ciphertext
    alg_id: int
    nonce: bytes
    body: bytes
    mac: bytes

    @property
    def dem_header(self) -> bytes:
        return bytes([self.alg_id]) + self.nonce

    def to_bytes(self) -> bytes:
        kem = dump_ciphertext(self.kem)
        return (
            MAGIC
            + bytes([VERSION])
            + struct.pack(">I", len(kem))
            + kem
            + self.dem_header
            + self.body
            + self.mac
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> HybridCiphertext:
        if len(data) < 9 or data[:4] != MAGIC:
            raise FormatError("not a hybrid ABE container")
        if data[4] != VERSION:
            raise FormatError(f"unsupported container version {data[4]}")
        (kem_len,) = struct.unpack(">I", data[5:9])
        rest = 9 + kem_len
        if len(data) < rest + 1 + NONCE_LEN + MAC_LEN:
            raise FormatError("truncated container")
        kem = load_ciphertext(data[9:rest])
        alg_id = data[rest]
        if alg_id != ALG_SHA256_CTR:
            raise FormatError(f"unknown DEM algorithm {alg_id}")
        nonce = data[rest + 1 : rest + 1 + NONCE_LEN]
        body = data[rest + 1 + NONCE_LEN : -MAC_LEN]
        return cls(kem, alg_id, bytes(nonce), bytes(body), bytes(data[-MAC_LEN:]))


def derive_key(M: GTElement) -> bytes:
    return hashlib.sha256(b"ABE-KDF" + M.to_bytes()).digest()


def keystream(dek: bytes, nonce: bytes, length: int) -> bytes:
    blocks = (length + 31) // 32
    prefix = dek + nonce
    stream = b"".join(hashlib.sha256(prefix + j.to_bytes(8, "big")).digest() for j in range(blocks))
    return stream[:length]


def _xor(data: bytes, stream: bytes) -> bytes:
    if not data:
        return b""
    n = len(data)
    return (int.from_bytes(data, "big") ^ int.from_bytes(stream, "big")).to_bytes(n, "big")


def _mac(dek: bytes, header: bytes, body: bytes) -> bytes:
    return hashlib.sha256(b"ABE-MAC" + dek + header + body).digest()


def hybrid_encrypt(
    pk: PublicKey,
    policy: Policy | str,
    plaintext: bytes,
    rng: random.Random | None = None,
) -> HybridCiphertext:
    rng = rng or secrets.SystemRandom()
    M = random_message(pk.params, rng)
    kem = encrypt(pk, M, policy, rng)
    dek = derive_key(M)
    nonce = rng.randbytes(NONCE_LEN)
    body = _xor(plaintext, keystream(dek, nonce, len(plaintext)))
    header = bytes([ALG_SHA256_CTR]) + nonce
    return HybridCiphertext(kem, ALG_SHA256_CTR, nonce, body, _mac(dek, header, body))


def hybrid_decrypt(sk: SecretKey, hct: HybridCiphertext | bytes) -> bytes:
    """Recover the plaintext.

    Raises ``NotSatisfied`` if the key cannot open the KEM block and
    ``IntegrityError`` if the MAC fails; no plaintext is produced before the
    MAC has been checked.
    """
    if not isinstance(hct, HybridCiphertext):
        hct = HybridCiphertext.from_bytes(hct)
    M = decrypt(sk, hct.kem)
    dek = derive_key(M)
    if not hmac.compare_digest(_mac(dek, hct.dem_header, hct.body), hct.mac):
        raise IntegrityError("authentication failed")
    return _xor(hct.body, keystream(dek, hct.nonce, len(hct.body)))
