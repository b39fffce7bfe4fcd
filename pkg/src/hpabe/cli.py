"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 cryptographic failure (including an
unsatisfied policy), 3 malformed or tampered input.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile
from pathlib import Path

from . import formats
from .errors import FormatError, GroupError, IntegrityError, NotSatisfied, UniverseMismatch
from .hybrid import HybridCiphertext, hybrid_decrypt, hybrid_encrypt
from .pairing import group_setup
from .policy import AttributeList, PolicyError, Universe, parse_policy, satisfies
from .scheme import keygen, setup

EXIT_OK, EXIT_USAGE, EXIT_CRYPTO, EXIT_FORMAT = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _write_atomic(path: str, data: bytes):
    """Write via a temp file in the target directory so a failure leaves nothing behind."""
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def cmd_setup(args):
    try:
        universe = Universe.parse(_read(args.universe).decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError(f"bad universe file: {exc}") from None
    try:
        seed = bytes.fromhex(args.seed) if args.seed else None
    except ValueError:
        raise _Usage("--seed must be hex") from None
    try:
        params = group_setup(args.bits, "transparent", seed)
    except GroupError as exc:
        raise _Usage(str(exc)) from None
    rng = random.Random(b"keys" + seed) if seed is not None else None
    pk, mk = setup(universe, params, rng)
    _write_atomic(args.pk, formats.dump_public_key(pk))
    _write_atomic(args.mk, formats.dump_master_key(mk))
    print(
        "warning: transparent backend is insecure and only suitable for testing",
        file=sys.stderr,
    )


def cmd_keygen(args):
    mk = formats.load_master_key(_read(args.mk))
    try:
        attrs = AttributeList.parse(mk.universe, args.attrs)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    _write_atomic(args.out, formats.dump_secret_key(keygen(mk, attrs)))


def cmd_encrypt(args):
    pk = formats.load_public_key(_read(args.pk))
    try:
        policy = parse_policy(args.policy, pk.universe)
    except PolicyError as exc:
        raise _Usage(str(exc)) from None
    hct = hybrid_encrypt(pk, policy, _read(args.input))
    _write_atomic(args.out, hct.to_bytes())


def cmd_decrypt(args):
    sk = formats.load_secret_key(_read(args.sk))
    hct = HybridCiphertext.from_bytes(_read(args.input))
    plaintext = hybrid_decrypt(sk, hct)
    _write_atomic(args.out, plaintext)


def cmd_policy_check(args):
    try:
        universe = Universe.parse(_read(args.universe).decode("utf-8"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise FormatError(f"bad universe file: {exc}") from None
    try:
        policy = parse_policy(args.policy, universe)
        attrs = AttributeList.parse(universe, args.attrs)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    print("satisfied" if satisfies(attrs, policy) else "unsatisfied")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hpabe", description="Hidden-policy attribute-based encryption")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("setup", help="generate public and master keys")
    p.add_argument("--universe", required=True)
    p.add_argument("--pk", required=True)
    p.add_argument("--mk", required=True)
    p.add_argument("--bits", type=int, default=128)
    p.add_argument("--seed", help="hex seed for reproducible parameters and keys")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="issue a secret key for an attribute list")
    p.add_argument("--mk", required=True)
    p.add_argument("--attrs", required=True, help='e.g. "dept=cs,level=phd"')
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a file under a policy")
    p.add_argument("--pk", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a file with a secret key")
    p.add_argument("--sk", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("policy-check", help="evaluate a policy against an attribute list")
    p.add_argument("--universe", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--attrs", required=True)
    p.set_defaults(func=cmd_policy_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except _Usage as exc:
        print(f"hpabe: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotSatisfied:
        print("hpabe: not satisfied or wrong key", file=sys.stderr)
        return EXIT_CRYPTO
    except UniverseMismatch as exc:
        print(f"hpabe: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (FormatError, GroupError, IntegrityError) as exc:
        print(f"hpabe: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
