"""Ciphertext-policy attribute-based encryption with hidden access policies.

The bundled pairing backend is transparent (elements are their own discrete
logs). It is a correctness oracle, not a secure group.
"""

from .errors import FormatError, GroupError, IntegrityError, NotSatisfied, UniverseMismatch
from .pairing import (
    BackendId,
    GElement,
    GroupParams,
    GTElement,
    Scalar,
    group_setup,
    hash_to_scalar,
    pair,
    random_scalar,
)
from .policy import (
    And,
    AttributeList,
    Leaf,
    Or,
    Policy,
    PolicyError,
    Universe,
    normalize,
    parse_policy,
    print_policy,
    satisfies,
)
from .scheme import (
    Ciphertext,
    MasterKey,
    PublicKey,
    SecretKey,
    blind_decrypt,
    decrypt,
    decrypt_with_policy,
    encrypt,
    keygen,
    setup,
)
from .sharing import ShareMap, assign_shares, pruned_sets, verify_reconstruction

__version__ = "0.1.0"

__all__ = [
    "And",
    "AttributeList",
    "BackendId",
    "Ciphertext",
    "FormatError",
    "GElement",
    "GTElement",
    "GroupError",
    "GroupParams",
    "IntegrityError",
    "Leaf",
    "MasterKey",
    "NotSatisfied",
    "Or",
    "Policy",
    "PolicyError",
    "PublicKey",
    "Scalar",
    "SecretKey",
    "ShareMap",
    "Universe",
    "UniverseMismatch",
    "assign_shares",
    "blind_decrypt",
    "decrypt",
    "decrypt_with_policy",
    "encrypt",
    "group_setup",
    "hash_to_scalar",
    "keygen",
    "normalize",
    "pair",
    "parse_policy",
    "print_policy",
    "pruned_sets",
    "random_scalar",
    "satisfies",
    "setup",
    "verify_reconstruction",
]
