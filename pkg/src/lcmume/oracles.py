"""The five protocol hash oracles, domain-separated and length-framed.

All five are instantiated from SHAKE-256 with distinct one-byte domain
tags; every input field is length-prefixed so no two distinct argument
tuples can collide by concatenation.  Scalar-valued oracles reduce a
double-width output modulo q (bias below 2^-|q|).

Counting convention (mirrored by the cost reports in :mod:`lcmume.bench`):

* ``hash_to_root``, ``partial_key_hash``, ``mask_hash`` and ``tag_hash``
  each tick ``hash`` once per call.
* ``hash_to_root`` additionally ticks ``z``: each call mints a fresh
  Z_q element (a polynomial root).
* ``pair_hash`` ticks ``z`` instead of ``hash``: its output is the
  pairwise Z_q* multiplier derived from a shared group element, and the
  reference cost table books that derivation as scalar generation.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .group import GroupParams, OpCounter

__all__ = [
    "HashSuite",
    "hash_to_root",
    "partial_key_hash",
    "mask_hash",
    "tag_hash",
    "pair_hash",
    "ORACLE_TAGS",
]

# tag name -> domain byte; "vectors" files use these names
ORACLE_TAGS = {
    "root": 0x00,
    "partial": 0x01,
    "mask": 0x02,
    "tag": 0x03,
    "pair": 0x04,
}


@dataclass(frozen=True)
class HashSuite:
    """Output-length parameters shared by everything that hashes.

    ``l`` is the mask width in bits, ``l1`` the message width; the top
    ``l - l1`` mask bits act as the decryption redundancy check, so the
    gap is required to be at least 128 bits.
    """

    l: int = 384
    l1: int = 256
    digest_bits: int = 256
    domain_tags: tuple = (0x00, 0x01, 0x02, 0x03, 0x04)

    def __post_init__(self):
        if not 0 < self.l1 < self.l:
            raise ValueError("need 0 < l1 < l")
        if self.l - self.l1 < 128:
            raise ValueError("redundancy segment below 128 bits")
        if len(set(self.domain_tags)) != 5:
            raise ValueError("domain tags must be five distinct bytes")

    @property
    def mask_bytes(self) -> int:
        return (self.l + 7) // 8

    @property
    def digest_bytes(self) -> int:
        return (self.digest_bits + 7) // 8

    def to_dict(self) -> dict:
        return {"l": self.l, "l1": self.l1, "digest_bits": self.digest_bits,
                "domain_tags": list(self.domain_tags)}

    @classmethod
    def from_dict(cls, d: dict) -> "HashSuite":
        return cls(l=d["l"], l1=d["l1"], digest_bits=d["digest_bits"],
                   domain_tags=tuple(d["domain_tags"]))


def xof(tag: int, parts, outlen: int) -> bytes:
    """Domain-tagged SHAKE-256 over length-prefixed parts."""
    h = hashlib.shake_256()
    h.update(bytes([tag]))
    for part in parts:
        h.update(len(part).to_bytes(4, "big"))
        h.update(part)
    return h.digest(outlen)


def _to_scalar(group: GroupParams, raw: bytes) -> int:
    return int.from_bytes(raw, "big") % group.q


def _scalar_bytes(group: GroupParams, v: int) -> bytes:
    return v.to_bytes(group.scalar_bytes, "big")


def hash_to_root(group: GroupParams, suite: HashSuite, el,
                 ctr: OpCounter | None = None) -> int:
    """Map a shared-secret group element to a polynomial root in Z_q."""
    raw = xof(suite.domain_tags[0], [group.encode(el)], 2 * group.scalar_bytes)
    if ctr is not None:
        ctr.hash += 1
        ctr.z += 1
    return _to_scalar(group, raw)


def partial_key_hash(group: GroupParams, suite: HashSuite, identity: str, el,
                     ctr: OpCounter | None = None) -> int:
    """Scalar binding an identity to its registered public point."""
    raw = xof(suite.domain_tags[1],
              [identity.encode("utf-8"), group.encode(el)],
              2 * group.scalar_bytes)
    if ctr is not None:
        ctr.hash += 1
    return _to_scalar(group, raw)


def mask_hash(group: GroupParams, suite: HashSuite, ct1, ct2, d1: int, d2: int,
              ctr: OpCounter | None = None) -> int:
    """The l-bit masking string bound to (CT1, CT2, d1, d2)."""
    raw = xof(suite.domain_tags[2],
              [group.encode(ct1), group.encode(ct2),
               _scalar_bytes(group, d1), _scalar_bytes(group, d2)],
              suite.mask_bytes)
    if ctr is not None:
        ctr.hash += 1
    val = int.from_bytes(raw, "big")
    return val >> (8 * suite.mask_bytes - suite.l)


def tag_hash(group: GroupParams, suite: HashSuite, ct1, ct2, ct3: int,
             coeffs_a, coeffs_b, ctr: OpCounter | None = None) -> bytes:
    """Integrity digest over the whole ciphertext tuple."""
    if len(coeffs_a) != len(coeffs_b):
        raise ValueError("coefficient vectors differ in length")
    if not coeffs_a:
        raise ValueError("empty coefficient vectors")
    parts = [group.encode(ct1), group.encode(ct2),
             ct3.to_bytes(suite.mask_bytes, "big"),
             len(coeffs_a).to_bytes(4, "big")]
    parts += [_scalar_bytes(group, c) for c in coeffs_a]
    parts += [_scalar_bytes(group, c) for c in coeffs_b]
    if ctr is not None:
        ctr.hash += 1
    return xof(suite.domain_tags[3], parts, suite.digest_bytes)


def pair_hash(group: GroupParams, suite: HashSuite, sender_id: str,
              receiver_id: str, el, ctr: OpCounter | None = None) -> int:
    """Pairwise Z_q* multiplier derived from a sender/receiver shared point.

    Booked under ``z`` (scalar generation), not ``hash``; see the module
    docstring.
    """
    raw = xof(suite.domain_tags[4],
              [sender_id.encode("utf-8"), receiver_id.encode("utf-8"),
               group.encode(el)],
              2 * group.scalar_bytes)
    if ctr is not None:
        ctr.z += 1
    return _to_scalar(group, raw)
