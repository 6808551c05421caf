"""The honest LC-MUME scheme: setup, certificateless keys, encrypt, decrypt.

Key material follows the usual certificateless split: a user keeps a
self-chosen secret value x (public point xP) and a KGC-issued partial key
d = y + lambda * H1(id, yP), whose public side is yP.  The testable
binding is

    d * P == PK2 + H1(id, PK2) * P'        (P' = lambda * P)

and decryption relies on exactly that identity: the receiver's d stands in
for the publicly computable point PK2 + H1(id, PK2) * P'.

A ciphertext for receivers {id_i} carries two masked transport values
(CT1 = rP, CT2 = sP), an l-bit masked payload CT3, an integrity digest
CT4, and the coefficients of two monic polynomials whose roots are
per-receiver secrets:

* the V-roots come from hashing r * H4(id_S, id_i, tau_i) * D_i, where
  D_i is receiver i's implied partial-key point -- recoverable by i alone
  as SK2_i * (H4 * CT1);
* the Z-roots encode (s + SK2_S + SK1_S * H4) * PK1_i -- recoverable by
  i as SK1_i * (CT2 + PK2_S + H1(id_S, PK2_S) * P' + H4 * PK1_S).

Each listed receiver evaluates the polynomials at its recovered points to
obtain the offsets (d1, d2), checks the redundancy segment of the mask,
and unmasks the message; everyone else ends at the reject symbol.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group import (
    GroupParams,
    OpCounter,
    field_add,
    field_mul,
    group_by_name,
    map_to_scalar,
    point_add,
    point_mul,
    scalar_random,
)
from .oracles import HashSuite, hash_to_root, mask_hash, pair_hash, partial_key_hash, tag_hash
from .polyring import MonicPoly

__all__ = [
    "SystemParams",
    "MasterSecret",
    "UserKeyPair",
    "ReceiverSet",
    "Ciphertext",
    "setup",
    "user_keygen",
    "encrypt",
    "decrypt",
    "split_and_mask",
    "unmask",
    "take_high",
    "take_low",
]


# ---------------------------------------------------------------------------
# bit-string helpers (values are ints with explicit bit widths)


def take_high(x: int, total_bits: int, k: int) -> int:
    """Leftmost k bits of an x that is total_bits wide."""
    return x >> (total_bits - k)


def take_low(x: int, k: int) -> int:
    """Rightmost k bits."""
    return x & ((1 << k) - 1)


def split_and_mask(h: int, m: int, l: int, l1: int) -> int:
    """[h]_{l-l1} || ([h]^{l1} xor m), as an l-bit integer."""
    if not 0 <= h < (1 << l):
        raise ValueError("mask wider than l bits")
    if not 0 <= m < (1 << l1):
        raise ValueError("message wider than l1 bits")
    return (take_high(h, l, l - l1) << l1) | (take_low(h, l1) ^ m)


def unmask(h: int, ct3: int, l: int, l1: int) -> tuple[bool, int]:
    """Redundancy comparison plus message recovery."""
    if not 0 <= h < (1 << l) or not 0 <= ct3 < (1 << l):
        raise ValueError("inputs wider than l bits")
    ok = take_high(h, l, l - l1) == take_high(ct3, l, l - l1)
    return ok, take_low(h, l1) ^ take_low(ct3, l1)


# ---------------------------------------------------------------------------
# domain types


@dataclass
class SystemParams:
    group: GroupParams
    suite: HashSuite
    master_pub: object  # P' = lambda * P

    def __post_init__(self):
        if not self.group.validate(self.master_pub) or self.group.is_identity(self.master_pub):
            raise ValueError("master public key must be a non-identity group element")


@dataclass
class MasterSecret:
    lam: int


@dataclass
class UserKeyPair:
    id: str
    sk1: int  # secret value x
    sk2: int  # full partial key d = y + lambda * H1(id, pk2)
    pk1: object  # x * P
    pk2: object  # y * P


class ReceiverSet:
    """Ordered target receivers with their implied partial-key points cached.

    The cached point D_i = PK2_i + H1(id_i, PK2_i) * P' is pure public-key
    material, so it is derived once when the set is assembled (the cost
    lands on whatever counter the assembler passes in) rather than once per
    ciphertext.
    """

    def __init__(self, entries, derived):
        ids = [e[0] for e in entries]
        if not entries:
            raise ValueError("empty receiver set")
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate receiver identity")
        self.entries = list(entries)
        self.derived = list(derived)

    @classmethod
    def build(cls, params: SystemParams, entries, ctr: OpCounter | None = None) -> "ReceiverSet":
        g, suite = params.group, params.suite
        derived = []
        for rid, _, rpk2 in entries:
            h1 = partial_key_hash(g, suite, rid, rpk2, ctr)
            derived.append(point_add(g, rpk2, point_mul(g, h1, params.master_pub, ctr), ctr))
        return cls(entries, derived)

    @classmethod
    def from_keypairs(cls, params: SystemParams, keypairs,
                      ctr: OpCounter | None = None) -> "ReceiverSet":
        return cls.build(params, [(kp.id, kp.pk1, kp.pk2) for kp in keypairs], ctr)

    @property
    def n(self) -> int:
        return len(self.entries)


@dataclass
class Ciphertext:
    ct1: object
    ct2: object
    ct3: int  # l-bit masked payload
    ct4: bytes  # integrity digest
    coeffs_a: list
    coeffs_b: list

    def __post_init__(self):
        if len(self.coeffs_a) != len(self.coeffs_b):
            raise ValueError("coefficient vectors differ in length")

    @property
    def n(self) -> int:
        return len(self.coeffs_a)


# ---------------------------------------------------------------------------
# operations


def setup(rng, group="production-curve", suite: HashSuite | None = None):
    """Generate system parameters and the KGC master secret."""
    if isinstance(group, str):
        group = group_by_name(group)
    suite = suite or HashSuite()
    lam = scalar_random(group, rng)
    master_pub = group.mul(lam, group.generator)
    return SystemParams(group, suite, master_pub), MasterSecret(lam)


def user_keygen(params: SystemParams, msk: MasterSecret, identity: str, rng) -> UserKeyPair:
    """Secret value plus KGC partial key for one identity."""
    if not identity:
        raise ValueError("empty identity")
    g = params.group
    x = scalar_random(g, rng)
    y = scalar_random(g, rng)
    pk1 = g.mul(x, g.generator)
    pk2 = g.mul(y, g.generator)
    h1 = partial_key_hash(g, params.suite, identity, pk2)
    d = (y + msk.lam * h1) % g.q
    return UserKeyPair(identity, x, d, pk1, pk2)


def derive_receiver_values(params: SystemParams, sender_id: str, tau_key: int,
                           mix_key: int, r: int, s: int, rcvr: ReceiverSet,
                           ctr: OpCounter | None = None):
    """Per-receiver polynomial roots, as the sender (or a forger) computes them.

    ``tau_key``/``mix_key`` are the scalars standing in for the sender's
    (SK1, SK2); the honest path passes the real keys, the forging path
    passes the adversary's replacements.  Shared so that forged and honest
    ciphertexts follow the identical construction.
    """
    g, suite = params.group, params.suite
    roots_v, roots_z = [], []
    for (rid, rpk1, _), dpoint in zip(rcvr.entries, rcvr.derived):
        tau = point_mul(g, tau_key, rpk1, ctr)
        k4 = pair_hash(g, suite, sender_id, rid, tau, ctr)
        v = hash_to_root(
            g, suite, point_mul(g, field_mul(g, r, k4, ctr), dpoint, ctr), ctr)
        mix = field_add(g, field_add(g, s, mix_key, ctr),
                        field_mul(g, tau_key, k4, ctr), ctr)
        z = map_to_scalar(g, point_mul(g, mix, rpk1, ctr))
        roots_v.append(v)
        roots_z.append(z)
    return roots_v, roots_z


def assemble_ciphertext(params: SystemParams, ct1, ct2, roots_v, roots_z,
                        d1: int, d2: int, m: int, ctr: OpCounter | None = None) -> Ciphertext:
    g, suite = params.group, params.suite
    f = MonicPoly.from_roots_with_offset(roots_v, d1, g.q, ctr)
    gg = MonicPoly.from_roots_with_offset(roots_z, d2, g.q, ctr)
    # One mask query per CT3 segment: redundancy head, then the pad.
    head = mask_hash(g, suite, ct1, ct2, d1, d2, ctr)
    pad = mask_hash(g, suite, ct1, ct2, d1, d2, ctr)
    ct3 = (take_high(head, suite.l, suite.l - suite.l1) << suite.l1) \
        | (take_low(pad, suite.l1) ^ m)
    ct4 = tag_hash(g, suite, ct1, ct2, ct3, f.coeffs, gg.coeffs, ctr)
    return Ciphertext(ct1, ct2, ct3, ct4, f.coeffs, gg.coeffs)


def encrypt(params: SystemParams, sender: UserKeyPair, rcvr: ReceiverSet,
            m: int, rng, ctr: OpCounter | None = None) -> Ciphertext:
    """Honest multi-receiver encryption under the sender's real keys."""
    g, suite = params.group, params.suite
    if not 0 <= m < (1 << suite.l1):
        raise ValueError("message must be exactly l1 bits")
    r = scalar_random(g, rng, ctr=ctr)
    s = scalar_random(g, rng, ctr=ctr)
    d1 = scalar_random(g, rng, ctr=ctr)
    d2 = scalar_random(g, rng, ctr=ctr)
    ct1 = point_mul(g, r, g.generator, ctr)
    ct2 = point_mul(g, s, g.generator, ctr)
    roots_v, roots_z = derive_receiver_values(
        params, sender.id, sender.sk1, sender.sk2, r, s, rcvr, ctr)
    return assemble_ciphertext(params, ct1, ct2, roots_v, roots_z, d1, d2, m, ctr)


def decrypt(params: SystemParams, receiver: UserKeyPair, sender_id: str,
            sender_pk, ct: Ciphertext, ctr: OpCounter | None = None):
    """Decryption exactly as a listed receiver runs it; None means reject."""
    g, suite = params.group, params.suite
    pk1_s, pk2_s = sender_pk
    # 1. integrity tag
    expect = tag_hash(g, suite, ct.ct1, ct.ct2, ct.ct3, ct.coeffs_a, ct.coeffs_b, ctr)
    if expect != ct.ct4:
        return None
    # 2. pairwise values
    tau = point_mul(g, receiver.sk1, pk1_s, ctr)
    k4 = pair_hash(g, suite, sender_id, receiver.id, tau, ctr)
    v = hash_to_root(
        g, suite, point_mul(g, field_mul(g, receiver.sk2, k4, ctr), ct.ct1, ctr), ctr)
    h1_s = partial_key_hash(g, suite, sender_id, pk2_s, ctr)
    acc = point_add(g, ct.ct2, pk2_s, ctr)
    acc = point_add(g, acc, point_mul(g, h1_s, params.master_pub, ctr), ctr)
    acc = point_add(g, acc, point_mul(g, k4, pk1_s, ctr), ctr)
    z = map_to_scalar(g, point_mul(g, receiver.sk1, acc, ctr))
    # 3. offsets, redundancy check, unmask
    d1 = MonicPoly(g.q, ct.coeffs_a).eval(v, ctr)
    d2 = MonicPoly(g.q, ct.coeffs_b).eval(z, ctr)
    head = mask_hash(g, suite, ct.ct1, ct.ct2, d1, d2, ctr)
    if take_high(head, suite.l, suite.l - suite.l1) != \
            take_high(ct.ct3, suite.l, suite.l - suite.l1):
        return None
    pad = mask_hash(g, suite, ct.ct1, ct.ct2, d1, d2, ctr)
    return take_low(pad, suite.l1) ^ take_low(ct.ct3, suite.l1)
