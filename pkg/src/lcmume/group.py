"""Prime-order cyclic group backends with instrumented operation counters.

Two interchangeable backends are provided:

* ``production-curve`` -- the secp256k1 group (prime order, ~128-bit
  security), written additively.  Scalar multiplication runs on Jacobian
  coordinates with gmpy2 integers; single additions use affine formulas.
* ``toy-subgroup`` -- the order-101 subgroup of the multiplicative group
  modulo 607 (606 = 2*3*101).  Small enough that every identity can be
  checked by exhaustive brute force, which the test suite does.

All group elements are opaque values handled through :class:`GroupParams`;
callers never touch coordinates directly.  The counted operations
(:func:`scalar_random`, :func:`point_mul`, :func:`point_add`,
:func:`point_sub`, :func:`field_mul`, :func:`field_add`) tick an
:class:`OpCounter` so higher layers can reproduce per-phase cost tables.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields

from gmpy2 import invert, mpz

__all__ = [
    "OpCounter",
    "GroupParams",
    "production_group",
    "toy_group",
    "group_by_name",
    "scalar_random",
    "point_mul",
    "point_add",
    "point_sub",
    "point_neg",
    "map_to_scalar",
    "field_mul",
    "field_add",
]

# Domain tag for map_to_scalar; distinct from the five oracle tags (0..4).
_MAP_TAG = 0x05


@dataclass
class OpCounter:
    """Monotone tallies of group/hash work, split by benchmark category.

    ``z``, ``sm``, ``ss`` and ``hash`` are the four categories used by the
    attack cost tables: fresh Z_q* element generations, group scalar
    multiplications, group additions/subtractions, and oracle evaluations.
    ``field_mul``/``field_add`` record scalar arithmetic performed at
    formula level (kept outside the four categories; reports may fold them
    into ``ss`` under the field-inclusive counting convention).
    ``poly_mul``/``poly_add`` record polynomial-ring arithmetic, which is
    tallied separately because its cost is quadratic in the receiver count
    and belongs to neither convention.
    """

    z: int = 0
    sm: int = 0
    ss: int = 0
    hash: int = 0
    field_mul: int = 0
    field_add: int = 0
    poly_mul: int = 0
    poly_add: int = 0

    def snapshot(self) -> "OpCounter":
        return OpCounter(**self.as_dict())

    def diff(self, before: "OpCounter") -> "OpCounter":
        out = OpCounter()
        for f in fields(self):
            d = getattr(self, f.name) - getattr(before, f.name)
            if d < 0:
                raise ValueError("counter went backwards: %s" % f.name)
            setattr(out, f.name, d)
        return out

    def add(self, other: "OpCounter") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __eq__(self, other):
        if not isinstance(other, OpCounter):
            return NotImplemented
        return self.as_dict() == other.as_dict()


def _is_probable_prime(n: int) -> bool:
    # Miller-Rabin with fixed bases; ample for the sizes used here.
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# secp256k1 backend


_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
_Q = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
_GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
_GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8

_MP = mpz(_P)
_JAC_INF = (mpz(0), mpz(1), mpz(0))


def _jac_double(pt):
    x1, y1, z1 = pt
    if z1 == 0:
        return _JAC_INF
    a = (x1 * x1) % _MP
    b = (y1 * y1) % _MP
    c = (b * b) % _MP
    d = (2 * ((x1 + b) * (x1 + b) - a - c)) % _MP
    e = (3 * a) % _MP
    x3 = (e * e - 2 * d) % _MP
    y3 = (e * (d - x3) - 8 * c) % _MP
    z3 = (2 * y1 * z1) % _MP
    return (x3, y3, z3)


def _jac_add_affine(pt, x2, y2):
    x1, y1, z1 = pt
    if z1 == 0:
        return (x2, y2, mpz(1))
    z1z1 = (z1 * z1) % _MP
    u2 = (x2 * z1z1) % _MP
    s2 = (y2 * z1 * z1z1) % _MP
    if u2 == x1:
        if s2 != y1:
            return _JAC_INF
        return _jac_double(pt)
    h = (u2 - x1) % _MP
    hh = (h * h) % _MP
    i = (4 * hh) % _MP
    j = (h * i) % _MP
    r = (2 * (s2 - y1)) % _MP
    v = (x1 * i) % _MP
    x3 = (r * r - j - 2 * v) % _MP
    y3 = (r * (v - x3) - 2 * y1 * j) % _MP
    z3 = ((z1 + h) * (z1 + h) - z1z1 - hh) % _MP
    return (x3, y3, z3)


def _jac_to_affine(pt):
    x, y, z = pt
    if z == 0:
        return None
    zi = invert(z, _MP)
    zi2 = (zi * zi) % _MP
    return (int((x * zi2) % _MP), int((y * zi2 * zi) % _MP))


class _CurveBackend:
    """secp256k1 written additively; elements are affine (x, y) or None."""

    name = "production-curve"
    q = _Q
    element_bytes = 33
    scalar_bytes = 32
    description = "secp256k1 prime-order elliptic-curve group"
    identity = None
    generator = (_GX, _GY)

    def on_curve(self, pt) -> bool:
        if pt is None:
            return True
        x, y = pt
        if not (0 <= x < _P and 0 <= y < _P):
            return False
        return (y * y - x * x * x - 7) % _P == 0

    def mul(self, k: int, pt):
        k %= _Q
        if k == 0 or pt is None:
            return None
        x2, y2 = mpz(pt[0]), mpz(pt[1])
        acc = _JAC_INF
        for bit in bin(k)[2:]:
            acc = _jac_double(acc)
            if bit == "1":
                acc = _jac_add_affine(acc, x2, y2)
        return _jac_to_affine(acc)

    def add(self, p1, p2):
        if p1 is None:
            return p2
        if p2 is None:
            return p1
        x1, y1 = p1
        x2, y2 = p2
        if x1 == x2:
            if (y1 + y2) % _P == 0:
                return None
            lam = 3 * x1 * x1 * int(invert(2 * y1, _MP)) % _P
        else:
            lam = (y2 - y1) * int(invert(x2 - x1, _MP)) % _P
        x3 = (lam * lam - x1 - x2) % _P
        return (x3, (lam * (x1 - x3) - y1) % _P)

    def neg(self, pt):
        if pt is None:
            return None
        return (pt[0], (-pt[1]) % _P)

    def encode(self, pt) -> bytes:
        if pt is None:
            return b"\x00"
        x, y = pt
        return bytes([2 + (y & 1)]) + x.to_bytes(32, "big")

    def decode(self, data: bytes):
        if data == b"\x00":
            return None
        if len(data) != 33 or data[0] not in (2, 3):
            raise ValueError("bad point encoding")
        x = int.from_bytes(data[1:], "big")
        if x >= _P:
            raise ValueError("x coordinate out of range")
        y2 = (x * x * x + 7) % _P
        y = pow(y2, (_P + 1) // 4, _P)  # p = 3 mod 4
        if (y * y) % _P != y2:
            raise ValueError("x is not on the curve")
        if (y & 1) != (data[0] & 1):
            y = _P - y
        return (x, y)


# ---------------------------------------------------------------------------
# toy backend: order-101 subgroup of Z_607^*

_TOY_P = 607
_TOY_Q = 101
_TOY_G = 122  # 3^6 mod 607; order exactly 101


class _ToyBackend:
    """Order-101 subgroup of Z_607^*, written additively.

    "point_mul" is modular exponentiation and "point_add" is modular
    multiplication; the identity is the residue 1.
    """

    name = "toy-subgroup"
    q = _TOY_Q
    element_bytes = 2
    scalar_bytes = 1
    description = "order-101 subgroup of the multiplicative group mod 607"
    identity = 1
    generator = _TOY_G

    def on_curve(self, el) -> bool:
        return isinstance(el, int) and 1 <= el < _TOY_P and pow(el, _TOY_Q, _TOY_P) == 1

    def mul(self, k: int, el: int) -> int:
        return pow(el, k % _TOY_Q, _TOY_P)

    def add(self, e1: int, e2: int) -> int:
        return (e1 * e2) % _TOY_P

    def neg(self, el: int) -> int:
        return pow(el, _TOY_P - 2, _TOY_P)

    def encode(self, el: int) -> bytes:
        return el.to_bytes(2, "big")

    def decode(self, data: bytes) -> int:
        if len(data) != 2:
            raise ValueError("bad element encoding")
        el = int.from_bytes(data, "big")
        if not self.on_curve(el):
            raise ValueError("element outside the order-%d subgroup" % _TOY_Q)
        return el

    def elements(self):
        """Every subgroup element, by increasing discrete log of the generator."""
        return [pow(_TOY_G, k, _TOY_P) for k in range(_TOY_Q)]


_BACKENDS = {"production-curve": _CurveBackend, "toy-subgroup": _ToyBackend}
_ALIASES = {"prod": "production-curve", "toy": "toy-subgroup"}


class GroupParams:
    """A prime-order group: order q, generator, element codec, arithmetic."""

    def __init__(self, backend):
        self._b = backend
        if not _is_probable_prime(backend.q):
            raise ValueError("group order is not prime")
        gen = backend.generator
        if not backend.on_curve(gen) or gen == backend.identity:
            raise ValueError("bad generator")
        # q prime and q*gen = identity together pin the order at exactly q
        if backend.mul(backend.q, gen) != backend.identity:
            raise ValueError("generator order is not q")

    # -- metadata -----------------------------------------------------------

    @property
    def backend_id(self) -> str:
        return self._b.name

    @property
    def q(self) -> int:
        return self._b.q

    @property
    def generator(self):
        return self._b.generator

    @property
    def identity(self):
        return self._b.identity

    @property
    def description(self) -> str:
        return self._b.description

    @property
    def scalar_bytes(self) -> int:
        return self._b.scalar_bytes

    @property
    def element_bytes(self) -> int:
        return self._b.element_bytes

    # -- raw (uncounted) arithmetic ------------------------------------------

    def mul(self, k: int, el):
        return self._b.mul(k, el)

    def add(self, e1, e2):
        return self._b.add(e1, e2)

    def neg(self, el):
        return self._b.neg(el)

    def is_identity(self, el) -> bool:
        return el == self._b.identity

    def validate(self, el) -> bool:
        return self._b.on_curve(el)

    def elements(self):
        if not hasattr(self._b, "elements"):
            raise NotImplementedError("element enumeration only on the toy backend")
        return self._b.elements()

    # -- codec ---------------------------------------------------------------

    def encode(self, el) -> bytes:
        return self._b.encode(el)

    def decode(self, data: bytes):
        return self._b.decode(data)

    def element_to_hex(self, el) -> str:
        return self.encode(el).hex()

    def element_from_hex(self, h: str):
        return self.decode(bytes.fromhex(h))

    def scalar_to_hex(self, v: int) -> str:
        if not 0 <= v < self.q:
            raise ValueError("scalar out of range")
        return v.to_bytes(self._b.scalar_bytes, "big").hex()

    def scalar_from_hex(self, h: str) -> int:
        raw = bytes.fromhex(h)
        if len(raw) != self._b.scalar_bytes:
            raise ValueError("bad scalar width")
        v = int.from_bytes(raw, "big")
        if v >= self.q:
            raise ValueError("scalar out of range")
        return v

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "backend": self.backend_id,
            "q": "%x" % self.q,
            "generator": self.element_to_hex(self.generator),
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupParams":
        g = group_by_name(d["backend"])
        if int(d["q"], 16) != g.q:
            raise ValueError("group order mismatch")
        if g.element_from_hex(d["generator"]) != g.generator:
            raise ValueError("generator mismatch")
        return g

    def __eq__(self, other):
        return isinstance(other, GroupParams) and other.backend_id == self.backend_id

    def __repr__(self):
        return "GroupParams(%s, q=%d)" % (self.backend_id, self.q)


def production_group() -> GroupParams:
    return GroupParams(_CurveBackend())


def toy_group() -> GroupParams:
    return GroupParams(_ToyBackend())


def group_by_name(name: str) -> GroupParams:
    name = _ALIASES.get(name, name)
    if name not in _BACKENDS:
        raise ValueError("unknown backend %r" % name)
    return GroupParams(_BACKENDS[name]())


# ---------------------------------------------------------------------------
# counted operations


def scalar_random(group: GroupParams, rng, require_nonzero: bool = True,
                  ctr: OpCounter | None = None) -> int:
    """Uniform scalar in [0, q), or [1, q) when nonzero is required."""
    v = rng.randrange(group.q)
    while require_nonzero and v == 0:
        v = rng.randrange(group.q)
    if ctr is not None:
        ctr.z += 1
    return v


def point_mul(group: GroupParams, k: int, el, ctr: OpCounter | None = None):
    if ctr is not None:
        ctr.sm += 1
    return group.mul(k, el)


def point_add(group: GroupParams, e1, e2, ctr: OpCounter | None = None):
    if ctr is not None:
        ctr.ss += 1
    return group.add(e1, e2)


def point_sub(group: GroupParams, e1, e2, ctr: OpCounter | None = None):
    # subtraction = one addition of the inverse; a single ss tick
    if ctr is not None:
        ctr.ss += 1
    return group.add(e1, group.neg(e2))


def point_neg(group: GroupParams, el):
    return group.neg(el)


def map_to_scalar(group: GroupParams, el) -> int:
    """Deterministic, encoding-stable map of a group element into Z_q.

    Not one of the five protocol oracles and never counted: it is the
    canonical encode-hash-reduce plumbing used to turn group elements into
    polynomial roots.
    """
    enc = group.encode(el)
    h = hashlib.shake_256()
    h.update(bytes([_MAP_TAG]))
    h.update(len(enc).to_bytes(4, "big"))
    h.update(enc)
    raw = h.digest(2 * group.scalar_bytes)
    return int.from_bytes(raw, "big") % group.q


def field_mul(group: GroupParams, a: int, b: int, ctr: OpCounter | None = None) -> int:
    if ctr is not None:
        ctr.field_mul += 1
    return (a * b) % group.q


def field_add(group: GroupParams, a: int, b: int, ctr: OpCounter | None = None) -> int:
    if ctr is not None:
        ctr.field_add += 1
    return (a + b) % group.q
