"""Monic polynomials over Z_q built from roots plus a constant offset.

Only two operations are needed: building f(x) = prod(x - r_k) + d from a
root list, and Horner evaluation.  Coefficients are stored low-to-high and
the leading 1 is implicit (it is never transmitted).  Arithmetic cost is
recorded in the separate ``poly_mul``/``poly_add`` tallies when a counter
is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group import OpCounter

__all__ = ["MonicPoly"]


@dataclass
class MonicPoly:
    q: int
    coeffs: list  # a_0 .. a_{n-1}; implicit monic leading coefficient

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("polynomial needs degree >= 1")

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_roots_with_offset(cls, roots, offset: int, q: int,
                               ctr: OpCounter | None = None) -> "MonicPoly":
        """prod(x - root_k) + offset; duplicate roots are fine."""
        roots = list(roots)
        if not roots:
            raise ValueError("empty root list")
        c = [1]
        muls = adds = 0
        for r in roots:
            c.insert(0, 0)
            for j in range(len(c) - 1):
                c[j] = (c[j] - c[j + 1] * r) % q
            muls += len(c) - 1
            adds += len(c) - 1
        c[0] = (c[0] + offset) % q
        adds += 1
        if ctr is not None:
            ctr.poly_mul += muls
            ctr.poly_add += adds
        assert c[-1] == 1
        return cls(q, c[:-1])

    def eval(self, x: int, ctr: OpCounter | None = None) -> int:
        """Horner evaluation; exactly n field mults and n field adds."""
        acc = 1  # the implicit monic term
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.q
        if ctr is not None:
            ctr.poly_mul += len(self.coeffs)
            ctr.poly_add += len(self.coeffs)
        return acc
