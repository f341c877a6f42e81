"""Finite fields of order q <= 16 as lookup tables.

Elements are encoded 0..q-1: for q = p^e the integer with base-p digits
(c_0, ..., c_{e-1}) is the polynomial c_0 + c_1 x + ... modulo a fixed
irreducible polynomial (the Conway polynomial for that order).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

__all__ = ["FieldSpec", "GF", "CONWAY"]

# coefficients low degree first, monic
CONWAY = {
    4: (2, (1, 1, 1)),          # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),       # x^3 + x + 1
    9: (3, (2, 2, 1)),          # x^2 + 2x + 2
    16: (2, (1, 1, 0, 0, 1)),   # x^4 + x + 1
}
PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True, eq=False)
class FieldSpec:
    q: int
    p: int
    e: int
    add: tuple = field(repr=False)
    mul: tuple = field(repr=False)
    neg: tuple = field(repr=False)
    inv: tuple = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]


def _digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _poly_mulmod(a, b, poly, p):
    e = len(poly) - 1
    prod = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            # subtract c * x^(d-e) * poly (poly is monic)
            for i, pi in enumerate(poly):
                prod[d - e + i] = (prod[d - e + i] - c * pi) % p
    return prod[:e]


def _verify(q, add, mul):
    zero, one = 0, 1
    rng = range(q)
    for a in rng:
        if add[a][zero] != a or mul[a][one] != a:
            raise ArithmeticError("identity axiom fails")
        if a and not any(mul[a][b] == one for b in rng):
            raise ArithmeticError("nonzero element without inverse")
        for b in rng:
            if add[a][b] != add[b][a] or mul[a][b] != mul[b][a]:
                raise ArithmeticError("commutativity fails")
            for c in rng:
                if add[add[a][b]][c] != add[a][add[b][c]]:
                    raise ArithmeticError("additive associativity fails")
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise ArithmeticError("multiplicative associativity fails")
                if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]:
                    raise ArithmeticError("distributivity fails")


@lru_cache(maxsize=None)
def GF(q: int) -> FieldSpec:
    """The field with q elements (q a prime power <= 16); tables are
    checked against the field axioms once and cached."""
    if q in PRIMES:
        p, e = q, 1
        add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
    elif q in CONWAY:
        p, poly = CONWAY[q]
        e = len(poly) - 1
        digs = [_digits(x, p, e) for x in range(q)]
        add = tuple(
            tuple(_undigits([(x + y) % p for x, y in zip(digs[a], digs[b])], p) for b in range(q))
            for a in range(q)
        )
        mul = tuple(
            tuple(_undigits(_poly_mulmod(digs[a], digs[b], poly, p), p) for b in range(q))
            for a in range(q)
        )
    else:
        raise ValueError(f"unsupported field order {q} (need a prime power <= 16)")
    _verify(q, add, mul)
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(q) if mul[a][b] == 1) for a in range(1, q))
    return FieldSpec(q, p, e, add, mul, neg, inv)
