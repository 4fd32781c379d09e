"""Small prime-field extensions GF(p^d), d <= 3, with canonical choices.

Elements are tuples of ``d`` coefficients, index i holding the coefficient
of x^i.  The integer encoding of an element is sum(c_i * p^i), so the
constant term is the least significant base-p digit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .primes import factorize, is_prime

Element = tuple[int, ...]

MAX_FIELD_ORDER = 10**12


def encode(x: Element, p: int) -> int:
    v = 0
    for c in reversed(x):
        v = v * p + c
    return v


def decode(v: int, p: int, d: int) -> Element:
    out = []
    for _ in range(d):
        v, c = divmod(v, p)
        out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class FieldCtx:
    """GF(p^d) = GF(p)[x] / (modulus).

    ``modulus`` lists d+1 coefficients, lowest degree first, ending in 1.
    """

    p: int
    d: int
    modulus: tuple[int, ...]
    generator: Element

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return self.p ** self.d - 1

    @property
    def one(self) -> Element:
        return (1,) + (0,) * (self.d - 1)

    def element(self, coeffs) -> Element:
        c = tuple(int(v) % self.p for v in coeffs)
        if len(c) > self.d:
            raise ValueError(f"too many coefficients for degree {self.d}")
        return c + (0,) * (self.d - len(c))

    def add(self, a: Element, b: Element) -> Element:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(self, a: Element, b: Element) -> Element:
        return _mul(a, b, self.p, self.d, self.modulus)

    def pow(self, a: Element, e: int) -> Element:
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inverse(self, a: Element) -> Element:
        if not any(a):
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(a, self.order - 1)


def _mul(a, b, p, d, modulus):
    if d == 1:
        return ((a[0] * b[0]) % p,)
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    # reduce with x^d = -(m_0 + ... + m_{d-1} x^{d-1})
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k] % p
        if c:
            for i in range(d):
                prod[k - d + i] -= c * modulus[i]
    return tuple(v % p for v in prod[:d])


def _has_root(coeffs: tuple[int, ...], p: int) -> bool:
    for r in range(p):
        v = 0
        for c in reversed(coeffs):
            v = (v * r + c) % p
        if v == 0:
            return True
    return False


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Monic irreducible of degree d with the smallest integer encoding."""
    if d == 1:
        return (0, 1)
    for v in range(p ** d):
        low = decode(v, p, d)
        poly = low + (1,)
        # degree <= 3: irreducible iff no root in GF(p)
        if not _has_root(poly, p):
            return poly
    raise RuntimeError(f"no irreducible of degree {d} over GF({p})")


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    d = len(poly) - 1
    if d not in (1, 2, 3):
        raise ValueError("irreducibility test only covers degrees 1..3")
    return d == 1 or not _has_root(poly, p)


def element_order(ctx: FieldCtx, a: Element) -> int:
    order = ctx.order
    for r, _ in factorize(order):
        while order % r == 0 and ctx.pow(a, order // r) == ctx.one:
            order //= r
    return order


@lru_cache(maxsize=64)
def field_ctx(p: int, d: int) -> FieldCtx:
    """Canonical context for GF(p^d): smallest irreducible modulus and the
    primitive element with the smallest integer encoding."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d not in (1, 2, 3):
        raise ValueError(f"degree must be 1, 2 or 3, got {d}")
    if p ** d > MAX_FIELD_ORDER:
        raise ValueError(f"GF({p}^{d}) is too large for desk-scale factoring")
    modulus = smallest_irreducible(p, d)
    order = p ** d - 1
    factors = [r for r, _ in factorize(order)]
    probe = FieldCtx(p, d, modulus, (1,) + (0,) * (d - 1))
    for v in range(1, p ** d):
        g = decode(v, p, d)
        if all(probe.pow(g, order // r) != probe.one for r in factors):
            return FieldCtx(p, d, modulus, g)
    raise RuntimeError(f"no primitive element found in GF({p}^{d})")


class DiscreteLog:
    """Baby-step giant-step logarithms to the base ``ctx.generator``.

    ``baby_steps`` trades memory for per-query cost; when many logs are needed
    in one field, sqrt(order * queries) steps minimise the total work.
    """

    def __init__(self, ctx: FieldCtx, baby_steps: int | None = None):
        self.ctx = ctx
        order = ctx.order
        m = baby_steps or math.isqrt(order - 1) + 1
        m = max(1, min(m, order))
        self.m = m
        table: dict[Element, int] = {}
        cur = ctx.one
        g = ctx.generator
        for j in range(m):
            table.setdefault(cur, j)
            cur = ctx.mul(cur, g)
        self._table = table
        self._giant = ctx.inverse(ctx.pow(g, m))

    def __call__(self, x: Element) -> int:
        ctx = self.ctx
        x = ctx.element(x)
        if not any(x):
            raise ValueError("discrete log of zero is undefined")
        table, giant, m = self._table, self._giant, self.m
        y = x
        for i in range(ctx.order // m + 1):
            j = table.get(y)
            if j is not None:
                return (i * m + j) % ctx.order
            y = ctx.mul(y, giant)
        raise RuntimeError("discrete log not found; generator is not primitive")


def discrete_log(ctx: FieldCtx, x) -> int:
    """Return the unique a in [0, p^d - 2] with g^a = x."""
    return DiscreteLog(ctx)(x)


def discrete_logs(ctx: FieldCtx, xs) -> list[int]:
    xs = [ctx.element(x) for x in xs]
    m = math.isqrt(ctx.order * max(1, len(xs))) + 1
    dlog = DiscreteLog(ctx, m)
    return [dlog(x) for x in xs]


def all_elements(ctx: FieldCtx):
    for coeffs in product(range(ctx.p), repeat=ctx.d):
        yield tuple(reversed(coeffs))
