"""Classic dense Sidon sets: Erdős–Turán, Bose, Singer, and the greedy
Mian–Chowla sequence.

Bose and Singer go through the canonical field contexts of
:mod:`sidonlab.fields`, so every output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import SidonSet, is_sidon_mod
from .fields import discrete_logs, field_ctx
from .primes import is_prime

FAMILIES = ("erdos_turan", "bose", "singer", "mian_chowla")
MAX_MIAN_CHOWLA = 2000


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"parameter must be prime, got {p}")


def erdos_turan(p: int) -> SidonSet:
    """{2p*i + (i^2 mod p) + 1 : 0 <= i < p} inside [1, 2p^2]."""
    _require_prime(p)
    elems = [2 * p * i + (i * i) % p + 1 for i in range(p)]
    return SidonSet.from_elements(elems, 2 * p * p, family="erdos_turan")


def bose(p: int) -> SidonSet:
    """Logs of g + c (c in GF(p)) for the canonical primitive g of GF(p^2).

    The result has exactly p elements in [1, p^2 - 1] and is Sidon modulo p^2 - 1.
    """
    _require_prime(p)
    ctx = field_ctx(p, 2)
    g0, g1 = ctx.generator
    logs = discrete_logs(ctx, [((g0 + c) % p, g1) for c in range(p)])
    n = p * p - 1
    elems = sorted(logs)
    if len(set(elems)) != p or elems[0] < 1:
        raise RuntimeError(f"Bose construction for p={p} produced a bad index set")
    if not is_sidon_mod(elems, n):
        raise RuntimeError(f"Bose set for p={p} is not Sidon modulo {n}")
    return SidonSet.from_elements(elems, n, family="bose")


def singer(q: int) -> SidonSet:
    """Perfect difference set modulo q^2 + q + 1 from the line span{1, x} of GF(q^3).

    Residue 0 is represented by q^2 + q + 1 so all elements are positive.
    """
    _require_prime(q)
    ctx = field_ctx(q, 3)
    v = q * q + q + 1
    points = [(c, 1, 0) for c in range(q)] + [(1, 0, 0)]
    residues = {a % v for a in discrete_logs(ctx, points)}
    elems = sorted(r if r else v for r in residues)
    if len(elems) != q + 1:
        raise RuntimeError(f"Singer construction for q={q} gave {len(elems)} residues")
    if not is_perfect_difference_set(elems, v):
        raise RuntimeError(f"Singer set for q={q} is not a perfect difference set")
    return SidonSet.from_elements(elems, v, family="singer")


def is_perfect_difference_set(elements, v: int) -> bool:
    """Every nonzero residue mod v is a difference of exactly one ordered pair."""
    hits = [0] * v
    for a in elements:
        for b in elements:
            if a != b:
                hits[(a - b) % v] += 1
    return hits[0] == 0 and all(h == 1 for h in hits[1:])


def mian_chowla(k: int) -> SidonSet:
    """First k terms of the greedy Sidon sequence 1, 2, 4, 8, 13, 21, ...

    Used differences live in a big-int bitset; ``rev`` has bit (last - a) set
    for every chosen a, so ``rev << (x - last)`` is the difference mask of x.
    """
    if not isinstance(k, int) or not 1 <= k <= MAX_MIAN_CHOWLA:
        raise ValueError(f"k must be an integer in [1, {MAX_MIAN_CHOWLA}], got {k}")
    elems = [1]
    rev, used, last = 1, 0, 1
    while len(elems) < k:
        x = last + 1
        while (rev << (x - last)) & used:
            x += 1
        new = rev << (x - last)
        used |= new
        rev = new | 1
        last = x
        elems.append(x)
    return SidonSet.from_elements(elems, last, family="mian_chowla")


@dataclass(frozen=True)
class ConstructionSpec:
    family: str
    parameter: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "mian_chowla":
            if not 1 <= self.parameter <= MAX_MIAN_CHOWLA:
                raise ValueError(f"mian_chowla length must be in [1, {MAX_MIAN_CHOWLA}]")
        else:
            _require_prime(self.parameter)

    def build(self) -> SidonSet:
        return construct(self.family, self.parameter)


def construct(family: str, parameter: int) -> SidonSet:
    family = family.replace("-", "_")
    builders = {
        "erdos_turan": erdos_turan,
        "bose": bose,
        "singer": singer,
        "mian_chowla": mian_chowla,
    }
    if family not in builders:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return builders[family](parameter)
