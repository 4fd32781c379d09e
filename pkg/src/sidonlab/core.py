"""Sidon set model, verification, and the error measurements built on it.

A finite set A of positive integers is Sidon when all sums a + b (a <= b)
are distinct, equivalently when all positive differences are distinct.
Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Iterable, Sequence

import numpy as np

# Beyond this many pairs the dict-based checks switch to a sort-based path.
LOW_MEMORY_PAIR_THRESHOLD = 2_000_000

MAX_POWER = 8


class NotSidonError(ValueError):
    def __init__(self, witness: tuple[int, int, int, int]):
        a, b, c, d = witness
        super().__init__(f"not a Sidon set: {a} + {b} = {c} + {d}")
        self.witness = witness


@dataclass(frozen=True)
class SidonSet:
    """Strictly increasing positive integers inside [1, n].

    ``verified`` is only ever set by :meth:`from_elements`, which runs the
    Sidon check; a hand-built instance stays unverified.
    """

    elements: tuple[int, ...]
    n: int
    verified: bool = False
    family: str | None = None

    def __post_init__(self):
        _check_increasing(self.elements)
        if self.n < 1:
            raise ValueError(f"ambient bound n must be positive, got {self.n}")
        if self.elements and self.elements[-1] > self.n:
            raise ValueError(f"element {self.elements[-1]} exceeds n={self.n}")

    @classmethod
    def from_elements(cls, elements: Iterable[int], n: int | None = None,
                      family: str | None = None) -> "SidonSet":
        elems = tuple(int(a) for a in elements)
        if n is None:
            n = elems[-1] if elems else 1
        result = verify_sidon(elems)
        if not result.ok:
            raise NotSidonError(result.witness)
        return cls(elems, int(n), True, family)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def defect(self) -> "DefectValue":
        return DefectValue.of(self.n, len(self.elements))


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    witness: tuple[int, int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_increasing(elements: Sequence[int]) -> None:
    prev = 0
    for a in elements:
        if a <= 0:
            raise ValueError(f"elements must be positive, got {a}")
        if a <= prev:
            raise ValueError(f"elements must be strictly increasing ({prev} then {a})")
        prev = a


def _canonical_witness(p: tuple[int, int], q: tuple[int, int]) -> tuple[int, int, int, int]:
    p = tuple(sorted(p))
    q = tuple(sorted(q))
    if q < p:
        p, q = q, p
    return (p[0], p[1], q[0], q[1])


def _verify_by_sums(elems: Sequence[int]) -> VerificationResult:
    seen: dict[int, tuple[int, int]] = {}
    k = len(elems)
    for i in range(k):
        a = elems[i]
        for j in range(i, k):
            s = a + elems[j]
            other = seen.get(s)
            if other is not None:
                return VerificationResult(False, _canonical_witness(other, (a, elems[j])))
            seen[s] = (a, elems[j])
    return VerificationResult(True)


def _verify_by_differences(elems: Sequence[int]) -> VerificationResult:
    seen: dict[int, tuple[int, int]] = {}
    k = len(elems)
    for j in range(k):
        b = elems[j]
        for i in range(j):
            d = b - elems[i]
            other = seen.get(d)
            if other is not None:
                # b - a = d - c  <=>  b + c = d + a
                c, dd = other
                return VerificationResult(False, _canonical_witness((b, c), (dd, elems[i])))
            seen[d] = (elems[i], b)
    return VerificationResult(True)


def _verify_sorted(elems: Sequence[int]) -> VerificationResult:
    arr = np.asarray(elems, dtype=np.int64)
    k = len(arr)
    if k < 2:
        return VerificationResult(True)
    i, j = np.triu_indices(k, 1)
    diffs = arr[j] - arr[i]
    del arr
    order = np.argsort(diffs, kind="stable")
    sd = diffs[order]
    dup = np.flatnonzero(sd[1:] == sd[:-1])
    if dup.size == 0:
        return VerificationResult(True)
    x, y = order[dup[0]], order[dup[0] + 1]
    a1, b1 = elems[i[x]], elems[j[x]]
    a2, b2 = elems[i[y]], elems[j[y]]
    return VerificationResult(False, _canonical_witness((b1, a2), (b2, a1)))


_METHODS = {
    "sums": _verify_by_sums,
    "differences": _verify_by_differences,
    "sorted": _verify_sorted,
}


def verify_sidon(elements: Sequence[int], method: str = "auto") -> VerificationResult:
    """Check the Sidon property; on failure return a witness ``(a, b, c, d)``
    with ``a + b == c + d`` and ``{a, b} != {c, d}``.

    ``method`` is one of ``"sums"``, ``"differences"``, ``"sorted"`` or
    ``"auto"`` (sums, or the sort-based path for very large inputs).
    """
    elems = tuple(int(a) for a in elements)
    _check_increasing(elems)
    if method == "auto":
        k = len(elems)
        method = "sorted" if k * k > 2 * LOW_MEMORY_PAIR_THRESHOLD else "sums"
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown verification method {method!r}") from None
    return fn(elems)


def is_sidon_mod(elements: Sequence[int], modulus: int) -> bool:
    """True when all nonzero differences are distinct modulo ``modulus``."""
    seen = set()
    for a in elements:
        for b in elements:
            if a == b:
                continue
            d = (a - b) % modulus
            if d == 0 or d in seen:
                return False
            seen.add(d)
    return True


def _require_verified(A: SidonSet) -> None:
    if not A.verified:
        raise ValueError("operation requires a verified SidonSet (use SidonSet.from_elements)")


# --------------------------------------------------------------------------
# Defect and measurements


@dataclass(frozen=True)
class DefectValue:
    n: int
    size: int
    L_prime: float
    L: float

    @classmethod
    def of(cls, n: int, size: int) -> "DefectValue":
        lp = math.sqrt(n) - size
        return cls(n, size, lp, max(0.0, lp))


def counting_function(A: SidonSet, t: float) -> int:
    """A(t) = |A ∩ (0, t)|."""
    _require_verified(A)
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return bisect_left(A.elements, t)


def discrepancy_bound(n: int, c: float, L: float) -> float:
    """52 n^{1/4} (1 + c^{1/2} n^{1/8}) (1 + L^{1/2} n^{-1/8})."""
    n8 = n ** 0.125
    return 52.0 * n8 * n8 * (1.0 + math.sqrt(c) * n8) * (1.0 + math.sqrt(L) / n8)


@dataclass(frozen=True)
class DiscrepancyReport:
    n: int
    u: int
    len: int
    c: float
    count: int
    E_I: float
    bound: float
    ratio: float


def interval_discrepancy(A: SidonSet, u: int, length: int,
                         defect: DefectValue | None = None) -> DiscrepancyReport:
    """Compare the count of A in {u+1, ..., u+length} with c|A|, c = length/n."""
    _require_verified(A)
    n = A.n
    if length <= 0:
        raise ValueError("interval length must be positive")
    if u < 0 or u + length > n:
        raise ValueError(f"interval ({u}, {length}) does not lie inside [1, {n}]")
    L = (defect or A.defect()).L
    count = bisect_right(A.elements, u + length) - bisect_right(A.elements, u)
    c = length / n
    e = count - length * len(A.elements) / n
    bound = discrepancy_bound(n, c, L)
    return DiscrepancyReport(n, u, length, c, count, e, bound, abs(e) / bound)


def dyadic_grid(n: int) -> list[tuple[int, int]]:
    """Lengths n // 2^j for j = 0 .. floor(log2 n) - 3, offsets stepping by len // 4."""
    jmax = max(0, n.bit_length() - 1 - 3)
    cells = []
    for j in range(jmax + 1):
        length = n >> j
        if length == 0:
            break
        step = max(1, length // 4)
        cells.extend((u, length) for u in range(0, n - length + 1, step))
    return cells


@dataclass(frozen=True)
class SweepResult:
    reports: tuple[DiscrepancyReport, ...]
    max_ratio: float
    argmax: tuple[int, int] | None


def discrepancy_sweep(A: SidonSet, grid: Iterable[tuple[int, int]] | None = None) -> SweepResult:
    """Evaluate the interval discrepancy on every ``(u, len)`` grid cell.

    Reports come back ordered by (len, u) regardless of the grid order.
    """
    _require_verified(A)
    cells = sorted(set(dyadic_grid(A.n) if grid is None else grid), key=lambda c: (c[1], c[0]))
    for u, length in cells:
        if length <= 0 or u < 0 or u + length > A.n:
            raise ValueError(f"interval ({u}, {length}) does not lie inside [1, {A.n}]")
    if not cells:
        return SweepResult((), 0.0, None)
    n, size = A.n, len(A.elements)
    L = A.defect().L
    elems = np.asarray(A.elements, dtype=np.int64)
    us = np.fromiter((c[0] for c in cells), dtype=np.int64, count=len(cells))
    lens = np.fromiter((c[1] for c in cells), dtype=np.int64, count=len(cells))
    counts = np.searchsorted(elems, us + lens, side="right") - np.searchsorted(elems, us, side="right")
    reports = []
    best, arg = -1.0, None
    for u, length, count in zip(us.tolist(), lens.tolist(), counts.tolist()):
        c = length / n
        e = count - length * size / n
        bound = discrepancy_bound(n, c, L)
        r = abs(e) / bound
        reports.append(DiscrepancyReport(n, u, length, c, count, e, bound, r))
        if r > best:
            best, arg = r, (u, length)
    return SweepResult(tuple(reports), best, arg)


@dataclass(frozen=True)
class ElementErrorRecord:
    m: int
    a_m: int
    main_term: float
    abs_error: float
    normalizer: float
    normalized: float


@dataclass(frozen=True)
class ElementErrorSummary:
    records: tuple[ElementErrorRecord, ...]
    max_normalized: float
    argmax_m: int
    # restricted to m >= |A|/2, where the formula is asymptotically meaningful
    max_normalized_upper: float
    argmax_m_upper: int
    defect: DefectValue = field(repr=False)


def element_errors(A: SidonSet) -> ElementErrorSummary:
    """Measure |a_m - m sqrt(n)| against n^{7/8} + L^{1/2} n^{3/4} for every rank m."""
    _require_verified(A)
    if not A.elements:
        raise ValueError("element_errors needs a nonempty set")
    n = A.n
    dv = A.defect()
    root = math.sqrt(n)
    normalizer = n ** 0.875 + math.sqrt(dv.L) * n ** 0.75
    records = []
    for m, a in enumerate(A.elements, start=1):
        main = m * root
        err = abs(a - main)
        records.append(ElementErrorRecord(m, a, main, err, normalizer, err / normalizer))
    best = max(records, key=lambda r: r.normalized)
    half = len(records) / 2
    upper = max((r for r in records if r.m >= half), key=lambda r: r.normalized)
    return ElementErrorSummary(tuple(records), best.normalized, best.m,
                               upper.normalized, upper.m, dv)


@dataclass(frozen=True)
class PowerSumRecord:
    ell: int
    exact_sum: int
    main_term: float
    abs_error: float
    normalizer: float
    normalized: float


def power_sum(A: SidonSet, ell: int) -> PowerSumRecord:
    """Exact sum of a^ell against n^{(2ell+1)/2} / (ell+1).

    The normalizer is n^{(8ell+3)/8} + L^{1/2} n^{(4ell+1)/4}.  The main term
    and the difference are evaluated in 60-digit decimal arithmetic so the
    error is not swamped by rounding of two nearly equal large numbers.
    """
    _require_verified(A)
    if not isinstance(ell, int) or not 1 <= ell <= MAX_POWER:
        raise ValueError(f"ell must be an integer in [1, {MAX_POWER}], got {ell}")
    n = A.n
    exact = sum(a ** ell for a in A.elements)
    with localcontext() as ctx:
        ctx.prec = 60
        dn = Decimal(n)
        main = dn ** ell * dn.sqrt() / (ell + 1)
        err = abs(Decimal(exact) - main)
    L = A.defect().L
    normalizer = n ** ((8 * ell + 3) / 8) + math.sqrt(L) * n ** ((4 * ell + 1) / 4)
    err_f = float(err)
    return PowerSumRecord(ell, exact, float(main), err_f, normalizer, err_f / normalizer)


@dataclass(frozen=True)
class DingReport:
    n: int
    fraction: float
    holds: bool
    first_failing_t: int | None


def ding_condition(A: SidonSet, fraction: float) -> DingReport:
    """Check A(t) > sqrt(t) for every integer t in (n * fraction, n)."""
    _require_verified(A)
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    n = A.n
    elems = A.elements
    start = math.floor(n * fraction) + 1
    for t in range(start, n):
        count = bisect_left(elems, t)
        if count * count <= t:
            return DingReport(n, fraction, False, t)
    return DingReport(n, fraction, True, None)
