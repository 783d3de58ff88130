"""Splitting of 2 and 3 in real quadratic integer rings and the v invariant.

The splitting types come straight from the residue tables for Z[sqrt(D)] /
Z[(1+sqrt(D))/2], so no ideal arithmetic in the number ring is needed:

    2: inert iff D = 5 (mod 8), ramified iff D in {2,3,6,7} (mod 8),
       split iff D = 1 (mod 8)
    3: ramified iff 3 | D, split iff D = 1 (mod 3), inert iff D = 2 (mod 3)

r1/r2 count unramified/ramified primes over 2 with residue field F2, q counts
primes over 3 with residue field F3, and v = max(2*r2 + r1, q) decides for
which k a k-element normally generating set of SL2 can exist at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import Sl2LabError
from .finring import squarefree

INERT, RAMIFIED, SPLIT = "inert", "ramified", "split"


def _check_d(d: int):
    if d <= 1:
        if d < 0:
            raise Sl2LabError(
                f"D = {d}: complex quadratic rings have finitely many units, "
                "so the diameter bounds behind v do not apply; refusing")
        raise Sl2LabError(f"D = {d}: need a square-free integer > 1")
    if not squarefree(d):
        raise Sl2LabError(f"D = {d} is not square-free")


def splitting_of_2(d: int) -> str:
    _check_d(d)
    r = d % 8
    if r == 5:
        return INERT
    if r == 1:
        return SPLIT
    return RAMIFIED  # r in {2,3,6,7}; 0 and 4 are excluded by square-freeness


def splitting_of_3(d: int) -> str:
    _check_d(d)
    if d % 3 == 0:
        return RAMIFIED
    return SPLIT if d % 3 == 1 else INERT


_R1R2 = {INERT: (0, 0), RAMIFIED: (0, 1), SPLIT: (2, 0)}
_Q = {INERT: 0, RAMIFIED: 1, SPLIT: 2}


@dataclass(frozen=True)
class SplittingReport:
    d: int
    split2: str
    split3: str
    r1: int
    r2: int
    q: int
    v: int
    improved_offset: int  # r2; lifts the generic lower bound 2k to 2k + r2

    def to_json(self) -> dict:
        return {"D": self.d, "split2": self.split2, "split3": self.split3,
                "r1": self.r1, "r2": self.r2, "q": self.q, "v": self.v,
                "improved_offset": self.improved_offset}


def v_profile(d: int) -> SplittingReport:
    s2, s3 = splitting_of_2(d), splitting_of_3(d)
    r1, r2 = _R1R2[s2]
    q = _Q[s3]
    v = max(2 * r2 + r1, q)
    return SplittingReport(d, s2, s3, r1, r2, q, v, r2)


def corollary_case(d: int) -> int:
    """Independent three-way classification straight off D mod 8 and D mod 3:
    returns the predicted v (0, 1, or 2)."""
    _check_d(d)
    if d % 8 == 5 and d % 3 == 2:
        return 0
    if d % 8 == 5 and d % 3 == 0:
        return 1
    if d % 8 in (1, 2, 3, 6, 7) or d % 3 == 1:
        return 2
    raise AssertionError(f"classification gap at D = {d}")


@dataclass(frozen=True)
class DeltaVerdict:
    d: int
    k: int
    lower_bound: float | int   # -inf when k < v
    improved_bound: float | int

    @property
    def attainable(self) -> bool:
        return self.lower_bound != -math.inf

    def to_json(self) -> dict:
        def num(x):
            return "-inf" if x == -math.inf else int(x)
        return {"D": self.d, "k": self.k, "lower_bound": num(self.lower_bound),
                "improved_bound": num(self.improved_bound)}


def delta_verdict(d: int, k: int) -> DeltaVerdict:
    """Lower bound 2k (improved: 2k + r2) for k >= v; no generating set at
    all, hence -inf, for k < v."""
    prof = v_profile(d)
    if k < prof.v:
        return DeltaVerdict(d, k, -math.inf, -math.inf)
    return DeltaVerdict(d, k, 2 * k, 2 * k + prof.improved_offset)


def scan_range(d_lo: int, d_hi: int) -> tuple[list[SplittingReport], list[int], dict[int, int]]:
    """Profiles for the square-free D in [d_lo, d_hi]; also returns the
    skipped (non-square-free) D and a histogram of v values."""
    rows, skipped, hist = [], [], {}
    for d in range(max(d_lo, 2), d_hi + 1):
        if not squarefree(d):
            skipped.append(d)
            continue
        prof = v_profile(d)
        rows.append(prof)
        hist[prof.v] = hist.get(prof.v, 0) + 1
    return rows, skipped, hist
