"""Conjugation-invariant word norms, diameters, Delta_k, and generation tests.

The ball B_T(k) is the set of products of at most k conjugates of elements of
T or their inverses, so the norm is a BFS distance from the identity over the
union of the conjugacy classes of T and of T^-1.  Delta_k searches over
subsets of inverse-closed class pairs, since the norm only depends on those.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import Sl2LabError
from .finring import FiniteRing, Ideal
from .groups import (SL2Group, Subgroup, abelianization, enumerate_sl2,
                     normal_closure, subgroup_closure)
from .sl2 import Mat2

INFINITY = math.inf
MINUS_INFINITY = -math.inf
DEFAULT_DELTA_BUDGET = 50_000


@dataclass(frozen=True)
class NormProfile:
    group: SL2Group
    generators: tuple[int, ...]          # indices of T
    ball_sizes: tuple[int, ...]          # |B_T(k)| for k = 0..diameter bound
    norm: np.ndarray = field(repr=False)  # -1 encodes infinity
    diameter: float | int = INFINITY

    def norm_of(self, i: int) -> float | int:
        v = int(self.norm[i])
        return INFINITY if v < 0 else v

    def closure_size(self) -> int:
        return int((self.norm >= 0).sum())

    def generates(self) -> bool:
        return self.closure_size() == self.group.size

    def to_json(self) -> dict:
        return {
            "T": [str(self.group.mat(i)) for i in self.generators],
            "diameter": _json_num(self.diameter),
            "ball_sizes": list(self.ball_sizes),
        }


def _json_num(v):
    if v == INFINITY:
        return "inf"
    if v == MINUS_INFINITY:
        return "-inf"
    return int(v)


def _ball_generators(group: SL2Group, gens) -> np.ndarray:
    """Union of the conjugacy classes of T and of the inverses of T."""
    parts = []
    for t in {int(t) for t in gens}:
        orb = group.conj_orbit(t)
        parts.append(orb)
        parts.append(np.asarray(group.inv(orb)))
    return np.unique(np.concatenate(parts)) if parts else np.array([], dtype=np.int32)


def ball_distances(group: SL2Group, conj_closed_gens: np.ndarray) -> np.ndarray:
    dist = np.full(group.size, -1, dtype=np.int32)
    dist[group.identity] = 0
    frontier = np.array([group.identity], dtype=np.int32)
    k = 0
    while len(frontier):
        k += 1
        prods = np.unique(np.asarray(
            group.mul(frontier[:, None], conj_closed_gens[None, :])))
        frontier = prods[dist[prods] < 0]
        dist[frontier] = k
    return dist


def norm_and_diameter(group: SL2Group, gens) -> NormProfile:
    gens = tuple(int(t) for t in gens)
    S = _ball_generators(group, gens)
    dist = ball_distances(group, S) if len(S) else _trivial_dist(group)
    reached = int((dist >= 0).sum())
    dmax = int(dist.max())
    diameter = dmax if reached == group.size else INFINITY
    balls = tuple(int((dist >= 0).sum() - (dist > k).sum()) for k in range(dmax + 1))
    return NormProfile(group, gens, balls, dist, diameter)


def _trivial_dist(group: SL2Group) -> np.ndarray:
    dist = np.full(group.size, -1, dtype=np.int32)
    dist[group.identity] = 0
    return dist


@dataclass(frozen=True)
class DeltaReport:
    k: int
    value: float | int            # MINUS_INFINITY when nothing generates
    witness: tuple[int, ...]      # class-pair ids of a worst generating set
    witness_reps: tuple[str, ...]
    search_space: int
    evaluated: int
    partial: bool = False

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "value": _json_num(self.value),
            "witness_classes": list(self.witness),
            "witness_reps": list(self.witness_reps),
            "search_space": self.search_space,
            "evaluated": self.evaluated,
            "partial": self.partial,
        }


def _class_pairs(group: SL2Group):
    """Inverse-closed conjugacy-class pairs, identity excluded; the norm of a
    candidate T only depends on the set of these pairs it touches."""
    cls = group.conjugacy_classes()
    seen, pairs = set(), []
    for cid, rep in enumerate(cls.reps):
        inv_cid = int(cls.class_of[int(group.inv(rep))])
        key = (min(cid, inv_cid), max(cid, inv_cid))
        if rep == group.identity or key in seen:
            continue
        seen.add(key)
        pairs.append((key, rep))
    return pairs


def delta_k(group: SL2Group, k: int,
            budget: int = DEFAULT_DELTA_BUDGET,
            parallelism: int = 1) -> DeltaReport:
    """Exact sup of the diameter over normally generating class multisets of
    size <= k; MINUS_INFINITY when no such multiset generates."""
    assert k >= 1
    pairs = _class_pairs(group)
    candidates = []
    search_space = 0
    truncated = False
    for size in range(1, min(k, len(pairs)) + 1):
        for combo in itertools.combinations(range(len(pairs)), size):
            search_space += 1
            if len(candidates) < budget:
                candidates.append(combo)
            else:
                truncated = True

    def evaluate(combo):
        reps = [pairs[i][1] for i in combo]
        prof = norm_and_diameter(group, reps)
        return prof.diameter if prof.generates() else None

    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            diams = list(pool.map(evaluate, candidates))
    else:
        diams = [evaluate(c) for c in candidates]

    best, witness = MINUS_INFINITY, ()
    for combo, diam in zip(candidates, diams):
        if diam is not None and diam > best:
            best, witness = diam, combo
    reps = tuple(str(group.mat(pairs[i][1])) for i in witness)
    return DeltaReport(k, best, tuple(pairs[i][0][0] for i in witness), reps,
                       search_space, len(candidates), truncated)


# ----------------------------------------------------------------------------
# generation criteria
# ----------------------------------------------------------------------------

def pi_set(ring: FiniteRing, mats: list[Mat2]) -> list[Ideal]:
    """Maximal ideals modulo which every matrix of T becomes scalar."""
    out = []
    for P in ring.maximal_ideals():
        _, surj = ring.quotient_by(P)
        if all(surj[m.b] == surj[m.c] == surj[ring.zero]
               and surj[m.a] == surj[m.d] for m in mats):
            out.append(P)
    return out


def level_sum(mats: list[Mat2]) -> Ideal:
    assert mats
    ring = mats[0].ring
    total = ring.zero_ideal()
    for m in mats:
        total = total.plus(m.level_ideal())
    return total


@dataclass(frozen=True)
class GenerationVerdict:
    """Ground truth plus the two criterion components, reported side by side.

    The criterion (no scalar-only primes, abelianization image generates) is
    necessary in every finite instance; the converse is only reported, never
    asserted.
    """

    closure_is_whole: bool
    pi_empty: bool
    ab_generates: bool

    @property
    def criterion(self) -> bool:
        return self.pi_empty and self.ab_generates

    @property
    def agree(self) -> bool:
        return self.closure_is_whole == self.criterion

    def to_json(self) -> dict:
        return {"closure": self.closure_is_whole, "pi_empty": self.pi_empty,
                "ab_generates": self.ab_generates, "agree": self.agree}


def _tuple_group_generates(factors: tuple[int, ...], vectors) -> bool:
    if not factors:
        return True
    total = math.prod(factors)
    seen = {tuple([0] * len(factors))}
    frontier = list(seen)
    vecs = [tuple(int(x) for x in v) for v in vectors]
    while frontier:
        nxt = []
        for base in frontier:
            for v in vecs:
                t = tuple((a + b) % d for a, b, d in zip(base, v, factors))
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return len(seen) == total


def normally_generates(group: SL2Group, gens) -> GenerationVerdict:
    gens = [int(t) for t in gens]
    closure = normal_closure(group, gens)
    mats = [group.mat(i) for i in gens]
    pi_empty = not pi_set(group.ring, mats)
    ab = abelianization(group)
    ab_gen = _tuple_group_generates(ab.factors, [ab.residues(i) for i in gens])
    return GenerationVerdict(closure.is_whole(), pi_empty, ab_gen)


# ----------------------------------------------------------------------------
# bounded-generation probes
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundProbe:
    """Empirical data point: least k with C(b*x^3) in B_A(k), if any <= k_max."""

    target: str
    k: float | int  # INFINITY encodes not-found
    k_max: int

    @property
    def found(self) -> bool:
        return self.k != INFINITY

    def to_json(self) -> dict:
        return {"target": self.target, "k": _json_num(self.k), "k_max": self.k_max}


def bound_search(ring: FiniteRing, a: Mat2, x: int, b: int, k_max: int) -> BoundProbe:
    if not a.level_ideal().contains(x):
        raise Sl2LabError(
            f"x = {ring.element_str(x)} is not in the level ideal of {a}")
    group = enumerate_sl2(ring)
    x3b = int(ring.mul(ring.mul(ring.mul(x, x), x), b))
    target = Mat2.selfrep(ring, x3b)
    prof = norm_and_diameter(group, [group.index_of(a)])
    k = prof.norm_of(group.index_of(target))
    return BoundProbe(str(target), k if k <= k_max else INFINITY, k_max)


# ----------------------------------------------------------------------------
# finite analog of the CRT generating-set construction
# ----------------------------------------------------------------------------

FACTOR_TWO_RAMIFIED = "2-ramified"      # residue F2, char 2, nilpotent: needs 2 slots
FACTOR_TWO_UNRAMIFIED = "2-unramified"  # Z/2^k: needs 1 slot
FACTOR_THREE = "3"                      # residue F3: needs 1 slot
FACTOR_HELPER = "helper"                # residue field >= 4: perfect SL2


def classify_factor(factor) -> str:
    if factor.residue_order == 2:
        return FACTOR_TWO_RAMIFIED if factor.kind == "poly" else FACTOR_TWO_UNRAMIFIED
    if factor.residue_order == 3:
        return FACTOR_THREE
    return FACTOR_HELPER


@dataclass(frozen=True)
class GeneratorConstruction:
    ring: FiniteRing
    k: int
    v_required: int
    ok: bool
    elements: tuple[int, ...] = ()
    reason: str = ""
    verified: bool = False

    def matrices(self) -> list[Mat2]:
        return [Mat2.e12(self.ring, s) for s in self.elements]

    def to_json(self) -> dict:
        return {
            "ring_spec": self.ring.spec,
            "k": self.k,
            "v_required": self.v_required,
            "ok": self.ok,
            "set": [str(m) for m in self.matrices()],
            "reason": self.reason,
            "verified": self.verified,
        }


def construct_generators(ring: FiniteRing, k: int,
                         verify: bool = True) -> GeneratorConstruction:
    """Build T = {E12(s_u)} realizing the unit/uniformizer/zero residue
    pattern per factor; refuses with the abelianization rank when k is too
    small for the 2- and 3-type factors to be covered."""
    kinds = [classify_factor(f) for f in ring.factors]
    two_tasks: list[tuple[int, str]] = []
    for i, kind in enumerate(kinds):
        if kind == FACTOR_TWO_UNRAMIFIED:
            two_tasks.append((i, "unit"))
    for i, kind in enumerate(kinds):
        if kind == FACTOR_TWO_RAMIFIED:
            two_tasks.append((i, "unit"))
    for i, kind in enumerate(kinds):
        if kind == FACTOR_TWO_RAMIFIED:
            two_tasks.append((i, "uniformizer"))
    three_tasks = [(i, "unit") for i, kind in enumerate(kinds) if kind == FACTOR_THREE]
    v = max(len(two_tasks), len(three_tasks))

    if k < v:
        return GeneratorConstruction(
            ring, k, v, ok=False,
            reason=(f"any normally generating set must map onto a generating set "
                    f"of the abelianization, whose rank is {v}; k = {k} < {v}"))

    slots = [[f.zero for f in ring.factors] for _ in range(k)]
    for u, (i, what) in enumerate(two_tasks):
        slots[u][i] = ring.factors[i].one if what == "unit" else ring.factors[i].uniformizer
    for u, (i, _) in enumerate(three_tasks):
        slots[u][i] = ring.factors[i].one
    # every factor needs a unit in some slot so that no prime sees only scalars
    for i, kind in enumerate(kinds):
        if kind == FACTOR_HELPER:
            slots[i % k][i] = ring.factors[i].one

    values = [ring.from_components(s) for s in slots]
    used = set(values)
    for u in range(max(len(two_tasks), len(three_tasks)), k):
        if values[u] != ring.zero:
            continue
        for cand in range(1, ring.order):
            if cand not in used:
                values[u] = cand
                used.add(cand)
                break
        else:
            return GeneratorConstruction(
                ring, k, v, ok=False,
                reason=f"cannot pick {k} distinct nonzero off-diagonal values "
                       f"in a ring of order {ring.order}")

    result = GeneratorConstruction(ring, k, v, ok=True, elements=tuple(values))
    if verify:
        group = enumerate_sl2(ring)
        verdict = normally_generates(
            group, [group.index_of(m) for m in result.matrices()])
        if not verdict.closure_is_whole:
            raise AssertionError(
                f"constructed set fails to normally generate over {ring.spec}")
        result = GeneratorConstruction(ring, k, v, ok=True,
                                       elements=tuple(values), verified=True)
    return result
