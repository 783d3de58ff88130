"""Enumerated SL2(R) as a concrete finite group.

Elements are referenced by dense integer indices into a sorted table of
matrix ids; multiplication is recomputed from matrix entries on demand via the
ring's arithmetic tables (no |G|^2 Cayley table).  Conjugacy classes, normal
closures, derived subgroups, quotients and abelianizations all run on these
indices with vectorized numpy plumbing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded
from .finring import FiniteRing, Ideal
from .sl2 import Mat2

DEFAULT_GROUP_CAP = 200_000
_SCAN_BUDGET = 5 * 10**8  # |R|^4 determinant-scan ceiling

_GROUP_CACHE: dict[tuple, "SL2Group"] = {}


def clear_caches():
    _GROUP_CACHE.clear()


def expected_sl2_order(ring: FiniteRing) -> int:
    """|SL2| over a product of chain local rings: prod n_i^3 (1 - q_i^-2)."""
    total = 1
    for f in ring.factors:
        total *= f.order**3 - f.order**3 // f.residue_order**2
    return total


class FiniteGroup:
    """Minimal indexed-group interface; `mul`/`inv` accept numpy arrays."""

    size: int
    identity: int

    def mul(self, i, j):
        raise NotImplementedError

    def inv(self, i):
        raise NotImplementedError

    def order_of(self, i: int) -> int:
        k, x = 1, int(i)
        while x != self.identity:
            x = int(self.mul(x, i))
            k += 1
        return k


class SL2Group(FiniteGroup):
    def __init__(self, ring: FiniteRing, group_cap: int = DEFAULT_GROUP_CAP):
        n = ring.order
        expected = expected_sl2_order(ring)
        if expected > group_cap:
            raise CapExceeded("group order", group_cap, expected)
        if n**4 > _SCAN_BUDGET:
            raise CapExceeded("SL2 scan size |R|^4", _SCAN_BUDGET, n**4)
        self.ring = ring

        add, mul, neg = ring.add_table, ring.mul_table, ring.neg_table
        ids = []
        xs = np.arange(n, dtype=np.int64)
        # scan (c,d) blocks: det = ad - bc over the (a,b) grid
        ad = mul[xs[:, None], xs[None, :]].astype(np.int64)  # [a,d]
        bc = ad  # same table, reused as [b,c]
        for c in range(n):
            for d in range(n):
                det = add[ad[:, d][:, None], neg[bc[:, c]][None, :]]
                a_idx, b_idx = np.nonzero(det == ring.one)
                if len(a_idx):
                    ids.append(a_idx + n * (b_idx + n * (c + n * d)))
        mat_ids = np.sort(np.concatenate(ids))
        assert len(mat_ids) == expected, (len(mat_ids), expected)

        self.mat_ids = mat_ids
        self.size = len(mat_ids)
        self.a = (mat_ids % n).astype(np.int32)
        self.b = ((mat_ids // n) % n).astype(np.int32)
        self.c = ((mat_ids // n**2) % n).astype(np.int32)
        self.d = (mat_ids // n**3).astype(np.int32)
        self.identity = self.index_of_entries(ring.one, ring.zero, ring.zero, ring.one)
        inv_ids = (self.d.astype(np.int64)
                   + n * (neg[self.b].astype(np.int64)
                          + n * (neg[self.c].astype(np.int64)
                                 + n * self.a.astype(np.int64))))
        self.inv_all = np.searchsorted(mat_ids, inv_ids).astype(np.int32)
        self._classes: ConjugacyClasses | None = None
        self._derived: Subgroup | None = None
        self._ab: AbelianInvariants | None = None

    # -- index plumbing ----------------------------------------------------
    def index_of_entries(self, a, b, c, d):
        n = self.ring.order
        mid = (np.asarray(a, dtype=np.int64)
               + n * (np.asarray(b, dtype=np.int64)
                      + n * (np.asarray(c, dtype=np.int64)
                             + n * np.asarray(d, dtype=np.int64))))
        k = np.searchsorted(self.mat_ids, mid)
        k = np.minimum(k, self.size - 1)
        assert np.all(self.mat_ids[k] == mid), "matrix not in SL2"
        return k if k.ndim else int(k)

    def index_of(self, m: Mat2) -> int:
        assert m.ring == self.ring
        return int(self.index_of_entries(m.a, m.b, m.c, m.d))

    def mat(self, i: int) -> Mat2:
        return Mat2(self.ring, int(self.a[i]), int(self.b[i]),
                    int(self.c[i]), int(self.d[i]))

    # -- group operations ----------------------------------------------------
    def mul(self, i, j):
        add, mul = self.ring.add_table, self.ring.mul_table
        a1, b1, c1, d1 = self.a[i], self.b[i], self.c[i], self.d[i]
        a2, b2, c2, d2 = self.a[j], self.b[j], self.c[j], self.d[j]
        return self.index_of_entries(
            add[mul[a1, a2], mul[b1, c2]],
            add[mul[a1, b2], mul[b1, d2]],
            add[mul[c1, a2], mul[d1, c2]],
            add[mul[c1, b2], mul[d1, d2]],
        )

    def inv(self, i):
        return self.inv_all[i]

    def conj_orbit(self, i: int) -> np.ndarray:
        """Sorted orbit of element i under conjugation by the whole group."""
        everyone = np.arange(self.size, dtype=np.int32)
        return np.unique(self.mul(self.mul(self.inv_all, i), everyone))

    def elementary_indices(self) -> np.ndarray:
        """Indices of all E12(x), E21(x); generates the whole group here."""
        R = self.ring
        out = {self.index_of(Mat2.e12(R, x)) for x in R.elements()}
        out.update(self.index_of(Mat2.e21(R, x)) for x in R.elements())
        return np.array(sorted(out), dtype=np.int32)

    # -- conjugacy ------------------------------------------------------------
    def conjugacy_classes(self) -> "ConjugacyClasses":
        if self._classes is None:
            class_of = np.full(self.size, -1, dtype=np.int32)
            classes, reps = [], []
            for i in range(self.size):
                if class_of[i] >= 0:
                    continue
                orbit = self.conj_orbit(i)
                class_of[orbit] = len(classes)
                classes.append(orbit)
                reps.append(i)
            self._classes = ConjugacyClasses(self, class_of, tuple(classes),
                                             tuple(reps))
        return self._classes

    def to_json(self) -> dict:
        cls = self.conjugacy_classes()
        ab = abelianization(self)
        return {
            "ring_spec": self.ring.spec,
            "group_order": self.size,
            "class_sizes": sorted(len(c) for c in cls.classes),
            "abelian_invariants": list(ab.factors),
            "perfect": not ab.factors,
        }


@dataclass(frozen=True)
class ConjugacyClasses:
    group: SL2Group
    class_of: np.ndarray
    classes: tuple
    reps: tuple

    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def enumerate_sl2(ring: FiniteRing, group_cap: int = DEFAULT_GROUP_CAP) -> SL2Group:
    key = (ring.key, group_cap)
    g = _GROUP_CACHE.get(key)
    if g is None:
        g = SL2Group(ring, group_cap)
        _GROUP_CACHE[key] = g
    return g


class CosetGroup(FiniteGroup):
    """Quotient by a normal subgroup, with canonical (minimal) coset reps."""

    def __init__(self, parent: FiniteGroup, members: np.ndarray):
        self.parent = parent
        label = np.full(parent.size, -1, dtype=np.int32)
        reps = []
        for i in range(parent.size):
            if label[i] >= 0:
                continue
            coset = parent.mul(np.full(len(members), i, dtype=np.int32), members)
            label[coset] = len(reps)
            reps.append(i)
        self.label = label
        self.reps = np.array(reps, dtype=np.int32)
        self.size = len(reps)
        self.identity = int(label[parent.identity])

    def mul(self, i, j):
        return self.label[self.parent.mul(self.reps[i], self.reps[j])]

    def inv(self, i):
        return self.label[self.parent.inv(self.reps[i])]


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    members: frozenset[int]
    generated_by: tuple = ()

    def __contains__(self, i) -> bool:
        return int(i) in self.members

    def __len__(self):
        return len(self.members)

    def as_array(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=np.int32)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.group.size, dtype=bool)
        m[self.as_array()] = True
        return m

    def is_whole(self) -> bool:
        return len(self.members) == self.group.size

    def contains_all(self, indices) -> bool:
        m = self.mask()
        return bool(np.all(m[np.asarray(indices, dtype=np.int32)]))


@dataclass(frozen=True)
class GroupHom:
    """Element-indexed homomorphism with an exhaustive multiplicativity check."""

    domain: FiniteGroup
    codomain: FiniteGroup
    images: np.ndarray

    def __call__(self, i):
        return self.images[i]

    def kernel(self) -> Subgroup:
        ker = np.nonzero(self.images == self.codomain.identity)[0]
        return Subgroup(self.domain, frozenset(int(i) for i in ker))

    def is_multiplicative(self, chunk: int = 512) -> bool:
        n = self.domain.size
        js = np.arange(n, dtype=np.int32)
        for lo in range(0, n, chunk):
            i = np.arange(lo, min(lo + chunk, n), dtype=np.int32)[:, None]
            lhs = self.images[self.domain.mul(i, js[None, :])]
            rhs = self.codomain.mul(self.images[i], self.images[js][None, :])
            if not np.array_equal(lhs, rhs):
                return False
        return True


# ----------------------------------------------------------------------------
# closures
# ----------------------------------------------------------------------------

def subgroup_closure(group: FiniteGroup, seeds, stop_when_contains=None,
                     chunk: int = 2048) -> Subgroup:
    """Smallest subgroup containing the seeds (BFS over products).

    `stop_when_contains`: optional index set; once the closure contains all of
    it, the closure is the whole group and enumeration stops early.
    """
    seeds = np.unique(np.asarray(list(seeds), dtype=np.int32))
    witness = tuple(int(s) for s in seeds)
    if len(seeds) == 0:
        return Subgroup(group, frozenset({group.identity}), witness)
    gens = np.unique(np.concatenate([seeds, np.asarray(group.inv(seeds))]))
    targets = None
    if stop_when_contains is not None:
        targets = np.unique(np.asarray(list(stop_when_contains), dtype=np.int32))
    visited = np.zeros(group.size, dtype=bool)
    visited[group.identity] = True
    frontier = np.array([group.identity], dtype=np.int32)
    while len(frontier):
        new = []
        for lo in range(0, len(frontier), chunk):
            block = frontier[lo:lo + chunk]
            prods = np.unique(np.asarray(group.mul(block[:, None], gens[None, :])))
            fresh = prods[~visited[prods]]
            visited[fresh] = True
            new.append(fresh)
        frontier = np.concatenate(new) if new else np.array([], dtype=np.int32)
        if targets is not None and visited[targets].all():
            return Subgroup(group, frozenset(range(group.size)), witness)
    return Subgroup(group, frozenset(int(i) for i in np.nonzero(visited)[0]), witness)


def normal_closure(group: SL2Group, seeds) -> Subgroup:
    """Class-first: union the conjugacy classes of the seeds, then close."""
    seeds = sorted({int(s) for s in seeds})
    orbits = []
    covered = np.zeros(group.size, dtype=bool)
    for s in seeds:
        if covered[s]:
            continue
        orb = group.conj_orbit(s)
        covered[orb] = True
        orbits.append(orb)
    if not orbits:
        return Subgroup(group, frozenset({group.identity}), ())
    sub = subgroup_closure(group, np.concatenate(orbits))
    return Subgroup(group, sub.members, tuple(seeds))


def derived_subgroup(group: SL2Group) -> Subgroup:
    """Normal closure of the commutators of the elementary generators."""
    if group._derived is not None:
        return group._derived
    el = group.elementary_indices()
    x = el[:, None]
    y = el[None, :]
    xy = group.mul(x, y)
    yx = group.mul(y, x)
    comms = np.unique(np.asarray(group.mul(xy, group.inv(yx))))
    orbits = []
    covered = np.zeros(group.size, dtype=bool)
    for s in comms:
        if covered[s]:
            continue
        orb = group.conj_orbit(int(s))
        covered[orb] = True
        orbits.append(orb)
    sub = subgroup_closure(group, np.concatenate(orbits), stop_when_contains=el)
    group._derived = Subgroup(group, sub.members, tuple(int(i) for i in comms[:8]))
    return group._derived


def is_perfect(group: SL2Group) -> bool:
    return derived_subgroup(group).is_whole()


def is_normal(group: FiniteGroup, sub: Subgroup) -> bool:
    members = sub.as_array()
    mask = sub.mask()
    everyone = np.arange(group.size, dtype=np.int32)
    for m in members:
        conj = group.mul(group.mul(group.inv(everyone), int(m)), everyone)
        if not mask[np.asarray(conj)].all():
            return False
    return True


def quotient_group(group: FiniteGroup, sub: Subgroup,
                   verify_normal: bool = True) -> tuple[CosetGroup, GroupHom]:
    if verify_normal and not is_normal(group, sub):
        raise ValueError("subgroup is not normal")
    q = CosetGroup(group, sub.as_array())
    return q, GroupHom(group, q, q.label.copy())


# ----------------------------------------------------------------------------
# abelianization
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d_1 | d_2 | ... of G/[G,G] plus the coordinate map."""

    group: FiniteGroup
    factors: tuple[int, ...]
    coords: np.ndarray = field(repr=False)  # shape (|G|, len(factors))

    def residues(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.coords[i])


def _cyclic_subgroup(group: FiniteGroup, x: int) -> Subgroup:
    members = {group.identity}
    y = x
    while y != group.identity:
        members.add(int(y))
        y = int(group.mul(y, x))
    return Subgroup(group, frozenset(members), (x,))


def _abelian_basis(group: FiniteGroup) -> list[tuple[int, int]]:
    """Basis [(order, element)] of a finite abelian group, largest order first.

    Repeatedly extracts a maximal-order element, recurses on the quotient, and
    lifts the quotient basis to elements of the same order (such lifts exist
    because the extracted order is the group exponent).
    """
    if group.size == 1:
        return []
    orders = [group.order_of(i) for i in range(group.size)]
    d = max(orders)
    x = orders.index(d)
    quo, proj = quotient_group(group, _cyclic_subgroup(group, x),
                               verify_normal=False)
    basis = [(d, x)]
    for m, ybar in _abelian_basis(quo):
        r = int(quo.reps[ybar])
        y, step = r, r
        for _ in range(d):
            if group.order_of(y) == m:
                break
            y = int(group.mul(y, x))
        else:
            raise AssertionError("no order-preserving lift found")
        basis.append((m, y))
    return basis


def abelianization(group: SL2Group) -> AbelianInvariants:
    if group._ab is not None:
        return group._ab
    der = derived_subgroup(group)
    if der.is_whole():
        group._ab = AbelianInvariants(group, (),
                                      np.zeros((group.size, 0), dtype=np.int32))
        return group._ab
    quo, proj = quotient_group(group, der, verify_normal=False)
    basis = _abelian_basis(quo)
    for (d1, _), (d2, _) in zip(basis, basis[1:]):
        assert d1 % d2 == 0
    # exhaustive check that the basis really is a direct sum decomposition
    coords_of = {}
    for exps in np.ndindex(*[d for d, _ in basis]):
        g = quo.identity
        for e, (_, b) in zip(exps, basis):
            for _ in range(e):
                g = int(quo.mul(g, b))
        assert g not in coords_of, "basis is not independent"
        coords_of[g] = exps
    assert len(coords_of) == quo.size, "basis does not span"
    ascending = tuple(d for d, _ in reversed(basis))
    coords = np.zeros((group.size, len(basis)), dtype=np.int32)
    for i in range(group.size):
        coords[i] = tuple(reversed(coords_of[int(quo.label[i])]))
    group._ab = AbelianInvariants(group, ascending, coords)
    return group._ab


# ----------------------------------------------------------------------------
# reduction homomorphisms
# ----------------------------------------------------------------------------

def reduction_hom(group: SL2Group, ideal: Ideal,
                  group_cap: int = DEFAULT_GROUP_CAP) -> GroupHom:
    """Entry-wise reduction SL2(R) -> SL2(R/I); kernel is SL2(R, I)."""
    target_ring, surj = group.ring.quotient_by(ideal)
    target = enumerate_sl2(target_ring, group_cap)
    images = target.index_of_entries(surj[group.a], surj[group.b],
                                     surj[group.c], surj[group.d])
    return GroupHom(group, target, np.asarray(images, dtype=np.int32))
