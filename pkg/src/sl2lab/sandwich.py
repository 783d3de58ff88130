"""Radices, the G(P)/G(J,U)/G(N) subgroups, and the explicit homomorphisms
out of SL2 over the three small obstruction rings.

Everything here is verified by brute force: radix conditions and subgroup
membership are exhaustive scans, the normal-subgroup sandwich
[E(2,R), G(N)] <= N <= G(N) is checked inclusion by inclusion, and the four
homomorphisms are checked multiplicative on every pair of group elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import LevelZeroError, ManyUnitsFailedError, Sl2LabError
from .finring import AdditiveSubgroup, FiniteRing, Ideal
from .groups import SL2Group, Subgroup, abelianization, enumerate_sl2, \
    normal_closure, reduction_hom, subgroup_closure
from .sl2 import Mat2


# ----------------------------------------------------------------------------
# radices and the rho image
# ----------------------------------------------------------------------------

def is_radix(ring: FiniteRing, sub: AdditiveSubgroup) -> bool:
    """(a^3-a)x^2 + a^2x and ax^3 stay in the subgroup, for all a, exhaustively."""
    if not sub.is_subgroup():
        return False
    xs = np.array(sub.sorted(), dtype=np.int32)
    alls = np.arange(ring.order, dtype=np.int32)
    mask = sub.mask()
    mul, add = ring.mul_table, ring.add_table
    a2 = mul[alls, alls]
    a3 = mul[a2, alls]
    coef = ring.sub(a3, alls)
    x2 = mul[xs, xs]
    x3 = mul[x2, xs]
    t1 = add[mul[coef[:, None], x2[None, :]], mul[a2[:, None], xs[None, :]]]
    if not mask[t1].all():
        return False
    return bool(mask[mul[alls[:, None], x3[None, :]]].all())


def _member_entries(group: SL2Group, members: np.ndarray):
    return (group.a[members], group.b[members], group.c[members], group.d[members])


def level_ideal_of_subgroup(group: SL2Group, sub: Subgroup) -> Ideal:
    """l(N) = sum of the level ideals of the members."""
    ring = group.ring
    a, b, c, d = _member_entries(group, sub.as_array())
    amd = ring.sub(a, d)
    exps = []
    for i in range(len(ring.factors)):
        v = ring.val_mat[i]
        exps.append(int(min(v[amd].min(), v[b].min(), v[c].min())))
    return Ideal(ring, tuple(exps))


def rho_values(group: SL2Group, members: np.ndarray) -> np.ndarray:
    ring = group.ring
    a, b, _, _ = _member_entries(group, members)
    mul, add = ring.mul_table, ring.add_table
    return add[ring.sub(mul[a, a], ring.one), mul[a, b]]


def rho_subgroup(group: SL2Group, sub: Subgroup) -> AdditiveSubgroup:
    """Additive subgroup of (R,+) generated by rho over the subgroup."""
    vals = np.unique(rho_values(group, sub.as_array()))
    return group.ring.additive_closure(vals.tolist())


# ----------------------------------------------------------------------------
# unit classes U(N) and the congruence condition G(J,U)
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitClasses:
    """Subgroup of (R/J)* generated by the scalar residues of a subgroup.

    `quotient` is None exactly when J = R; then the condition A = uI mod J is
    vacuous and every matrix passes.
    """

    quotient: FiniteRing | None
    members: frozenset[int]

    def accepts_all(self) -> bool:
        return self.quotient is None

    def to_json(self) -> dict:
        if self.quotient is None:
            return {"quotient": None, "units": []}
        return {"quotient": self.quotient.spec,
                "units": [self.quotient.element_str(u) for u in sorted(self.members)]}


def U_of_N(group: SL2Group, sub: Subgroup, level: Ideal | None = None) -> UnitClasses:
    ring = group.ring
    if level is None:
        level = level_ideal_of_subgroup(group, sub)
    if level.is_whole():
        return UnitClasses(None, frozenset())
    quo, surj = ring.quotient_by(level)
    a, b, c, d = _member_entries(group, sub.as_array())
    qa, qb, qc, qd = surj[a], surj[b], surj[c], surj[d]
    scalar = (qb == quo.zero) & (qc == quo.zero) & (qa == qd)
    seeds = np.unique(qa[scalar])
    members = {int(quo.one)}
    frontier = [int(u) for u in seeds]
    members.update(frontier)
    while frontier:
        nxt = []
        for u in frontier:
            for v in quo.mul_table[u, sorted(members)]:
                v = int(v)
                if v not in members:
                    members.add(v)
                    nxt.append(v)
        frontier = nxt
    return UnitClasses(quo, frozenset(members))


def in_G_JU(mat: Mat2, level: Ideal, units: UnitClasses) -> bool:
    """A = uI mod J for some u in U, checked in the quotient (any lift)."""
    if units.accepts_all() or level.is_whole():
        return True
    quo, surj = mat.ring.quotient_by(level)
    return (surj[mat.b] == quo.zero and surj[mat.c] == quo.zero
            and surj[mat.a] == surj[mat.d] and int(surj[mat.a]) in units.members)


# ----------------------------------------------------------------------------
# G(P) and G(N)
# ----------------------------------------------------------------------------

def _gp_mask(group: SL2Group, sub: AdditiveSubgroup) -> np.ndarray:
    """Membership mask for G(P) over all group elements (P assumed radix)."""
    ring = group.ring
    mask = sub.mask()
    mul, add = ring.mul_table, ring.add_table
    a, b, c, d = group.a, group.b, group.c, group.d
    one = ring.one
    a2m1 = ring.sub(mul[a, a], one)
    d2m1 = ring.sub(mul[d, d], one)
    rho = add[a2m1, mul[a, b]]
    rho_t = add[a2m1, mul[a, c]]
    rho_inv = ring.sub(d2m1, mul[d, b])
    rho_invt = ring.sub(d2m1, mul[d, c])
    ok = mask[rho] & mask[rho_t] & mask[rho_inv] & mask[rho_invt]

    vn = ring.vn2()
    nils = ring.nils
    memo: dict[tuple, bool] = {}
    for i in np.nonzero(ok)[0]:
        exps = tuple(
            min(nils[f],
                min(int(ring.val_mat[f, a2m1[i]]), int(ring.val_mat[f, d2m1[i]]))
                + vn.exps[f])
            for f in range(len(nils)))
        hit = memo.get(exps)
        if hit is None:
            hit = bool(mask[Ideal(ring, exps).mask()].all())
            memo[exps] = hit
        ok[i] = hit
    return ok


def in_G_P(mat: Mat2, sub: AdditiveSubgroup) -> bool:
    """rho-family inside the radix plus (a^2-1)vn2 + (d^2-1)vn2 inside it."""
    ring = mat.ring
    if not is_radix(ring, sub):
        raise Sl2LabError("membership test needs a radix")
    if not all(v in sub for v in mat.rho_family()):
        return False
    vn = ring.vn2()
    a2m1 = int(ring.sub(ring.mul(mat.a, mat.a), ring.one))
    d2m1 = int(ring.sub(ring.mul(mat.d, mat.d), ring.one))
    cond = vn.times(ring.ideal([a2m1])).plus(vn.times(ring.ideal([d2m1])))
    return all(x in sub for x in cond.elements())


def G_of_N(group: SL2Group, sub: Subgroup) -> tuple[Subgroup, dict]:
    """G(l(N), U(N), rho(N)) with the radix and subgroup-closure checks.

    Returns the subgroup plus a dict of the ingredients (level ideal, radix,
    unit classes, radix verdict).
    """
    level = level_ideal_of_subgroup(group, sub)
    if level.is_zero():
        raise LevelZeroError(f"level ideal of the subgroup is (0) in {group.ring.spec}")
    radix = rho_subgroup(group, sub)
    radix_ok = is_radix(group.ring, radix)
    units = U_of_N(group, sub, level)
    ok = _gp_mask(group, radix)
    if not units.accepts_all():
        quo, surj = group.ring.quotient_by(level)
        qa, qb, qc, qd = (surj[group.a], surj[group.b], surj[group.c], surj[group.d])
        umask = np.zeros(quo.order, dtype=bool)
        umask[sorted(units.members)] = True
        ok &= (qb == quo.zero) & (qc == quo.zero) & (qa == qd) & umask[qa]
    members = np.nonzero(ok)[0].astype(np.int32)
    gn = Subgroup(group, frozenset(int(i) for i in members))
    assert _is_closed(group, members), "G(N) failed the subgroup closure check"
    return gn, {"level": level, "radix": radix, "radix_ok": radix_ok, "units": units}


def _is_closed(group: SL2Group, members: np.ndarray, chunk: int = 1024) -> bool:
    mask = np.zeros(group.size, dtype=bool)
    mask[members] = True
    if not mask[group.identity] or not mask[np.asarray(group.inv(members))].all():
        return False
    for lo in range(0, len(members), chunk):
        block = members[lo:lo + chunk]
        prods = np.asarray(group.mul(block[:, None], members[None, :]))
        if not mask[prods].all():
            return False
    return True


# ----------------------------------------------------------------------------
# the sandwich verification
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SandwichReport:
    generator: Mat2
    n_subgroup: Subgroup = field(repr=False)
    level: Ideal
    radix: AdditiveSubgroup = field(repr=False)
    units: UnitClasses
    g_n: Subgroup = field(repr=False)
    chain_left_ok: bool
    chain_right_ok: bool
    radix_ok: bool
    selfrep_cor_ok: bool

    @property
    def all_ok(self) -> bool:
        return (self.chain_left_ok and self.chain_right_ok
                and self.radix_ok and self.selfrep_cor_ok)

    def to_json(self) -> dict:
        return {
            "ring_spec": self.generator.ring.spec,
            "generator": str(self.generator),
            "N_order": len(self.n_subgroup),
            "level_ideal": self.level.to_json(),
            "rho_subgroup_size": len(self.radix),
            "U": self.units.to_json(),
            "G_N_order": len(self.g_n),
            "chain_left_ok": self.chain_left_ok,
            "chain_right_ok": self.chain_right_ok,
            "radix_ok": self.radix_ok,
            "selfrep_cor_ok": self.selfrep_cor_ok,
        }


_MANY_UNITS_CACHE: dict[tuple, bool] = {}


def _ring_has_many_units(ring: FiniteRing) -> bool:
    hit = _MANY_UNITS_CACHE.get(ring.key)
    if hit is None:
        hit = ring.has_many_units()
        _MANY_UNITS_CACHE[ring.key] = hit
    return hit


def commutator_span(group: SL2Group, left: np.ndarray, right: np.ndarray) -> Subgroup:
    """Subgroup generated by all [l, r], l in left, r in right."""
    x = left[:, None]
    y = right[None, :]
    comms = np.unique(np.asarray(
        group.mul(group.mul(x, y), group.inv(group.mul(y, x)))))
    return subgroup_closure(group, comms)


def selfrep_membership_ok(group: SL2Group, level: Ideal, n_mask: np.ndarray) -> bool:
    """C(x^3 b) lies in N for every x in l(N) and b in R."""
    ring = group.ring
    xs = np.array(level.elements(), dtype=np.int32)
    mul, add = ring.mul_table, ring.add_table
    x3 = mul[mul[xs, xs], xs]
    ws = np.unique(mul[x3[:, None], np.arange(ring.order, dtype=np.int32)[None, :]])
    ones = np.full(len(ws), ring.one, dtype=np.int32)
    idx = group.index_of_entries(ones, ws, ws, add[ones, mul[ws, ws]])
    return bool(n_mask[np.asarray(idx)].all())


def sandwich_check(ring: FiniteRing, gen: Mat2) -> SandwichReport:
    """Verify [E(2,R), G(N)] <= N <= G(N) for N = <<gen>>, plus the radix
    property of rho(N) and the C(x^3 b) membership family."""
    if not _ring_has_many_units(ring):
        raise ManyUnitsFailedError(f"{ring.spec} is not a ring with many units")
    group = enumerate_sl2(ring)
    n_sub = normal_closure(group, [group.index_of(gen)])
    level = level_ideal_of_subgroup(group, n_sub)
    if level.is_zero():
        raise LevelZeroError(f"<<{gen}>> has level ideal (0)")
    g_n, parts = G_of_N(group, n_sub)
    n_mask = n_sub.mask()
    right_ok = bool(n_mask[g_n.as_array()].sum() == len(n_sub)) and \
        n_sub.members <= g_n.members
    left = commutator_span(group, group.elementary_indices(), g_n.as_array())
    left_ok = left.members <= n_sub.members
    cor_ok = selfrep_membership_ok(group, level, n_mask)
    return SandwichReport(gen, n_sub, parts["level"], parts["radix"],
                          parts["units"], g_n, left_ok, right_ok,
                          parts["radix_ok"], cor_ok)


# ----------------------------------------------------------------------------
# explicit homomorphisms onto the small abelian targets
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveHom:
    """Map from a group table to a product of cyclic groups Z_d."""

    group: SL2Group
    mods: tuple[int, ...]
    values: np.ndarray = field(repr=False)  # shape (|G|, len(mods))
    name: str = ""

    def __call__(self, i) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values[i])

    def of_mat(self, m: Mat2) -> tuple[int, ...]:
        return self(self.group.index_of(m))

    def is_multiplicative(self, chunk: int = 512) -> bool:
        mods = np.array(self.mods, dtype=np.int32)
        n = self.group.size
        js = np.arange(n, dtype=np.int32)
        for lo in range(0, n, chunk):
            i = np.arange(lo, min(lo + chunk, n), dtype=np.int32)
            lhs = self.values[np.asarray(self.group.mul(i[:, None], js[None, :]))]
            rhs = (self.values[i][:, None, :] + self.values[js][None, :, :]) % mods
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def kernel_indices(self) -> np.ndarray:
        return np.nonzero((self.values == 0).all(axis=1))[0]

    def image(self) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in row) for row in self.values}

    def is_surjective(self) -> bool:
        return len(self.image()) == math.prod(self.mods)

    def table_tsv(self) -> str:
        lines = ["index\tmatrix\timage"]
        for i in range(self.group.size):
            val = ",".join(str(v) for v in self(i))
            lines.append(f"{i}\t{self.group.mat(i)}\t{val}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ring_spec": self.group.ring.spec,
            "mods": list(self.mods),
            "multiplicative": self.is_multiplicative(),
            "surjective": self.is_surjective(),
            "kernel_order": int(len(self.kernel_indices())),
        }


def _require_ring(ring: FiniteRing, pred, what: str):
    if not pred:
        raise Sl2LabError(f"{what} is only defined over the expected ring, "
                          f"got {ring.spec}")


def _is_dual_number_ring(ring: FiniteRing) -> bool:
    if len(ring.factors) != 1:
        return False
    f = ring.factors[0]
    return f.kind == "poly" and f.p == 2 and f.residue_order == 2 and f.nil == 2


def q_hom(ring: FiniteRing) -> AdditiveHom:
    """Split off the congruence kernel via the constant-coefficient section
    and read a-1+b+c of that part in the residue line {0, t}."""
    _require_ring(ring, _is_dual_number_ring(ring), "q")
    group = enumerate_sl2(ring)
    P = ring.maximal_ideals()[0]
    _, surj = ring.quotient_by(P)
    t = ring.factors[0].uniformizer
    # constant-coefficient lifts of the residue field {0, 1}
    lift = np.zeros(2, dtype=np.int32)
    lift[0], lift[1] = ring.zero, ring.one
    la, lb = lift[surj[group.a]], lift[surj[group.b]]
    lc, ld = lift[surj[group.c]], lift[surj[group.d]]
    jpart = group.index_of_entries(la, lb, lc, ld)
    kpart = np.asarray(group.mul(np.arange(group.size, dtype=np.int32),
                                 group.inv(np.asarray(jpart))))
    ka, kb = group.a[kpart], group.b[kpart]
    kc = group.c[kpart]
    add = ring.add_table
    resid = add[add[ring.sub(ka, ring.one), kb], kc]
    assert set(np.unique(resid)) <= {ring.zero, t}
    values = (resid == t).astype(np.int32)[:, None]
    return AdditiveHom(group, (2,), values, "q")


def hq_hom(ring: FiniteRing) -> AdditiveHom:
    """h + q: h is the sign-type epimorphism of the residue SL2(F2) pulled
    back along reduction; the pair hits (1,0) on E12(1) and (0,1) on E12(t)."""
    _require_ring(ring, _is_dual_number_ring(ring), "hq")
    group = enumerate_sl2(ring)
    red = reduction_hom(group, ring.maximal_ideals()[0])
    ab2 = abelianization(red.codomain)
    assert ab2.factors == (2,)
    h_values = ab2.coords[red.images][:, 0]
    qv = q_hom(ring)
    values = np.stack([h_values, qv.values[:, 0]], axis=1).astype(np.int32)
    hom = AdditiveHom(group, (2, 2), values, "hq")
    assert hom.of_mat(Mat2.e12(ring, ring.one)) == (1, 0)
    assert hom.of_mat(Mat2.e12(ring, ring.factors[0].uniformizer)) == (0, 1)
    return hom


def _normalized_cyclic_hom(ring: FiniteRing, d: int, name: str) -> AdditiveHom:
    group = enumerate_sl2(ring)
    ab = abelianization(group)
    assert ab.factors == (d,)
    g0 = int(ab.coords[group.index_of(Mat2.e12(ring, ring.one)), 0])
    scale = pow(g0, -1, d)
    values = (ab.coords[:, :1] * scale) % d
    return AdditiveHom(group, (d,), values.astype(np.int32), name)


def z4_hom(ring: FiniteRing) -> AdditiveHom:
    """Abelianization of SL2(Z/4) normalized so that E12(1) maps to 1."""
    _require_ring(ring, ring.key == (("int", 2, 2),), "z4")
    return _normalized_cyclic_hom(ring, 4, "z4")


def f3_hom(ring: FiniteRing) -> AdditiveHom:
    """Abelianization of SL2(F3) normalized so that E12(1) maps to 1."""
    _require_ring(ring, ring.key == (("int", 3, 1),), "f3")
    return _normalized_cyclic_hom(ring, 3, "f3")
