"""Finite commutative rings with 1, presented as products of chain local rings.

A ring spec like ``Z/12``, ``F4`` or ``F2[T]/(T^2) x F3`` is CRT-decomposed at
parse time into chain local factors (``Z/p^k`` or ``F_p[T]/(g^e)`` with g monic
irreducible), so ideals become per-factor exponent vectors and all ideal
algebra is exact.  Elements are dense integer ids: mixed-radix over the
factors, coefficient-lexicographic within a factor.  Everything is desk scale
(order <= a few hundred), so arithmetic lives in precomputed numpy tables.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, NotAUnitError, ParseError

DEFAULT_ORDER_CAP = 64
HARD_ORDER_CAP = 4096  # tables are n x n; past this the design is wrong anyway


# ----------------------------------------------------------------------------
# small integer / polynomial helpers (exhaustive trial division throughout)
# ----------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorization n = prod p^k, n >= 2."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree(n: int) -> bool:
    return all(e == 1 for e in factor_int(n).values()) if n > 1 else n == 1


# Polynomials over F_p: tuples of ints in [0,p), ascending degree, no trailing
# zeros; the zero polynomial is ().

def _ptrim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(f, g, p):
    n = max(len(f), len(g))
    return _ptrim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p
                   for i in range(n)])


def _pmul(f, g, p):
    if not f or not g:
        return ()
    c = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            c[i + j] = (c[i + j] + a * b) % p
    return _ptrim(c)


def _pdivmod(f, g, p):
    """Divide by monic g; returns (q, r) with deg r < deg g."""
    assert g and g[-1] == 1
    r = list(f)
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] % p
        if c:
            q[i - dg] = c
            for j in range(len(g)):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % p
    return _ptrim(q), _ptrim(r)


def _ppow(f, k, p):
    out = (1,)
    for _ in range(k):
        out = _pmul(out, f, p)
    return out


def _poly_encode(f, p) -> int:
    return sum(c * p**i for i, c in enumerate(f))


def _poly_decode(n, p, width) -> tuple[int, ...]:
    return tuple((n // p**i) % p for i in range(width))


def monic_polys(degree: int, p: int):
    """All monic polynomials of the given degree, ascending by encoding."""
    for low in range(p**degree):
        yield _poly_decode(low, p, degree) + (1,)


def poly_is_irreducible(f, p) -> bool:
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in monic_polys(d, p):
            if not _pdivmod(f, g, p)[1]:
                return False
    return True


def factor_poly(f, p) -> dict[tuple[int, ...], int]:
    """Factor monic f into monic irreducibles by exhaustive trial division."""
    assert f and f[-1] == 1 and len(f) >= 2
    out: dict[tuple[int, ...], int] = {}
    d = 1
    while len(f) - 1 >= 1:
        if d > (len(f) - 1) // 2:
            out[f] = out.get(f, 0) + 1
            break
        found = False
        for g in monic_polys(d, p):
            q, r = _pdivmod(f, g, p)
            if not r:
                out[g] = out.get(g, 0) + 1
                f = q
                found = True
                break
        if not found:
            d += 1
    return out


def smallest_irreducible(degree: int, p: int) -> tuple[int, ...]:
    for g in monic_polys(degree, p):
        if poly_is_irreducible(g, p):
            return g
    raise AssertionError("no irreducible found")  # impossible over F_p


def poly_str(f) -> str:
    if not f:
        return "0"
    terms = []
    for i, c in enumerate(f):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("T" if c == 1 else f"{c}T")
        else:
            terms.append(f"T^{i}" if c == 1 else f"{c}T^{i}")
    return "+".join(terms)


_TERM_RE = re.compile(r"^(\d+)?\s*\*?\s*(T(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> tuple[int, ...]:
    """Parse '2T^3+T+1' style text into an F_p polynomial."""
    s = text.replace(" ", "")
    if not s:
        raise ParseError(f"empty polynomial in {text!r}")
    s = s.replace("-", "+-")
    coeffs: dict[int, int] = {}
    for part in s.split("+"):
        if not part:
            continue
        neg = part.startswith("-")
        if neg:
            part = part[1:]
        m = _TERM_RE.match(part)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ParseError(f"bad polynomial term {part!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            deg = 0
        elif m.group(3) is not None:
            deg = int(m.group(3))
        else:
            deg = 1
        if neg:
            coeff = -coeff
        coeffs[deg] = (coeffs.get(deg, 0) + coeff) % p
    width = max(coeffs) + 1 if coeffs else 0
    return _ptrim([coeffs.get(i, 0) for i in range(width)])


# ----------------------------------------------------------------------------
# chain local rings
# ----------------------------------------------------------------------------

class ChainLocalRing:
    """A finite local ring whose ideals are the powers of its maximal ideal.

    Concrete kinds: Z/p^k and F_p[T]/(g^e) with g monic irreducible.  Exposes
    dense tables (add/mul/neg/inv), per-element valuation, and local quotients.
    """

    kind: str
    p: int
    order: int
    residue_order: int
    nil: int  # nilpotency length of the maximal ideal
    key: tuple

    def element_str(self, x: int) -> str:
        raise NotImplementedError

    def parse_element(self, text: str) -> int:
        raise NotImplementedError

    def from_int(self, m: int) -> int:
        raise NotImplementedError

    def quotient_to(self, j: int):
        """Quotient by m^j (1 <= j <= nil); returns (ring, element map)."""
        raise NotImplementedError

    def spec_str(self) -> str:
        raise NotImplementedError

    def json_fields(self) -> dict:
        raise NotImplementedError

    # shared scaffolding ------------------------------------------------
    def _finish_tables(self):
        one = self.one
        n = self.order
        self.inv_table = np.full(n, -1, dtype=np.int32)
        for x in range(n):
            if self.val[x] == 0:
                hits = np.nonzero(self.mul_table[x] == one)[0]
                assert len(hits) == 1
                self.inv_table[x] = hits[0]

    def __eq__(self, other):
        return isinstance(other, ChainLocalRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"<{self.spec_str()}>"


class IntChainRing(ChainLocalRing):
    """Z/p^k; element ids are the integers 0..p^k-1."""

    kind = "int"

    def __init__(self, p: int, k: int):
        assert is_prime(p) and k >= 1
        self.p = p
        self.k = k
        self.order = p**k
        self.residue_order = p
        self.nil = k
        self.key = ("int", p, k)
        n = self.order
        ids = np.arange(n, dtype=np.int32)
        self.add_table = (ids[:, None] + ids[None, :]) % n
        self.mul_table = (ids[:, None].astype(np.int64) * ids[None, :]) % n
        self.mul_table = self.mul_table.astype(np.int32)
        self.neg_table = (-ids) % n
        self.zero, self.one = 0, 1 % n
        val = np.zeros(n, dtype=np.int8)
        for x in range(n):
            if x == 0:
                val[x] = k
            else:
                v, y = 0, x
                while y % p == 0:
                    y //= p
                    v += 1
                val[x] = v
        self.val = val
        self.uniformizer = p % n if k >= 2 else 0
        self._finish_tables()

    def element_str(self, x: int) -> str:
        return str(x)

    def parse_element(self, text: str) -> int:
        try:
            return int(text, 0) % self.order
        except ValueError as exc:
            raise ParseError(f"bad element {text!r} for {self.spec_str()}") from exc

    def from_int(self, m: int) -> int:
        return m % self.order

    def quotient_to(self, j: int):
        assert 1 <= j <= self.k
        target = IntChainRing(self.p, j)
        return target, np.arange(self.order, dtype=np.int32) % self.p**j

    def spec_str(self) -> str:
        return f"Z/{self.order}"

    def json_fields(self) -> dict:
        return {"kind": "int", "p": self.p, "k": self.k}


class PolyChainRing(ChainLocalRing):
    """F_p[T]/(g^e) with g monic irreducible; ids encode coefficients base p."""

    kind = "poly"

    def __init__(self, p: int, g: tuple[int, ...], e: int):
        assert is_prime(p) and e >= 1 and g[-1] == 1 and len(g) >= 2
        self.p = p
        self.g = tuple(g)
        self.e = e
        deg = len(g) - 1
        self.deg_g = deg
        self.width = deg * e
        self.order = p**self.width
        self.residue_order = p**deg
        self.nil = e
        self.key = ("poly", p, self.g, e)
        self.modulus = _ppow(g, e, p)
        n, w = self.order, self.width

        digits = np.zeros((n, w), dtype=np.int64)
        ids = np.arange(n)
        for i in range(w):
            digits[:, i] = (ids // p**i) % p
        weights = p ** np.arange(w, dtype=np.int64)

        summed = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (summed @ weights).astype(np.int32)
        self.neg_table = (((-digits) % p) @ weights).astype(np.int32)

        # z -> z*T, reducing T^w by the monic modulus
        mdig = np.array([((-self.modulus[i]) % p) for i in range(w)], dtype=np.int64)
        top = digits[:, w - 1]
        shifted = np.zeros_like(digits)
        shifted[:, 1:] = digits[:, :-1]
        tdig = (shifted + top[:, None] * mdig[None, :]) % p
        mul_t = (tdig @ weights).astype(np.int32)

        # scalar (prime-field) multiples, digitwise
        cmul = np.zeros((p, n), dtype=np.int32)
        for c in range(p):
            cmul[c] = (((digits * c) % p) @ weights).astype(np.int32)

        # Horner in the digits of x, vectorized over all y
        mul = np.zeros((n, n), dtype=np.int32)
        all_y = np.arange(n, dtype=np.int32)
        for x in range(n):
            xd = _poly_decode(x, p, w)
            acc = np.zeros(n, dtype=np.int32)
            for i in range(w - 1, -1, -1):
                acc = mul_t[acc]
                if xd[i]:
                    acc = self.add_table[acc, cmul[xd[i]][all_y]]
            mul[x] = acc
        self.mul_table = mul

        self.zero, self.one = 0, 1
        val = np.zeros(n, dtype=np.int8)
        for z in range(n):
            if z == 0:
                val[z] = e
                continue
            f = _ptrim(list(_poly_decode(z, p, w)))
            v = 0
            while v < e:
                q, r = _pdivmod(f, self.g, p)
                if r:
                    break
                f = q
                v += 1
            val[z] = v
        self.val = val
        self.uniformizer = _poly_encode(self.g, p) if e >= 2 else 0
        self._finish_tables()

    def element_str(self, x: int) -> str:
        return poly_str(_ptrim(list(_poly_decode(x, self.p, self.width))))

    def parse_element(self, text: str) -> int:
        f = parse_poly(text, self.p)
        _, r = _pdivmod(f, self.modulus, self.p)
        return _poly_encode(r, self.p)

    def from_int(self, m: int) -> int:
        return m % self.p

    def quotient_to(self, j: int):
        assert 1 <= j <= self.e
        p, w = self.p, self.width
        mods = _ppow(self.g, j, p)
        if j == 1 and self.deg_g == 1:
            # F_p[T]/(T - c) is canonically Z/p via evaluation at c
            c = (-self.g[0]) % p
            target = IntChainRing(p, 1)
            amap = np.zeros(self.order, dtype=np.int32)
            for z in range(self.order):
                f = _poly_decode(z, p, w)
                acc = 0
                for coef in reversed(f):
                    acc = (acc * c + coef) % p
                amap[z] = acc
            return target, amap
        target = PolyChainRing(p, self.g, j)
        amap = np.zeros(self.order, dtype=np.int32)
        for z in range(self.order):
            f = _ptrim(list(_poly_decode(z, p, w)))
            _, r = _pdivmod(f, mods, p)
            amap[z] = _poly_encode(r, p)
        return target, amap

    def spec_str(self) -> str:
        return f"F{self.p}[T]/({poly_str(self.modulus)})"

    def json_fields(self) -> dict:
        return {"kind": "poly", "p": self.p, "g": poly_str(self.g), "e": self.e}


def _make_chain_factor(p: int, g: tuple[int, ...], e: int) -> ChainLocalRing:
    if len(g) == 2 and e == 1:
        return IntChainRing(p, 1)
    return PolyChainRing(p, g, e)


# ----------------------------------------------------------------------------
# product rings
# ----------------------------------------------------------------------------

_RING_CACHE: dict[tuple, "FiniteRing"] = {}


def _factor_sort_key(f: ChainLocalRing):
    poly = f.g if f.kind == "poly" else ()
    return (f.p, f.residue_order, f.nil, 0 if f.kind == "int" else 1, poly)


class FiniteRing:
    """A product of chain local rings with dense element ids.

    Ids are mixed-radix over the (canonically sorted) factors, first factor
    least significant.  Arithmetic is table-driven; the tables are immutable
    after construction.
    """

    def __init__(self, factors: list[ChainLocalRing]):
        assert factors
        self.factors = tuple(sorted(factors, key=_factor_sort_key))
        self.order = 1
        weights = []
        for f in self.factors:
            weights.append(self.order)
            self.order *= f.order
        assert self.order <= HARD_ORDER_CAP
        self.weights = tuple(weights)
        self.key = tuple(f.key for f in self.factors)

        n = self.order
        nf = len(self.factors)
        ids = np.arange(n, dtype=np.int64)
        self.comp = np.zeros((nf, n), dtype=np.int32)
        for i, f in enumerate(self.factors):
            self.comp[i] = (ids // self.weights[i]) % f.order

        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        neg = np.zeros(n, dtype=np.int64)
        self.val_mat = np.zeros((nf, n), dtype=np.int8)
        for i, f in enumerate(self.factors):
            ci = self.comp[i]
            add += self.weights[i] * f.add_table[ci[:, None], ci[None, :]].astype(np.int64)
            mul += self.weights[i] * f.mul_table[ci[:, None], ci[None, :]].astype(np.int64)
            neg += self.weights[i] * f.neg_table[ci].astype(np.int64)
            self.val_mat[i] = f.val[ci]
        self.add_table = add.astype(np.int32)
        self.mul_table = mul.astype(np.int32)
        self.neg_table = neg.astype(np.int32)

        self.zero = 0
        self.one = self.from_components([f.one for f in self.factors])
        self.unit_mask = np.all(self.val_mat == 0, axis=0)
        self.inv_table = np.full(n, -1, dtype=np.int32)
        for x in np.nonzero(self.unit_mask)[0]:
            hits = np.nonzero(self.mul_table[x] == self.one)[0]
            assert len(hits) == 1
            self.inv_table[x] = hits[0]
        self.nils = tuple(f.nil for f in self.factors)
        self.spec = " x ".join(f.spec_str() for f in self.factors)
        self._quot_cache: dict[tuple, tuple] = {}

        # Z/N presentation: if the factors are integer chains over distinct
        # primes the ring is Z/N and elements display as plain integers.
        primes = [f.p for f in self.factors]
        if all(f.kind == "int" for f in self.factors) and len(set(primes)) == len(primes):
            iv = np.zeros(n, dtype=np.int64)
            for i, f in enumerate(self.factors):
                m = f.order
                rest = self.order // m
                # CRT basis: rest * (rest^-1 mod m)
                basis = rest * pow(rest, -1, m) if m > 1 else 0
                iv = (iv + basis * self.comp[i].astype(np.int64)) % self.order
            self.int_value = iv
        else:
            self.int_value = None

    # -- element plumbing ------------------------------------------------
    def components(self, x: int) -> tuple[int, ...]:
        return tuple(int(self.comp[i, x]) for i in range(len(self.factors)))

    def from_components(self, comps) -> int:
        assert len(comps) == len(self.factors)
        return int(sum(w * int(c) for w, c in zip(self.weights, comps)))

    def from_int(self, m: int) -> int:
        return self.from_components([f.from_int(m) for f in self.factors])

    def element_str(self, x: int) -> str:
        if len(self.factors) == 1:
            return self.factors[0].element_str(x)
        if self.int_value is not None:
            return str(int(self.int_value[x]))
        parts = [f.element_str(c) for f, c in zip(self.factors, self.components(x))]
        return "(" + ",".join(parts) + ")"

    def parse_element(self, text: str) -> int:
        s = text.strip()
        if len(self.factors) > 1 and s.startswith("(") and s.endswith(")"):
            parts = _split_top(s[1:-1], ",")
            if len(parts) != len(self.factors):
                raise ParseError(
                    f"{text!r}: expected {len(self.factors)} coordinates for {self.spec}")
            return self.from_components(
                [f.parse_element(p) for f, p in zip(self.factors, parts)])
        if len(self.factors) == 1:
            return self.factors[0].parse_element(s)
        try:
            return self.from_int(int(s, 0))
        except ValueError as exc:
            raise ParseError(f"bad element {text!r} for {self.spec}") from exc

    def elements(self):
        return range(self.order)

    # -- arithmetic -------------------------------------------------------
    def add(self, x, y):
        return self.add_table[x, y]

    def mul(self, x, y):
        return self.mul_table[x, y]

    def neg(self, x):
        return self.neg_table[x]

    def sub(self, x, y):
        return self.add_table[x, self.neg_table[y]]

    def is_unit(self, x: int) -> bool:
        return bool(self.unit_mask[x])

    def inv(self, x: int) -> int:
        r = int(self.inv_table[x])
        if r < 0:
            raise NotAUnitError(f"{self.element_str(x)} is not a unit in {self.spec}")
        return r

    def units(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.unit_mask)[0]]

    def pow(self, x: int, k: int) -> int:
        out = self.one
        for _ in range(k):
            out = int(self.mul_table[out, x])
        return out

    # -- ideals -----------------------------------------------------------
    def zero_ideal(self) -> "Ideal":
        return Ideal(self, self.nils)

    def whole_ideal(self) -> "Ideal":
        return Ideal(self, (0,) * len(self.factors))

    def ideal(self, gens) -> "Ideal":
        """Ideal generated by the given elements (empty -> zero ideal)."""
        exps = list(self.nils)
        for g in gens:
            for i in range(len(self.factors)):
                exps[i] = min(exps[i], int(self.val_mat[i, g]))
        return Ideal(self, tuple(exps))

    def maximal_ideals(self) -> list["Ideal"]:
        out = []
        for i in range(len(self.factors)):
            exps = [0] * len(self.factors)
            exps[i] = 1
            out.append(Ideal(self, tuple(exps)))
        return out

    def vn2(self) -> "Ideal":
        """Ideal generated by all x^2 - x (booleanizing ideal)."""
        xs = np.arange(self.order)
        vals = self.sub(self.mul_table[xs, xs], xs)
        return self.ideal(vals.tolist())

    def quotient_by(self, ideal: "Ideal"):
        """Quotient ring and the element surjection (as a numpy map).

        Factors with exponent 0 are dropped; quotienting by the whole ring is
        an error since the result would not have 1 != 0.
        """
        assert ideal.ring is self or ideal.ring == self
        if ideal.is_whole():
            raise ParseError("cannot quotient by the whole ring")
        cached = self._quot_cache.get(ideal.exps)
        if cached is not None:
            return cached
        kept = [(i, j) for i, j in enumerate(ideal.exps) if j > 0]
        pieces = []
        for i, j in kept:
            sub, amap = self.factors[i].quotient_to(j)
            pieces.append((i, sub, amap))
        target = make_ring([sub for _, sub, _ in pieces])
        # position of each shortened factor inside the (re-sorted) target
        order = sorted(range(len(pieces)), key=lambda t: _factor_sort_key(pieces[t][1]))
        slot_of = {order[pos]: pos for pos in range(len(order))}
        surj = np.zeros(self.order, dtype=np.int64)
        for t, (i, sub, amap) in enumerate(pieces):
            w = target.weights[slot_of[t]]
            surj += w * amap[self.comp[i]].astype(np.int64)
        self._quot_cache[ideal.exps] = (target, surj.astype(np.int32))
        return self._quot_cache[ideal.exps]

    # -- additive subgroups ------------------------------------------------
    def additive_closure(self, seed) -> "AdditiveSubgroup":
        members = {self.zero}
        frontier = list({int(s) for s in seed})
        members.update(frontier)
        while frontier:
            nxt = []
            for x in frontier:
                for y in self.add_table[x, sorted(members)]:
                    y = int(y)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return AdditiveSubgroup(self, frozenset(members))

    # -- ring-theoretic predicates ------------------------------------------
    def has_stable_range_one(self) -> bool:
        """Exhaustive: every unimodular pair (a,b) admits a+bx a unit."""
        n = self.order
        covals = self.val_mat == 0
        xs = np.arange(n)
        for a in range(n):
            b_ok = np.all(covals[:, a][:, None] | covals, axis=0)  # (a,b)=R
            for b in np.nonzero(b_ok)[0]:
                vals = self.add_table[a, self.mul_table[b, xs]]
                if not self.unit_mask[vals].any():
                    return False
        return True

    def has_many_units(self) -> bool:
        """Stable range 1 in every proper quotient, plus units u with u^4 != 1
        and u^2 = 1 mod xR for every x != 0."""
        seen: set[tuple] = set()
        for c in range(self.order):
            if c == self.zero or self.unit_mask[c]:
                continue
            ideal = self.ideal([c])
            if ideal.exps in seen:
                continue
            seen.add(ideal.exps)
            quo, _ = self.quotient_by(ideal)
            if not quo.has_stable_range_one():
                return False
        strong = [u for u in self.units() if self.pow(u, 4) != self.one]
        seen.clear()
        for x in range(1, self.order):
            ideal = self.ideal([x])
            if ideal.exps in seen:
                continue
            seen.add(ideal.exps)
            if not any(ideal.contains(self.sub(self.mul(u, u), self.one)) for u in strong):
                return False
        return True

    # -- misc ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "spec": self.spec,
            "order": self.order,
            "factors": [f.json_fields() for f in self.factors],
            "units_count": int(self.unit_mask.sum()),
        }

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FiniteRing({self.spec!r})"


@dataclass(frozen=True)
class Ideal:
    """Per-factor exponent vector: exponent 0 is the whole factor, the
    nilpotency length is zero there.  Sum = min, product = capped sum."""

    ring: FiniteRing
    exps: tuple[int, ...]

    def contains(self, x: int) -> bool:
        return all(int(self.ring.val_mat[i, x]) >= j for i, j in enumerate(self.exps))

    def mask(self) -> np.ndarray:
        m = np.ones(self.ring.order, dtype=bool)
        for i, j in enumerate(self.exps):
            m &= self.ring.val_mat[i] >= j
        return m

    def elements(self) -> list[int]:
        return [int(x) for x in np.nonzero(self.mask())[0]]

    def plus(self, other: "Ideal") -> "Ideal":
        assert self.ring == other.ring
        return Ideal(self.ring, tuple(min(a, b) for a, b in zip(self.exps, other.exps)))

    def times(self, other: "Ideal") -> "Ideal":
        assert self.ring == other.ring
        return Ideal(self.ring, tuple(min(n, a + b) for n, a, b in
                                      zip(self.ring.nils, self.exps, other.exps)))

    def times_element(self, x: int) -> "Ideal":
        return self.times(self.ring.ideal([x]))

    def is_zero(self) -> bool:
        return self.exps == self.ring.nils

    def is_whole(self) -> bool:
        return all(j == 0 for j in self.exps)

    def generator(self) -> int:
        """Smallest element whose valuation pattern is exactly the exponents."""
        m = np.ones(self.ring.order, dtype=bool)
        for i, j in enumerate(self.exps):
            want = min(j, self.ring.nils[i])
            if j >= self.ring.nils[i]:
                m &= self.ring.val_mat[i] >= want
            else:
                m &= self.ring.val_mat[i] == want
        hits = np.nonzero(m)[0]
        assert len(hits)
        if self.ring.int_value is not None:
            return int(hits[np.argmin(self.ring.int_value[hits])])
        return int(hits[0])

    def __str__(self):
        return f"({self.ring.element_str(self.generator())})"

    def to_json(self) -> dict:
        return {"exponents": list(self.exps), "generator": self.ring.element_str(self.generator())}


@dataclass(frozen=True)
class AdditiveSubgroup:
    """Explicit subgroup of (R,+); houses radices and the rho image."""

    ring: FiniteRing
    members: frozenset[int]

    def __contains__(self, x: int) -> bool:
        return int(x) in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.ring.order, dtype=bool)
        m[self.sorted()] = True
        return m

    def is_subgroup(self) -> bool:
        ms = self.sorted()
        if self.ring.zero not in self.members:
            return False
        sums = self.ring.add_table[np.ix_(ms, ms)]
        return bool(np.all(self.mask()[sums]))

    def __len__(self):
        return len(self.members)


# ----------------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------------

def _split_top(s: str, sep: str) -> list[str]:
    """Split on sep at paren/bracket depth 0."""
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


_ZMOD_RE = re.compile(r"^Z/(\d+)$")
_FIELD_RE = re.compile(r"^F(\d+)$")
_POLYQ_RE = re.compile(r"^F(\d+)\[T\]/\((.+)\)$")


def _parse_atom(atom: str) -> list[ChainLocalRing]:
    m = _ZMOD_RE.match(atom)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise ParseError(f"Z/{n}: modulus must be >= 2")
        return [IntChainRing(p, k) for p, k in sorted(factor_int(n).items())]
    m = _FIELD_RE.match(atom)
    if m:
        q = int(m.group(1))
        if q < 2:
            raise ParseError(f"F{q}: field order must be >= 2")
        fac = factor_int(q)
        if len(fac) != 1:
            raise ParseError(f"F{q}: {q} is not a prime power")
        [(p, deg)] = fac.items()
        if deg == 1:
            return [IntChainRing(p, 1)]
        return [PolyChainRing(p, smallest_irreducible(deg, p), 1)]
    m = _POLYQ_RE.match(atom)
    if m:
        p = int(m.group(1))
        if not is_prime(p):
            raise ParseError(f"F{p}[T]/(...): {p} is not prime")
        f = parse_poly(m.group(2), p)
        if len(f) < 2:
            raise ParseError(f"{atom}: modulus must have degree >= 1")
        if f[-1] != 1:
            lead_inv = pow(f[-1], -1, p)
            f = _ptrim([(c * lead_inv) % p for c in f])
        return [_make_chain_factor(p, g, e) for g, e in sorted(factor_poly(f, p).items())]
    raise ParseError(f"cannot parse ring spec atom {atom!r}")


def parse_ring_spec(spec: str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteRing:
    """Parse `Z/<n>` | `F<q>` | `F<p>[T]/(<poly>)` | `<spec> x <spec>`.

    The result is CRT-normalized: every factor is a chain local ring and the
    factor order (hence element indexing) is deterministic.
    """
    atoms = _split_top(spec.strip(), "x")
    if any(not a for a in atoms):
        raise ParseError(f"empty component in ring spec {spec!r}")
    factors: list[ChainLocalRing] = []
    order = 1
    for atom in atoms:
        for f in _parse_atom(atom.replace(" ", "")):
            order *= f.order
            if order > order_cap:
                raise CapExceeded("ring order", order_cap, order)
            factors.append(f)
    return make_ring(factors)


def make_ring(factors: list[ChainLocalRing]) -> FiniteRing:
    key = tuple(sorted(f.key for f in factors))
    ring = _RING_CACHE.get(key)
    if ring is None:
        ring = FiniteRing(factors)
        _RING_CACHE[key] = ring
    return ring


# spec-facing aliases ---------------------------------------------------------

def units(ring: FiniteRing) -> list[int]:
    return ring.units()


def maximal_ideals(ring: FiniteRing) -> list[Ideal]:
    return ring.maximal_ideals()


def ideal_from_generators(ring: FiniteRing, gens) -> Ideal:
    return ring.ideal(gens)


def quotient_ring(ring: FiniteRing, ideal: Ideal):
    return ring.quotient_by(ideal)


def vn2(ring: FiniteRing) -> Ideal:
    return ring.vn2()


def additive_closure(ring: FiniteRing, seed) -> AdditiveSubgroup:
    return ring.additive_closure(seed)


def has_stable_range_one(ring: FiniteRing) -> bool:
    return ring.has_stable_range_one()


def has_many_units(ring: FiniteRing) -> bool:
    return ring.has_many_units()
