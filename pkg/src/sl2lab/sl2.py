"""Determinant-1 2x2 matrices over a FiniteRing and their element kits.

Matrices are immutable value types identified by a dense id
a + n*(b + n*(c + n*d)); the id doubles as the group-table key.  The
commutator convention is A*B*A^-1*B^-1 and conjugation is A^B = B^-1*A*B.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAUnitError, ParseError
from .finring import FiniteRing, Ideal, _split_top


@dataclass(frozen=True)
class Mat2:
    ring: FiniteRing
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        R = self.ring
        det = R.sub(R.mul(self.a, self.d), R.mul(self.b, self.c))
        if int(det) != R.one:
            raise ValueError(
                f"determinant {R.element_str(int(det))} != 1 for entries "
                f"{[R.element_str(e) for e in (self.a, self.b, self.c, self.d)]}")

    # constructors ---------------------------------------------------------
    @staticmethod
    def identity(ring: FiniteRing) -> "Mat2":
        return Mat2(ring, ring.one, ring.zero, ring.zero, ring.one)

    @staticmethod
    def e12(ring: FiniteRing, x: int) -> "Mat2":
        return Mat2(ring, ring.one, int(x), ring.zero, ring.one)

    @staticmethod
    def e21(ring: FiniteRing, x: int) -> "Mat2":
        return Mat2(ring, ring.one, ring.zero, int(x), ring.one)

    @staticmethod
    def h(ring: FiniteRing, u: int) -> "Mat2":
        return Mat2(ring, int(u), ring.zero, ring.zero, ring.inv(u))

    @staticmethod
    def selfrep(ring: FiniteRing, x: int) -> "Mat2":
        """C(x) = E21(x)*E12(x) = [[1, x], [x, 1+x^2]]."""
        x = int(x)
        return Mat2(ring, ring.one, x, x,
                    int(ring.add(ring.one, ring.mul(x, x))))

    @staticmethod
    def scalar(ring: FiniteRing, u: int) -> "Mat2":
        if int(ring.mul(u, u)) != ring.one:
            raise NotAUnitError(
                f"scalar matrix needs u^2 = 1, got u = {ring.element_str(u)}")
        return Mat2(ring, int(u), ring.zero, ring.zero, int(u))

    @staticmethod
    def from_entries(ring: FiniteRing, a, b, c, d) -> "Mat2":
        return Mat2(ring, int(a), int(b), int(c), int(d))

    # arithmetic -------------------------------------------------------------
    def __mul__(self, other: "Mat2") -> "Mat2":
        assert self.ring == other.ring
        R = self.ring
        add, mul = R.add, R.mul
        return Mat2(
            R,
            int(add(mul(self.a, other.a), mul(self.b, other.c))),
            int(add(mul(self.a, other.b), mul(self.b, other.d))),
            int(add(mul(self.c, other.a), mul(self.d, other.c))),
            int(add(mul(self.c, other.b), mul(self.d, other.d))),
        )

    def inv(self) -> "Mat2":
        R = self.ring
        return Mat2(R, self.d, int(R.neg(self.b)), int(R.neg(self.c)), self.a)

    def transpose(self) -> "Mat2":
        return Mat2(self.ring, self.a, self.c, self.b, self.d)

    def conj(self, other: "Mat2") -> "Mat2":
        """self^other = other^-1 * self * other."""
        return other.inv() * self * other

    def comm(self, other: "Mat2") -> "Mat2":
        return self * other * self.inv() * other.inv()

    def __pow__(self, k: int) -> "Mat2":
        out = Mat2.identity(self.ring)
        base = self if k >= 0 else self.inv()
        for _ in range(abs(k)):
            out = out * base
        return out

    # invariants ----------------------------------------------------------
    def level_ideal(self) -> Ideal:
        R = self.ring
        return R.ideal([int(R.sub(self.a, self.d)), self.b, self.c])

    def rho(self) -> int:
        """a^2 - 1 + a*b."""
        R = self.ring
        return int(R.add(R.sub(R.mul(self.a, self.a), R.one), R.mul(self.a, self.b)))

    def rho_family(self) -> tuple[int, int, int, int]:
        """(rho(A), rho(A^T), rho(A^-1), rho(A^-T))."""
        return (self.rho(), self.transpose().rho(),
                self.inv().rho(), self.inv().transpose().rho())

    def trace(self) -> int:
        return int(self.ring.add(self.a, self.d))

    def is_scalar(self) -> bool:
        return self.b == self.ring.zero and self.c == self.ring.zero and self.a == self.d

    def dense_id(self) -> int:
        n = self.ring.order
        return self.a + n * (self.b + n * (self.c + n * self.d))

    @staticmethod
    def from_dense_id(ring: FiniteRing, mid: int) -> "Mat2":
        n = ring.order
        return Mat2(ring, mid % n, (mid // n) % n, (mid // n**2) % n, mid // n**3)

    # text ------------------------------------------------------------------
    def __str__(self):
        s = self.ring.element_str
        return f"[[{s(self.a)},{s(self.b)}],[{s(self.c)},{s(self.d)}]]"

    def to_json(self) -> dict:
        s = self.ring.element_str
        return {"a": s(self.a), "b": s(self.b), "c": s(self.c), "d": s(self.d),
                "ring_spec": self.ring.spec}


def conj(a: Mat2, b: Mat2) -> Mat2:
    return a.conj(b)


def comm(a: Mat2, b: Mat2) -> Mat2:
    return a.comm(b)


def level_ideal(a: Mat2) -> Ideal:
    return a.level_ideal()


def rho_family(a: Mat2) -> tuple[int, int, int, int]:
    return a.rho_family()


def selfrep_shift_check(ring: FiniteRing, x: int, y: int) -> bool:
    """C(x)^-1 * C(y) == C(y-x) conjugated by E12(x)."""
    cx, cy = Mat2.selfrep(ring, x), Mat2.selfrep(ring, y)
    shift = Mat2.selfrep(ring, int(ring.sub(y, x))).conj(Mat2.e12(ring, x))
    return cx.inv() * cy == shift


# ----------------------------------------------------------------------------
# matrix text parsing: E12(x), E21(x), h(u), C(x), [[a,b],[c,d]]
# ----------------------------------------------------------------------------

def parse_matrix(text: str, ring: FiniteRing) -> Mat2:
    s = text.strip()
    for name, ctor in (("E12", Mat2.e12), ("E21", Mat2.e21),
                       ("h", Mat2.h), ("C", Mat2.selfrep)):
        if s.startswith(name + "(") and s.endswith(")"):
            arg = s[len(name) + 1:-1]
            try:
                return ctor(ring, ring.parse_element(arg))
            except NotAUnitError as exc:
                raise ParseError(str(exc)) from exc
    if s.startswith("[[") and s.endswith("]]"):
        rows = _split_top(s[1:-1], ",")
        entries = []
        for row in rows:
            if not (row.startswith("[") and row.endswith("]")):
                raise ParseError(f"bad matrix row in {text!r}")
            entries.extend(_split_top(row[1:-1], ","))
        if len(entries) != 4:
            raise ParseError(f"expected 4 entries in {text!r}")
        a, b, c, d = (ring.parse_element(e) for e in entries)
        try:
            return Mat2.from_entries(ring, a, b, c, d)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError(f"cannot parse matrix {text!r}")


def parse_matrix_list(text: str, ring: FiniteRing) -> list[Mat2]:
    return [parse_matrix(p, ring) for p in _split_top(text, ",") if p]
