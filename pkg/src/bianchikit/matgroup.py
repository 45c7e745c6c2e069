"""2x2 determinant-1 matrices over Z[i] or a residue ring, up to sign.

A ProjMat stores the canonical representative of {M, -M}.  Over Z[i] the
representative is the one whose first nonzero entry (scanning a, b, c, d)
has positive x, or x = 0 and positive y.  Over a residue ring we keep the
matrix whose tuple of canonical residue representatives is lexicographically
smallest; negation is not coefficientwise there, so the Z[i] rule does not
transfer.

Trace classification is exact: parabolic means trace = +-2 and M != +-I.
Everything stays in integer arithmetic except ``complex_length``, which is
the single floating-point step of the systole computations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import GuardExceeded, RingMismatchError
from .quadint import QuadInt, Residue, ResidueRing, residue_ring

Entry = Union[QuadInt, Residue]

IDENTITY_KIND = "identity"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"
LOXODROMIC = "loxodromic"


def _entry_key(e: Entry) -> tuple[int, int]:
    return (e.x, e.y)


class ProjMat:
    """Sign-canonical determinant-1 matrix [[a, b], [c, d]]."""

    __slots__ = ("a", "b", "c", "d", "ring")

    def __init__(self, a: Entry, b: Entry, c: Entry, d: Entry):
        entries = (a, b, c, d)
        if isinstance(a, Residue):
            ring = a.ring
            if any(not isinstance(e, Residue) or e.ring != ring for e in entries):
                raise RingMismatchError("entries from different residue rings")
            one = ring.one()
        else:
            if any(not isinstance(e, QuadInt) or e.d != a.d for e in entries):
                raise RingMismatchError("entries from different rings")
            if a.d != 1:
                raise ValueError("matrix entries must lie in Z[i] (d = 1)")
            ring = a.d
            one = QuadInt.one(a.d)
        det = a * d - b * c
        if det != one:
            raise ValueError(f"determinant must be exactly 1, got {det}")
        a, b, c, d = _canonical_sign(entries)
        self.a, self.b, self.c, self.d = a, b, c, d
        self.ring = ring

    # --- basic protocol -------------------------------------------------

    @property
    def entries(self) -> tuple[Entry, Entry, Entry, Entry]:
        return (self.a, self.b, self.c, self.d)

    def key(self) -> tuple:
        """Exact hashable key; equal keys iff equal sign-classes."""
        return tuple(_entry_key(e) for e in self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ProjMat)
            and self.ring == other.ring
            and self.key() == other.key()
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __mul__(self, other: "ProjMat") -> "ProjMat":
        if self.ring != other.ring:
            raise RingMismatchError("matrix product across rings")
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return ProjMat(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "ProjMat":
        a, b, c, d = self.entries
        return ProjMat(d, -b, -c, a)

    def __pow__(self, k: int) -> "ProjMat":
        if k < 0:
            return self.inverse() ** (-k)
        result = identity_like(self)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def trace(self) -> Entry:
        """Trace of the stored (canonical-sign) representative."""
        return self.a + self.d

    def is_identity(self) -> bool:
        a, b, c, d = self.entries
        if isinstance(a, Residue):
            one = a.ring.one()
            return b.is_zero() and c.is_zero() and a == one and d == one
        one = QuadInt.one(a.d)
        return b.is_zero() and c.is_zero() and a == one and d == one

    def __repr__(self) -> str:
        a, b, c, d = self.entries
        return f"[[{a}, {b}], [{c}, {d}]]"


def _canonical_sign(entries) -> tuple:
    if isinstance(entries[0], Residue):
        neg = tuple(-e for e in entries)
        if tuple(_entry_key(e) for e in neg) < tuple(_entry_key(e) for e in entries):
            return neg
        return entries
    for e in entries:
        if e.is_zero():
            continue
        if e.x > 0 or (e.x == 0 and e.y > 0):
            return entries
        return tuple(-q for q in entries)
    raise ValueError("zero matrix cannot have determinant 1")


def gaussian_matrix(a, b, c, d) -> ProjMat:
    """ProjMat over Z[i] from ints or (x, y) pairs or QuadInts."""

    def to_q(v) -> QuadInt:
        if isinstance(v, QuadInt):
            return v
        if isinstance(v, tuple):
            return QuadInt.gauss(*v)
        return QuadInt.gauss(v)

    return ProjMat(to_q(a), to_q(b), to_q(c), to_q(d))


def identity_gaussian() -> ProjMat:
    return gaussian_matrix(1, 0, 0, 1)


def identity_like(m: ProjMat) -> ProjMat:
    if isinstance(m.a, Residue):
        ring = m.a.ring
        return ProjMat(ring.one(), ring.zero(), ring.zero(), ring.one())
    return identity_gaussian()


def mat_mul(m: ProjMat, n: ProjMat) -> ProjMat:
    return m * n


# ---------------------------------------------------------------------------
# Trace classification and complex translation length
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsomClass:
    kind: str
    trace: QuadInt


def classify(m: ProjMat) -> IsomClass:
    """Isometry type of a Z[i] matrix from its exact trace.

    parabolic  <=>  trace = +-2 and M != +-I
    elliptic   <=>  trace not +-2, trace^2 real with 0 <= trace^2 < 4
                    (over Z[i] that means trace in {0, 1, -1})
    """
    if not isinstance(m.a, QuadInt):
        raise ValueError("classification applies to Z[i] matrices")
    t = m.trace()
    if m.is_identity():
        return IsomClass(IDENTITY_KIND, t)
    if t.y == 0 and abs(t.x) == 2:
        return IsomClass(PARABOLIC, t)
    if t.y == 0 and t.x * t.x < 4:
        return IsomClass(ELLIPTIC, t)
    return IsomClass(LOXODROMIC, t)


@dataclass(frozen=True)
class ComplexLength:
    """ell0 + i*theta with 2*cosh((ell0 + i*theta)/2) = +-trace."""

    ell0: float
    theta: float


def complex_length(m: ProjMat) -> ComplexLength:
    """Principal complex translation length of a loxodromic matrix."""
    cls = classify(m)
    if cls.kind != LOXODROMIC:
        raise ValueError(f"complex_length needs a loxodromic matrix, got {cls.kind}")
    t = complex(cls.trace.x, cls.trace.y)
    half = cmath.acosh(t / 2)
    ell0 = 2.0 * half.real
    theta = 2.0 * half.imag
    while theta > math.pi:
        theta -= 2.0 * math.pi
    while theta <= -math.pi:
        theta += 2.0 * math.pi
    return ComplexLength(ell0=ell0, theta=theta)


# ---------------------------------------------------------------------------
# Reduction to residue rings and brute-force finite images
# ---------------------------------------------------------------------------


def reduce_mat(m: ProjMat, modulus: QuadInt) -> ProjMat:
    """Entrywise reduction mod (alpha); a group homomorphism."""
    ring = residue_ring(modulus)
    return ProjMat(*(ring.reduce(e) for e in m.entries))


class FiniteMatrixGroup:
    """All sign-classes of det-1 matrices over Z[i]/(alpha), enumerated.

    Elements are indexed 0..order-1 in lexicographic key order, with a
    multiplication oracle working on indices.  The table is immutable after
    construction.
    """

    def __init__(self, ring: ResidueRing, elements: list[ProjMat]):
        self.ring = ring
        self.elements = elements
        self._index = {m.key(): i for i, m in enumerate(elements)}
        self.identity_index = self._index[
            ProjMat(ring.one(), ring.zero(), ring.zero(), ring.one()).key()
        ]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, m: ProjMat) -> int:
        return self._index[m.key()]

    def mul(self, i: int, j: int) -> int:
        return self._index[(self.elements[i] * self.elements[j]).key()]

    def inv(self, i: int) -> int:
        return self._index[self.elements[i].inverse().key()]

    def closure(self, gens: Iterable[int]) -> list[int]:
        """Sorted element indices of the subgroup generated by ``gens``."""
        gens = list(gens)
        step = []
        for g in gens:
            step.append(g)
            step.append(self.inv(g))
        seen = {self.identity_index}
        frontier = [self.identity_index]
        while frontier:
            nxt = []
            for x in frontier:
                for g in step:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)


def enumerate_image(modulus: QuadInt, max_scan: int = 10**6) -> FiniteMatrixGroup:
    """PSL_2 of the residue ring mod (alpha), by scanning all entry tuples.

    Works over arbitrary residue rings, not just fields, so moduli like 2
    are handled.  Guarded by the number of tuples scanned (norm^4).
    """
    ring = residue_ring(modulus)
    n = ring.size
    if n**4 > max_scan:
        raise GuardExceeded(
            f"enumerate_image would scan {n**4} tuples (> {max_scan})"
        )
    residues = list(ring.elements())
    one = ring.one()
    found = {}
    for a in residues:
        for b in residues:
            for c in residues:
                for d in residues:
                    if a * d - b * c == one:
                        m = ProjMat(a, b, c, d)
                        found.setdefault(m.key(), m)
    elements = [found[k] for k in sorted(found)]
    return FiniteMatrixGroup(ring, elements)
