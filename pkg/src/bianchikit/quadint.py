"""Exact arithmetic in imaginary quadratic integer rings.

An element of the ring of integers O_d of Q(sqrt(-d)) is stored as a pair
(x, y) meaning x + y*omega, where

    omega = sqrt(-d)          if d != 3 (mod 4),
    omega = (1 + sqrt(-d))/2  if d == 3 (mod 4),

and d is a square-free positive integer.  Coefficients are plain Python
integers, so everything is arbitrary precision and exact.

Residue rings O_d/(alpha) are provided for the Gaussian case d = 1 only;
that is the only case the congruence machinery downstream needs.  Canonical
residue representatives come from the Hermite normal form of the ideal
lattice spanned by alpha and i*alpha, so equality of residues is literal
equality of representatives.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import RingMismatchError


def _is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True, slots=True)
class QuadInt:
    """x + y*omega in O_d.  Immutable and hashable."""

    d: int
    x: int
    y: int

    def __post_init__(self):
        if not _is_squarefree(self.d):
            raise ValueError(f"d must be square-free and >= 1, got {self.d}")

    # ring helpers -----------------------------------------------------

    @property
    def half_mode(self) -> bool:
        """True when omega = (1+sqrt(-d))/2, i.e. d == 3 (mod 4)."""
        return self.d % 4 == 3

    def _check_ring(self, other: "QuadInt") -> None:
        if self.d != other.d:
            raise RingMismatchError(f"mixed rings: d={self.d} vs d={other.d}")

    # arithmetic -------------------------------------------------------

    def __add__(self, other: "QuadInt") -> "QuadInt":
        self._check_ring(other)
        return QuadInt(self.d, self.x + other.x, self.y + other.y)

    def __sub__(self, other: "QuadInt") -> "QuadInt":
        self._check_ring(other)
        return QuadInt(self.d, self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QuadInt":
        return QuadInt(self.d, -self.x, -self.y)

    def __mul__(self, other: "QuadInt") -> "QuadInt":
        self._check_ring(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        if self.half_mode:
            # omega^2 = omega - (d+1)/4
            c = (self.d + 1) // 4
            return QuadInt(self.d, x1 * x2 - c * y1 * y2, x1 * y2 + x2 * y1 + y1 * y2)
        return QuadInt(self.d, x1 * x2 - self.d * y1 * y2, x1 * y2 + x2 * y1)

    def conj(self) -> "QuadInt":
        if self.half_mode:
            # conj(omega) = 1 - omega
            return QuadInt(self.d, self.x + self.y, -self.y)
        return QuadInt(self.d, self.x, -self.y)

    def norm(self) -> int:
        """|q|^2, a non-negative rational integer; zero iff q = 0."""
        if self.half_mode:
            return self.x * self.x + self.x * self.y + ((self.d + 1) // 4) * self.y * self.y
        return self.x * self.x + self.d * self.y * self.y

    # predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    # constructors / display -------------------------------------------

    @staticmethod
    def gauss(x: int, y: int = 0) -> "QuadInt":
        """Gaussian integer x + y*i."""
        return QuadInt(1, x, y)

    @staticmethod
    def one(d: int = 1) -> "QuadInt":
        return QuadInt(d, 1, 0)

    @staticmethod
    def zero(d: int = 1) -> "QuadInt":
        return QuadInt(d, 0, 0)

    def __str__(self) -> str:
        if self.d == 1:
            return format_gaussian(self)
        unit = "w"
        if self.y == 0:
            return str(self.x)
        ypart = f"{self.y}{unit}" if abs(self.y) != 1 else (unit if self.y == 1 else f"-{unit}")
        if self.x == 0:
            return ypart
        sign = "+" if self.y > 0 else ""
        return f"{self.x}{sign}{ypart}"


def mul(p: QuadInt, q: QuadInt) -> QuadInt:
    return p * q


def norm(q: QuadInt) -> int:
    return q.norm()


def divide_exact(p: QuadInt, q: QuadInt) -> Optional[QuadInt]:
    """The r with q*r = p, or None when q does not divide p.

    Decided by the exact linear solve r = p*conj(q) / norm(q); valid for
    every d.  Raises on q = 0.
    """
    p._check_ring(q)
    if q.is_zero():
        raise ZeroDivisionError("division by zero in O_d")
    n = q.norm()
    t = p * q.conj()
    if t.x % n or t.y % n:
        return None
    return QuadInt(p.d, t.x // n, t.y // n)


# ---------------------------------------------------------------------------
# Gaussian integer text syntax:  a+bi / a-bi / a / bi, e.g. "3+2i", "-5+i".
# ---------------------------------------------------------------------------

_GAUSS_RE = re.compile(
    r"""^\s*
        (?:(?P<re>[+-]?\d+)(?!\s*i))?          # real part (not followed by i)
        \s*
        (?:(?P<im>[+-]?\d*)\s*i)?              # imaginary part
        \s*$""",
    re.VERBOSE,
)


def parse_gaussian(text: str) -> QuadInt:
    """Parse the CLI text syntax for Z[i] elements."""
    m = _GAUSS_RE.match(text)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"not a Gaussian integer: {text!r}")
    x = int(m.group("re")) if m.group("re") is not None else 0
    im = m.group("im")
    if im is None:
        y = 0
    elif im in ("", "+"):
        y = 1
    elif im == "-":
        y = -1
    else:
        y = int(im)
    return QuadInt.gauss(x, y)


def format_gaussian(q: QuadInt) -> str:
    if q.d != 1:
        raise ValueError("format_gaussian is for d = 1 only")
    x, y = q.x, q.y
    if y == 0:
        return str(x)
    ipart = "i" if y == 1 else ("-i" if y == -1 else f"{y}i")
    if x == 0:
        return ipart
    sign = "+" if y > 0 else ""
    return f"{x}{sign}{ipart}"


# ---------------------------------------------------------------------------
# Residue rings Z[i]/(alpha), canonical reps from the HNF of the ideal lattice
# ---------------------------------------------------------------------------


class ResidueRing:
    """The quotient ring Z[i]/(alpha) with unique lattice representatives.

    The ideal lattice is spanned by alpha = a+bi and i*alpha = -b+ai.  Its
    Hermite normal form basis is {(n, 0), (w0, g)} with g = gcd(a, b) and
    n = norm(alpha)/g, so every residue has a unique representative (x, y)
    with 0 <= x < n, 0 <= y < g.  Exactly norm(alpha) residues exist.
    """

    def __init__(self, modulus: QuadInt):
        if modulus.d != 1:
            raise ValueError("residue rings are supported for d = 1 (Z[i]) only")
        if modulus.is_zero():
            raise ZeroDivisionError("zero modulus")
        self.modulus = modulus
        a, b = modulus.x, modulus.y
        self.size = modulus.norm()
        g = math.gcd(a, b)
        self._g = g
        self._n = self.size // g
        # lattice vector with second coordinate g: u*(a,b) + v*(-b,a)
        u, v = _ext_gcd(b, a, g)
        self._w0 = (u * a - v * b) % self._n

    def reduce(self, q: QuadInt) -> "Residue":
        if q.d != 1:
            raise ValueError("residue rings are supported for d = 1 (Z[i]) only")
        y = q.y % self._g
        k = (q.y - y) // self._g
        x = (q.x - k * self._w0) % self._n
        return Residue(self, x, y)

    def zero(self) -> "Residue":
        return Residue(self, 0, 0)

    def one(self) -> "Residue":
        return self.reduce(QuadInt.gauss(1, 0))

    def elements(self) -> Iterator["Residue"]:
        for x in range(self._n):
            for y in range(self._g):
                yield Residue(self, x, y)

    def __eq__(self, other) -> bool:
        return isinstance(other, ResidueRing) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(("ResidueRing", self.modulus))

    def __repr__(self) -> str:
        return f"ResidueRing({format_gaussian(self.modulus)})"


def _ext_gcd(b: int, a: int, g: int) -> tuple[int, int]:
    """(u, v) with u*b + v*a = g = gcd(a, b)."""
    old_r, r = b, a
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r == -g:
        old_u, old_v = -old_u, -old_v
    assert old_u * b + old_v * a == g
    return old_u, old_v


@dataclass(frozen=True, slots=True)
class Residue:
    """Canonical representative of a class in Z[i]/(alpha)."""

    ring: ResidueRing
    x: int
    y: int

    def _check_ring(self, other: "Residue") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("mixed residue rings")

    def __add__(self, other: "Residue") -> "Residue":
        self._check_ring(other)
        return self.ring.reduce(QuadInt.gauss(self.x + other.x, self.y + other.y))

    def __sub__(self, other: "Residue") -> "Residue":
        self._check_ring(other)
        return self.ring.reduce(QuadInt.gauss(self.x - other.x, self.y - other.y))

    def __neg__(self) -> "Residue":
        return self.ring.reduce(QuadInt.gauss(-self.x, -self.y))

    def __mul__(self, other: "Residue") -> "Residue":
        self._check_ring(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return self.ring.reduce(QuadInt.gauss(x1 * x2 - y1 * y2, x1 * y2 + x2 * y1))

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def lift(self) -> QuadInt:
        return QuadInt.gauss(self.x, self.y)

    def __str__(self) -> str:
        return f"{format_gaussian(self.lift())} mod {format_gaussian(self.ring.modulus)}"


@lru_cache(maxsize=128)
def _ring_cache(x: int, y: int) -> ResidueRing:
    return ResidueRing(QuadInt.gauss(x, y))


def residue_ring(modulus: QuadInt) -> ResidueRing:
    """Shared ResidueRing instance for a modulus (d = 1 only)."""
    if modulus.d != 1:
        raise ValueError("residue rings are supported for d = 1 (Z[i]) only")
    if modulus.is_zero():
        raise ZeroDivisionError("zero modulus")
    return _ring_cache(modulus.x, modulus.y)


def reduce_mod(q: QuadInt, modulus: QuadInt) -> Residue:
    """Canonical residue of q modulo (alpha); d = 1 only."""
    return residue_ring(modulus).reduce(q)


@dataclass(frozen=True)
class FieldMap:
    """Ring isomorphism Z[i]/(alpha) -> F_p when norm(alpha) = p is prime.

    ``image_of_i`` is the square root of -1 mod p that i maps to; ``table``
    sends each canonical residue to its image in {0, ..., p-1}.
    """

    p: int
    image_of_i: int
    table: dict

    def __call__(self, r: Residue) -> int:
        return self.table[r]


def field_map(modulus: QuadInt) -> Optional[FieldMap]:
    """The isomorphism onto F_p, or None when the residue ring is not F_p."""
    if modulus.is_zero():
        raise ZeroDivisionError("zero modulus")
    if modulus.d != 1:
        raise ValueError("residue rings are supported for d = 1 (Z[i]) only")
    p = modulus.norm()
    if not _is_prime(p):
        return None
    a, b = modulus.x, modulus.y
    if p == 2 and b % 2 == 0:
        # modulus is 2*unit-free? norm 2 forces {1+i} up to units, b odd.
        return None
    if b % p == 0:
        return None
    r = (-a * pow(b, -1, p)) % p
    assert (r * r + 1) % p == 0
    ring = residue_ring(modulus)
    table = {res: (res.x + res.y * r) % p for res in ring.elements()}
    return FieldMap(p=p, image_of_i=r, table=table)
