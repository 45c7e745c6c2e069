"""Principal congruence subgroups of PSL_2(Z[i]).

Gamma(alpha) is the kernel of entrywise reduction mod (alpha).  Membership,
the trace congruence (the trace of a kernel element is +-2 mod alpha^2),
the closed-form systole lower bound 2*arccosh((N(alpha)-2)/2), an
exhaustive short-geodesic audit over the Cayley ball of the standard
generators, and the cusp count via the finite quotient all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import GuardExceeded, TraceCongruenceError
from .matgroup import (
    LOXODROMIC,
    PARABOLIC,
    FiniteMatrixGroup,
    ProjMat,
    classify,
    complex_length,
    enumerate_image,
    reduce_mat,
)
from .quadint import QuadInt, divide_exact, format_gaussian
from .words import Word, bianchi_matrices, eval_word, parse_word

# generators of the cusp stabilizer (full upper-triangular subgroup)
STABILIZER_GENERATORS = ("t", "u", "l")

# the distinguished peripheral pair at level 3+2i
PERIPHERAL_WORDS = (
    parse_word("t^13", alphabet=("a", "l", "t", "u")),
    parse_word("t^-5*u", alphabet=("a", "l", "t", "u")),
)


class CongruenceGroup:
    """Gamma(alpha) for a nonzero non-unit alpha in Z[i]."""

    def __init__(self, alpha: QuadInt, max_scan: int = 10**6):
        if alpha.d != 1:
            raise ValueError("congruence groups are supported over Z[i] only")
        if alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        if alpha.is_unit():
            raise ValueError("alpha must not be a unit")
        self.alpha = alpha
        self._max_scan = max_scan
        self._quotient: Optional[FiniteMatrixGroup] = None

    @property
    def quotient(self) -> FiniteMatrixGroup:
        if self._quotient is None:
            self._quotient = enumerate_image(self.alpha, max_scan=self._max_scan)
        return self._quotient

    def __repr__(self) -> str:
        return f"CongruenceGroup({format_gaussian(self.alpha)})"


def member(group: CongruenceGroup, m: ProjMat) -> bool:
    """True iff m is +-identity after entrywise reduction mod alpha."""
    return reduce_mat(m, group.alpha).is_identity()


@dataclass(frozen=True)
class TraceWitness:
    """z and the sign s with s*trace = z*alpha^2 + 2."""

    z: QuadInt
    sign: int
    both_signs: bool


def trace_congruence_witness(group: CongruenceGroup, m: ProjMat) -> TraceWitness:
    """The z with +-trace(m) = z*alpha^2 + 2, for a kernel element m.

    Exactly one sign works once norm(alpha)^2 > 16; both are reported when
    alpha is small enough for the two to coincide.  A failure here would
    falsify the trace congruence and raises TraceCongruenceError.
    """
    if not member(group, m):
        raise ValueError("trace congruence applies to kernel elements only")
    alpha_sq = group.alpha * group.alpha
    tr = m.trace()
    two = QuadInt.gauss(2)
    z_plus = divide_exact(tr - two, alpha_sq)
    z_minus = divide_exact(-tr - two, alpha_sq)
    if z_plus is None and z_minus is None:
        raise TraceCongruenceError(
            f"alpha^2 divides neither trace -+ 2 for trace {tr}"
        )
    if z_plus is not None:
        return TraceWitness(z=z_plus, sign=1, both_signs=z_minus is not None)
    return TraceWitness(z=z_minus, sign=-1, both_signs=False)


def systole_lower_bound(group: CongruenceGroup) -> float:
    """2*arccosh((norm(alpha) - 2)/2); needs norm(alpha) > 4.

    Every loxodromic kernel element has |trace| >= norm(alpha) - 2, which
    bounds its translation length below by this value.
    """
    n = group.alpha.norm()
    if n <= 4:
        raise ValueError(f"bound degenerate: norm(alpha) = {n} <= 4")
    return 2.0 * math.acosh((n - 2) / 2.0)


# ---------------------------------------------------------------------------
# Exhaustive audit of short kernel elements
# ---------------------------------------------------------------------------


@dataclass
class GeodesicAudit:
    """Result of the Cayley-ball audit; serializes to the report schema.

    ``kernel_parabolics`` stays out of the JSON payload (the schema is
    pinned); it lets tests confirm the membership filter actually fires.
    """

    alpha: str
    bound: float
    radius: int
    elements_visited: int
    min_loxodromic_length: Optional[float]
    violations: list = field(default_factory=list)
    kernel_parabolics: int = 0

    def to_json_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "bound": self.bound,
            "radius": self.radius,
            "elements_visited": self.elements_visited,
            "min_loxodromic_length": self.min_loxodromic_length,
            "violations": self.violations,
        }

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_short_geodesics(
    group: CongruenceGroup,
    radius: int,
    max_elements: int = 5_000_000,
) -> GeodesicAudit:
    """BFS the Cayley ball of the standard generators up to ``radius``.

    Elements are deduplicated by exact sign-canonical matrix entries.  Every
    loxodromic kernel element found must satisfy the exact trace inequality
    norm(trace) >= (norm(alpha) - 2)^2 and have translation length at least
    the systole bound; counterexamples land in ``violations`` (none exist).
    """
    bound = systole_lower_bound(group)
    n_alpha = group.alpha.norm()
    trace_norm_floor = (n_alpha - 2) ** 2

    dictionary = bianchi_matrices()
    steps = [
        dictionary["a"],
        dictionary["l"],
        dictionary["t"],
        dictionary["t"].inverse(),
        dictionary["u"],
        dictionary["u"].inverse(),
    ]

    identity = dictionary["a"] * dictionary["a"]  # +-I, canonical
    seen = {identity.key()}
    frontier = [identity]
    visited = 1
    min_loxo: Optional[float] = None
    violations: list = []
    parabolics = 0

    for _ in range(radius):
        if not frontier:
            break
        next_frontier = []
        for m in frontier:
            for s in steps:
                prod = m * s
                key = prod.key()
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > max_elements:
                    raise GuardExceeded(
                        f"audit ball exceeded {max_elements} elements"
                    )
                visited += 1
                next_frontier.append(prod)
                if member(group, prod):
                    cls = classify(prod)
                    if cls.kind == PARABOLIC:
                        parabolics += 1
                    if cls.kind == LOXODROMIC:
                        ell0 = complex_length(prod).ell0
                        if min_loxo is None or ell0 < min_loxo:
                            min_loxo = ell0
                        if cls.trace.norm() < trace_norm_floor:
                            violations.append(
                                {"trace": str(cls.trace), "reason": "trace norm too small"}
                            )
                        if ell0 < bound - 1e-9:
                            violations.append(
                                {"trace": str(cls.trace), "ell0": ell0,
                                 "reason": "below systole bound"}
                            )
        frontier = next_frontier

    return GeodesicAudit(
        alpha=format_gaussian(group.alpha),
        bound=bound,
        radius=radius,
        elements_visited=visited,
        min_loxodromic_length=min_loxo,
        violations=violations,
        kernel_parabolics=parabolics,
    )


# ---------------------------------------------------------------------------
# Cusp count and the peripheral pair
# ---------------------------------------------------------------------------


def count_cusps(alpha: QuadInt, max_scan: int = 10**6) -> int:
    """Cusps of the level-alpha congruence group.

    The full Bianchi group has a single cusp class and Gamma(alpha) is
    normal, so the count is |PSL_2(Z[i]/alpha)| divided by the order of the
    image of the stabilizer <t, u, l> in the finite quotient.  A unit alpha
    degenerates to a single cusp.
    """
    quotient = enumerate_image(alpha, max_scan=max_scan)
    dictionary = bianchi_matrices()
    gens = [
        quotient.index_of(reduce_mat(dictionary[name], alpha))
        for name in STABILIZER_GENERATORS
    ]
    stabilizer = quotient.closure(gens)
    return quotient.order // len(stabilizer)


def peripheral_check(group: CongruenceGroup) -> bool:
    """True iff t^13 and t^-5*u are parabolic members of the group."""
    dictionary = bianchi_matrices()
    for word in PERIPHERAL_WORDS:
        m = eval_word(word, dictionary)
        if not member(group, m):
            return False
        if classify(m).kind != PARABOLIC:
            return False
    return True


# ---------------------------------------------------------------------------
# Randomized kernel elements (for the trace-congruence property runs)
# ---------------------------------------------------------------------------


def random_kernel_elements(group: CongruenceGroup, count: int, rng) -> list[ProjMat]:
    """Kernel elements built as products of conjugated kernel translations.

    Uses w k w^-1 factors with k one of the peripheral pair (or inverses)
    and w a random short word in the standard generators, so membership
    holds by normality, with no reduction shortcuts taken.
    """
    dictionary = bianchi_matrices()
    letters = [
        dictionary["a"],
        dictionary["l"],
        dictionary["t"],
        dictionary["t"].inverse(),
        dictionary["u"],
        dictionary["u"].inverse(),
    ]
    kernel_seeds = []
    for word in PERIPHERAL_WORDS:
        m = eval_word(word, dictionary)
        kernel_seeds.extend([m, m.inverse()])

    out = []
    for _ in range(count):
        acc = None
        for _ in range(rng.randint(1, 3)):
            w = None
            for _ in range(rng.randint(0, 5)):
                step = letters[rng.randrange(len(letters))]
                w = step if w is None else w * step
            k = kernel_seeds[rng.randrange(len(kernel_seeds))]
            factor = k if w is None else w * k * w.inverse()
            acc = factor if acc is None else acc * factor
        out.append(acc)
    return out
