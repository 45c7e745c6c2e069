"""Branched-cover monodromy representations over link group presentations.

A monodromy assigns a permutation of the fiber {1..n} to each generator of
a link group presentation so that every relator maps to the identity and
the image acts transitively (the cover is connected).  Meridian generators
are grouped by link component as caller-supplied metadata; no link diagrams
exist in this toolkit.

File format (self-contained)::

    degree: 3
    gens: a b c
    rel: a*b*a^-1*b^-1
    component: a b
    component: c
    gen a -> (1 2 3)
    gen b -> (1 2 3)
    gen c -> ()

Cycle notation is 1-based; ``()`` is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import MonodromyError, WordSyntaxError
from .fpcore import identity_perm, pinv, pmul
from .words import Presentation, Word, parse_word


@dataclass(frozen=True)
class Monodromy:
    """Permutation images for the generators of a link group presentation."""

    presentation: Presentation
    degree: int
    images: dict[str, tuple[int, ...]]
    components: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        known = set(self.presentation.generators)
        for name in self.images:
            if name not in known:
                raise ValueError(f"image given for unknown generator {name!r}")
        for comp in self.components:
            for name in comp:
                if name not in known:
                    raise ValueError(f"component lists unknown generator {name!r}")


def _evaluate(word: Word, images: Mapping[str, tuple[int, ...]], degree: int):
    acc = identity_perm(degree)
    for gen, step in word.letters():
        p = images[gen] if step > 0 else pinv(images[gen])
        acc = pmul(acc, p)
    return acc


def validate_monodromy(m: Monodromy) -> None:
    """Raise MonodromyError naming the first failing relator or intransitivity."""
    ident = identity_perm(m.degree)
    for name in m.presentation.generators:
        if name not in m.images:
            raise MonodromyError(f"no image for generator {name!r}")
        img = m.images[name]
        if sorted(img) != list(range(m.degree)):
            raise MonodromyError(f"image of {name!r} is not a degree-{m.degree} permutation")
    for rel in m.presentation.relators:
        if _evaluate(rel, m.images, m.degree) != ident:
            raise MonodromyError(f"relator {rel} does not map to the identity")
    # transitivity of the image group on the fiber
    reached = {0}
    frontier = [0]
    perms = [m.images[g] for g in m.presentation.generators]
    perms += [pinv(p) for p in perms]
    while frontier:
        nxt = []
        for x in frontier:
            for p in perms:
                y = p[x]
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        frontier = nxt
    if len(reached) != m.degree:
        raise MonodromyError(
            f"image group is intransitive: orbit of 1 has size {len(reached)}"
        )


def check_monodromy(m: Monodromy) -> bool:
    try:
        validate_monodromy(m)
    except MonodromyError:
        return False
    return True


def extend_trivially(
    m: Monodromy,
    full: Presentation,
    correspondence: Mapping[str, str],
    full_components: Sequence[Sequence[str]],
) -> Monodromy:
    """Extend a sublink monodromy over the full link group.

    ``correspondence`` sends a generator of ``full`` to the generator of
    the sublink presentation it maps onto; generators missing from it are
    the meridians of the removed components and go to the identity
    permutation.  The result is validated, so a wrong correspondence
    surfaces as a relator violation.
    """
    ident = identity_perm(m.degree)
    images: dict[str, tuple[int, ...]] = {}
    for name in full.generators:
        if name in correspondence:
            images[name] = m.images[correspondence[name]]
        else:
            images[name] = ident
    extended = Monodromy(
        presentation=full,
        degree=m.degree,
        images=images,
        components=tuple(tuple(c) for c in full_components),
    )
    validate_monodromy(extended)
    return extended


def cycle_count(p: tuple[int, ...]) -> int:
    """Number of cycles, fixed points included."""
    seen = [False] * len(p)
    count = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        count += 1
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
    return count


def branch_preimage_counts(m: Monodromy) -> list[int]:
    """Per component, the number of cover components over that branch curve.

    That is the cycle count of the image of (the first of) its meridians.
    Same-component meridian images should be conjugate; a mismatch in their
    cycle structure is tolerated here (presentation-dependent) and left to
    the caller to warn about.
    """
    out = []
    for comp in m.components:
        if not comp:
            raise ValueError("empty component grouping")
        out.append(cycle_count(m.images[comp[0]]))
    return out


def component_cycle_warnings(m: Monodromy) -> list[str]:
    """Same-component meridians whose images have differing cycle counts."""
    warnings = []
    for comp in m.components:
        counts = {name: cycle_count(m.images[name]) for name in comp}
        if len(set(counts.values())) > 1:
            warnings.append(
                "component {%s} has non-conjugate meridian images" % ", ".join(comp)
            )
    return warnings


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        raise WordSyntaxError("empty cycle notation")
    if not re.fullmatch(r"(\s*\([^()]*\)\s*)+", text):
        raise WordSyntaxError(f"bad cycle notation: {text!r}")
    perm = list(range(degree))
    for body in _CYCLE_RE.findall(text):
        points = [int(tok) - 1 for tok in body.split()]
        if not points:
            continue
        if any(not 0 <= x < degree for x in points):
            raise WordSyntaxError(f"cycle point out of range in {text!r}")
        if len(set(points)) != len(points):
            raise WordSyntaxError(f"repeated point in cycle {text!r}")
        for i, x in enumerate(points):
            perm[x] = points[(i + 1) % len(points)]
    return tuple(perm)


def format_cycles(p: tuple[int, ...]) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(str(j + 1))
            j = p[j]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) if parts else "()"


def parse_monodromy(text: str) -> Monodromy:
    degree: Optional[int] = None
    gens: Optional[tuple[str, ...]] = None
    relators: list[Word] = []
    components: list[tuple[str, ...]] = []
    raw_images: list[tuple[str, str]] = []
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("degree:"):
            degree = int(line[len("degree:"):].strip())
        elif line.startswith("gens:"):
            gens = tuple(line[len("gens:"):].split())
        elif line.startswith("rel:"):
            if gens is None:
                raise WordSyntaxError(f"rel before gens at line {lineno}")
            relators.append(parse_word(line[len("rel:"):], alphabet=gens))
        elif line.startswith("component:"):
            components.append(tuple(line[len("component:"):].split()))
        elif line.startswith("gen "):
            m = re.match(r"gen\s+(\S+)\s*->\s*(.*)$", line)
            if not m:
                raise WordSyntaxError(f"bad gen line {lineno}: {line!r}")
            raw_images.append((m.group(1), m.group(2)))
        else:
            raise WordSyntaxError(f"unrecognized line {lineno}: {line!r}")
    if degree is None:
        raise WordSyntaxError("missing degree: line")
    if gens is None:
        raise WordSyntaxError("missing gens: line")
    images = {name: parse_cycles(cyc, degree) for name, cyc in raw_images}
    return Monodromy(
        presentation=Presentation(gens, tuple(relators)),
        degree=degree,
        images=images,
        components=tuple(components),
    )


def format_monodromy(m: Monodromy) -> str:
    lines = [f"degree: {m.degree}"]
    lines.append("gens: " + " ".join(m.presentation.generators))
    lines.extend(f"rel: {rel}" for rel in m.presentation.relators)
    lines.extend("component: " + " ".join(comp) for comp in m.components)
    for name in m.presentation.generators:
        lines.append(f"gen {name} -> {format_cycles(m.images[name])}")
    return "\n".join(lines) + "\n"
