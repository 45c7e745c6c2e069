"""Dehn filling of the level-(3+2i) congruence link group, by group quotient.

The pipeline presents Gamma(3+2i) on Schreier generators (two independent
coset-table routes are required to agree first), rewrites the 42 cusp
meridians through the same map, and then, for a kept index k, adjoins the
other 41 meridians as relators, simplifies, and compares the result with
the figure-eight knot group by abelianization plus hom-count fingerprint.
Fingerprint equality is evidence, not proof, and results say so.

Because the 42 fills share all the heavy work, the kernel presentation is
Tietze-reduced once with the meridian words tracked through every
substitution; each fill then starts from the reduced presentation.  Tracked
words only ever undergo element-preserving moves, so they denote the same
group elements of Gamma(3+2i) throughout.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Optional, Sequence

from .congruence import PERIPHERAL_WORDS
from .errors import GuardExceeded, PipelineError
from .fpcore import (
    AbelianInvariants,
    CosetTable,
    Fingerprint,
    RewritingMap,
    DEFAULT_PANEL_NAMES,
    abelianization,
    coset_table_from_hom,
    fingerprint,
    reidemeister_schreier,
    tietze_simplify,
    todd_coxeter,
)
from .matgroup import ProjMat, reduce_mat
from .quadint import QuadInt, residue_ring
from .words import (
    MERIDIAN_COUNT,
    Presentation,
    Word,
    bianchi_matrices,
    bianchi_presentation,
    figure_eight_presentation,
    load_meridians,
)

LEVEL = QuadInt.gauss(3, 2)


def _panel_feasible(pres: Presentation, panel: Sequence[str], guard: int) -> bool:
    from .fpcore import panel_group

    g = len(pres.generators)
    return all(panel_group(name).order ** g <= guard for name in panel)


@dataclass
class FillResult:
    """Outcome of filling all meridians except ``kept_index`` (0 = fill all)."""

    kept_index: int
    presentation: Presentation
    abelian: AbelianInvariants
    fingerprint: Optional[Fingerprint]
    matches_fig8: bool
    complete: bool

    def to_json_dict(self) -> dict:
        return {
            "kept_index": self.kept_index,
            "generators": len(self.presentation.generators),
            "relators": len(self.presentation.relators),
            "presentation": str(self.presentation),
            "abelian": str(self.abelian),
            "fingerprint": None if self.fingerprint is None else self.fingerprint.to_json_list(),
            "matches_fig8": self.matches_fig8,
            "complete": self.complete,
        }


class FillPipeline:
    def __init__(
        self,
        budget: int = 30_000_000,
        growth_cap: float = 4.0,
        panel: Sequence[str] = DEFAULT_PANEL_NAMES,
        tc_limit: int = 50_000,
        hom_guard: int = 2_000_000,
    ):
        self.budget = budget
        self.growth_cap = growth_cap
        self.panel = tuple(panel)
        self.tc_limit = tc_limit
        self.hom_guard = hom_guard
        self._kernel: Optional[tuple[Presentation, RewritingMap]] = None
        self._reduced: Optional[tuple[Presentation, tuple[Word, ...], bool]] = None
        self._fig8: Optional[Fingerprint] = None

    # -- stage 1: the kernel presentation --------------------------------

    def build_kernel_presentation(self) -> tuple[Presentation, RewritingMap]:
        """Schreier presentation of Gamma(3+2i) plus the rewriting map.

        The coset table comes from the reduction homomorphism; an
        independent Todd-Coxeter run with t^13 and t^-5*u adjoined as
        relators must produce the identical (standardized) table, which
        pins the kernel as the normal closure of those two words.
        """
        if self._kernel is not None:
            return self._kernel
        P = bianchi_presentation()
        dictionary = bianchi_matrices()
        images = {g: reduce_mat(dictionary[g], LEVEL) for g in P.generators}
        ring = residue_ring(LEVEL)
        ident = ProjMat(ring.one(), ring.zero(), ring.zero(), ring.one())
        t_hom = coset_table_from_hom(
            P, images, mul=operator.mul, inv=lambda m: m.inverse(), identity=ident
        )
        extended = Presentation(P.generators, P.relators + PERIPHERAL_WORDS)
        t_tc = todd_coxeter(extended, (), limit=self.tc_limit)
        if t_hom.n != t_tc.n or t_hom != t_tc:
            raise PipelineError(
                f"coset-table routes disagree: hom route n={t_hom.n}, "
                f"enumeration n={t_tc.n}"
            )
        pres, rmap = reidemeister_schreier(P, t_hom)
        n = t_hom.n
        expected_gens = n * len(P.generators) - (n - 1)
        expected_rels = n * len(P.relators)
        if len(pres.generators) != expected_gens or len(pres.relators) != expected_rels:
            raise PipelineError("Schreier presentation has unexpected size")
        for w in PERIPHERAL_WORDS:
            rmap(w)  # raises NotInSubgroupError if the table were wrong
        self._kernel = (pres, rmap)
        return self._kernel

    # -- stage 2: shared reduction with tracked meridians -----------------

    def reduced_kernel(self) -> tuple[Presentation, tuple[Word, ...], bool]:
        if self._reduced is not None:
            return self._reduced
        pres, rmap = self.build_kernel_presentation()
        meridians = load_meridians()
        rewritten = [rmap(meridians[k]) for k in range(1, MERIDIAN_COUNT + 1)]
        result = tietze_simplify(
            pres, budget=self.budget, growth_cap=self.growth_cap, tracked=rewritten
        )
        self._reduced = (result.presentation, result.tracked, result.complete)
        return self._reduced

    # -- stage 3: fills ----------------------------------------------------

    def fig8_fingerprint(self) -> Fingerprint:
        if self._fig8 is None:
            self._fig8 = fingerprint(
                figure_eight_presentation(), self.panel, guard=self.hom_guard
            )
        return self._fig8

    def fill(self, kept: int) -> FillResult:
        """Adjoin every meridian except ``kept`` as a relator and simplify.

        ``kept = 0`` fills all 42 meridians (the result must be trivial).
        A fill whose simplification or fingerprint hits its budget reports
        ``complete = False`` instead of guessing.
        """
        if not 0 <= kept <= MERIDIAN_COUNT:
            raise ValueError(f"kept index must be 0..{MERIDIAN_COUNT}")
        base, tracked, base_complete = self.reduced_kernel()
        extras = tuple(
            w for j, w in enumerate(tracked, start=1) if j != kept
        )
        quotient = Presentation(base.generators, base.relators + extras)
        result = tietze_simplify(
            quotient, budget=self.budget, growth_cap=self.growth_cap
        )
        pres = result.presentation
        abelian = abelianization(pres)
        complete = result.complete and base_complete
        if kept and abelian.is_trivial():
            raise PipelineError(
                f"kept meridian {kept} was killed; quotient abelianization trivial"
            )
        fp: Optional[Fingerprint] = None
        matches = False
        if not _panel_feasible(pres, self.panel, self.hom_guard):
            complete = False
        elif complete:
            try:
                fp = fingerprint(pres, self.panel, guard=self.hom_guard)
            except GuardExceeded:
                complete = False
            else:
                matches = (
                    abelian.is_infinite_cyclic() and fp == self.fig8_fingerprint()
                )
        return FillResult(
            kept_index=kept,
            presentation=pres,
            abelian=abelian,
            fingerprint=fp,
            matches_fig8=matches,
            complete=complete,
        )

    def scan_all(self, jobs: int = 1) -> list[FillResult]:
        """fill(k) for every kept index 1..42, deterministically ordered."""
        self.reduced_kernel()
        if jobs > 1:
            return self._scan_parallel(jobs)
        return [self.fill(k) for k in range(1, MERIDIAN_COUNT + 1)]

    def _scan_parallel(self, jobs: int) -> list[FillResult]:
        import multiprocessing

        base, tracked, base_complete = self.reduced_kernel()
        args = [
            (str(base), [str(w) for w in tracked], k, self.budget,
             self.growth_cap, self.panel, self.hom_guard, base_complete)
            for k in range(1, MERIDIAN_COUNT + 1)
        ]
        with multiprocessing.Pool(jobs) as pool:
            raw = pool.map(_fill_task, args)
        ref = self.fig8_fingerprint()
        results = []
        for payload in raw:
            result = payload
            if result.fingerprint is not None:
                result.matches_fig8 = (
                    result.abelian.is_infinite_cyclic()
                    and result.fingerprint == ref
                )
            results.append(result)
        return results


def _fill_task(args) -> FillResult:
    from .words import parse_presentation, parse_word

    base_text, tracked_texts, kept, budget, growth_cap, panel, guard, base_complete = args
    base = parse_presentation(base_text)
    tracked = [parse_word(t, alphabet=base.generators) for t in tracked_texts]
    extras = tuple(w for j, w in enumerate(tracked, start=1) if j != kept)
    quotient = Presentation(base.generators, base.relators + extras)
    result = tietze_simplify(quotient, budget=budget, growth_cap=growth_cap)
    pres = result.presentation
    abelian = abelianization(pres)
    complete = result.complete and base_complete
    if kept and abelian.is_trivial():
        raise PipelineError(f"kept meridian {kept} was killed")
    fp = None
    if not _panel_feasible(pres, panel, guard):
        complete = False
    elif complete:
        try:
            fp = fingerprint(pres, panel, guard=guard)
        except GuardExceeded:
            complete = False
    return FillResult(
        kept_index=kept,
        presentation=pres,
        abelian=abelian,
        fingerprint=fp,
        matches_fig8=False,  # decided against the reference in the parent
        complete=complete,
    )
