"""Exact-arithmetic toolkit for Bianchi groups and congruence link groups."""

__version__ = "0.1.0"

from .quadint import QuadInt, Residue, ResidueRing, divide_exact, field_map, reduce_mod
from .matgroup import ProjMat, classify, complex_length, enumerate_image, reduce_mat
from .words import (
    MeridianTable,
    Presentation,
    Word,
    bianchi_matrices,
    bianchi_presentation,
    eval_word,
    figure_eight_presentation,
    load_meridians,
    parse_presentation,
    parse_word,
)
from .congruence import (
    CongruenceGroup,
    audit_short_geodesics,
    count_cusps,
    member,
    peripheral_check,
    systole_lower_bound,
    trace_congruence_witness,
)
from .fpcore import (
    AbelianInvariants,
    CosetTable,
    Fingerprint,
    abelianization,
    coset_table_from_hom,
    fingerprint,
    hom_count,
    reidemeister_schreier,
    tietze_simplify,
    todd_coxeter,
)
from .fillpipe import FillPipeline, FillResult
from .covers import (
    Monodromy,
    branch_preimage_counts,
    check_monodromy,
    extend_trivially,
    parse_monodromy,
)
from . import geombounds

__all__ = [name for name in dir() if not name.startswith("_")]
