"""General finitely-presented-group machinery.

Coset enumeration is HLT-style relator scanning with a deduction-free
coincidence queue and a hard limit on defined cosets.  Tables are always
compressed and relabeled in row-scan discovery order before they leave this
module, so two tables describing the same subgroup compare equal literally.

Letters
-------
Internally a word over generators g_0..g_{k-1} appears in two encodings:

* *signed* letters for rewriting: +-(g+1), used by the Tietze machinery;
* *column* letters for coset tables: 2g for g, 2g+1 for its inverse.

Everything here is deterministic: scan orders, tie-breaks and heaps are
explicit, so repeated runs produce identical tables and presentations.
"""

from __future__ import annotations

import itertools
import heapq
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import (
    EnumerationLimitExceeded,
    GuardExceeded,
    NotInSubgroupError,
    RelatorViolation,
)
from .words import Presentation, Word


# ---------------------------------------------------------------------------
# Letter encodings
# ---------------------------------------------------------------------------


def word_to_signed(word: Word, gen_index: Mapping[str, int]) -> list[int]:
    out = []
    for gen, step in word.letters():
        idx = gen_index[gen] + 1
        out.append(idx if step > 0 else -idx)
    return out


def signed_to_word(letters: Sequence[int], names: Sequence[str]) -> Word:
    return Word.of([(names[abs(L) - 1], 1 if L > 0 else -1) for L in letters])


def signed_to_columns(letters: Sequence[int]) -> list[int]:
    return [2 * (L - 1) if L > 0 else 2 * (-L - 1) + 1 for L in letters]


def word_to_columns(word: Word, gen_index: Mapping[str, int]) -> list[int]:
    return signed_to_columns(word_to_signed(word, gen_index))


def free_reduce(letters: Sequence[int]) -> list[int]:
    out: list[int] = []
    for L in letters:
        if out and out[-1] == -L:
            out.pop()
        else:
            out.append(L)
    return out


def cyclic_reduce(letters: Sequence[int]) -> list[int]:
    w = free_reduce(letters)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def invert_letters(letters: Sequence[int]) -> list[int]:
    return [-L for L in reversed(letters)]


# ---------------------------------------------------------------------------
# Coset tables
# ---------------------------------------------------------------------------


class CosetTable:
    """Complete right-coset action; base coset 0; columns 2g / 2g+1."""

    def __init__(self, table: list[list[int]], ngens: int):
        self.table = table
        self.ngens = ngens

    @property
    def n(self) -> int:
        return len(self.table)

    def trace(self, coset: int, columns: Iterable[int]) -> int:
        for col in columns:
            coset = self.table[coset][col]
        return coset

    def permutation(self, column: int) -> tuple[int, ...]:
        return tuple(row[column] for row in self.table)

    def standardize(self) -> "CosetTable":
        """Relabel cosets in row-scan discovery order from coset 0."""
        pos = {0: 0}
        order = [0]
        for alpha in order:
            for col in range(2 * self.ngens):
                beta = self.table[alpha][col]
                if beta not in pos:
                    pos[beta] = len(order)
                    order.append(beta)
        if len(order) != self.n:
            raise ValueError("coset table is not transitive from coset 0")
        new = [[0] * (2 * self.ngens) for _ in range(self.n)]
        for alpha in range(self.n):
            for col in range(2 * self.ngens):
                new[pos[alpha]][col] = pos[self.table[alpha][col]]
        return CosetTable(new, self.ngens)

    def validate(
        self,
        relators: Sequence[Sequence[int]],
        subgroup_words: Sequence[Sequence[int]] = (),
    ) -> None:
        """Check completeness, inverse consistency, relator triviality,
        subgroup-generator stabilization of coset 0, and transitivity."""
        n = self.n
        for alpha in range(n):
            for col in range(2 * self.ngens):
                beta = self.table[alpha][col]
                if not 0 <= beta < n:
                    raise ValueError("incomplete or out-of-range entry")
                if self.table[beta][col ^ 1] != alpha:
                    raise ValueError("generator and inverse actions disagree")
        for rel in relators:
            cols = signed_to_columns(rel)
            for alpha in range(n):
                if self.trace(alpha, cols) != alpha:
                    raise ValueError("relator does not act trivially")
        for w in subgroup_words:
            if self.trace(0, signed_to_columns(w)) != 0:
                raise ValueError("subgroup generator moves the base coset")
        self.standardize()  # raises when not transitive

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CosetTable)
            and self.ngens == other.ngens
            and self.table == other.table
        )

    def to_json_dict(self, generators: Sequence[str]) -> dict:
        action = {}
        for g, name in enumerate(generators):
            action[name] = list(self.permutation(2 * g))
            action[name + "^-1"] = list(self.permutation(2 * g + 1))
        return {"n": self.n, "base": 0, "action": action}


def todd_coxeter(
    P: Presentation,
    subgroup_gens: Sequence[Word] = (),
    limit: int = 100_000,
) -> CosetTable:
    """HLT coset enumeration of the cosets of <subgroup_gens> in P.

    Passing extra words as *relators* instead (and an empty subgroup)
    enumerates the quotient by their normal closure.  Raises
    EnumerationLimitExceeded when more than ``limit`` cosets get defined.
    """
    k = len(P.generators)
    gen_index = {g: i for i, g in enumerate(P.generators)}
    relators = [word_to_columns(r, gen_index) for r in P.relators]
    subgroup = [word_to_columns(w, gen_index) for w in subgroup_gens]

    ncols = 2 * k
    table: list[list[Optional[int]]] = [[None] * ncols]
    p = [0]

    def rep(x: int) -> int:
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def define(alpha: int, col: int) -> None:
        if len(table) >= limit:
            raise EnumerationLimitExceeded(
                f"coset enumeration defined more than {limit} cosets"
            )
        table.append([None] * ncols)
        beta = len(table) - 1
        p.append(beta)
        table[alpha][col] = beta
        table[beta][col ^ 1] = alpha

    def merge(x: int, y: int, queue: list[int]) -> None:
        x, y = rep(x), rep(y)
        if x != y:
            lo, hi = (x, y) if x < y else (y, x)
            p[hi] = lo
            queue.append(hi)

    def coincidence(alpha: int, beta: int) -> None:
        queue: list[int] = []
        merge(alpha, beta, queue)
        qi = 0
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            for col in range(ncols):
                delta = table[gamma][col]
                if delta is None:
                    continue
                table[delta][col ^ 1] = None
                mu, nu = rep(gamma), rep(delta)
                if table[mu][col] is not None:
                    merge(nu, table[mu][col], queue)
                elif table[nu][col ^ 1] is not None:
                    merge(mu, table[nu][col ^ 1], queue)
                else:
                    table[mu][col] = nu
                    table[nu][col ^ 1] = mu

    def scan_and_fill(alpha: int, word: Sequence[int]) -> None:
        f, i = alpha, 0
        b, j = alpha, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    for w in subgroup:
        if w:
            scan_and_fill(0, w)
    alpha = 0
    while alpha < len(table):
        if p[alpha] == alpha:
            for r in relators:
                if not r:
                    continue
                scan_and_fill(alpha, r)
                if p[alpha] != alpha:
                    break
            if p[alpha] == alpha:
                for col in range(ncols):
                    if table[alpha][col] is None:
                        define(alpha, col)
        alpha += 1

    # compress to live cosets
    live = [x for x in range(len(table)) if p[x] == x]
    newid = {x: i for i, x in enumerate(live)}
    compact = [[newid[rep(table[x][col])] for col in range(ncols)] for x in live]
    result = CosetTable(compact, k).standardize()
    result.validate(
        [word_to_signed(r, gen_index) for r in P.relators],
        [word_to_signed(w, gen_index) for w in subgroup_gens],
    )
    return result


def coset_table_from_hom(
    P: Presentation,
    images: Mapping[str, object],
    mul: Callable,
    inv: Callable,
    identity: object,
) -> CosetTable:
    """Coset table of ker(hom) from generator images in a finite group.

    The cosets are the elements of the image subgroup, acted on by right
    multiplication; the table is relabeled in row-scan discovery order.
    Raises RelatorViolation when the images fail a relator.
    """
    for rel in P.relators:
        acc = identity
        for gen, step in rel.letters():
            e = images[gen] if step > 0 else inv(images[gen])
            acc = mul(acc, e)
        if acc != identity:
            raise RelatorViolation(f"images violate relator {rel}")

    step_elems = []
    for g in P.generators:
        step_elems.append(images[g])
        step_elems.append(inv(images[g]))

    index = {identity: 0}
    order = [identity]
    rows: list[list[int]] = []
    for x in order:
        row = []
        for e in step_elems:
            y = mul(x, e)
            j = index.get(y)
            if j is None:
                j = len(order)
                index[y] = j
                order.append(y)
            row.append(j)
        rows.append(row)
    table = CosetTable(rows, len(P.generators)).standardize()
    return table


# ---------------------------------------------------------------------------
# Reidemeister-Schreier
# ---------------------------------------------------------------------------


class RewritingMap:
    """Rewrites subgroup elements of P into Schreier-generator words."""

    def __init__(self, table: CosetTable, gen_index: dict, tree_pairs: set,
                 sgen_index: dict, names: Sequence[str]):
        self._table = table
        self._gen_index = gen_index
        self._tree = tree_pairs
        self._sgen = sgen_index
        self.names = tuple(names)

    def rewrite_columns(self, start: int, columns: Sequence[int]) -> tuple[list[int], int]:
        out: list[int] = []
        c = start
        tbl = self._table.table
        for col in columns:
            if col % 2 == 0:
                if (c, col) not in self._tree:
                    out.append(self._sgen[(c, col // 2)] + 1)
                c = tbl[c][col]
            else:
                nxt = tbl[c][col]
                if (nxt, col ^ 1) not in self._tree:
                    out.append(-(self._sgen[(nxt, col // 2)] + 1))
                c = nxt
        return out, c

    def __call__(self, word: Word) -> Word:
        cols = word_to_columns(word, self._gen_index)
        letters, end = self.rewrite_columns(0, cols)
        if end != 0:
            raise NotInSubgroupError(f"word {word} does not lie in the subgroup")
        return signed_to_word(free_reduce(letters), self.names)


def reidemeister_schreier(P: Presentation, table: CosetTable) -> tuple[Presentation, RewritingMap]:
    """Presentation of the index-n subgroup given by ``table``.

    Spanning-tree (Schreier transversal) generators are eliminated, leaving
    n*|gens| - (n-1) generators named x0, x1, ...; the relator list is the
    rewrite of every relator of P at every coset, n*|relators| words in all
    (duplicates and empty rewrites included, by construction).
    """
    k = len(P.generators)
    gen_index = {g: i for i, g in enumerate(P.generators)}
    n = table.n

    tree_pairs: set[tuple[int, int]] = set()
    seen = {0}
    order = [0]
    for alpha in order:
        for col in range(2 * k):
            beta = table.table[alpha][col]
            if beta not in seen:
                seen.add(beta)
                order.append(beta)
                tree_pairs.add((alpha, col))
                tree_pairs.add((beta, col ^ 1))
    if len(seen) != n:
        raise ValueError("coset table is not transitive")

    sgen_index: dict[tuple[int, int], int] = {}
    names: list[str] = []
    for alpha in range(n):
        for g in range(k):
            if (alpha, 2 * g) not in tree_pairs:
                sgen_index[(alpha, g)] = len(names)
                names.append(f"x{len(names)}")

    rmap = RewritingMap(table, gen_index, tree_pairs, sgen_index, names)

    relators: list[Word] = []
    rel_cols = [word_to_columns(r, gen_index) for r in P.relators]
    for alpha in range(n):
        for cols in rel_cols:
            letters, end = rmap.rewrite_columns(alpha, cols)
            if end != alpha:
                raise ValueError("relator scan did not close; table is invalid")
            relators.append(signed_to_word(free_reduce(letters), names))

    return Presentation(tuple(names), tuple(relators)), rmap


# ---------------------------------------------------------------------------
# Tietze simplification
# ---------------------------------------------------------------------------


@dataclass
class TietzeResult:
    presentation: Presentation
    complete: bool
    tracked: tuple[Word, ...] = ()
    eliminated: int = 0


def _canonical_cyclic(letters: Sequence[int]) -> tuple[int, ...]:
    w = tuple(letters)
    if not w:
        return w
    best = None
    for cand in (w, tuple(invert_letters(w))):
        for s in range(len(cand)):
            rot = cand[s:] + cand[:s]
            if best is None or rot < best:
                best = rot
    return best


class _Tietze:
    """Worker for tietze_simplify; see that function for the contract."""

    def __init__(self, ngens: int, relators: list[list[int]],
                 tracked: list[list[int]], budget: int, growth_cap: float):
        self.ngens = ngens
        self.alive = [True] * ngens
        self.rel: dict[int, list[int]] = {}
        self.occ: dict[int, dict[int, int]] = {g: {} for g in range(ngens)}
        self.canon: dict[tuple[int, ...], int] = {}
        self.version: dict[int, int] = {}
        self.heap: list = []
        self.next_rid = 0
        self.tracked = [free_reduce(w) for w in tracked]
        self.budget = budget
        self.ops = 0
        self.eliminated = 0
        self.complete = True
        self._len_counts: dict[int, int] = {}
        self._max_len = 0
        for r in relators:
            self.add_relator(r)

    # -- bookkeeping ---------------------------------------------------

    def _register(self, rid: int, letters: list[int]) -> None:
        self.rel[rid] = letters
        for L in letters:
            g = abs(L) - 1
            self.occ[g][rid] = self.occ[g].get(rid, 0) + 1
        v = self.version.get(rid, 0) + 1
        self.version[rid] = v
        heapq.heappush(self.heap, (len(letters), tuple(letters), rid, v))
        n = len(letters)
        self._len_counts[n] = self._len_counts.get(n, 0) + 1
        if n > self._max_len:
            self._max_len = n

    def _unregister(self, rid: int) -> None:
        for L in self.rel[rid]:
            g = abs(L) - 1
            cnt = self.occ[g]
            cnt[rid] -= 1
            if not cnt[rid]:
                del cnt[rid]
        n = len(self.rel[rid])
        self._len_counts[n] -= 1
        if not self._len_counts[n]:
            del self._len_counts[n]
            if n == self._max_len:
                self._max_len = max(self._len_counts, default=0)
        del self.rel[rid]

    def add_relator(self, letters: Sequence[int]) -> None:
        w = cyclic_reduce(letters)
        self.ops += len(letters) + 1
        if not w:
            return
        key = _canonical_cyclic(w)
        if key in self.canon and self.canon[key] in self.rel:
            return
        rid = self.next_rid
        self.next_rid += 1
        self.canon[key] = rid
        self._register(rid, w)

    def replace_relator(self, rid: int, letters: list[int]) -> None:
        self._unregister(rid)
        w = cyclic_reduce(letters)
        self.ops += len(letters) + 1
        if not w:
            return
        key = _canonical_cyclic(w)
        other = self.canon.get(key)
        if other is not None and other != rid and other in self.rel:
            return  # duplicate of a live relator
        self.canon[key] = rid
        self._register(rid, w)

    def total_occurrences(self, g: int) -> int:
        return sum(self.occ[g].values())

    # -- generator elimination ------------------------------------------

    def _substitution(self, rid: int, g: int) -> list[int]:
        """Solve relator rid (single occurrence of g) for g."""
        r = self.rel[rid]
        pos = next(i for i, L in enumerate(r) if abs(L) - 1 == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        return invert_letters(rest) if rot[0] > 0 else list(rest)

    def _apply_substitution(self, g: int, w: list[int]) -> None:
        targets = sorted(self.occ[g])
        for rid in targets:
            old = self.rel[rid]
            new: list[int] = []
            for L in old:
                if abs(L) - 1 == g:
                    new.extend(w if L > 0 else invert_letters(w))
                else:
                    new.append(L)
            self.ops += len(new)
            self.replace_relator(rid, free_reduce(new))
        for i, tw in enumerate(self.tracked):
            if any(abs(L) - 1 == g for L in tw):
                new = []
                for L in tw:
                    if abs(L) - 1 == g:
                        new.extend(w if L > 0 else invert_letters(w))
                    else:
                        new.append(L)
                self.ops += len(new)
                self.tracked[i] = free_reduce(new)

    def reseed_heap(self) -> None:
        self.heap = []
        for rid in sorted(self.rel):
            w = self.rel[rid]
            heapq.heappush(self.heap, (len(w), tuple(w), rid, self.version[rid]))

    def phase_eliminate(self, growth_cap: float) -> bool:
        did_any = False
        sterile: set[tuple[int, int]] = set()
        while self.heap:
            if self.ops > self.budget:
                self.complete = False
                break
            length, _, rid, v = self.heap[0]
            if rid not in self.rel or self.version[rid] != v or (rid, v) in sterile:
                heapq.heappop(self.heap)
                continue
            r = self.rel[rid]
            counts: dict[int, int] = {}
            for L in r:
                gg = abs(L) - 1
                counts[gg] = counts.get(gg, 0) + 1
            cap = max(growth_cap * self._max_len, 16.0)
            candidates = sorted(
                (g for g, c in counts.items() if c == 1),
                key=lambda g: ((self.total_occurrences(g) - 1) * (len(r) - 1), g),
            )
            done = False
            for g in candidates:
                wlen = len(r) - 1
                ok = True
                for orid, cnt in self.occ[g].items():
                    if orid == rid:
                        continue
                    if len(self.rel[orid]) + cnt * (wlen - 1) > cap:
                        ok = False
                        break
                if not ok:
                    continue
                w = self._substitution(rid, g)
                self._unregister(rid)
                self._apply_substitution(g, w)
                self.alive[g] = False
                self.eliminated += 1
                did_any = True
                done = True
                break
            if not done:
                # no viable candidate now; any later modification re-pushes it
                sterile.add((rid, v))
                heapq.heappop(self.heap)
        return did_any

    # -- relator-by-relator shortening ----------------------------------

    def phase_shorten(self, max_relators: int = 4000) -> bool:
        rels = sorted(self.rel.items(), key=lambda kv: (len(kv[1]), tuple(kv[1])))
        if len(rels) > max_relators:
            return False
        changed = False
        for rid, r in rels:
            if rid not in self.rel or self.rel[rid] != r:
                continue
            L = len(r)
            if L < 2:
                continue
            m = L // 2 + 1
            patterns = []
            for base in (r, invert_letters(r)):
                for s in range(L):
                    patterns.append(base[s:] + base[:s])
            for other_rid in sorted(self.rel):
                if other_rid == rid:
                    continue
                s_word = self.rel[other_rid]
                if len(s_word) < m:
                    continue
                hit = self._find_and_rewrite(s_word, patterns, m)
                if hit is not None:
                    self.ops += len(hit)
                    self.replace_relator(other_rid, hit)
                    changed = True
                if self.ops > self.budget:
                    self.complete = False
                    return changed
        return changed

    @staticmethod
    def _find_and_rewrite(s_word: list[int], patterns: list[list[int]], m: int):
        for pat in patterns:
            window = pat[:m]
            tail = invert_letters(pat[m:])
            first = window[0]
            for q in range(len(s_word) - m + 1):
                if s_word[q] != first:
                    continue
                if s_word[q:q + m] == window:
                    candidate = free_reduce(s_word[:q] + tail + s_word[q + m:])
                    if len(candidate) < len(s_word):
                        return candidate
        return None

    # -- driver ----------------------------------------------------------

    def run(self, growth_cap: float) -> None:
        while True:
            progress = self.phase_eliminate(growth_cap)
            if self.ops > self.budget:
                self.complete = False
                return
            if self.phase_shorten():
                progress = True
                self.reseed_heap()
            if self.ops > self.budget:
                self.complete = False
                return
            if not progress:
                return


def tietze_simplify(
    P: Presentation,
    budget: int = 5_000_000,
    growth_cap: float = 4.0,
    tracked: Sequence[Word] = (),
) -> TietzeResult:
    """Simplify a presentation by Tietze moves; the group is unchanged.

    Applies, until a fixpoint or the operation budget runs out: free and
    cyclic reduction, removal of trivial and duplicate relators, elimination
    of generators occurring exactly once in some relator, and
    length-reducing relator-by-relator substitutions.  Substitutions that
    would grow any relator past ``growth_cap`` times the current maximum are
    skipped.  ``tracked`` words are carried through every
    element-preserving move (no cyclic reduction is ever applied to them),
    so they denote the same group elements in the simplified presentation.
    """
    gen_index = {g: i for i, g in enumerate(P.generators)}
    rels = [word_to_signed(r, gen_index) for r in P.relators]
    tr = [word_to_signed(w, gen_index) for w in tracked]
    worker = _Tietze(len(P.generators), rels, tr, budget, growth_cap)
    worker.run(growth_cap)

    used: set[int] = set()
    for w in worker.rel.values():
        used.update(abs(L) - 1 for L in w)
    for w in worker.tracked:
        used.update(abs(L) - 1 for L in w)
    keep = [g for g in range(worker.ngens) if worker.alive[g] or g in used]
    new_index = {g: i for i, g in enumerate(keep)}
    names = tuple(P.generators[g] for g in keep)

    def remap(letters: list[int]) -> Word:
        remapped = [
            (new_index[abs(L) - 1] + 1) * (1 if L > 0 else -1) for L in letters
        ]
        return signed_to_word(remapped, names)

    final_rels = sorted(worker.rel.values(), key=lambda w: (len(w), tuple(w)))
    pres = Presentation(names, tuple(remap(r) for r in final_rels))
    return TietzeResult(
        presentation=pres,
        complete=worker.complete,
        tracked=tuple(remap(w) for w in worker.tracked),
        eliminated=worker.eliminated,
    )


# ---------------------------------------------------------------------------
# Abelianization via Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ... (each > 1) plus the free rank."""

    torsion: tuple[int, ...]
    rank: int

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisor chain")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("torsion coefficients must exceed 1")

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_infinite_cyclic(self) -> bool:
        return self.rank == 1 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append(f"Z^{self.rank}" if self.rank > 1 else "Z")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form (ascending divisor chain).

    Exact integer row/column reduction with pivot-size-minimizing selection;
    no modular shortcuts.
    """
    A = [row[:] for row in matrix]
    m = len(A)
    n = len(A[0]) if A else 0
    diag: list[int] = []
    top = 0
    while top < min(m, n):
        # pivot: smallest |entry| in the remaining submatrix
        pivot = None
        for i in range(top, m):
            for j in range(top, n):
                v = A[i][j]
                if v and (pivot is None or abs(v) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        A[top], A[i0] = A[i0], A[top]
        for row in A:
            row[top], row[j0] = row[j0], row[top]
        while True:
            # clear column with division steps, re-pivoting on remainders
            dirty = False
            for i in range(top + 1, m):
                if A[i][top]:
                    q = A[i][top] // A[top][top]
                    for j in range(top, n):
                        A[i][j] -= q * A[top][j]
                    if A[i][top]:
                        A[top], A[i] = A[i], A[top]
                        dirty = True
            for j in range(top + 1, n):
                if A[top][j]:
                    q = A[top][j] // A[top][top]
                    for i in range(top, m):
                        A[i][j] -= q * A[i][top]
                    if A[top][j]:
                        for row in A:
                            row[top], row[j] = row[j], row[top]
                        dirty = True
            if dirty:
                continue
            # divisibility: pivot must divide the rest of the submatrix
            bad = None
            d = A[top][top]
            for i in range(top + 1, m):
                for j in range(top + 1, n):
                    if A[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(top, n):
                A[top][j] += A[bad][j]
        diag.append(abs(A[top][top]))
        top += 1
    return diag


def abelianization(P: Presentation) -> AbelianInvariants:
    """Invariant factors of the abelianized group, from the exponent matrix."""
    gens = P.generators
    gi = {g: i for i, g in enumerate(gens)}
    rows = []
    for rel in P.relators:
        row = [0] * len(gens)
        for g, e in rel.syllables:
            row[gi[g]] += e
        rows.append(row)
    if not rows or not gens:
        return AbelianInvariants(torsion=(), rank=len(gens))
    diag = smith_diagonal(rows)
    torsion = tuple(d for d in diag if d > 1)
    rank = len(gens) - len(diag)
    return AbelianInvariants(torsion=torsion, rank=rank)


# ---------------------------------------------------------------------------
# Finite permutation groups and homomorphism counting
# ---------------------------------------------------------------------------


def identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def pmul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Composite permutation: apply p, then q."""
    return tuple(q[x] for x in p)


def pinv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class PermGroup:
    """A finite permutation group given by its full (sorted) element list."""

    def __init__(self, name: str, degree: int, elements: list[tuple[int, ...]]):
        self.name = name
        self.degree = degree
        self.elements = elements
        self.identity = identity_perm(degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    @staticmethod
    def from_generators(name: str, degree: int, gens: Sequence[tuple[int, ...]]) -> "PermGroup":
        step = []
        for g in gens:
            step.append(g)
            step.append(pinv(g))
        seen = {identity_perm(degree)}
        frontier = [identity_perm(degree)]
        while frontier:
            nxt = []
            for x in frontier:
                for g in step:
                    y = pmul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return PermGroup(name, degree, sorted(seen))

    def __repr__(self) -> str:
        return f"PermGroup({self.name}, order {self.order})"


def symmetric_group(n: int) -> PermGroup:
    return PermGroup(f"S{n}", n, sorted(itertools.permutations(range(n))))


def _parity(p: tuple[int, ...]) -> int:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            clen += 1
        parity ^= (clen - 1) & 1
    return parity


def alternating_group(n: int) -> PermGroup:
    elems = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return PermGroup(f"A{n}", n, sorted(elems))


def cyclic_group(n: int) -> PermGroup:
    shift = tuple((i + 1) % n for i in range(n))
    return PermGroup.from_generators(f"C{n}", n, [shift])


def psl_2_7() -> PermGroup:
    """PSL(2, 7) acting on the 8-point projective line over F_7."""
    t = tuple([(z + 1) % 7 for z in range(7)] + [7])
    s = [0] * 8
    s[7], s[0] = 0, 7
    for z in range(1, 7):
        s[z] = (-pow(z, 5, 7)) % 7  # -1/z since z^-1 = z^5 mod 7
    return PermGroup.from_generators("PSL(2,7)", 8, [t, tuple(s)])


_PANEL_BUILDERS: dict[str, Callable[[], PermGroup]] = {
    "S2": lambda: symmetric_group(2),
    "S3": lambda: symmetric_group(3),
    "S4": lambda: symmetric_group(4),
    "S5": lambda: symmetric_group(5),
    "S6": lambda: symmetric_group(6),
    "A4": lambda: alternating_group(4),
    "A5": lambda: alternating_group(5),
    "PSL(2,7)": psl_2_7,
}

DEFAULT_PANEL_NAMES = ("S3", "S4", "S5", "A5", "PSL(2,7)")

_panel_cache: dict[str, PermGroup] = {}


def panel_group(name: str) -> PermGroup:
    if name not in _PANEL_BUILDERS:
        raise KeyError(f"unknown fingerprint target {name!r}; "
                       f"choose from {sorted(_PANEL_BUILDERS)}")
    if name not in _panel_cache:
        _panel_cache[name] = _PANEL_BUILDERS[name]()
    return _panel_cache[name]


def hom_count(P: Presentation, target: PermGroup, guard: int = 2_000_000,
              jobs: int = 1) -> int:
    """Number of homomorphisms P -> target (total, not up to conjugacy).

    Brute force over all generator-image tuples; an isomorphism invariant of
    the presented group.  Guarded by |target|^|gens|.
    """
    g = len(P.generators)
    total = target.order**g
    if total > guard:
        raise GuardExceeded(
            f"hom_count would scan {total} tuples (> {guard}); "
            "simplify the presentation first"
        )
    gen_index = {name: i for i, name in enumerate(P.generators)}
    rels = sorted(
        (word_to_signed(r, gen_index) for r in P.relators),
        key=lambda w: (len(w), tuple(w)),
    )
    elems = target.elements
    invs = [pinv(p) for p in elems]
    ident = target.identity

    if jobs > 1 and g >= 1:
        return _hom_count_parallel(g, rels, elems, invs, ident, jobs)

    count = 0
    for combo in itertools.product(range(len(elems)), repeat=g):
        if _combo_satisfies(combo, rels, elems, invs, ident):
            count += 1
    return count


def _combo_satisfies(combo, rels, elems, invs, ident) -> bool:
    for rel in rels:
        acc = ident
        for L in rel:
            p = elems[combo[L - 1]] if L > 0 else invs[combo[-L - 1]]
            acc = tuple(p[x] for x in acc)
        if acc != ident:
            return False
    return True


def _hom_count_chunk(args) -> int:
    first, g, rels, elems, invs, ident = args
    count = 0
    for rest in itertools.product(range(len(elems)), repeat=g - 1):
        if _combo_satisfies((first,) + rest, rels, elems, invs, ident):
            count += 1
    return count


def _hom_count_parallel(g, rels, elems, invs, ident, jobs) -> int:
    import multiprocessing

    tasks = [(first, g, rels, elems, invs, ident) for first in range(len(elems))]
    with multiprocessing.Pool(jobs) as pool:
        return sum(pool.map(_hom_count_chunk, tasks))


@dataclass(frozen=True)
class Fingerprint:
    """Hom-count profile; equality is necessary for group isomorphism."""

    entries: tuple[tuple[str, object], ...]

    def __str__(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.entries)

    def to_json_list(self) -> list:
        return [[k, str(v) if k == "abelian" else v] for k, v in self.entries]


def fingerprint(
    P: Presentation,
    panel: Sequence[str] = DEFAULT_PANEL_NAMES,
    guard: int = 2_000_000,
    jobs: int = 1,
) -> Fingerprint:
    """Abelianization (entry 0) followed by hom counts over the panel."""
    entries: list[tuple[str, object]] = [("abelian", abelianization(P))]
    for name in panel:
        entries.append((name, hom_count(P, panel_group(name), guard=guard, jobs=jobs)))
    return Fingerprint(tuple(entries))
