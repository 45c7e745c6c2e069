"""Free-group words, presentations, and the PSL_2(Z[i]) generating data.

Word grammar
------------
Generator names are identifiers; ``^`` binds an integer exponent (possibly
negative); ``*`` is optional concatenation; whitespace is ignored;
parenthesized subwords take an outer exponent, e.g. ``(t*a)^3``.  The bare
word ``1`` denotes the identity.  When an alphabet is supplied, a run of
letters such as ``ta`` is split greedily into known generator names, which
lets data files use the compact form ``t^-5u``.

Words are kept freely reduced: adjacent syllables always carry distinct
generator names and no syllable has exponent zero.

Presentation file format::

    gens: a l t u
    rel: l^2
    rel: (t*l)^2
    ...

Lines starting with ``#`` and blank lines are ignored.  Printing a parsed
file and re-parsing is stable.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .errors import WordSyntaxError
from .matgroup import ProjMat, gaussian_matrix, identity_gaussian
from .quadint import QuadInt


@dataclass(frozen=True)
class Word:
    """Freely reduced word as a tuple of (generator, exponent) syllables."""

    syllables: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def of(parts: Iterable[tuple[str, int]]) -> "Word":
        out: list[tuple[str, int]] = []
        for gen, exp in parts:
            if exp == 0:
                continue
            if out and out[-1][0] == gen:
                merged = out[-1][1] + exp
                out.pop()
                if merged:
                    out.append((gen, merged))
            else:
                out.append((gen, exp))
        return Word(tuple(out))

    @staticmethod
    def identity() -> "Word":
        return Word(())

    @staticmethod
    def gen(name: str, exp: int = 1) -> "Word":
        return Word.of([(name, exp)])

    def __mul__(self, other: "Word") -> "Word":
        return Word.of(self.syllables + other.syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __pow__(self, k: int) -> "Word":
        if k == 0:
            return Word.identity()
        base = self if k > 0 else self.inverse()
        return Word.of(base.syllables * abs(k))

    def is_identity(self) -> bool:
        return not self.syllables

    def length(self) -> int:
        """Letter count (sum of |exponent|)."""
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> Iterator[tuple[str, int]]:
        """Yield (generator, +-1) one letter at a time."""
        for gen, exp in self.syllables:
            step = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield (gen, step)

    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def substitute(self, mapping: Mapping[str, "Word"]) -> "Word":
        """Image under the free-group homomorphism sending g -> mapping[g].

        Generators missing from the mapping are sent to themselves.
        """
        out = Word.identity()
        for gen, exp in self.syllables:
            img = mapping.get(gen)
            out = out * (img**exp if img is not None else Word.of([(gen, exp)]))
        return out

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        return "*".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)"
                       r"|(?P<caret>\^)|(?P<star>\*)|(?P<open>\()|(?P<close>\)))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise WordSyntaxError(f"unexpected character {stripped[0]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def _split_ident(run: str, alphabet: Sequence[str], pos: int) -> list[str]:
    """Greedy longest-match split of a letter run against known names."""
    names = sorted(alphabet, key=len, reverse=True)
    out = []
    i = 0
    while i < len(run):
        for name in names:
            if run.startswith(name, i):
                out.append(name)
                i += len(name)
                break
        else:
            raise WordSyntaxError(f"unknown generator in {run!r}", pos + i)
    return out


class _Parser:
    def __init__(self, tokens, alphabet: Optional[Sequence[str]]):
        self.tokens = tokens
        self.i = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse_word(self) -> Word:
        out = Word.identity()
        while True:
            kind, _, _ = self.peek()
            if kind == "star":
                self.next()
                continue
            if kind in ("ident", "open"):
                out = out * self.parse_term()
                continue
            return out

    def parse_term(self) -> Word:
        kind, value, pos = self.next()
        if kind == "open":
            inner = self.parse_word()
            kind2, _, pos2 = self.next()
            if kind2 != "close":
                raise WordSyntaxError("expected ')'", pos2 if pos2 is not None else pos)
            return inner ** self.parse_exponent()
        if kind != "ident":
            raise WordSyntaxError("expected a generator or '('", pos)
        if self.alphabet is not None:
            parts = _split_ident(value, self.alphabet, pos)
        else:
            parts = [value]
        word = Word.of([(g, 1) for g in parts])
        exp = self.parse_exponent()
        if exp == 1:
            return word
        # an exponent binds the last letter only:  t^8u parses as t^8 * u
        head = Word(word.syllables[:-1])
        last_gen, _ = word.syllables[-1]
        return head * Word.gen(last_gen, exp)

    def parse_exponent(self) -> int:
        kind, _, _ = self.peek()
        if kind != "caret":
            return 1
        self.next()
        kind, value, pos = self.next()
        if kind != "int":
            raise WordSyntaxError("expected an integer exponent after '^'", pos)
        return int(value)


def parse_word(text: str, alphabet: Optional[Sequence[str]] = None) -> Word:
    """Parse a word; with an alphabet, letter runs split against it."""
    stripped = text.strip()
    if stripped == "1" or stripped == "":
        return Word.identity()
    parser = _Parser(_tokenize(text), alphabet)
    word = parser.parse_word()
    if parser.i < len(parser.tokens):
        _, value, pos = parser.peek()
        raise WordSyntaxError(f"unexpected token {value!r}", pos)
    return word


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group: ordered generator names plus relators."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be unique")
        known = set(self.generators)
        for rel in self.relators:
            missing = rel.generators() - known
            if missing:
                raise ValueError(f"relator uses unknown generators {sorted(missing)}")

    def __str__(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        lines.extend(f"rel: {rel}" for rel in self.relators)
        return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    gens: Optional[tuple[str, ...]] = None
    relators = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens:"):
            if gens is not None:
                raise WordSyntaxError(f"duplicate gens line at line {lineno}")
            gens = tuple(line[len("gens:"):].split())
        elif line.startswith("rel:"):
            if gens is None:
                raise WordSyntaxError(f"rel before gens at line {lineno}")
            relators.append(parse_word(line[len("rel:"):], alphabet=gens))
        else:
            raise WordSyntaxError(f"unrecognized line {lineno}: {line!r}")
    if gens is None:
        raise WordSyntaxError("missing gens: line")
    return Presentation(gens, tuple(relators))


# ---------------------------------------------------------------------------
# The PSL_2(Z[i]) presentation, its matrix dictionary, and reference knots
# ---------------------------------------------------------------------------

BIANCHI_GENERATORS = ("a", "l", "t", "u")

# The generator printed as a curly ell in the literature is named "l" here.
_BIANCHI_RELATOR_TEXT = (
    "l^2",
    "(t*l)^2",
    "(u*l)^2",
    "(a*l)^2",
    "a^2",
    "(t*a)^3",
    "(u*a*l)^3",
    "t*u*t^-1*u^-1",
)


def bianchi_presentation() -> Presentation:
    """The 4-generator, 8-relator presentation of PSL_2(Z[i])."""
    return Presentation(
        BIANCHI_GENERATORS,
        tuple(parse_word(r, alphabet=BIANCHI_GENERATORS) for r in _BIANCHI_RELATOR_TEXT),
    )


def bianchi_matrices() -> dict[str, ProjMat]:
    """Matrix images of the generators a, l, t, u."""
    i = QuadInt.gauss(0, 1)
    one = QuadInt.gauss(1)
    zero = QuadInt.gauss(0)
    return {
        "a": gaussian_matrix(0, -1, 1, 0),
        "l": ProjMat(-i, zero, zero, i),
        "t": gaussian_matrix(1, 1, 0, 1),
        "u": ProjMat(one, i, zero, one),
    }


def eval_word(word: Word, dictionary: Mapping[str, ProjMat]) -> ProjMat:
    """Evaluate the free-group homomorphism generator -> dictionary image."""
    result = None
    for gen, exp in word.syllables:
        if gen not in dictionary:
            raise KeyError(f"no matrix for generator {gen!r}")
        m = dictionary[gen] ** exp
        result = m if result is None else result * m
    if result is None:
        if dictionary:
            sample = next(iter(dictionary.values()))
            from .matgroup import identity_like

            return identity_like(sample)
        return identity_gaussian()
    return result


def figure_eight_presentation() -> Presentation:
    """Two-generator one-relator presentation of the figure-eight knot group."""
    rel = parse_word("a^-1*b*a*b^-1*a*b*a^-1*b^-1*a*b^-1", alphabet=("a", "b"))
    return Presentation(("a", "b"), (rel,))


def trefoil_presentation() -> Presentation:
    rel = parse_word("a*b*a*b^-1*a^-1*b^-1", alphabet=("a", "b"))
    return Presentation(("a", "b"), (rel,))


# ---------------------------------------------------------------------------
# Meridian table
# ---------------------------------------------------------------------------

MERIDIAN_COUNT = 42
_MERIDIAN_ALPHABET = ("a", "l", "t", "u", "h")
_H_DEF_RE = re.compile(r"#\s*.*h\s*=\s*([^;]+?)\s*$")


@dataclass(frozen=True)
class MeridianTable:
    """The 42 cusp meridian words, h-expanded, indexed 1..42."""

    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, index: int) -> Word:
        """1-based lookup matching the published numbering."""
        if not 1 <= index <= len(self.words):
            raise IndexError(f"meridian index must be 1..{len(self.words)}")
        return self.words[index - 1]


def _meridian_text(path: Optional[str]) -> str:
    if path is None:
        path = os.environ.get("BIANCHIKIT_DATA")
        if path is not None:
            path = os.path.join(path, "meridians.txt")
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    return resources.files("bianchikit.data").joinpath("meridians.txt").read_text("utf-8")


def load_meridians(path: Optional[str] = None) -> MeridianTable:
    """Load and h-expand the bundled meridian words (or a file override).

    The file is one word per line; its first line is a comment defining the
    abbreviation h.  Exactly 42 non-comment lines must be present.
    """
    lines = _meridian_text(path).splitlines()
    if not lines or not lines[0].lstrip().startswith("#"):
        raise ValueError("meridian file must start with the h-defining comment")
    m = _H_DEF_RE.match(lines[0].strip())
    if not m:
        raise ValueError("header comment does not define h")
    h_word = parse_word(m.group(1), alphabet=("a", "l", "t", "u"))
    words = []
    for raw in lines[1:]:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        word = parse_word(line, alphabet=_MERIDIAN_ALPHABET)
        words.append(word.substitute({"h": h_word}))
    if len(words) != MERIDIAN_COUNT:
        raise ValueError(f"expected {MERIDIAN_COUNT} meridians, found {len(words)}")
    return MeridianTable(tuple(words))
