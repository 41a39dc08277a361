"""Process grammars and their sequent calculus.

Types are strings of basic types with integer adjoint degrees (``n^l`` has
degree -1, ``n^r`` degree +1). A process grammar assigns each word a pair of
types (source, target), read as a process. Parsing a sentence means finding a
derivation of ``⊢ s`` whose word axioms, read left to right, spell the
sentence.

The calculus has identity axioms, one axiom per dictionary entry, left and
right negation introduction (for basic types only, so just the counits
``t^l t -> 1`` and ``t t^r -> 1`` are available), cut and tensor introduction.

Proof search works on a normal form. The left premise of a cut is a word
axiom, possibly beside identities on the part of the context the word does
not consume. The left premise of a tensor introduction is never itself a
tensor introduction, and identities appear only where a rule needs them.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

DEFAULT_MAX_DEPTH = 12

WORD = "word"
ID = "id"
L_ID = "l-id"
R_ID = "r-id"
L_INTRO = "l-intro"
R_INTRO = "r-intro"
CUT = "cut"
TENSOR_INTRO = "tensor-intro"

RULES = (WORD, ID, L_ID, R_ID, L_INTRO, R_INTRO, CUT, TENSOR_INTRO)
_RULE_LABELS = {TENSOR_INTRO: "⊗-intro"}


class GrammarError(ValueError):
    pass


class LexiconError(GrammarError, KeyError):
    def __init__(self, word: str):
        super().__init__(f"unknown word: {word!r}")
        self.word = word

    def __str__(self) -> str:
        return self.args[0]


@total_ordering
@dataclass(frozen=True)
class Factor:
    """A basic type with an adjoint degree: 0 plain, -1 left adjoint, +1 right adjoint."""

    base: str
    degree: int = 0

    @property
    def l(self) -> "Factor":  # noqa: E743
        return Factor(self.base, self.degree - 1)

    @property
    def r(self) -> "Factor":
        return Factor(self.base, self.degree + 1)

    def __lt__(self, other: "Factor") -> bool:
        return (self.base, self.degree) < (other.base, other.degree)

    def __str__(self) -> str:
        if self.degree < 0:
            return self.base + "^l" * -self.degree
        return self.base + "^r" * self.degree


@dataclass(frozen=True)
class PregroupType:
    """An element of the free pregroup: a string of factors. Empty means the unit 1."""

    factors: tuple[Factor, ...] = ()

    @classmethod
    def of(cls, *factors: Factor | str) -> "PregroupType":
        return cls(tuple(f if isinstance(f, Factor) else Factor(f) for f in factors))

    def __add__(self, other: "PregroupType") -> "PregroupType":
        return PregroupType(self.factors + other.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return PregroupType(self.factors[item])
        return self.factors[item]

    @property
    def l(self) -> "PregroupType":  # noqa: E743
        return PregroupType(tuple(f.l for f in reversed(self.factors)))

    @property
    def r(self) -> "PregroupType":
        return PregroupType(tuple(f.r for f in reversed(self.factors)))

    @property
    def bases(self) -> frozenset[str]:
        return frozenset(f.base for f in self.factors)

    def __str__(self) -> str:
        return " ".join(map(str, self.factors)) if self.factors else "1"


UNIT = PregroupType()

_FACTOR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)((?:\^[lr])*)$")


def parse_type(text: str) -> PregroupType:
    """Read types like ``"s n^l"``, ``"n^r s n^l"``, ``"n^l^l"`` or ``"1"``."""
    factors = []
    for token in text.split():
        if token == "1":
            continue
        m = _FACTOR_RE.match(token)
        if not m:
            raise GrammarError(f"malformed type factor {token!r} in {text!r}")
        marks = m.group(2)
        degree = marks.count("^r") - marks.count("^l")
        factors.append(Factor(m.group(1), degree))
    return PregroupType(tuple(factors))


@dataclass(frozen=True)
class Entry:
    word: str
    source: PregroupType
    target: PregroupType

    def __str__(self) -> str:
        return f"{self.word} : {self.source} ≤ {self.target}"


@dataclass(frozen=True)
class ProcessGrammar:
    lexicon: tuple[str, ...]
    basic_types: tuple[str, ...]
    sentence_type: PregroupType
    dictionary: tuple[Entry, ...]

    def __post_init__(self):
        known = set(self.basic_types)
        words = set(self.lexicon)
        stray = self.sentence_type.bases - known
        if stray:
            raise GrammarError(f"sentence type uses undeclared basic types {sorted(stray)}")
        for e in self.dictionary:
            if e.word not in words:
                raise GrammarError(f"dictionary entry for {e.word!r} which is not in the lexicon")
            stray = (e.source.bases | e.target.bases) - known
            if stray:
                raise GrammarError(f"entry {e} uses undeclared basic types {sorted(stray)}")

    @classmethod
    def from_entries(
        cls,
        entries: Iterable[tuple[str, str | PregroupType, str | PregroupType]],
        sentence_type: str | PregroupType = "s",
    ) -> "ProcessGrammar":
        """Build a grammar, inferring lexicon and basic types from the entries."""
        as_type = lambda t: parse_type(t) if isinstance(t, str) else t  # noqa: E731
        dictionary = tuple(Entry(w, as_type(a), as_type(b)) for w, a, b in entries)
        s = as_type(sentence_type)
        lexicon = tuple(dict.fromkeys(e.word for e in dictionary))
        bases = set(s.bases)
        for e in dictionary:
            bases |= e.source.bases | e.target.bases
        return cls(lexicon, tuple(sorted(bases)), s, dictionary)

    @classmethod
    def from_pregroup(
        cls,
        entries: Iterable[tuple[str, str | PregroupType]],
        sentence_type: str | PregroupType = "s",
    ) -> "ProcessGrammar":
        """Import a pregroup grammar: each word becomes a process from the unit."""
        return cls.from_entries(((w, UNIT, t) for w, t in entries), sentence_type)

    def entries_for(self, word: str) -> tuple[Entry, ...]:
        if word not in self.lexicon:
            raise LexiconError(word)
        return tuple(e for e in self.dictionary if e.word == word)

    def with_sentence_type(self, sentence_type: str | PregroupType) -> "ProcessGrammar":
        s = parse_type(sentence_type) if isinstance(sentence_type, str) else sentence_type
        return ProcessGrammar(self.lexicon, self.basic_types, s, self.dictionary)


@dataclass(frozen=True)
class Sequent:
    lhs: PregroupType
    rhs: PregroupType

    def __str__(self) -> str:
        left = " ".join(map(str, self.lhs))
        right = " ".join(map(str, self.rhs))
        return f"{left} ⊢ {right}".strip()


@dataclass(frozen=True)
class Derivation:
    rule: str
    sequent: Sequent
    premises: tuple["Derivation", ...] = ()
    word: str | None = None

    @property
    def lhs(self) -> PregroupType:
        return self.sequent.lhs

    @property
    def rhs(self) -> PregroupType:
        return self.sequent.rhs

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=0)

    @property
    def size(self) -> int:
        return 1 + sum(p.size for p in self.premises)

    def serialize(self) -> str:
        head = f'"{self.word}"' if self.rule == WORD else self.rule
        inner = "".join(" " + p.serialize() for p in self.premises)
        return f"({head} [{self.sequent}]{inner})"


def word_axiom(entry: Entry) -> Derivation:
    return Derivation(WORD, Sequent(entry.source, entry.target), word=entry.word)


def identity_axiom(factor: Factor) -> Derivation:
    rule = {-1: L_ID, 0: ID, 1: R_ID}.get(factor.degree, ID)
    t = PregroupType((factor,))
    return Derivation(rule, Sequent(t, t))


def cut(left: Derivation, right: Derivation) -> Derivation:
    return Derivation(CUT, Sequent(left.lhs, right.rhs), (left, right))


def tensor_intro(left: Derivation, right: Derivation) -> Derivation:
    return Derivation(
        TENSOR_INTRO, Sequent(left.lhs + right.lhs, left.rhs + right.rhs), (left, right)
    )


def l_intro(premise: Derivation) -> Derivation:
    t = premise.rhs[0]
    return Derivation(
        L_INTRO, Sequent(PregroupType((t.l,)) + premise.lhs, premise.rhs[1:]), (premise,)
    )


def r_intro(premise: Derivation) -> Derivation:
    t = premise.rhs[-1]
    return Derivation(
        R_INTRO, Sequent(premise.lhs + PregroupType((t.r,)), premise.rhs[:-1]), (premise,)
    )


def derivation_words(d: Derivation) -> list[str]:
    if d.rule == WORD:
        return [d.word]
    out: list[str] = []
    for p in d.premises:
        out.extend(derivation_words(p))
    return out


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    path: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_node(d: Derivation, grammar: ProcessGrammar | None) -> str | None:
    n = len(d.premises)
    lhs, rhs = d.lhs, d.rhs
    if d.rule not in RULES:
        return f"unknown rule {d.rule!r}"
    if d.rule == WORD:
        if n:
            return "word axiom with premises"
        if grammar is not None:
            entry = Entry(d.word, lhs, rhs)
            if d.word not in grammar.lexicon or entry not in grammar.dictionary:
                return f"no dictionary entry {entry}"
        return None
    if d.rule in (ID, L_ID, R_ID):
        if n:
            return "identity axiom with premises"
        if len(lhs) != 1 or lhs != rhs:
            return f"identity axiom on {d.sequent}"
        expected = {L_ID: -1, ID: 0, R_ID: 1}[d.rule]
        if d.rule != ID and lhs[0].degree != expected:
            return f"{d.rule} axiom on a factor of degree {lhs[0].degree}"
        if d.rule == ID and lhs[0].degree in (-1, 1):
            return f"id axiom on adjoint factor {lhs[0]}"
        return None
    if d.rule in (L_INTRO, R_INTRO):
        if n != 1:
            return f"{d.rule} needs one premise"
        p = d.premises[0]
        if not p.rhs:
            return f"{d.rule} premise has empty right-hand side"
        t = p.rhs[0] if d.rule == L_INTRO else p.rhs[-1]
        if t.degree != 0:
            return f"{d.rule} on {t}, which is not a basic type"
        if d.rule == L_INTRO:
            want = Sequent(PregroupType((t.l,)) + p.lhs, p.rhs[1:])
        else:
            want = Sequent(p.lhs + PregroupType((t.r,)), p.rhs[:-1])
        if d.sequent != want:
            return f"{d.rule} concludes {d.sequent}, schema gives {want}"
        return None
    if n != 2:
        return f"{d.rule} needs two premises"
    a, b = d.premises
    if d.rule == CUT:
        if a.rhs != b.lhs:
            return f"cut middle types differ: {a.rhs} vs {b.lhs}"
        want = Sequent(a.lhs, b.rhs)
    else:
        want = Sequent(a.lhs + b.lhs, a.rhs + b.rhs)
    if d.sequent != want:
        return f"{d.rule} concludes {d.sequent}, schema gives {want}"
    return None


def validate(d: Derivation, grammar: ProcessGrammar | None = None) -> ValidationResult:
    """Check every node against its rule schema; report the first offending node.

    Paths are ``root`` followed by premise indices, e.g. ``root.1.0``.
    """
    stack = [(d, "root")]
    while stack:
        node, path = stack.pop()
        problem = _check_node(node, grammar)
        if problem:
            return ValidationResult(False, path, problem)
        for i in reversed(range(len(node.premises))):
            stack.append((node.premises[i], f"{path}.{i}"))
    return ValidationResult(True)


def _sort_key(d: Derivation) -> tuple:
    return (d.height, d.size, d.serialize())


def _beside_identities(prefix: tuple, d: Derivation) -> Derivation:
    """``id(f1) ⊗ (id(f2) ⊗ (... ⊗ d))`` for the factors of ``prefix``."""
    for f in reversed(prefix):
        d = tensor_intro(identity_axiom(f), d)
    return d


class _ProofSearch:
    def __init__(self, grammar: ProcessGrammar, words: Sequence[str]):
        self.words = tuple(words)
        self.entries = [grammar.entries_for(w) for w in self.words]
        self.memo: dict[tuple, tuple[Derivation, ...]] = {}

    def run(self, goal: Sequent, depth: int) -> list[Derivation]:
        found = self.search(goal.lhs.factors, goal.rhs.factors, 0, len(self.words), depth)
        return sorted(found, key=_sort_key)

    def search(self, lhs: tuple, rhs: tuple, i: int, j: int, depth: int) -> tuple[Derivation, ...]:
        if depth <= 0:
            return ()
        key = (lhs, rhs, i, j, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.memo[key] = ()
        out: list[Derivation] = []
        L, R = PregroupType(lhs), PregroupType(rhs)

        if j == i + 1:
            for e in self.entries[i]:
                if e.source == L and e.target == R:
                    out.append(word_axiom(e))
        if i == j and len(lhs) == 1 and lhs == rhs:
            out.append(identity_axiom(lhs[0]))
        if j > i:
            for e in self.entries[i]:
                # the word consumes a suffix of lhs; the prefix passes through on identities
                k = len(lhs) - len(e.source)
                if k < 0 or lhs[k:] != e.source.factors:
                    continue
                middle = lhs[:k] + e.target.factors
                if i + 1 == j and middle == rhs:
                    continue
                left = _beside_identities(lhs[:k], word_axiom(e))
                for d in self.search(middle, rhs, i + 1, j, depth - 1 - k):
                    out.append(cut(left, d))
        if lhs and lhs[0].degree == -1:
            t = lhs[0].r
            for d in self.search(lhs[1:], (t,) + rhs, i, j, depth - 1):
                out.append(l_intro(d))
        if lhs and lhs[-1].degree == 1:
            t = lhs[-1].l
            for d in self.search(lhs[:-1], rhs + (t,), i, j, depth - 1):
                out.append(r_intro(d))
        nl, nr = len(lhs), len(rhs)
        for p in range(nl + 1):
            for q in range(nr + 1):
                if p == 0 and q == 0:
                    continue
                if p == nl and q == nr:
                    continue
                for m in range(i, j + 1):
                    lefts = [
                        d for d in self.search(lhs[:p], rhs[:q], i, m, depth - 1)
                        if d.rule != TENSOR_INTRO
                    ]
                    if not lefts:
                        continue
                    rights = self.search(lhs[p:], rhs[q:], m, j, depth - 1)
                    for a in lefts:
                        for b in rights:
                            out.append(tensor_intro(a, b))
        result = tuple(out)
        self.memo[key] = result
        return result


def parse(
    grammar: ProcessGrammar,
    sentence: Sequence[str] | str,
    max_depth: int = DEFAULT_MAX_DEPTH,
    all: bool = False,  # noqa: A002
) -> list[Derivation]:
    """Derivations of ``⊢ s`` whose word axioms spell ``sentence`` in order.

    An empty list means no derivation exists within ``max_depth`` (tree height).
    With ``all=False`` at most one derivation is returned: the first in the
    canonical order (height, size, serialisation).
    """
    words = sentence.split() if isinstance(sentence, str) else list(sentence)
    if max_depth < 1:
        raise ValueError("max_depth must be positive")
    for w in words:
        if w not in grammar.lexicon:
            raise LexiconError(w)
    found = _ProofSearch(grammar, words).run(Sequent(UNIT, grammar.sentence_type), max_depth)
    return found if all else found[:1]


def grammatical_sentences(
    grammar: ProcessGrammar, max_length: int, max_depth: int = DEFAULT_MAX_DEPTH
) -> list[str]:
    """All sentences up to ``max_length`` words that have a parse, in length-then-lexicon order."""
    out = []
    for n in range(1, max_length + 1):
        for words in itertools.product(grammar.lexicon, repeat=n):
            if parse(grammar, words, max_depth):
                out.append(" ".join(words))
    return out


# Counit-only reductions


@dataclass(frozen=True)
class Contraction:
    position: int
    left: Factor
    right: Factor

    def __str__(self) -> str:
        return f"{self.left} {self.right} -> 1 at {self.position}"


def reduce_check(t: PregroupType, target: PregroupType) -> tuple[Contraction, ...] | None:
    """A sequence of counit contractions rewriting ``t`` to ``target``, or ``None``.

    A contraction removes an adjacent pair ``x^(z) x^(z+1)``, which covers both
    ``x^l x -> 1`` and ``x x^r -> 1``. The search is exhaustive.
    """
    goal = target.factors
    dead: set[tuple] = set()

    def go(cur: tuple) -> list[Contraction] | None:
        if cur == goal:
            return []
        if len(cur) <= len(goal) or cur in dead:
            return None
        for i in range(len(cur) - 1):
            a, b = cur[i], cur[i + 1]
            if a.base == b.base and b.degree == a.degree + 1:
                rest = go(cur[:i] + cur[i + 2 :])
                if rest is not None:
                    return [Contraction(i, a, b)] + rest
        dead.add(cur)
        return None

    trace = go(t.factors)
    return None if trace is None else tuple(trace)


# Rendering


def rule_label(d: Derivation) -> str:
    # words are quoted so that a word named like a rule stays distinguishable
    if d.rule == WORD:
        return f'("{d.word}")'
    return f"({_RULE_LABELS.get(d.rule, d.rule)})"


def render_text(d: Derivation) -> str:
    lines = [f"{rule_label(d)} {d.sequent}"]

    def walk(node: Derivation, prefix: str) -> None:
        for i, p in enumerate(node.premises):
            last = i == len(node.premises) - 1
            lines.append(f"{prefix}{'└─ ' if last else '├─ '}{rule_label(p)} {p.sequent}")
            walk(p, prefix + ("   " if last else "│  "))

    walk(d, "")
    return "\n".join(lines) + "\n"


def render_dot(d: Derivation) -> str:
    lines = ["digraph derivation {", "  node [shape=box];"]
    counter = [0]

    def visit(node: Derivation) -> str:
        name = f"n{counter[0]}"
        counter[0] += 1
        label = f"{rule_label(node)} {node.sequent}".replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  {name} [label="{label}"];')
        for p in node.premises:
            child = visit(p)
            lines.append(f"  {name} -> {child};")
        return name

    visit(d)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(d: Derivation, format: str = "text") -> str:  # noqa: A002
    if format == "text":
        return render_text(d)
    if format == "dot":
        return render_dot(d)
    raise ValueError(f"unknown render format {format!r}")
