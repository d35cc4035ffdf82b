"""Word problems in finitely presented groups.

A shortlex Knuth-Bendix completion that may stop early, paired with an
abelianization invariant and small permutation quotients.  Answers are three-valued: ``EQUAL`` only comes
from a derivation, ``DISTINCT`` only from a complete system or a separating
invariant, and everything else is ``UNKNOWN``.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from . import intlinalg
from .errors import InconsistentDescriptor, ParseError, UndeclaredGenerator
from .verdicts import Verdict
from .words import EMPTY, FreeWord, format_codes, invert


class ClassHint(str, Enum):
    FREE = "free"
    CYCLIC = "cyclic"
    FG_ABELIAN = "abelian"
    GENERIC = "generic"


@dataclass(frozen=True)
class GroupDescriptor:
    """A finitely presented group with optional structural information.

    ``declared_centre`` may be ``"trivial"`` or ``"whole"`` for groups whose
    centre is known to the caller but not computable from ``class_hint``.
    """

    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...] = ()
    class_hint: ClassHint = ClassHint.GENERIC
    declared_torsion_free: bool = False
    declared_centre: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(r for r in self.relators if r))
        object.__setattr__(self, "class_hint", ClassHint(self.class_hint))
        if len(set(self.generators)) != len(self.generators):
            raise InconsistentDescriptor("duplicate generator names")
        for r in self.relators:
            if any(c >> 1 >= len(self.generators) for c in r.letters):
                raise UndeclaredGenerator("relator uses an undeclared generator")
        if self.declared_centre not in (None, "trivial", "whole"):
            raise ValueError("declared_centre must be 'trivial', 'whole' or None")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word(self, text: str) -> FreeWord:
        return FreeWord.parse(text, self.generators)

    def format(self, w: FreeWord) -> str:
        return w.format(self.generators)

    # -- common groups ----------------------------------------------------

    @classmethod
    def free(cls, names: Sequence[str], torsion_free: bool = True) -> "GroupDescriptor":
        hint = ClassHint.CYCLIC if len(names) == 1 else ClassHint.FREE
        return cls(tuple(names), (), hint, torsion_free)

    @classmethod
    def free_abelian(cls, names: Sequence[str]) -> "GroupDescriptor":
        n = len(names)
        rels = [
            FreeWord((2 * i + 1, 2 * j + 1, 2 * i, 2 * j)) for i in range(n) for j in range(i + 1, n)
        ]
        hint = ClassHint.CYCLIC if n <= 1 else ClassHint.FG_ABELIAN
        return cls(tuple(names), tuple(rels), hint, True)

    @classmethod
    def finite_cyclic(cls, name: str, order: int) -> "GroupDescriptor":
        return cls((name,), (FreeWord((0,) * order),), ClassHint.CYCLIC, order == 1)

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        return parse_presentation(text)

    def to_text(self) -> str:
        lines = [f"generators: {', '.join(self.generators)}"]
        if self.relators:
            lines.append("relators: " + "; ".join(self.format(r) for r in self.relators))
        lines.append(f"class: {self.class_hint.value}")
        lines.append(f"torsion_free: {'true' if self.declared_torsion_free else 'false'}")
        if self.declared_centre:
            lines.append(f"centre: {self.declared_centre}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [self.format(r) for r in self.relators],
            "class": self.class_hint.value,
            "torsion_free": self.declared_torsion_free,
        }


def parse_presentation(text: str) -> GroupDescriptor:
    """Parse the ``key: value`` presentation format.

    Keys: ``generators``, ``relators`` (separated by ``;`` or ``,``; may be
    repeated), ``class``, ``torsion_free``, ``centre``.  ``#`` starts a comment.
    """
    gens: list[str] | None = None
    rel_lines: list[tuple[int, int, str]] = []
    hint = ClassHint.GENERIC
    torsion_free = False
    centre = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split(":", 1)
        col = len(key) + 2
        key = key.strip().lower()
        if key == "generators":
            gens = [g.strip() for g in value.split(",") if g.strip()]
            for g in gens:
                if not g.replace("_", "a").isalnum() or not g[0].isalpha():
                    raise ParseError(f"bad generator name {g!r}", lineno, col + value.find(g))
        elif key == "relators":
            rel_lines.append((lineno, col, value))
        elif key == "class":
            try:
                hint = ClassHint(value.strip().lower())
            except ValueError:
                raise ParseError(f"unknown class {value.strip()!r}", lineno, col) from None
        elif key == "torsion_free":
            v = value.strip().lower()
            if v not in ("true", "false"):
                raise ParseError("torsion_free must be true or false", lineno, col)
            torsion_free = v == "true"
        elif key == "centre":
            centre = value.strip().lower()
            if centre not in ("trivial", "whole"):
                raise ParseError("centre must be trivial or whole", lineno, col)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
    if gens is None:
        raise ParseError("missing 'generators:' line", 1, 1)
    relators = []
    for lineno, col, value in rel_lines:
        for chunk in value.replace(";", ",").split(","):
            if chunk.strip():
                try:
                    relators.append(FreeWord.parse(chunk, gens, lineno))
                except UndeclaredGenerator as exc:
                    name = exc.details.get("name", "")
                    raise ParseError(str(exc), lineno, col + value.find(name)) from None
    return GroupDescriptor(tuple(gens), tuple(relators), hint, torsion_free, centre)


# --------------------------------------------------------------------------
# abelianization


@dataclass
class AbelianizedLattice:
    """Abelianization ``Z^n / <relator exponent vectors>`` via Smith form."""

    matrix: list[list[int]]
    ngens: int
    smith: intlinalg.Smith
    hermite: intlinalg.Hermite

    @property
    def factors(self) -> list[int]:
        return [d for d in self.smith.diagonal if d != 0]

    @property
    def rank(self) -> int:
        return self.ngens - len(self.factors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d > 1]

    def is_cyclic(self) -> bool:
        return self.rank + len(self.torsion) <= 1

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def vector(self, w: FreeWord) -> list[int]:
        return w.exponent_vector(self.ngens)

    def coordinates(self, w: FreeWord | Sequence[int]) -> tuple[int, ...]:
        """Invariant coordinates: torsion parts reduced mod their factor."""
        v = self.vector(w) if isinstance(w, FreeWord) else list(w)
        y = intlinalg.vecmat(v, self.smith.V, self.ngens)
        diag = self.smith.diagonal + [0] * (self.ngens - len(self.smith.diagonal))
        out = []
        for yi, d in zip(y, diag):
            if d == 1:
                continue
            out.append(yi % d if d else yi)
        return tuple(out)

    def is_trivial_image(self, w: FreeWord) -> bool:
        return self.hermite.contains(self.vector(w))

    def same_image(self, u: FreeWord, v: FreeWord) -> bool:
        return self.is_trivial_image(u * v.inverse())

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": self.torsion}


def abelianization(desc: GroupDescriptor) -> AbelianizedLattice:
    return _abelianization(desc)


@lru_cache(maxsize=256)
def _abelianization(desc: GroupDescriptor) -> AbelianizedLattice:
    n = desc.rank
    matrix = [r.exponent_vector(n) for r in desc.relators]
    if not matrix:
        s = intlinalg.Smith([[0] * n], [[1]], intlinalg.identity(n))
    else:
        s = intlinalg.smith(matrix, n)
    return AbelianizedLattice(matrix, n, s, intlinalg.hermite(matrix, n))


# --------------------------------------------------------------------------
# Knuth-Bendix


class Status(str, Enum):
    COMPLETE = "COMPLETE"
    PARTIAL = "PARTIAL"


@dataclass(frozen=True)
class Limits:
    max_rules: int = 5000
    max_word_length: int = 256
    max_rewrite_steps: int = 1_000_000
    timeout_ms: int | None = None

    def __post_init__(self):
        for name in ("max_rules", "max_word_length", "max_rewrite_steps"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.timeout_ms is not None and self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")


def _shortlex_gt(a: tuple, b: tuple) -> bool:
    return (len(a), a) > (len(b), b)


class _Budget(Exception):
    pass


@dataclass
class RewriteEngine:
    """Shortlex rewriting system for a group presentation."""

    descriptor: GroupDescriptor
    rules: dict[tuple[int, ...], tuple[int, ...]]
    status: Status
    limits: Limits
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        # lhs stored reversed in a trie so a redex ending at the top of the
        # output stack is found by walking backwards
        self._trie: dict = {}
        for lhs in self.rules:
            self._trie_add(lhs)
        self._abelian = abelianization(self.descriptor)

    def _trie_add(self, lhs: tuple) -> None:
        node = self._trie
        for c in reversed(lhs):
            node = node.setdefault(c, {})
        node[-1] = lhs

    def _trie_remove(self, lhs: tuple) -> None:
        path = [self._trie]
        for c in reversed(lhs):
            path.append(path[-1][c])
        del path[-1][-1]
        for c, parent, child in zip(lhs, reversed(path[:-1]), reversed(path[1:])):
            if child:
                break
            del parent[c]

    @property
    def abelianized(self) -> AbelianizedLattice:
        return self._abelian

    def rewrite(self, codes: Iterable[int]) -> tuple[int, ...]:
        rules, trie = self.rules, self._trie
        out: list[int] = []
        todo = list(codes)
        todo.reverse()
        while todo:
            out.append(todo.pop())
            node = trie
            i = len(out) - 1
            while i >= 0:
                node = node.get(out[i])
                if node is None:
                    break
                lhs = node.get(-1)
                if lhs is not None:
                    del out[i:]
                    todo.extend(reversed(rules[lhs]))
                    break
                i -= 1
        return tuple(out)

    def normal_form(self, w: FreeWord) -> FreeWord:
        return FreeWord(self.rewrite(w.letters))

    def equal(self, u: FreeWord, v: FreeWord) -> Verdict:
        if u.letters == v.letters:
            return Verdict.EQUAL
        a = self.rewrite(u.letters)
        b = self.rewrite(v.letters)
        if a == b:
            return Verdict.EQUAL
        if self.status is Status.COMPLETE:
            return Verdict.DISTINCT
        if not self._abelian.same_image(u, v):
            return Verdict.DISTINCT
        if separated_by_permutations(self.descriptor, a, b):
            return Verdict.DISTINCT
        return Verdict.UNKNOWN

    def is_trivial(self, u: FreeWord) -> Verdict:
        return self.equal(u, EMPTY)

    def to_json(self) -> dict:
        names = self.descriptor.generators
        return {
            "status": self.status.value,
            "rules": [
                [format_codes(lhs, names), format_codes(rhs, names)]
                for lhs, rhs in sorted(self.rules.items(), key=lambda kv: (len(kv[0]), kv[0]))
            ],
            "notes": list(self.notes),
        }


def _overlaps(l1, r1, l2, r2):
    """Critical pairs from a suffix of ``l1`` overlapping a prefix of ``l2``."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            yield r1 + l2[k:], l1[:-k] + r2


def complete(desc: GroupDescriptor, limits: Limits | None = None) -> RewriteEngine:
    """Run shortlex Knuth-Bendix completion on ``desc``.

    The result is ``COMPLETE`` when all critical pairs resolved within the
    limits and ``PARTIAL`` otherwise; a partial engine still rewrites with
    every rule it derived, so its ``EQUAL`` answers remain sound.
    """
    return _complete(desc, limits or Limits())


@lru_cache(maxsize=128)
def _complete(desc: GroupDescriptor, limits: Limits) -> RewriteEngine:
    n = desc.rank
    rules: dict[tuple, tuple] = {}
    engine = RewriteEngine(desc, rules, Status.PARTIAL, limits)
    by_prefix: dict[tuple, set] = {}
    by_suffix: dict[tuple, set] = {}
    counter = itertools.count()
    queue: list = []

    def push(a: tuple, b: tuple) -> None:
        heapq.heappush(queue, (max(len(a), len(b)), next(counter), a, b))

    def index(lhs: tuple, add: bool) -> None:
        for k in range(1, len(lhs)):
            for table, key in ((by_prefix, lhs[:k]), (by_suffix, lhs[-k:])):
                if add:
                    table.setdefault(key, set()).add(lhs)
                else:
                    table[key].discard(lhs)

    def insert(lhs: tuple, rhs: tuple) -> None:
        rules[lhs] = rhs
        index(lhs, True)
        engine._trie_add(lhs)

    def remove(lhs: tuple) -> tuple:
        index(lhs, False)
        engine._trie_remove(lhs)
        return rules.pop(lhs)

    for i in range(n):
        insert((2 * i, 2 * i + 1), ())
        insert((2 * i + 1, 2 * i), ())
    for r in desc.relators:
        core = r.letters
        for word in (core, invert(core)):
            for k in range(len(word)):
                push(word[k:] + word[:k], ())

    deadline = None if limits.timeout_ms is None else time.monotonic() + limits.timeout_ms / 1000
    steps = 0
    dropped = False
    stopped = ""

    def nf(w: tuple) -> tuple:
        nonlocal steps
        steps += 1
        return engine.rewrite(w)

    def critical_pairs(lhs: tuple, rhs: tuple):
        for k in range(1, len(lhs)):
            for l2 in by_prefix.get(lhs[-k:], ()):
                yield rhs + l2[k:], lhs[:-k] + rules[l2]
            for l2 in by_suffix.get(lhs[:k], ()):
                if l2 != lhs:
                    yield rules[l2] + lhs[k:], l2[:-k] + rhs

    def interreduce() -> None:
        # a rule whose lhs has a proper reducible subword is redundant; its
        # equation goes back on the queue so nothing is lost
        for lhs in list(rules):
            if len(lhs) > 1 and (engine.rewrite(lhs[:-1]) != lhs[:-1] or engine.rewrite(lhs[1:]) != lhs[1:]):
                push(lhs, remove(lhs))
        for lhs, rhs in rules.items():
            rules[lhs] = engine.rewrite(rhs)

    next_sweep = 64
    while True:
        while queue:
            if len(rules) > limits.max_rules:
                stopped = f"rule limit {limits.max_rules} reached"
                break
            if steps > limits.max_rewrite_steps:
                stopped = f"rewrite step limit {limits.max_rewrite_steps} reached"
                break
            if deadline is not None and time.monotonic() > deadline:
                stopped = f"timeout {limits.timeout_ms} ms reached"
                break
            _, _, a, b = heapq.heappop(queue)
            a, b = nf(a), nf(b)
            if a == b:
                continue
            lhs, rhs = (a, b) if _shortlex_gt(a, b) else (b, a)
            if len(lhs) > limits.max_word_length:
                dropped = True
                continue
            insert(lhs, rhs)
            for a, b in list(critical_pairs(lhs, rhs)):
                push(a, b)
            if len(rules) >= next_sweep:
                interreduce()
                next_sweep = 2 * len(rules)
        if stopped or dropped:
            break
        interreduce()
        if queue:
            continue
        # final confluence sweep over the reduced system
        missing = [
            (a, b)
            for lhs, rhs in rules.items()
            for a, b in critical_pairs(lhs, rhs)
            if engine.rewrite(a) != engine.rewrite(b)
        ]
        if not missing:
            break
        for a, b in missing:
            push(a, b)

    if stopped or dropped:
        engine.status = Status.PARTIAL
        engine.notes.append(stopped or f"rules longer than {limits.max_word_length} dropped")
    else:
        engine.status = Status.COMPLETE
    return engine


def _contains(hay: tuple, needle: tuple) -> bool:
    n, m = len(hay), len(needle)
    if m == 0 or m > n:
        return m == 0
    first = needle[0]
    for i in range(n - m + 1):
        if hay[i] == first and hay[i : i + m] == needle:
            return True
    return False


# --------------------------------------------------------------------------
# small permutation quotients


def _evaluate(images: Sequence[tuple[int, ...]], inverses, codes: Iterable[int], d: int) -> tuple:
    pos = list(range(d))
    for c in codes:
        perm = inverses[c >> 1] if c & 1 else images[c >> 1]
        pos = [perm[p] for p in pos]
    return tuple(pos)


def _inverse_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


@lru_cache(maxsize=128)
def permutation_quotients(
    desc: GroupDescriptor, degrees: tuple[int, ...] = (3, 4), max_reps: int = 48, budget: int = 200_000
) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Homomorphisms from ``desc`` onto small symmetric groups, by backtracking.

    Each relator is tested as soon as all of its generators have images.  The
    search stops after ``budget`` partial assignments, so the list may be
    incomplete; every entry is a genuine homomorphism.
    """
    k = desc.rank
    due: list[list[tuple[int, ...]]] = [[] for _ in range(k)]
    for r in desc.relators:
        if r.letters:
            due[max(c >> 1 for c in r.letters)].append(r.letters)
    found: list[tuple[tuple[int, ...], ...]] = []
    steps = 0
    for d in degrees:
        perms = list(itertools.permutations(range(d)))
        ident = tuple(range(d))
        images: list[tuple[int, ...]] = []
        inverses: list[tuple[int, ...]] = []

        def search(level: int) -> bool:
            nonlocal steps
            if level == k:
                if any(img != ident for img in images):
                    found.append(tuple(images))
                return len(found) >= max_reps
            for p in perms:
                steps += 1
                if steps > budget:
                    return True
                images.append(p)
                inverses.append(_inverse_perm(p))
                if all(_evaluate(images, inverses, r, d) == ident for r in due[level]):
                    if search(level + 1):
                        images.pop()
                        inverses.pop()
                        return True
                images.pop()
                inverses.pop()
            return False

        if search(0):
            break
    return tuple(found)


def separated_by_permutations(desc: GroupDescriptor, a: Sequence[int], b: Sequence[int]) -> bool:
    """True if some small permutation quotient maps the two words apart."""
    for images in permutation_quotients(desc):
        d = len(images[0])
        inverses = [_inverse_perm(p) for p in images]
        if _evaluate(images, inverses, a, d) != _evaluate(images, inverses, b, d):
            return True
    return False


def equal(engine: RewriteEngine, u: FreeWord, v: FreeWord) -> Verdict:
    return engine.equal(u, v)


def is_trivial_in(desc: GroupDescriptor, u: FreeWord, limits: Limits | None = None) -> Verdict:
    return complete(desc, limits).is_trivial(u)


def check_class_hint(desc: GroupDescriptor, limits: Limits | None = None) -> list[str]:
    """Check ``class_hint`` against the relators where that is decidable.

    Raises :class:`InconsistentDescriptor` on a refutation and returns notes
    about checks that stayed inconclusive.
    """
    notes: list[str] = []
    ab = abelianization(desc)
    if desc.class_hint is ClassHint.CYCLIC and not ab.is_cyclic():
        raise InconsistentDescriptor("declared cyclic but the abelianization is not cyclic")
    if desc.class_hint is ClassHint.FREE and ab.torsion:
        raise InconsistentDescriptor("declared free but the abelianization has torsion")
    if desc.class_hint is ClassHint.FG_ABELIAN and desc.rank > 1:
        engine = complete(desc, limits)
        for i in range(desc.rank):
            for j in range(i + 1, desc.rank):
                comm = FreeWord((2 * i + 1, 2 * j + 1, 2 * i, 2 * j))
                verdict = engine.is_trivial(comm)
                if verdict is Verdict.DISTINCT:
                    raise InconsistentDescriptor(
                        f"declared abelian but [{desc.generators[i]}, {desc.generators[j]}] != 1"
                    )
                if verdict is Verdict.UNKNOWN:
                    notes.append(
                        f"commutator [{desc.generators[i]}, {desc.generators[j]}] undecided"
                    )
    return notes
