"""Words in free groups and in free products ``G * F(x_1, ..., x_n)``.

Letters are encoded as small integers: generator ``i`` is ``2*i`` and its
inverse is ``2*i + 1``.  Inverting a letter flips the low bit, and the
natural integer order is the declared generator order with each letter
before its inverse.  In a :class:`RelativeWord` the coefficient generators
come first, so coefficient codes coincide with the codes of the coefficient
group's own generators and variable codes are shifted by ``2 * len(G)``.

Everything here is syntactic.  Equality inside the coefficient group is the
business of :mod:`relpres.rewriting`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import NotCyclicallyReduced, OracleUnknown, ParseError, UndeclaredGenerator
from .verdicts import Verdict

Codes = tuple[int, ...]


def free_reduce(codes: Iterable[int]) -> Codes:
    out: list[int] = []
    for c in codes:
        if out and out[-1] == c ^ 1:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def invert(codes: Sequence[int]) -> Codes:
    return tuple(c ^ 1 for c in reversed(codes))


def cyclic_split(codes: Codes) -> tuple[Codes, Codes]:
    """Split a reduced word as ``prefix + core + prefix^-1``.

    ``core`` is cyclically reduced (first and last letters do not cancel).
    """
    i, j = 0, len(codes) - 1
    while i < j and codes[i] == codes[j] ^ 1:
        i += 1
        j -= 1
    return codes[:i], codes[i : j + 1]


def least_rotation(codes: Sequence[int]) -> int:
    """Offset of the lexicographically least rotation."""
    n = len(codes)
    if n == 0:
        return 0
    doubled = tuple(codes) * 2
    return min(range(n), key=lambda k: doubled[k : k + n])


def rotate(codes: Codes, k: int) -> Codes:
    if not codes:
        return codes
    k %= len(codes)
    return codes[k:] + codes[:k]


# --------------------------------------------------------------------------
# word grammar

_TOKEN = re.compile(r"\s*(?:(\*)|([A-Za-z][A-Za-z0-9_]*)(?:\^(-?\d+))?|(1)(?![0-9A-Za-z_])|(\S))")


def parse_tokens(text: str, line: int = 1) -> list[tuple[str, int]]:
    """Parse ``a b^-1 c^3 * d`` into ``[(name, power), ...]``.

    ``1`` denotes the empty word and may appear anywhere.
    """
    out: list[tuple[str, int]] = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        star, name, power, one, junk = m.groups()
        if junk is not None:
            raise ParseError(f"unexpected character {junk!r}", line, m.start(5) + 1)
        if name is not None:
            k = int(power) if power is not None else 1
            if k != 0:
                out.append((name, k))
        pos = m.end()
    return out


# --------------------------------------------------------------------------
# free words


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in a free group, stored as letter codes."""

    letters: Codes = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "FreeWord":
        codes: list[int] = []
        for index, power in pairs:
            c = 2 * index + (0 if power > 0 else 1)
            codes.extend([c] * abs(power))
        return cls(tuple(codes))

    @classmethod
    def parse(cls, text: str, names: Sequence[str], line: int = 1) -> "FreeWord":
        lookup = {n: i for i, n in enumerate(names)}
        pairs = []
        for name, k in parse_tokens(text, line):
            if name not in lookup:
                raise UndeclaredGenerator(f"undeclared generator {name!r}", name=name)
            pairs.append((lookup[name], k))
        return cls.from_pairs(pairs)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(invert(self.letters))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(base.letters * abs(k))

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        """``by^-1 * self * by``."""
        return FreeWord(invert(by.letters) + self.letters + by.letters)

    def pairs(self) -> list[tuple[int, int]]:
        return [(c >> 1, -1 if c & 1 else 1) for c in self.letters]

    def exponent_sum(self, index: int) -> int:
        return sum(1 if c == 2 * index else -1 for c in self.letters if c >> 1 == index)

    def exponent_vector(self, rank: int) -> list[int]:
        v = [0] * rank
        for c in self.letters:
            v[c >> 1] += -1 if c & 1 else 1
        return v

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != self.letters[-1] ^ 1

    def cyclic_split(self) -> tuple["FreeWord", "FreeWord"]:
        """``(prefix, core)`` with ``self = prefix * core * prefix^-1``."""
        p, c = cyclic_split(self.letters)
        return FreeWord(p), FreeWord(c)

    def shortlex_key(self) -> tuple:
        return (len(self.letters), self.letters)

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        for index, power in _runs(self.letters):
            parts.append(names[index] if power == 1 else f"{names[index]}^{power}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"FreeWord({self.format([f'x{i + 1}' for i in range(self._rank_hint())])})"

    def _rank_hint(self) -> int:
        return max((c >> 1 for c in self.letters), default=-1) + 1


def _runs(codes: Codes) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for c in codes:
        index, e = c >> 1, (-1 if c & 1 else 1)
        if out and out[-1][0] == index and (out[-1][1] > 0) == (e > 0):
            out[-1] = (index, out[-1][1] + e)
        else:
            out.append((index, e))
    return out


def format_codes(codes: Codes, names: Sequence[str]) -> str:
    """Format a letter sequence without reducing it first."""
    if not codes:
        return "1"
    return " ".join(names[i] if p == 1 else f"{names[i]}^{p}" for i, p in _runs(codes))


EMPTY = FreeWord()


class ProperPower(NamedTuple):
    is_power: bool
    root: FreeWord
    k: int


def primitive_root(u: FreeWord) -> tuple[FreeWord, int]:
    """Return ``(v, k)`` with ``u = v^k`` and ``k`` maximal; ``u`` nonempty."""
    prefix, core = cyclic_split(u.letters)
    n = len(core)
    for d in range(1, n + 1):
        if n % d == 0 and core == core[:d] * (n // d):
            root = FreeWord(prefix + core[:d] + invert(prefix))
            return root, n // d
    raise AssertionError("unreachable")


def is_proper_power(u: FreeWord) -> ProperPower:
    """Decide whether ``u = v^k`` in the free group for some ``k >= 2``.

    The empty word counts as a proper power (``1 = 1^2``).  Otherwise the
    cyclically reduced core of ``u`` is tested for periodicity, and the
    shortest period is conjugated back.
    """
    if not u:
        return ProperPower(True, EMPTY, 2)
    root, k = primitive_root(u)
    if k >= 2:
        return ProperPower(True, root, k)
    return ProperPower(False, u, 1)


def reduced_words(rank: int, max_length: int, min_length: int = 0) -> Iterator[Codes]:
    """All freely reduced words of length ``min_length..max_length``, shortlex order."""
    letters = range(2 * rank)
    level: list[Codes] = [()]
    for length in range(max_length + 1):
        if length >= min_length:
            yield from level
        if length == max_length:
            break
        level = [w + (c,) for w in level for c in letters if not w or w[-1] != c ^ 1]


# --------------------------------------------------------------------------
# relative words over G * F


class Kind(IntEnum):
    COEFFICIENT = 0
    VARIABLE = 1


class Letter(NamedTuple):
    kind: Kind
    index: int
    exp: int


@dataclass(frozen=True)
class Alphabet:
    """Declared coefficient generators (of G) and variables x_1..x_n."""

    coefficients: tuple[str, ...]
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        object.__setattr__(self, "variables", tuple(self.variables))
        names = self.coefficients + self.variables
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def offset(self) -> int:
        return 2 * len(self.coefficients)

    def code(self, letter: Letter) -> int:
        if letter.exp not in (1, -1):
            raise ValueError("letter exponent must be +1 or -1")
        names = self.coefficients if letter.kind == Kind.COEFFICIENT else self.variables
        if not 0 <= letter.index < len(names):
            raise UndeclaredGenerator(
                f"{letter.kind.name.lower()} index {letter.index} not declared", index=letter.index
            )
        base = 0 if letter.kind == Kind.COEFFICIENT else len(self.coefficients)
        return 2 * (base + letter.index) + (0 if letter.exp > 0 else 1)

    def letter(self, code: int) -> Letter:
        i, e = code >> 1, (-1 if code & 1 else 1)
        if i < len(self.coefficients):
            return Letter(Kind.COEFFICIENT, i, e)
        return Letter(Kind.VARIABLE, i - len(self.coefficients), e)

    def is_variable(self, code: int) -> bool:
        return code >= self.offset

    def names(self) -> tuple[str, ...]:
        return self.coefficients + self.variables

    def parse(self, text: str, line: int = 1) -> "RelativeWord":
        lookup = {n: i for i, n in enumerate(self.names())}
        codes: list[int] = []
        for name, k in parse_tokens(text, line):
            if name not in lookup:
                raise UndeclaredGenerator(f"undeclared generator {name!r}", name=name)
            c = 2 * lookup[name] + (0 if k > 0 else 1)
            codes.extend([c] * abs(k))
        return RelativeWord(self, free_reduce(codes))


class Syllable(NamedTuple):
    g: FreeWord  # coefficient word, over G's generators
    t: FreeWord  # nonempty variable word, over x_1..x_n


@dataclass(frozen=True)
class RelativeWord:
    """A freely reduced word in ``G * F(x_1..x_n)``.

    Coefficient letters are only reduced syntactically: ``g g^-1`` cancels,
    but relations of G are never applied here.
    """

    alphabet: Alphabet
    letters: Codes = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))

    # -- structure --------------------------------------------------------

    def blocks(self) -> list[tuple[bool, Codes]]:
        """Maximal runs of coefficient / variable letters as ``(is_variable, codes)``."""
        out: list[tuple[bool, list[int]]] = []
        for c in self.letters:
            v = self.alphabet.is_variable(c)
            if out and out[-1][0] == v:
                out[-1][1].append(c)
            else:
                out.append((v, [c]))
        return [(v, tuple(cs)) for v, cs in out]

    def _coef(self, codes: Codes) -> FreeWord:
        return FreeWord(codes)

    def _var(self, codes: Codes) -> FreeWord:
        off = self.alphabet.offset
        return FreeWord(tuple(c - off for c in codes))

    @property
    def syllables(self) -> tuple[Syllable, ...]:
        """``(g_i, t_i)`` pairs so that the word is ``g_1 t_1 ... g_q t_q * tail``."""
        out: list[Syllable] = []
        pending: Codes = ()
        for is_var, codes in self.blocks():
            if is_var:
                out.append(Syllable(self._coef(pending), self._var(codes)))
                pending = ()
            else:
                pending = codes
        return tuple(out)

    @property
    def tail(self) -> FreeWord:
        blocks = self.blocks()
        if blocks and not blocks[-1][0]:
            return self._coef(blocks[-1][1])
        return EMPTY

    @property
    def q(self) -> int:
        return sum(1 for v, _ in self.blocks() if v)

    def has_coefficients(self) -> bool:
        return any(not self.alphabet.is_variable(c) for c in self.letters)

    # -- arithmetic -------------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "RelativeWord") -> "RelativeWord":
        self._check(other)
        return RelativeWord(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "RelativeWord":
        return RelativeWord(self.alphabet, invert(self.letters))

    def conjugate(self, by: "RelativeWord") -> "RelativeWord":
        return by.inverse() * self * by

    def _check(self, other: "RelativeWord") -> None:
        if other.alphabet != self.alphabet:
            raise ValueError("words over different alphabets")

    def rotation(self, k: int) -> "RelativeWord":
        return RelativeWord(self.alphabet, rotate(self.letters, k))

    def exponent_sum(self, variable: int) -> int:
        code = self.alphabet.offset + 2 * variable
        return sum(1 if c == code else -1 for c in self.letters if c >> 1 == code >> 1)

    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != self.letters[-1] ^ 1

    def decoded(self) -> list[Letter]:
        return [self.alphabet.letter(c) for c in self.letters]

    @classmethod
    def from_coefficients_and_variables(
        cls, alphabet: Alphabet, parts: Iterable[tuple[bool, FreeWord]]
    ) -> "RelativeWord":
        """Assemble from ``(is_variable, word)`` pieces."""
        codes: list[int] = []
        for is_var, w in parts:
            shift = alphabet.offset if is_var else 0
            codes.extend(c + shift for c in w.letters)
        return cls(alphabet, tuple(codes))

    def format(self) -> str:
        if not self.letters:
            return "1"
        names = self.alphabet.names()
        return " ".join(
            names[i] if p == 1 else f"{names[i]}^{p}" for i, p in _runs(self.letters)
        )

    def __repr__(self) -> str:
        return f"RelativeWord({self.format()!r})"


def reduce(alphabet: Alphabet, letters: Iterable[Letter | int]) -> RelativeWord:
    """Free-product normal form of a raw letter sequence."""
    codes = []
    for letter in letters:
        codes.append(letter if isinstance(letter, int) else alphabet.code(letter))
    limit = 2 * len(alphabet.names())
    for c in codes:
        if not 0 <= c < limit:
            raise UndeclaredGenerator(f"letter code {c} not declared", code=c)
    return RelativeWord(alphabet, tuple(codes))


def erase_coefficients(w: RelativeWord) -> FreeWord:
    """Image under the retraction ``G * F -> F`` that kills G."""
    off = w.alphabet.offset
    return FreeWord(tuple(c - off for c in w.letters if c >= off))


def exponent_sum(w: RelativeWord | FreeWord, variable: int) -> int:
    return w.exponent_sum(variable)


# --------------------------------------------------------------------------
# cyclic words


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced relative word in its canonical rotation."""

    word: RelativeWord

    def __post_init__(self):
        if not self.word.is_cyclically_reduced():
            raise NotCyclicallyReduced(f"{self.word.format()} is not cyclically reduced")
        k = least_rotation(self.word.letters)
        if k:
            object.__setattr__(self, "word", self.word.rotation(k))

    @property
    def alphabet(self) -> Alphabet:
        return self.word.alphabet

    def syllable_offset(self) -> int:
        """Rotation offset at which the word reads ``g_1 t_1 ... g_q t_q``.

        That is the first position (cyclically) where a coefficient letter
        follows a variable letter; zero if no such position exists.
        """
        codes = self.word.letters
        n = len(codes)
        isvar = self.alphabet.is_variable
        for k in range(n):
            if not isvar(codes[k]) and isvar(codes[k - 1]):
                return k
        return 0

    def syllable_form(self) -> RelativeWord:
        return self.word.rotation(self.syllable_offset())

    @property
    def syllables(self) -> tuple[Syllable, ...]:
        return self.syllable_form().syllables

    @property
    def q(self) -> int:
        return len(self.syllables)

    def format(self) -> str:
        return self.word.format()


def cyclic_reduce(w: RelativeWord) -> tuple[CyclicWord, RelativeWord]:
    """Return ``(c, conj)`` with ``w = conj * c.word * conj^-1``."""
    prefix, core = cyclic_split(w.letters)
    k = least_rotation(core)
    conj = prefix + core[:k]
    return CyclicWord(RelativeWord(w.alphabet, core)), RelativeWord(w.alphabet, conj)


def as_cyclic(w: RelativeWord) -> CyclicWord:
    """Wrap an already cyclically reduced word, refusing anything else."""
    return CyclicWord(w)


CoefficientEqual = Callable[[FreeWord, FreeWord], Verdict]


def _normalise_cyclic_blocks(
    blocks: list[tuple[bool, FreeWord]], coefficient_equal: CoefficientEqual
) -> list[tuple[bool, FreeWord]]:
    """Remove coefficient blocks trivial in G and merge the neighbours."""
    changed = True
    while changed and len(blocks) > 1:
        changed = False
        for i, (is_var, word) in enumerate(blocks):
            trivial = not word
            if not is_var and word:
                verdict = coefficient_equal(word, EMPTY)
                if verdict is Verdict.UNKNOWN:
                    raise OracleUnknown(f"cannot decide whether coefficient {word!r} is trivial")
                trivial = verdict is Verdict.EQUAL
            if trivial:
                del blocks[i]
                if len(blocks) > 1:
                    j = i % len(blocks)
                    prev = (j - 1) % len(blocks)
                    merged = blocks[prev][1] * blocks[j][1]
                    blocks[prev] = (blocks[prev][0], merged)
                    del blocks[j]
                changed = True
                break
    return blocks


def conjugate_in_free_product(
    u: CyclicWord, v: CyclicWord, coefficient_equal: CoefficientEqual | None = None
) -> bool:
    """Conjugacy of cyclically reduced words as rotation equivalence.

    Without an oracle coefficient syllables are compared letter by letter.
    With ``coefficient_equal`` they are compared in G; undecided comparisons
    that could change the answer raise :class:`OracleUnknown`.
    """
    if u.alphabet != v.alphabet:
        raise ValueError("words over different alphabets")
    if coefficient_equal is None:
        return u.word.letters == v.word.letters

    def cyc_blocks(c: CyclicWord) -> list[tuple[bool, FreeWord]]:
        w = c.syllable_form()
        return [(is_var, w._var(cs) if is_var else w._coef(cs)) for is_var, cs in w.blocks()]

    bu = _normalise_cyclic_blocks(cyc_blocks(u), coefficient_equal)
    bv = _normalise_cyclic_blocks(cyc_blocks(v), coefficient_equal)
    if len(bu) != len(bv):
        return False
    if len(bu) <= 1 and not any(is_var for is_var, _ in bu + bv):
        # pure coefficients: conjugacy in G itself is out of reach
        gu = bu[0][1] if bu else EMPTY
        gv = bv[0][1] if bv else EMPTY
        doubled = gu.letters * 2
        for k in range(max(len(gu), 1)):
            if coefficient_equal(FreeWord(doubled[k : k + len(gu)]), gv) is Verdict.EQUAL:
                return True
        raise OracleUnknown("conjugacy of coefficient elements is not decided")
    undecided = False
    n = len(bu)
    for r in range(n):
        ok = True
        pending = False
        for i in range(n):
            a_var, a = bu[(i + r) % n]
            b_var, b = bv[i]
            if a_var != b_var:
                ok = False
                break
            if a_var:
                if a.letters != b.letters:
                    ok = False
                    break
            else:
                verdict = coefficient_equal(a, b)
                if verdict is Verdict.DISTINCT:
                    ok = False
                    break
                if verdict is Verdict.UNKNOWN:
                    pending = True
        if ok and not pending:
            return True
        if ok and pending:
            undecided = True
    if undecided:
        raise OracleUnknown("coefficient comparison undecided for some rotation")
    return False
