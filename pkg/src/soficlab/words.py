"""Formal words over a symmetric alphabet, the integral group ring, and Fox calculus.

Words are kept freely reduced at all times and are hashable, so they can key
group-ring supports.  No word problem is ever solved here: two words that are
equal in some quotient group stay distinct keys; everything downstream
identifies them through a permutation action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class Alphabet:
    """A finite symmetric generating alphabet.

    Generators are single lowercase letters; the corresponding uppercase
    letter denotes the inverse in the textual syntax (``abAB`` = a b a^-1 b^-1).
    """

    def __init__(self, names: str | Iterable[str]):
        names = list(names)
        if not names:
            raise ValueError("alphabet needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError("generator labels must be distinct")
        for name in names:
            if len(name) != 1 or not name.isalpha() or not name.islower():
                raise ValueError(f"generator label must be a lowercase letter: {name!r}")
        self.names = names
        self.rank = len(names)
        self._index = {name: i for i, name in enumerate(names)}

    def index(self, name: str) -> int:
        return self._index[name]

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.names)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self) -> int:
        return hash(tuple(self.names))


def _reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for gen, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"letter sign must be +1 or -1, got {sign}")
        if stack and stack[-1][0] == gen and stack[-1][1] == -sign:
            stack.pop()
        else:
            stack.append((gen, sign))
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; ``letters`` is a tuple of (generator index, sign)."""

    letters: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(_reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple((gen, -sign) for gen, sign in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def format(self, alphabet: Alphabet) -> str:
        if not self.letters:
            return "1"
        out = []
        for gen, sign in self.letters:
            name = alphabet.names[gen]
            out.append(name if sign > 0 else name.upper())
        return "".join(out)

    def __repr__(self) -> str:
        return f"Word({self.letters!r})"


IDENTITY = Word()


def free_reduce(letters: Iterable[tuple[int, int]]) -> Word:
    """Freely reduce a raw letter sequence into a Word."""
    return Word(_reduce(letters))


def generator(i: int, sign: int = 1) -> Word:
    return Word(((i, sign),))


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse the juxtaposition syntax: ``a`` a generator, ``A`` its inverse, ``1`` identity."""
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY
    letters = []
    for ch in text:
        if ch.isspace():
            continue
        low = ch.lower()
        if low not in alphabet._index:
            raise ValueError(f"unknown letter {ch!r} for alphabet {alphabet!r}")
        letters.append((alphabet.index(low), 1 if ch.islower() else -1))
    return free_reduce(letters)


class GroupRingElement:
    """A finitely supported formal integer combination of reduced words.

    Coefficients are Python ints (arbitrary precision); zero coefficients are
    never stored.
    """

    __slots__ = ("support",)

    def __init__(self, support: dict[Word, int] | None = None):
        self.support = {w: c for w, c in (support or {}).items() if c != 0}

    @classmethod
    def zero(cls) -> "GroupRingElement":
        return cls()

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls({IDENTITY: 1})

    @classmethod
    def of(cls, word: Word, coeff: int = 1) -> "GroupRingElement":
        return cls({word: coeff})

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.support)
        for w, c in other.support.items():
            out[w] = out.get(w, 0) + c
        return GroupRingElement(out)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "GroupRingElement":
        return GroupRingElement({w: k * c for w, c in self.support.items()})

    def __neg__(self) -> "GroupRingElement":
        return self.scale(-1)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        out: dict[Word, int] = {}
        for u, cu in self.support.items():
            for v, cv in other.support.items():
                w = u * v
                out[w] = out.get(w, 0) + cu * cv
        return GroupRingElement(out)

    def involution(self) -> "GroupRingElement":
        """Apply g -> g^-1 entrywise (the standard anti-automorphism)."""
        return GroupRingElement({w.inverse(): c for w, c in self.support.items()})

    def translate(self, word: Word) -> "GroupRingElement":
        """Left-multiply every support word by ``word``."""
        return GroupRingElement({word * w: c for w, c in self.support.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.support == other.support

    def __hash__(self) -> int:
        return hash(frozenset(self.support.items()))

    def format(self, alphabet: Alphabet) -> str:
        if not self.support:
            return "0"
        parts = []
        for w, c in sorted(self.support.items(), key=lambda kv: (len(kv[0]), kv[0].letters)):
            text = w.format(alphabet)
            if c == 1:
                term = text
            elif c == -1:
                term = f"-{text}"
            else:
                term = f"{c}{text}" if text != "1" else str(c)
            if c == 1 and text == "1":
                term = "1"
            parts.append(term)
        joined = " + ".join(parts).replace("+ -", "- ")
        return joined

    def __repr__(self) -> str:
        return f"GroupRingElement({self.support!r})"


def parse_ring_element(text: str, alphabet: Alphabet) -> GroupRingElement:
    """Parse e.g. ``"1 - A"`` (= 1 - a^-1) or ``"2ab + 3"``."""
    text = text.replace(" ", "")
    if not text:
        return GroupRingElement.zero()
    out = GroupRingElement.zero()
    i, n = 0, len(text)
    sign = 1
    while i < n:
        if text[i] == "+":
            sign = 1
            i += 1
            continue
        if text[i] == "-":
            sign = -1
            i += 1
            continue
        j = i
        while j < n and text[j].isdigit():
            j += 1
        coeff = int(text[i:j]) if j > i else 1
        i = j
        while j < n and text[j].isalpha():
            j += 1
        word = parse_word(text[i:j], alphabet) if j > i else IDENTITY
        out = out + GroupRingElement.of(word, sign * coeff)
        i = j
        sign = 1
    return out


class GroupRingMatrix:
    """An r x s matrix of group-ring elements (right-convolution convention)."""

    def __init__(self, entries: list[list[GroupRingElement]]):
        if not entries or not entries[0]:
            raise ValueError("matrix dimensions must be positive")
        s = len(entries[0])
        if any(len(row) != s for row in entries):
            raise ValueError("ragged matrix")
        self.entries = entries
        self.rows = len(entries)
        self.cols = s

    def __getitem__(self, ij: tuple[int, int]) -> GroupRingElement:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = GroupRingElement.zero()
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return GroupRingMatrix(out)

    def support_words(self) -> set[Word]:
        words = set()
        for row in self.entries:
            for e in row:
                words.update(e.support)
        return words

    def involution(self) -> "GroupRingMatrix":
        return GroupRingMatrix(
            [[e.involution() for e in row] for row in self.entries]
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingMatrix) and self.entries == other.entries


class Presentation:
    """A finite presentation: alphabet plus a list of reduced relator words."""

    def __init__(self, alphabet: Alphabet, relators: list[Word]):
        self.alphabet = alphabet
        self.relators = [Word(_reduce(r.letters)) for r in relators]

    @classmethod
    def parse(cls, generators: str, relators: list[str]) -> "Presentation":
        alphabet = Alphabet(generators)
        return cls(alphabet, [parse_word(r, alphabet) for r in relators])

    @classmethod
    def free(cls, rank: int) -> "Presentation":
        return cls(Alphabet("abcdefghijklmnopqrstuvwxyz"[:rank]), [])

    def __repr__(self) -> str:
        rels = [r.format(self.alphabet) for r in self.relators]
        return f"Presentation(<{''.join(self.alphabet.names)} | {', '.join(rels)}>)"


def fox_derivative(word: Word, gen: int) -> GroupRingElement:
    """Free differential of a reduced word with respect to generator ``gen``.

    Satisfies d(uv) = du + u dv, d(s)/ds = 1, d(s^-1)/ds = -s^-1, and
    d(t^+-1)/ds = 0 for t != s.
    """
    result = GroupRingElement.zero()
    prefix = IDENTITY
    for g, sign in word:
        if g == gen:
            if sign > 0:
                # d(s)/ds = 1, translated by the prefix
                result = result + GroupRingElement.of(prefix)
            else:
                # d(s^-1)/ds = -s^-1
                result = result + GroupRingElement.of(prefix * generator(g, -1), -1)
        prefix = prefix * generator(g, sign)
    return result
