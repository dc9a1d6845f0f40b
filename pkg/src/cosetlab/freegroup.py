"""Exact arithmetic in the free group on generators x_i indexed by integers.

The group F is free on generators x_i, i in Z.  The shift automorphism
tau_n sends x_m to x_{m+n}; the semidirect product Z |x F built from it
has elements (shift, word) multiplying by (m, x)(n, y) = (m + n, x * tau_m(y)).
Membership in the normal closure of {x_i : i <= n} is decided by the
retraction that deletes every letter of index <= n: the quotient by that
normal closure is free on the surviving generators, so the normal closure
is exactly the retraction's kernel.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Tuple


class Letter(NamedTuple):
    """One generator occurrence x_index ** exponent with exponent +1 or -1."""

    index: int
    exponent: int


class Word:
    """A reduced word in the generators x_i.  Immutable and hashable.

    The empty word is the group identity.  The constructor validates
    reducedness; use reduce() to build a Word from an arbitrary letter
    sequence.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Tuple[int, int]] = ()):
        letters = tuple(Letter(int(i), int(e)) for (i, e) in letters)
        for (_, e) in letters:
            if e not in (-1, 1):
                raise ValueError(f"letter exponent must be +1 or -1, got {e}")
        for a, b in zip(letters, letters[1:]):
            if a.index == b.index and a.exponent == -b.exponent:
                raise ValueError(f"word is not reduced at x{a.index}")
        self.letters = letters
        self._hash = hash(letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"


IDENTITY = Word(())


def reduce(raw: Iterable[Tuple[int, int]]) -> Word:
    """Free-reduce a letter sequence; idempotent on already-reduced input."""
    out: list[Tuple[int, int]] = []
    for (i, e) in raw:
        i, e = int(i), int(e)
        if e not in (-1, 1):
            raise ValueError(f"letter exponent must be +1 or -1, got {e}")
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    return Word(out)


def w_mul(u: Word, v: Word) -> Word:
    """Product of two reduced words, reduced."""
    out = list(u.letters)
    for (i, e) in v.letters:
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    return Word(out)


def w_inv(u: Word) -> Word:
    """Inverse of a reduced word (reversal with flipped exponents)."""
    return Word([(i, -e) for (i, e) in reversed(u.letters)])


def shift_word(n: int, u: Word) -> Word:
    """Apply the shift automorphism tau_n: every letter index moves by n."""
    return Word([(i + n, e) for (i, e) in u.letters])


class GElement:
    """An element (shift, word) of the semidirect product Z |x F."""

    __slots__ = ("shift", "word", "_hash")

    def __init__(self, shift: int, word: Word):
        if not isinstance(word, Word):
            raise TypeError(f"word must be a Word, got {type(word).__name__}")
        self.shift = int(shift)
        self.word = word
        self._hash = hash((self.shift, word))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, GElement)
            and self.shift == other.shift
            and self.word == other.word
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GElement({format_gelement(self)!r})"


G_IDENTITY = GElement(0, IDENTITY)


def g_mul(a: GElement, b: GElement) -> GElement:
    """(m, x)(n, y) = (m + n, x * tau_m(y))."""
    return GElement(a.shift + b.shift, w_mul(a.word, shift_word(a.shift, b.word)))


def g_inv(a: GElement) -> GElement:
    """(n, x)^-1 = (-n, tau_{-n}(x^-1))."""
    return GElement(-a.shift, shift_word(-a.shift, w_inv(a.word)))


def retract(u: Word, n: int) -> Word:
    """Delete every letter of index <= n and free-reduce the remainder.

    This is the homomorphism F -> F killing x_i for i <= n; its kernel is
    the normal closure of those generators.
    """
    out: list[Tuple[int, int]] = []
    for (i, e) in u.letters:
        if i <= n:
            continue
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    return Word(out)


def gamma_member(u: Word, n: int) -> bool:
    """True iff u lies in the normal closure of {x_i : i <= n}."""
    return not retract(u, n)


def minimal_level(u: Word) -> int:
    """The least n with gamma_member(u, n); always <= max letter index.

    Undefined for the identity (it lies in every normal closure), which
    raises ValueError.
    """
    if not u.letters:
        raise ValueError("minimal level of the identity word is undefined")
    indices = [i for (i, _) in u.letters]
    for n in range(min(indices), max(indices) + 1):
        if gamma_member(u, n):
            return n
    return max(indices)  # unreachable: retraction at the max index kills u


_LETTER_RE = re.compile(r"^x(-?\d+)(?:\^(-?\d+))?$")
_T_RE = re.compile(r"^t(?:\^(-?\d+))?$")
_PAIR_RE = re.compile(r"^\(\s*(-?\d+)\s*;(.*)\)$")


def parse_word(text: str) -> Word:
    """Parse a word literal: whitespace-separated `x<index>` tokens with an
    optional `^<exponent>` suffix, or `e` alone for the identity.

    Exponents beyond +-1 are expanded into letter runs; the result is reduced.
    """
    tokens = text.split()
    if not tokens:
        raise ValueError("empty word literal (use 'e' for the identity)")
    if tokens == ["e"]:
        return IDENTITY
    raw: list[Tuple[int, int]] = []
    for pos, tok in enumerate(tokens):
        m = _LETTER_RE.match(tok)
        if m is None:
            raise ValueError(f"bad word token {tok!r} at position {pos}")
        idx = int(m.group(1))
        exp = 1 if m.group(2) is None else int(m.group(2))
        sign = 1 if exp >= 0 else -1
        raw.extend((idx, sign) for _ in range(abs(exp)))
    return reduce(raw)


def format_word(u: Word) -> str:
    """Literal form of a word, parseable by parse_word."""
    if not u.letters:
        return "e"
    return " ".join(f"x{i}" if e == 1 else f"x{i}^-1" for (i, e) in u.letters)


def parse_gelement(text: str) -> GElement:
    """Parse an element literal: `(n; <word>)`, a bare word (shift 0), or
    the shorthand `t` / `t^k` for (k; e)."""
    s = text.strip()
    if not s:
        raise ValueError("empty element literal")
    m = _T_RE.match(s)
    if m:
        return GElement(1 if m.group(1) is None else int(m.group(1)), IDENTITY)
    m = _PAIR_RE.match(s)
    if m:
        shift = int(m.group(1))
        body = m.group(2).strip()
        word = IDENTITY if body in ("", "e") else parse_word(body)
        return GElement(shift, word)
    return GElement(0, parse_word(s))


def format_gelement(a: GElement) -> str:
    """Literal form of a group element, parseable by parse_gelement."""
    return f"({a.shift}; {format_word(a.word)})"
