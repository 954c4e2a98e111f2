"""Alphabet-generic word arithmetic for Kautz-style words.

Words here are finite sequences over {0, ..., alphabet_size-1} in which
adjacent letters differ.  A length-D word is a vertex, a length-(D+1) word
is an edge-word, and longer words encode walks.  This module knows nothing
about graphs; it provides validity checking, border detection, repetition
(power) detection with exact rational exponent thresholds, and the
admissible-overlap machinery used by the congestion bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    AdjacentRepeat,
    EmptyWord,
    InvalidAlpha,
    PositionOutOfRange,
    SymbolOutOfRange,
    WordTooShort,
)

Letters = Union["KautzWord", str, Sequence[int]]


def _as_letters(word: Letters) -> tuple[int, ...]:
    """Coerce a word-like argument to a tuple of ints, without validity checks."""
    if isinstance(word, KautzWord):
        return word.letters
    if isinstance(word, str):
        return tuple(int(c) for c in word)
    return tuple(int(c) for c in word)


@dataclass(frozen=True)
class KautzWord:
    """An adjacent-distinct word over {0, ..., alphabet_size-1}.

    >>> str(KautzWord.parse("01202102", 3))
    '01202102'
    """

    letters: tuple[int, ...]
    alphabet_size: int

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise SymbolOutOfRange(0)
        if len(self.letters) == 0:
            raise EmptyWord("a word must contain at least one letter")
        for i, c in enumerate(self.letters):
            if not 0 <= c < self.alphabet_size:
                raise SymbolOutOfRange(i)
        for i in range(len(self.letters) - 1):
            if self.letters[i] == self.letters[i + 1]:
                raise AdjacentRepeat(i)

    @classmethod
    def parse(cls, word: Letters, alphabet_size: int) -> "KautzWord":
        return cls(_as_letters(word), alphabet_size)

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __str__(self) -> str:
        return "".join(str(c) for c in self.letters)

    def reversed(self) -> "KautzWord":
        return KautzWord(self.letters[::-1], self.alphabet_size)


def validate_kautz(letters: Letters, alphabet_size: int) -> KautzWord:
    """Check the adjacent-distinct and alphabet invariants; return the word.

    Raises EmptyWord, SymbolOutOfRange(index) or AdjacentRepeat(index).
    """
    return KautzWord.parse(letters, alphabet_size)


def border_lengths(w: Letters) -> set[int]:
    """All lengths ell in [1, n-1] where the prefix equals the suffix.

    The word is unbordered iff the returned set is empty.

    >>> sorted(border_lengths("0121020"))
    [1]
    >>> border_lengths("01202102")
    set()
    """
    a = _as_letters(w)
    n = len(a)
    if n < 2:
        raise WordTooShort("border detection needs at least 2 letters")
    return {ell for ell in range(1, n) if a[:ell] == a[n - ell :]}


@dataclass(frozen=True)
class PowerOccurrence:
    """A located repetition x^k y: start index, period |x|, total length |x^k y|."""

    start: int
    period: int
    total_length: int

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.total_length, self.period)


def _alpha_fraction(alpha) -> Fraction:
    a = Fraction(alpha)
    if a <= 1:
        raise InvalidAlpha(f"alpha must exceed 1, got {a}")
    return a


def find_power(
    w: Letters,
    alpha,
    strict: bool = False,
    circular: bool = False,
) -> Optional[PowerOccurrence]:
    """Find a repetition whose exponent reaches alpha (or exceeds it if strict).

    The scan tries start positions in increasing order and, per start, periods
    in increasing order; the first hit is returned with its maximal extension,
    so the result is deterministic.  With circular=True the doubled word is
    scanned with start < n, and occurrences are capped at n letters total so
    that every reported repetition lies inside a single cyclic rotation.

    Returns None when the word is alpha-free (alpha+-free if strict).

    >>> find_power("0101", 2)
    PowerOccurrence(start=0, period=2, total_length=4)
    >>> find_power("010", 2) is None
    True
    """
    a = _as_letters(w)
    alpha = _alpha_fraction(alpha)
    n = len(a)
    scan = a + a if circular else a
    m = len(scan)
    num, den = alpha.numerator, alpha.denominator
    for s in range(n if circular else n - 1):
        for p in range(1, (m - s) if circular else (n - s)):
            if s + p >= m:
                break
            # Longest extension with period p starting at s.
            ext = 0
            while s + p + ext < m and scan[s + ext] == scan[s + p + ext]:
                ext += 1
            total = p + ext
            if circular and total > n:
                total = n
            # exponent total/p >= alpha  <=>  total*den >= p*num (exact)
            hit = total * den > p * num if strict else total * den >= p * num
            if hit:
                return PowerOccurrence(start=s, period=p, total_length=total)
    return None


def is_alpha_free(w: Letters, alpha, strict: bool = False, circular: bool = False) -> bool:
    return find_power(w, alpha, strict=strict, circular=circular) is None


def is_square_free(w: Letters, circular: bool = False) -> bool:
    return is_alpha_free(w, 2, strict=False, circular=circular)


def is_74plus_free(w: Letters, circular: bool = False) -> bool:
    """True when no repetition has exponent strictly above 7/4."""
    return is_alpha_free(w, Fraction(7, 4), strict=True, circular=circular)


@dataclass(frozen=True)
class AdmissibleOverlapSet:
    """The overlap lengths r realizable at position t for a given word."""

    t: int
    values: tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __contains__(self, r: int) -> bool:
        return r in self.values

    def as_set(self) -> set[int]:
        return set(self.values)


def _admissible_r_values(a: Sequence[int], t: int) -> list[int]:
    """Admissible overlap lengths for any t >= 1; empty when the range is empty.

    r in {t+1, ..., n-t-1} is admissible iff the length-t suffix B reoccurs
    ending r positions before the end, i.e. w = A B V B with |B| = t,
    |BV| = r, V non-empty (and then |A| = n - r - t >= 1 automatically).
    """
    n = len(a)
    suffix = tuple(a[n - t :])
    out = []
    for r in range(t + 1, n - t):
        if tuple(a[n - r - t : n - r]) == suffix:
            out.append(r)
    return out


def admissible_overlaps(w: Letters, t: int) -> AdmissibleOverlapSet:
    """The set R_t of admissible overlap lengths at position t.

    >>> admissible_overlaps("01202102", 2).values
    (3,)
    """
    a = _as_letters(w)
    n = len(a)
    if not (1 <= t and 2 * t <= n - 1):
        raise PositionOutOfRange(f"need 1 <= t <= (n-1)/2, got t={t} for n={n}")
    return AdmissibleOverlapSet(t=t, values=tuple(_admissible_r_values(a, t)))


@dataclass(frozen=True)
class OverlapTemplate:
    """The factorization w = A.B.V.B behind an admissible overlap (t, r).

    cost = r - t = |V| is the number of flank letters forced when the
    pattern is realized inside a length-2D walk-word; those letters occupy
    walk positions D+t .. D+r-1 (recorded in forced_positions).
    """

    t: int
    r: int
    a_part: str
    b_part: str
    v_part: str
    forced_positions: tuple[int, ...] = field(default=())

    @property
    def cost(self) -> int:
        return self.r - self.t


def overlap_template(w: Letters, t: int, r: int) -> OverlapTemplate:
    """Build the unique template for an admissible (t, r); error otherwise."""
    a = _as_letters(w)
    n = len(a)
    if r not in admissible_overlaps(w, t):
        raise PositionOutOfRange(f"r={r} is not admissible at t={t}")
    fmt = lambda seq: "".join(str(c) for c in seq)
    big_d = n - 1
    return OverlapTemplate(
        t=t,
        r=r,
        a_part=fmt(a[: n - r - t]),
        b_part=fmt(a[n - t :]),
        v_part=fmt(a[n - r : n - t]),
        forced_positions=tuple(range(big_d + t, big_d + r)),
    )


def templates(w: Letters, t: int) -> list[OverlapTemplate]:
    return [overlap_template(w, t, r) for r in admissible_overlaps(w, t)]
