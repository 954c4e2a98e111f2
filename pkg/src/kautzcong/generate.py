"""Backtracking construction of circular power-free ternary words.

The search walks the 6-state automaton of adjacent-distinct letter pairs
{01, 02, 10, 12, 20, 21}, pruning any prefix that acquires a forbidden
repetition as a suffix, and applies the cyclic closure test to completed
words.  Exhausting the search without an emission proves that no circular
power-free word of that length exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterator, Optional, Sequence

from .errors import InvalidAlpha, NotCircularlyValid, WordTooShort
from .words import KautzWord, Letters, _as_letters, is_alpha_free

TERNARY = 3

#: The 6 legal two-letter states, in lexicographic order.
START_STATES = tuple(
    (a, b) for a in range(TERNARY) for b in range(TERNARY) if a != b
)


@dataclass(frozen=True)
class AutomatonState:
    """A node of the pair automaton: the last two (distinct) letters."""

    last_two: tuple[int, int]

    def __post_init__(self):
        a, b = self.last_two
        if a == b or not (0 <= a < TERNARY and 0 <= b < TERNARY):
            raise ValueError(f"illegal state {self.last_two}")

    def successors(self) -> tuple["AutomatonState", ...]:
        _, b = self.last_two
        return tuple(
            AutomatonState((b, c)) for c in range(TERNARY) if c != b
        )

    @staticmethod
    def legal_states() -> tuple["AutomatonState", ...]:
        return tuple(AutomatonState(s) for s in START_STATES)


@dataclass(frozen=True)
class GeneratorConfig:
    """Search parameters for one generation run.

    branch_order is "lexicographic" (exhaustive, sorted output) or
    "seeded-random" (reproducible sampling; start state fixed at 01 and
    successor order shuffled by a splitmix64 stream).
    """

    length: int
    alpha: Fraction
    strict: bool = False
    branch_order: str = "lexicographic"
    seed: int = 0
    limit: Optional[int] = None

    def __post_init__(self):
        if self.length < 2:
            raise WordTooShort("generated words have length >= 2")
        if Fraction(self.alpha) <= 1:
            raise InvalidAlpha(f"alpha must exceed 1, got {self.alpha}")
        if self.branch_order not in ("lexicographic", "seeded-random"):
            raise ValueError(f"unknown branch order {self.branch_order!r}")


class Splitmix64:
    """splitmix64 PRNG; fixed algorithm so seeded runs replay everywhere."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def shuffled(self, items: Sequence) -> list:
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def suffix_power_ok(prefix: Letters, alpha, strict: bool = False) -> bool:
    """True when no repetition ending at the last letter reaches alpha.

    For each candidate period p the longest periodic suffix is measured by
    walking backwards; its exponent is compared to alpha exactly.

    >>> suffix_power_ok("010", 2)
    True
    >>> suffix_power_ok("0101", 2)
    False
    """
    a = _as_letters(prefix)
    alpha = Fraction(alpha)
    if alpha <= 1:
        raise InvalidAlpha(f"alpha must exceed 1, got {alpha}")
    return _suffix_ok(a, len(a), alpha.numerator, alpha.denominator, strict)


def _suffix_ok(a: Sequence[int], length: int, num: int, den: int, strict: bool) -> bool:
    # Periods beyond length*den/num can never reach exponent num/den.
    max_p = (length * den) // num
    for p in range(1, max_p + 1):
        i = length - 1 - p
        while i >= 0 and a[i] == a[i + p]:
            i -= 1
        total = length - 1 - i  # longest period-p suffix
        if (total * den > p * num) if strict else (total * den >= p * num):
            return False
    return True


def _cyclic_ok(a: Sequence[int], alpha: Fraction, strict: bool) -> bool:
    return is_alpha_free(a, alpha, strict=strict, circular=True)


def generate(config: GeneratorConfig) -> Iterator[KautzWord]:
    """Stream all (or `limit`) circular alpha-free ternary words of the length.

    With lexicographic branch order the stream is the sorted set of all such
    words; an exhausted empty stream is a nonexistence proof for that length.
    """
    alpha = Fraction(config.alpha)
    num, den = alpha.numerator, alpha.denominator
    n = config.length
    limit = config.limit
    emitted = 0

    rng = None
    if config.branch_order == "seeded-random":
        rng = Splitmix64(config.seed)
        starts = [(0, 1)]
    else:
        starts = list(START_STATES)

    succ = {c: tuple(x for x in range(TERNARY) if x != c) for c in range(TERNARY)}

    for start in starts:
        word = list(start)
        if not _suffix_ok(word, 2, num, den, config.strict):
            continue
        if n == 2:
            if _cyclic_ok(word, alpha, config.strict):
                yield KautzWord(tuple(word), TERNARY)
                emitted += 1
                if limit is not None and emitted >= limit:
                    return
            continue
        # Iterative DFS: stack holds the pending letter choices per depth.
        stack = [list(succ[word[-1]]) if rng is None else rng.shuffled(succ[word[-1]])]
        while stack:
            options = stack[-1]
            if not options:
                stack.pop()
                word.pop()
                continue
            c = options.pop(0)
            word.append(c)
            if not _suffix_ok(word, len(word), num, den, config.strict):
                word.pop()
                continue
            if len(word) == n:
                if _cyclic_ok(word, alpha, config.strict):
                    yield KautzWord(tuple(word), TERNARY)
                    emitted += 1
                    if limit is not None and emitted >= limit:
                        return
                word.pop()
                continue
            nxt = list(succ[c]) if rng is None else rng.shuffled(succ[c])
            stack.append(nxt)


def generate_words(
    length: int,
    alpha,
    strict: bool = False,
    limit: Optional[int] = None,
    seed: Optional[int] = None,
) -> Iterator[KautzWord]:
    """Convenience wrapper building the config from plain arguments."""
    cfg = GeneratorConfig(
        length=length,
        alpha=Fraction(alpha),
        strict=strict,
        branch_order="lexicographic" if seed is None else "seeded-random",
        seed=0 if seed is None else seed,
        limit=limit,
    )
    return generate(cfg)


def canonicalize(w: Letters) -> KautzWord:
    """Least word over all rotations composed with all 6 letter relabelings.

    Words related by rotation or relabeling share one canonical form, and the
    map is idempotent.  Requires every rotation to be a legal word (last and
    first letter must differ).
    """
    a = _as_letters(w)
    n = len(a)
    if n >= 2 and a[0] == a[-1]:
        raise NotCircularlyValid("first and last letter equal; rotations are illegal")
    best = None
    for rot in range(n):
        rotated = a[rot:] + a[:rot]
        for perm in permutations(range(TERNARY)):
            candidate = tuple(perm[c] for c in rotated)
            if best is None or candidate < best:
                best = candidate
    return KautzWord(best, TERNARY)
