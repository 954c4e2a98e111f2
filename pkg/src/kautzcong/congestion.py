"""Exact per-edge congestion counts without materializing the graph.

For an edge e at layer k and position t, the walks of length k through e
are exactly the d^(k-1) flank completions of the edge-word, and a completion
is counted iff the endpoints' overlap is exactly D-k.  A longer overlap
D-k+p (p >= 2) holds iff the walk-word matches itself at shift p, which
splits into a fixed part (edge letters against edge letters) plus a pinned
suffix of the left flank and a pinned prefix of the right flank.  Pinned
suffix sets are laminar, as are pinned prefix sets, so the union of the
"bad" completions is countable exactly with a small amount of set algebra;
no per-completion enumeration ever happens.

A literal enumerator is kept alongside for cross-checking.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from typing import Callable, Dict, Iterator, Optional, Sequence, Union

from .errors import BudgetExceeded, PositionOutOfRange, TableInvariantError
from .graph import KautzEdge, _kautz_words, overlap
from .words import border_lengths, is_square_free

ENGINE_VERSION = "1"

#: Nominal flank-enumeration work (k * d^(k-1) units) allowed per desk run.
DESK_WORK_CAP = 2**36


def layer_work(d: int, k: int) -> int:
    return k * d ** (k - 1)


def _check_budget(work: int, budget_tier: str):
    if budget_tier == "long-run":
        return
    if budget_tier != "desk":
        raise ValueError(f"unknown budget tier {budget_tier!r}")
    if work > DESK_WORK_CAP:
        raise BudgetExceeded(required=work, cap=DESK_WORK_CAP)


@dataclass(frozen=True)
class LayerTable:
    """All N(e;k,t) for 1 <= t <= k <= D, with row sums and the total."""

    d: int
    D: int
    N: Dict[tuple[int, int], int]
    U: Dict[int, int]
    cong: int

    @classmethod
    def build(cls, d: int, D: int, rows: Dict[int, Sequence[int]]) -> "LayerTable":
        n: Dict[tuple[int, int], int] = {}
        u: Dict[int, int] = {}
        for k in range(1, D + 1):
            row = rows[k]
            if len(row) != k:
                raise TableInvariantError(f"layer {k} has {len(row)} entries")
            cap = d ** (k - 1)
            for t, val in enumerate(row, start=1):
                if not 0 <= val <= cap:
                    raise TableInvariantError(
                        f"N({k},{t})={val} outside [0, d^(k-1)={cap}]"
                    )
                n[(k, t)] = int(val)
            u[k] = sum(row)
        for k in range(2, D + 1):
            # U_{k-1} >= ((k-1)/(d k)) U_k, exactly
            if u[k - 1] * d * k < (k - 1) * u[k]:
                raise TableInvariantError(f"trimming chain fails at layer {k}")
        for k in range(1, D + 1):
            # U_k >= (k/D) d^-(D-k) U_D, exactly
            if u[k] * D * d ** (D - k) < k * u[D]:
                raise TableInvariantError(f"telescoped bound fails at layer {k}")
        return cls(d=d, D=D, N=n, U=u, cong=sum(u.values()))

    def row(self, k: int) -> list[int]:
        return [self.N[(k, t)] for t in range(1, k + 1)]

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "D": self.D,
            "rows": {str(k): self.row(k) for k in range(1, self.D + 1)},
            "U": {str(k): self.U[k] for k in range(1, self.D + 1)},
            "cong": self.cong,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "LayerTable":
        rows = {int(k): v for k, v in data["rows"].items()}
        return cls.build(int(data["d"]), int(data["D"]), rows)


@dataclass(frozen=True)
class DeficitTable:
    """Per-position shortfalls d^(D-1) - N(e;D,t) and their sum."""

    delta: Dict[int, int]
    total: int


def _pin_strings(a: Sequence[int], D: int, k: int, t: int, p: int):
    """Fixed-part check plus the flank letters pinned by shift p, or None.

    Returns (left_pin, right_pin) where left_pin is the forced suffix of the
    left flank and right_pin the forced prefix of the right flank, both as
    letter tuples; None when shift p cannot produce an overlap at all.
    """
    lo = max(k - p, t - 1)
    hi = min(D - 1, D + t - 1 - p)
    for m in range(lo, hi + 1):
        if a[m - t + 1] != a[m + p - t + 1]:
            return None
    lam = t - 1 - (k - p)
    if lam > 0:
        left = tuple(a[m + p - t + 1] for m in range(k - p, t - 1))
        if left[-1] == a[0]:  # junction letter would repeat
            return None
    else:
        left = ()
    rho = p - t
    if rho > 0:
        right = tuple(a[m - t + 1] for m in range(D + t - p, D))
        if right[0] == a[D]:
            return None
    else:
        right = ()
    return left, right


def _count_position(a: Sequence[int], d: int, D: int, k: int, t: int) -> int:
    """N(e;k,t): completions whose endpoint overlap is exactly D-k."""
    total = d ** (k - 1)
    pins: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for p in range(2, k + 1):
        got = _pin_strings(a, D, k, t, p)
        if got is None:
            continue
        if got == ((), ()):
            return 0  # every completion overshoots the overlap
        pins.append(got)
    if not pins:
        return total

    n_left_free = t - 1
    n_right_free = k - t

    # Left laminar forest over distinct pinned suffixes (root: empty pin).
    by_left: Dict[tuple[int, ...], list[tuple[int, ...]]] = {(): []}
    for left, right in pins:
        by_left.setdefault(left, []).append(right)
    nodes = sorted(by_left, key=len)

    def parent_of(s):
        best = ()
        for other in nodes:
            if other != s and len(other) < len(s) and s[len(s) - len(other) :] == other:
                if len(other) > len(best):
                    best = other
        return best

    parent = {s: parent_of(s) for s in nodes if s != ()}
    size = {s: d ** (n_left_free - len(s)) for s in nodes}
    atom = dict(size)
    for s, par in parent.items():
        atom[par] -= size[s]

    bad = 0
    for s in nodes:
        # Right pins active on this atom: own plus all ancestors'.
        active: list[tuple[int, ...]] = []
        cur = s
        while True:
            active.extend(by_left[cur])
            if cur == ():
                break
            cur = parent[cur]
        if not active or atom[s] == 0:
            continue
        # Union of prefix sets: keep only strings with no other active string
        # as a proper prefix; the survivors' sets are pairwise disjoint.
        uniq = sorted(set(active), key=len)
        kept: list[tuple[int, ...]] = []
        for r in uniq:
            if any(r[: len(q)] == q for q in kept):
                continue
            kept.append(r)
        covered = sum(d ** (n_right_free - len(r)) for r in kept)
        bad += atom[s] * covered
    return total - bad


def count_layer(e: KautzEdge, k: int, budget_tier: str = "desk") -> list[int]:
    """The vector N(e;k,t) for t = 1..k, all exact.

    >>> count_layer(KautzEdge.from_string("01202102", 2), 1)
    [1]
    """
    if not 1 <= k <= e.D:
        raise PositionOutOfRange(f"need 1 <= k <= D={e.D}, got {k}")
    _check_budget(layer_work(e.d, k), budget_tier)
    a = e.word.letters
    return [_count_position(a, e.d, e.D, k, t) for t in range(1, k + 1)]


def _count_layer_enumerated(e: KautzEdge, k: int) -> list[int]:
    """Literal flank enumeration; cross-check for the set-algebra counter."""
    d, D = e.d, e.D
    a = e.word.letters
    alphabet = range(d + 1)
    out = []
    for t in range(1, k + 1):
        lefts = [()]
        for _ in range(t - 1):  # grow leftwards from the edge-word
            lefts = [
                (c,) + L
                for L in lefts
                for c in alphabet
                if c != (L[0] if L else a[0])
            ]
        rights = [()]
        for _ in range(k - t):
            rights = [
                R + (c,)
                for R in rights
                for c in alphabet
                if c != (R[-1] if R else a[D])
            ]
        hits = 0
        for L in lefts:
            for R in rights:
                w = L + a + R
                if overlap(w[:D], w[k:]) == D - k:
                    hits += 1
        out.append(hits)
    return out


def congestion(e: KautzEdge, budget_tier: str = "desk") -> LayerTable:
    """Full LayerTable for one edge; invariants are verified on construction."""
    total_work = sum(layer_work(e.d, k) for k in range(1, e.D + 1))
    _check_budget(total_work, budget_tier)
    rows = {k: count_layer(e, k, budget_tier="long-run") for k in range(1, e.D + 1)}
    return LayerTable.build(e.d, e.D, rows)


def deficits(e: KautzEdge, budget_tier: str = "desk") -> DeficitTable:
    """Per-position deficits d^(D-1) - N(e;D,t) at the top layer."""
    _check_budget(layer_work(e.d, e.D), budget_tier)
    row = count_layer(e, e.D, budget_tier="long-run")
    cap = e.d ** (e.D - 1)
    delta = {t: cap - row[t - 1] for t in range(1, e.D + 1)}
    return DeficitTable(delta=delta, total=sum(delta.values()))


def is_full_row(e: KautzEdge, k: int, budget_tier: str = "desk") -> bool:
    """True iff N(e;k,t) = d^(k-1) for every position t."""
    cap = e.d ** (k - 1)
    return all(v == cap for v in count_layer(e, k, budget_tier))


def format_ratio(num: int, den: int, places: int) -> str:
    """num/den as a decimal string with the given places, half-even rounding."""
    q = Decimal(num) / Decimal(den)
    return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class EdgeRecord:
    word: str
    cong: int
    circular_square_free: bool
    unbordered: bool
    full_row: bool


@dataclass(frozen=True)
class ClassReport:
    """Per-edge records for one class scan, plus simple aggregates."""

    d: int
    D: int
    tau: int
    full_row_k: int
    records: tuple[EdgeRecord, ...]

    CSV_HEADER = "word,d,D,cong,tau,ratio,circular_square_free,unbordered,full_row_k"

    @property
    def count(self) -> int:
        return len(self.records)

    @property
    def min_cong(self) -> Optional[int]:
        return min((r.cong for r in self.records), default=None)

    @property
    def max_cong(self) -> Optional[int]:
        return max((r.cong for r in self.records), default=None)

    @property
    def mean_ratio(self) -> Optional[Fraction]:
        if not self.records:
            return None
        return Fraction(sum(r.cong for r in self.records), self.tau * self.count)

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.records:
            lines.append(
                ",".join(
                    [
                        r.word,
                        str(self.d),
                        str(self.D),
                        str(r.cong),
                        str(self.tau),
                        format_ratio(r.cong, self.tau, 4),
                        "true" if r.circular_square_free else "false",
                        "true" if r.unbordered else "false",
                        "true" if r.full_row else "false",
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, full_row_k: Optional[int] = None) -> "ClassReport":
        reader = csv.DictReader(io.StringIO(text))
        records = []
        d = D = tau = None
        for row in reader:
            d, D, tau = int(row["d"]), int(row["D"]), int(row["tau"])
            records.append(
                EdgeRecord(
                    word=row["word"],
                    cong=int(row["cong"]),
                    circular_square_free=row["circular_square_free"] == "true",
                    unbordered=row["unbordered"] == "true",
                    full_row=row["full_row_k"] == "true",
                )
            )
        if d is None:
            raise ValueError("empty report")
        return cls(
            d=d,
            D=D,
            tau=tau,
            full_row_k=full_row_k if full_row_k is not None else D - 2,
            records=tuple(records),
        )


ClassSpec = Union[str, Sequence[str], Callable[[KautzEdge], bool]]


def _parse_class_atoms(class_spec) -> tuple[Optional[int], list]:
    atoms = [class_spec] if isinstance(class_spec, str) else list(class_spec)
    flat = []
    for atom in atoms:
        flat.extend(s.strip() for s in atom.split(","))
    full_row_k = None
    checks = []
    for atom in flat:
        if atom == "all":
            continue
        if atom == "circular-square-free":
            checks.append(lambda e: is_square_free(e.word, circular=True))
        elif atom == "square-free":
            checks.append(lambda e: is_square_free(e.word))
        elif atom == "unbordered":
            checks.append(lambda e: not border_lengths(e.word))
        elif atom.startswith("full-row:"):
            full_row_k = int(atom.split(":", 1)[1])
        else:
            raise ValueError(f"unknown class atom {atom!r}")
    return full_row_k, checks


def edge_words(d: int, D: int) -> Iterator[str]:
    """All edge-words of K(d, D), lexicographically."""
    for w in _kautz_words(d + 1, D + 1):
        yield "".join(str(c) for c in w)


def scan_class(
    d: int,
    D: int,
    class_spec: ClassSpec = "all",
    budget_tier: str = "desk",
    threads: int = 1,
) -> ClassReport:
    """Enumerate the class over all edges and compute exact congestion per member."""
    from .bounds import makespan_tau

    if callable(class_spec):
        full_row_k, checks = None, None
        predicate = class_spec
    else:
        full_row_k, checks = _parse_class_atoms(class_spec)

        def predicate(e: KautzEdge) -> bool:
            if not all(chk(e) for chk in checks):
                return False
            if full_row_k is not None and not is_full_row(e, full_row_k, budget_tier):
                return False
            return True

    flag_k = full_row_k if full_row_k is not None else max(D - 2, 1)
    tau = makespan_tau(d, D)
    # Budget for the whole scan: one full congestion per member upper-bounds
    # the per-edge work, and the class filter itself is word-level only.
    total_work = sum(layer_work(d, k) for k in range(1, D + 1))
    _check_budget(total_work, budget_tier)

    def member(word: str) -> Optional[KautzEdge]:
        e = KautzEdge.from_string(word, d)
        return e if predicate(e) else None

    def record(e: KautzEdge) -> EdgeRecord:
        table = congestion(e, budget_tier=budget_tier)
        return EdgeRecord(
            word=str(e.word),
            cong=table.cong,
            circular_square_free=is_square_free(e.word, circular=True),
            unbordered=not border_lengths(e.word),
            full_row=is_full_row(e, flag_k, budget_tier),
        )

    members = [e for e in map(member, edge_words(d, D)) if e is not None]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = tuple(pool.map(record, members))
    else:
        records = tuple(record(e) for e in members)
    return ClassReport(d=d, D=D, tau=tau, full_row_k=flag_k, records=records)
