"""Closed-form quantities and certificate checks, all in exact arithmetic.

The central quantity is the weighted overlap sparsity of an edge-word: small
sparsity forces the top-layer geodesic count U_D close to its maximum, and a
trimming argument then pushes the total congestion above the regular-routing
makespan tau(d, D).  Every verdict here is computed with Fractions; no float
ever enters a comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, Optional

from .errors import PreconditionViolated, WrongOutdegree
from .graph import KautzEdge
from .words import _admissible_r_values, border_lengths, is_square_free

SIDES = ("forward", "reversed", "two-sided-max")


def makespan_tau(d: int, D: int) -> int:
    """Makespan (D-1) d^(D-2) + D d^(D-1) of the regular routing scheme.

    >>> makespan_tau(2, 11)
    16384
    """
    return (D - 1) * d ** (D - 2) + D * d ** (D - 1)


def _rt_map(letters, D: int) -> Dict[int, tuple[int, ...]]:
    """R_t for t = 1..ceil((D+1)/2); positions past (n-1)/2 are empty sets."""
    top = (D + 1 + 1) // 2  # ceil((D+1)/2)
    return {t: tuple(_admissible_r_values(letters, t)) for t in range(1, top + 1)}


def _omega(rt: Dict[int, tuple[int, ...]], d: int) -> Fraction:
    return sum(
        (Fraction(1, d ** (r - t)) for t, rs in rt.items() for r in rs),
        Fraction(0),
    )


@dataclass(frozen=True)
class SparsityReport:
    """Admissible-overlap structure of one edge and the bounds derived from it."""

    edge: KautzEdge
    side: str
    per_position: Dict[int, tuple[int, ...]]
    omega: Fraction
    omega_forward: Fraction
    omega_reversed: Fraction
    delta_bound: int
    sufficiency: Optional[bool]

    def to_json_dict(self) -> dict:
        frac = lambda q: f"{q.numerator}/{q.denominator}"
        return {
            "word": str(self.edge.word),
            "d": self.edge.d,
            "D": self.edge.D,
            "side": self.side,
            "per_position": {str(t): list(rs) for t, rs in self.per_position.items()},
            "omega": frac(self.omega),
            "omega_forward": frac(self.omega_forward),
            "omega_reversed": frac(self.omega_reversed),
            "delta_bound": self.delta_bound,
            "sufficiency": self.sufficiency,
        }


def _require_unbordered_square_free(e: KautzEdge):
    if border_lengths(e.word):
        raise PreconditionViolated("bordered")
    if not is_square_free(e.word):
        raise PreconditionViolated("contains-square")


def weighted_sparsity(e: KautzEdge, side: str = "forward") -> SparsityReport:
    """Exact-rational sparsity report for an unbordered square-free edge-word.

    forward reads overlap sets off the word as given (suffix side), reversed
    reads them off the reversed word, and two-sided-max takes the larger of
    the two sparsity values; the deficit bound 2 d^(D-1) omega is only sound
    for two-sided-max, since positions past the midpoint mirror onto the
    reversed word's overlap structure.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}, got {side!r}")
    _require_unbordered_square_free(e)
    d, D = e.d, e.D
    fwd = _rt_map(e.word.letters, D)
    rev = _rt_map(e.word.letters[::-1], D)
    omega_fwd = _omega(fwd, d)
    omega_rev = _omega(rev, d)
    if side == "forward":
        omega, per_position = omega_fwd, fwd
    elif side == "reversed":
        omega, per_position = omega_rev, rev
    else:
        omega = max(omega_fwd, omega_rev)
        per_position = fwd if omega_fwd >= omega_rev else rev
    bound = 2 * d ** (D - 1) * omega
    assert bound.denominator == 1
    sufficiency = None
    if d == 2 and D > 3:
        sufficiency = omega < Fraction(D - 3, 8)
    return SparsityReport(
        edge=e,
        side=side,
        per_position=per_position,
        omega=omega,
        omega_forward=omega_fwd,
        omega_reversed=omega_rev,
        delta_bound=int(bound),
        sufficiency=sufficiency,
    )


def sufficiency_check(e: KautzEdge, side: str = "two-sided-max") -> bool:
    """True certifies cong(e) > tau(2, D) without any enumeration.

    Only meaningful at outdegree 2 and D > 3; the default two-sided-max side
    keeps the certificate sound.  False says nothing either way.
    """
    if e.d != 2:
        raise WrongOutdegree(f"the sufficiency certificate needs d=2, got d={e.d}")
    if e.D <= 3:
        raise PreconditionViolated("needs D > 3")
    report = weighted_sparsity(e, side=side)
    return report.omega < Fraction(e.D - 3, 8)


@dataclass(frozen=True)
class BoundCertificate:
    """Congestion lower bound propagated from the top layer count U_D."""

    U_D: int
    cong_lower: Fraction
    tau: int
    beats_tau: bool
    C_d: Fraction
    D0: int

    def to_json_dict(self) -> dict:
        return {
            "U_D": self.U_D,
            "cong_lower": f"{self.cong_lower.numerator}/{self.cong_lower.denominator}",
            "tau": self.tau,
            "beats_tau": self.beats_tau,
            "C_d": f"{self.C_d.numerator}/{self.C_d.denominator}",
            "D0": self.D0,
        }


def thresholds(d: int) -> tuple[Fraction, int]:
    """(C_d, D0): the universal sparsity ceiling 8/(d-1) and the diameter
    from which it forces congestion above the makespan."""
    if d < 2:
        raise WrongOutdegree("need d >= 2")
    c_d = Fraction(8, d - 1)
    d0 = ceil(Fraction(8 * d * d + 2 * d - 1, d - 1))
    return c_d, d0


def cong_lower_bound(U_D: int, d: int, D: int) -> BoundCertificate:
    """cong >= (d/(d-1)) (1 - 1/(D(d-1))) U_D, exactly; compares against tau."""
    if U_D < 0:
        raise PreconditionViolated("U_D must be non-negative")
    lower = Fraction(d, d - 1) * (1 - Fraction(1, D * (d - 1))) * U_D
    tau = makespan_tau(d, D)
    c_d, d0 = thresholds(d)
    return BoundCertificate(
        U_D=U_D,
        cong_lower=lower,
        tau=tau,
        beats_tau=lower > tau,
        C_d=c_d,
        D0=d0,
    )


def ud_lower_bound(e: KautzEdge, side: str = "two-sided-max") -> int:
    """ceil((D - 2*omega) d^(D-1)): guaranteed geodesics of length D through e."""
    report = weighted_sparsity(e, side=side)
    d, D = e.d, e.D
    value = (D - 2 * report.omega) * d ** (D - 1)
    return ceil(value)


def ud_lower_bound_74(d: int, D: int) -> Fraction:
    """Universal top-layer bound (D - 8/(d-1)) d^(D-1) for unbordered words
    free of repetitions above exponent 7/4."""
    c_d, _ = thresholds(d)
    return (D - c_d) * d ** (D - 1)
