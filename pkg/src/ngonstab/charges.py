"""Exact charge and phase arithmetic for cycles of projective lines.

The Grothendieck group of a cycle E_n of n projective lines is Z^{n+1},
with basis the point class e0 and the n component classes e_i given by
O(-1) on each line.  The classical central charge sends a class with
Euler characteristic chi and total rank r to the Gaussian integer
-chi + i*r, so its image is the full rank-2 lattice no matter what n is.

Phases are never floats here.  A phase is stored as a primitive lattice
direction together with an even integer shift, and comparisons are done
by sector index plus one exact cross-product / ratio test.  The branch
window is (0, 2] with the discontinuity on the positive real axis:
directions in the closed upper half plane H' = {im > 0} u {im = 0, re < 0}
carry phases in (0, 1], their negatives carry (1, 2].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

__all__ = [
    "KClass",
    "ChargeVec",
    "PhasePoint",
    "Slope",
    "StabilityDatum",
    "charge",
    "in_kernel",
    "phase_of_charge",
    "slope_phase_convert",
    "slope_to_phase",
    "compare_phase",
    "act_relabel",
    "add_half_turns",
    "in_h_prime",
    "primitive",
    "phase_sort_key",
]

# A charge is the exact value of the central charge as a pair of integers
# (re, im) = (-chi, rk_tot).
ChargeVec = tuple[int, int]


def in_h_prime(c: ChargeVec) -> bool:
    """Membership in H' = upper half plane plus the negative real ray."""
    re, im = c
    return im > 0 or (im == 0 and re < 0)


def primitive(c: ChargeVec) -> ChargeVec:
    """Divide a nonzero integer vector by the gcd of its entries."""
    re, im = c
    g = gcd(re, im)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return (re // g, im // g)


@dataclass(frozen=True)
class KClass:
    """A K-group element chi*e0 + sum(ranks[i]*e_i) on the n-gon."""

    n: int
    chi: int
    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not isinstance(self.ranks, tuple):
            object.__setattr__(self, "ranks", tuple(self.ranks))
        if len(self.ranks) != self.n:
            raise ValueError("ranks must have length n")

    @property
    def rk_tot(self) -> int:
        return sum(self.ranks)

    def __add__(self, other: "KClass") -> "KClass":
        if self.n != other.n:
            raise ValueError("cannot add classes on different curves")
        return KClass(
            self.n,
            self.chi + other.chi,
            tuple(a + b for a, b in zip(self.ranks, other.ranks)),
        )

    def __neg__(self) -> "KClass":
        return KClass(self.n, -self.chi, tuple(-a for a in self.ranks))

    def __sub__(self, other: "KClass") -> "KClass":
        return self + (-other)

    def to_json(self) -> dict:
        return {"n": self.n, "chi": self.chi, "ranks": list(self.ranks)}

    @classmethod
    def from_json(cls, obj: object) -> "KClass":
        from .schemas import SchemaError  # local import to avoid a cycle

        if not isinstance(obj, dict):
            raise SchemaError("KClass must be an object")
        try:
            n, chi, ranks = obj["n"], obj["chi"], obj["ranks"]
        except KeyError as exc:
            raise SchemaError(f"KClass missing field {exc.args[0]!r}") from None
        if not isinstance(n, int) or not isinstance(chi, int):
            raise SchemaError("KClass n and chi must be integers")
        if not isinstance(ranks, list) or not all(isinstance(r, int) for r in ranks):
            raise SchemaError("KClass ranks must be a list of integers")
        return cls(n, chi, tuple(ranks))


def charge(k: KClass) -> ChargeVec:
    """Central charge value (-chi, rk_tot) of a K-class."""
    return (-k.chi, k.rk_tot)


def in_kernel(k: KClass) -> bool:
    return k.chi == 0 and k.rk_tot == 0


# Sector table for the (0, 2] window.  Walking counterclockwise from just
# above the positive real axis: open first quadrant, positive imaginary
# axis (phase 1/2), open second quadrant, negative real axis (phase 1),
# open third quadrant, negative imaginary axis (3/2), open fourth
# quadrant, positive real axis (phase 2, the branch end).
def _sector(c: ChargeVec) -> int:
    x, y = c
    if y > 0:
        if x > 0:
            return 0
        if x == 0:
            return 1
        return 2
    if y == 0:
        # x != 0 since (0,0) never reaches here
        return 3 if x < 0 else 7
    if x < 0:
        return 4
    if x == 0:
        return 5
    return 6


def phase_sort_key(c: ChargeVec) -> tuple[int, Fraction]:
    """Exact key ordering nonzero charges by phase inside (0, 2].

    Within an open quadrant the phase increases with im/re (the tangent of
    the angle is monotone on each open quadrant, in all four of them), so
    the ratio breaks ties after the sector index.  Axis directions get a
    constant second component.
    """
    if c == (0, 0):
        raise ValueError("charge in kernel")
    s = _sector(c)
    x, y = c
    ratio = Fraction(y, x) if x != 0 else Fraction(0)
    return (s, ratio)


@dataclass(frozen=True, order=False)
class PhasePoint:
    """Exact point of the phase line: phi = phi0(dir) + 2*two_shift.

    dir is a primitive nonzero lattice direction and phi0 is its phase in
    the (0, 2] window, so every value of the form (rational direction
    phase) + (even integer) is representable, and nothing else is.
    """

    two_shift: int
    dir: ChargeVec

    def __post_init__(self) -> None:
        d = tuple(self.dir)
        object.__setattr__(self, "dir", d)
        if d == (0, 0):
            raise ValueError("phase direction cannot be zero")
        if primitive(d) != d:
            raise ValueError("phase direction must be primitive")

    def sort_key(self) -> tuple[int, int, Fraction]:
        s, ratio = phase_sort_key(self.dir)
        return (self.two_shift, s, ratio)

    def to_json(self) -> dict:
        return {"two_shift": self.two_shift, "dir": list(self.dir)}

    @classmethod
    def from_json(cls, obj: object) -> "PhasePoint":
        from .schemas import SchemaError

        if not isinstance(obj, dict):
            raise SchemaError("PhasePoint must be an object")
        try:
            shift, d = obj["two_shift"], obj["dir"]
        except KeyError as exc:
            raise SchemaError(f"PhasePoint missing field {exc.args[0]!r}") from None
        if not isinstance(shift, int):
            raise SchemaError("two_shift must be an integer")
        if (
            not isinstance(d, list)
            or len(d) != 2
            or not all(isinstance(t, int) for t in d)
        ):
            raise SchemaError("dir must be a pair of integers")
        return cls(shift, (d[0], d[1]))


def phase_of_charge(c: ChargeVec) -> PhasePoint:
    """Phase of a nonzero charge, in the principal window (0, 2]."""
    if tuple(c) == (0, 0):
        raise ValueError("charge in kernel")
    return PhasePoint(0, primitive(tuple(c)))


def compare_phase(a: PhasePoint, b: PhasePoint) -> str:
    """Total order on phase points: returns 'LT', 'EQ' or 'GT'."""
    ka, kb = a.sort_key(), b.sort_key()
    if ka < kb:
        return "LT"
    if ka > kb:
        return "GT"
    return "EQ"


def add_half_turns(p: PhasePoint, turns: int) -> PhasePoint:
    """Shift a phase by an integer number of half turns (phi -> phi + turns).

    One half turn negates the direction; whether the even shift absorbs a
    carry depends on which side of H' the direction started on (crossing
    downward through the branch end bumps two_shift).
    """
    if turns == 0:
        return p
    shift, d = p.two_shift, p.dir
    shift += turns // 2
    if turns % 2:
        if in_h_prime(d):
            # phi0 in (0,1]; adding 1 lands in (1,2]: same window, flip dir.
            d = (-d[0], -d[1])
        else:
            # phi0 in (1,2]; adding 1 exits the window upward.
            d = (-d[0], -d[1])
            shift += 1
    return PhasePoint(shift, d)


@dataclass(frozen=True)
class Slope:
    """Reduced rational slope num/den with den >= 0; (1, 0) encodes infinity."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den < 0:
            raise ValueError("slope denominator must be nonnegative")
        if self.den == 0 and self.num != 1:
            raise ValueError("infinite slope is encoded as 1/0")
        if gcd(self.num, self.den) != 1:
            raise ValueError("slope must be in lowest terms")

    @classmethod
    def infinity(cls) -> "Slope":
        return cls(1, 0)

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    @classmethod
    def of(cls, num: int, den: int) -> "Slope":
        """Build a slope from any integer pair (den may be 0 for infinity)."""
        if num == 0 and den == 0:
            raise ValueError("0/0 is not a slope")
        if den == 0:
            return cls.infinity()
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        return cls(num // g, den // g)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Slope":
        return cls(q.numerator, q.denominator)

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise ValueError("infinite slope has no rational value")
        return Fraction(self.num, self.den)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        from .schemas import SchemaError

        text = text.strip()
        if text in ("inf", "oo"):
            return cls.infinity()
        try:
            if "/" in text:
                p, q = text.split("/", 1)
                return cls.of(int(p), int(q))
            return cls.of(int(text), 1)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"not a slope: {text!r}") from None

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return f"{self.num}/{self.den}"


def slope_phase_convert(p: PhasePoint) -> Slope:
    """Slope -re/im of a phase already reduced into the window (0, 1]."""
    if p.two_shift != 0 or not in_h_prime(p.dir):
        raise ValueError("phase must be reduced mod 1 into (0, 1]")
    re, im = p.dir
    if im == 0:
        return Slope.infinity()
    return Slope.of(-re, im)


def slope_to_phase(s: Slope) -> PhasePoint:
    """Phase in (0, 1] of the direction (-p, q) attached to the slope p/q."""
    if s.is_infinite:
        return PhasePoint(0, (-1, 0))
    return PhasePoint(0, primitive((-s.num, s.den)))


_RAT2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


def _as_rational_matrix(T: object) -> _RAT2:
    rows = tuple(tuple(Fraction(x) for x in row) for row in T)  # type: ignore[union-attr]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("relabeling matrix must be 2x2")
    return rows  # type: ignore[return-value]


@dataclass(frozen=True)
class StabilityDatum:
    """The classical datum on E_n, optionally relabeled by a rational matrix.

    Only the linear part of a relabeling is carried; det must be positive
    (orientation preserving), and entries are exact rationals.
    """

    n: int
    relabel: _RAT2 = field(
        default=((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    )

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        rows = _as_rational_matrix(self.relabel)
        object.__setattr__(self, "relabel", rows)
        if _det2(rows) <= 0:
            raise ValueError("relabeling matrix must have positive determinant")


def _det2(T: _RAT2) -> Fraction:
    return T[0][0] * T[1][1] - T[0][1] * T[1][0]


def act_relabel(
    d: StabilityDatum, T: object, c: ChargeVec
) -> tuple[Fraction, Fraction]:
    """Right action of a rational matrix on a charge: returns T^{-1} c.

    Composes associatively: acting by T1 then T2 equals acting by T1*T2.
    Matrices with nonpositive determinant are rejected.
    """
    rows = _as_rational_matrix(T)
    det = _det2(rows)
    if det == 0:
        raise ValueError("singular relabeling matrix")
    if det < 0:
        raise ValueError("relabeling matrix must have positive determinant")
    (a, b), (cc, dd) = rows
    x, y = c
    # T^{-1} = adj(T)/det
    return ((dd * x - b * y) / det, (-cc * x + a * y) / det)
