"""Classification of stable objects by phase class on the n-cycle curve.

Phases of lattice charges correspond to rational slopes (including
infinity), slopes fall into finitely many classes under the level-n
congruence action, and each class has a canonical representative r/s
with s dividing n.  At that representative the stable locus has a
positive-dimensional part, a copy of the s-cycle curve swept out by
pulled-back line bundles, together with n isolated points: chains of
length s carrying one fixed balanced degree vector, translated around
the curve.  This module computes the representative, transports the
stable charge vectors back to the phase that was asked about, and
materializes the rigid chains so their stability can be checked rather
than believed.

The balanced degree vector is unique: writing P_t for its prefix sums,
stability of a length-s chain of total degree r - 1 against prefix and
suffix intervals forces rt/s - 1 < P_t < rt/s, and with gcd(r, s) = 1
the only integer in that window is floor(rt/s).  Interior intervals
then pass automatically.  A small-case search in the tests confirms the
uniqueness claim independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .charges import (
    ChargeVec,
    PhasePoint,
    Slope,
    in_h_prime,
    slope_phase_convert,
)
from .gamma0 import CuspClass, Mat2, cusp_canonicalize
from .sheaves import (
    STABLE,
    BandSheaf,
    ChainSheaf,
    Label,
    is_semistable,
    pullback,
    summand_to_json,
)

__all__ = [
    "GALOIS_NOTE",
    "ModuliDescription",
    "phase_representative",
    "classify",
    "enumerate_rigid",
    "stable_vb_construct",
    "sym_power_note",
]

GALOIS_NOTE = (
    "Z/nZ acts transitively on rigid points; "
    "factors through Gal(E_s → E_1) on E_s"
)

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")
_SUP = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def sym_power_note(s: int, r: int) -> str:
    """Display tag for the r-th symmetric power of the s-cycle curve."""
    if r < 0:
        raise ValueError("symmetric power needs a nonnegative exponent")
    if r == 0:
        return "point"
    curve = "E" + str(s).translate(_SUB)
    if r == 1:
        return curve
    return "Sym" + str(r).translate(_SUP) + f"({curve})"


def phase_representative(n: int, a: PhasePoint) -> tuple[CuspClass, Mat2]:
    """Canonical class of the slope attached to a phase, plus a witness.

    Phases a and a+1 carry the same slope, so the direction is first
    folded into the (0, 1] window.
    """
    d = a.dir
    if not in_h_prime(d):
        d = (-d[0], -d[1])
    slope = slope_phase_convert(PhasePoint(0, d))
    return cusp_canonicalize(n, slope)


@lru_cache(maxsize=None)
def enumerate_rigid(n: int, r: int, s: int) -> tuple[ChainSheaf, ...]:
    """The n isolated stable points at the representative r/s: length-s chains.

    All n translates share the forced staircase degree vector; the
    stability test runs on the first one and a failure raises rather
    than returning a wrong descriptor.
    """
    if s < 1 or n % s != 0:
        raise ValueError("s must be a positive divisor of n")
    if gcd(r, s) != 1:
        raise ValueError("r and s must be coprime")
    prefix = [r * t // s for t in range(s)]
    prefix.append(r - 1)
    d = tuple(prefix[t + 1] - prefix[t] for t in range(s))
    assert sum(d) == r - 1
    first = ChainSheaf(n, s, 0, d)
    if is_semistable(first) != STABLE:
        raise ValueError(f"no stable balanced chain found for {r}/{s}")
    return tuple(ChainSheaf(n, s, j, d) for j in range(n))


def stable_vb_construct(
    n: int, r: int, s: int, line_data: tuple[int, ...], label: Label
) -> BandSheaf:
    """Pull a degree-r line bundle on the s-cycle up to a rank-one band.

    The result tiles line_data around the n-cycle, has chi = n*r/s and
    total rank n, and is stable exactly when the downstairs bundle is.
    """
    if s < 1 or n % s != 0:
        raise ValueError("s must be a positive divisor of n")
    line_data = tuple(line_data)
    if len(line_data) != s:
        raise ValueError("line_data must have one degree per component")
    if sum(line_data) != r:
        raise ValueError(f"line_data must have total degree {r}")
    downstairs = BandSheaf(s, 1, line_data, label, 1)
    up = pullback(downstairs, n)
    assert len(up.summands) == 1  # gcd(1, n/s) sheets never split
    return up.summands[0]


def _transport_charge(witness: Mat2, chi: int, rk: int) -> ChargeVec:
    # The witness moves the queried slope to the representative; its
    # inverse carries (chi, rank) columns back, up to an overall sign
    # fixed by landing in H'.
    num, den = witness.inv().matvec((chi, rk))
    c: ChargeVec = (-num, den)
    if not in_h_prime(c):
        c = (num, -den)
    assert in_h_prime(c)
    return c


@dataclass(frozen=True)
class ModuliDescription:
    """Everything the classification pins down for one phase.

    stable_charges holds the charge vectors, at the phase actually
    queried, of the positive-component bundles and of the rigid points.
    All other fields depend only on the class of the phase.
    """

    n: int
    phase: PhasePoint
    representative: CuspClass
    witness: Mat2
    s: int
    positive_component: str
    rigid_count: int
    rigid_points: tuple[ChainSheaf, ...]
    stable_charges: tuple[ChargeVec, ChargeVec]
    galois_note: str
    torsion_class: bool

    def __post_init__(self) -> None:
        if self.n < 1 or self.s < 1 or self.n % self.s != 0:
            raise ValueError("s must be a positive divisor of n")
        if self.s != self.representative.c:
            raise ValueError("s must match the representative denominator")
        if self.rigid_count != self.n or len(self.rigid_points) != self.n:
            raise ValueError("expected one rigid point per component")

    @property
    def r(self) -> int:
        return self.representative.a

    def class_payload(self) -> tuple:
        """The fields determined by the phase class alone."""
        return (
            self.n,
            self.representative,
            self.s,
            self.positive_component,
            self.rigid_count,
            self.rigid_points,
            self.galois_note,
            self.torsion_class,
        )

    def to_json(self) -> dict:
        vb, rigid = self.stable_charges
        return {
            "n": self.n,
            "phase": self.phase.to_json(),
            "representative": self.representative.to_json(),
            "witness": self.witness.to_json(),
            "s": self.s,
            "positive_component": {
                "tag": "E_s",
                "s": self.s,
                "display": self.positive_component,
            },
            "rigid_count": self.rigid_count,
            "rigid_points": [summand_to_json(c) for c in self.rigid_points],
            "stable_charges": {"vector_bundle": list(vb), "rigid": list(rigid)},
            "galois_note": self.galois_note,
            "torsion_class": self.torsion_class,
        }


def classify(n: int, a: PhasePoint) -> ModuliDescription:
    """Describe the stable moduli at phase a on the n-cycle curve.

    For n = 1 every slope is in the single class of 0/1 and the report
    degenerates to the curve itself; the lone rigid chain is the
    boundary point of its compactification rather than a separate
    component, which is why torsion_class is always true there.
    """
    cls, witness = phase_representative(n, a)
    s, r = cls.c, cls.a
    rigid = enumerate_rigid(n, r, s)
    vb_charge = _transport_charge(witness, n * r // s, n)
    rigid_charge = _transport_charge(witness, r, s)
    return ModuliDescription(
        n=n,
        phase=a,
        representative=cls,
        witness=witness,
        s=s,
        positive_component=sym_power_note(s, 1),
        rigid_count=n,
        rigid_points=rigid,
        stable_charges=(vb_charge, rigid_charge),
        galois_note=GALOIS_NOTE,
        torsion_class=(s == n),
    )
