"""Harder-Narasimhan slicing of direct sums and the charge polygon.

Every summand the sheaf model produces has its charge in the upper half
lattice H', so a direct sum is filtered by simply grouping summands of
equal phase and listing the groups in strictly descending order.  The
polygon device records the same data geometrically: plotting cumulative
charges with x = total rank and y = Euler characteristic, the phase-
sorted path from the origin to the total charge is the upper convex
hull of every partial sum, with torsion contributing a leading vertical
edge.  A subset-sum brute force rebuilds that hull independently for
small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .charges import (
    ChargeVec,
    PhasePoint,
    add_half_turns,
    compare_phase,
    in_h_prime,
    phase_of_charge,
)
from .sheaves import (
    UNSTABLE,
    SheafObject,
    is_semistable,
    object_charge,
    phase,
)

__all__ = [
    "HNSlice",
    "HNResult",
    "HNPolygon",
    "hn_of_object",
    "hn_polygon",
    "brute_force_polygon",
    "slice_membership",
]


@dataclass(frozen=True)
class HNSlice:
    """One semistable layer: its phase, total charge, and summand indices."""

    phase: PhasePoint
    total_charge: ChargeVec
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("slice needs at least one member")
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "total_charge", tuple(self.total_charge))

    def to_json(self) -> dict:
        return {
            "phase": self.phase.to_json(),
            "charge": list(self.total_charge),
            "members": list(self.members),
        }


@dataclass(frozen=True)
class HNResult:
    slices: tuple[HNSlice, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slices", tuple(self.slices))
        for prev, nxt in zip(self.slices, self.slices[1:]):
            if compare_phase(prev.phase, nxt.phase) != "GT":
                raise ValueError("slice phases must strictly decrease")

    @property
    def total_charge(self) -> ChargeVec:
        re = sum(s.total_charge[0] for s in self.slices)
        im = sum(s.total_charge[1] for s in self.slices)
        return (re, im)

    def to_json(self) -> dict:
        return {"slices": [s.to_json() for s in self.slices]}


def hn_of_object(s: SheafObject) -> HNResult:
    """Group the summands of a direct sum into descending-phase slices.

    Rejects any summand the stability test calls Unstable: the model
    does not split indecomposables, so the caller must refine such a
    summand into semistable pieces first.
    """
    for idx, part in enumerate(s.summands):
        if is_semistable(part) == UNSTABLE:
            raise ValueError(
                f"summand {idx} is unstable; refine it before filtering"
            )
    groups: dict[PhasePoint, list[int]] = {}
    for idx, part in enumerate(s.summands):
        groups.setdefault(phase(part), []).append(idx)
    ordered = sorted(groups, key=lambda p: p.sort_key(), reverse=True)
    slices = []
    for p in ordered:
        members = tuple(groups[p])
        re = sum(object_charge(s.summands[i])[0] for i in members)
        im = sum(object_charge(s.summands[i])[1] for i in members)
        slices.append(HNSlice(p, (re, im), members))
    result = HNResult(tuple(slices))
    assert result.total_charge == object_charge(s)
    return result


@dataclass(frozen=True)
class HNPolygon:
    """Vertices of the upper hull of partial charge sums, origin first."""

    vertices: tuple[ChargeVec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "vertices", tuple(tuple(v) for v in self.vertices)
        )
        if not self.vertices or self.vertices[0] != (0, 0):
            raise ValueError("polygon must start at the origin")
        edges = [
            (b[0] - a[0], b[1] - a[1])
            for a, b in zip(self.vertices, self.vertices[1:])
        ]
        for e in edges:
            if not in_h_prime(e):
                raise ValueError("polygon edges must point into H'")
        for e1, e2 in zip(edges, edges[1:]):
            if compare_phase(phase_of_charge(e1), phase_of_charge(e2)) != "GT":
                raise ValueError("edge phases must strictly decrease")

    @property
    def total(self) -> ChargeVec:
        return self.vertices[-1]

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}


def hn_polygon(charges: list[ChargeVec]) -> HNPolygon:
    """Upper hull of cumulative charge sums, one edge per distinct phase.

    The input order is irrelevant: charges are resorted by descending
    phase (the canonical filtration order) and equal phases merge into
    one edge, so the hull of a hull's edge charges is itself.
    """
    cleaned = []
    for c in charges:
        c = tuple(c)
        if not in_h_prime(c):
            raise ValueError(f"charge {c} is not in H'")
        cleaned.append(c)
    if not cleaned:
        return HNPolygon(((0, 0),))
    groups: dict[PhasePoint, list[ChargeVec]] = {}
    for c in cleaned:
        groups.setdefault(phase_of_charge(c), []).append(c)
    ordered = sorted(groups, key=lambda p: p.sort_key(), reverse=True)
    vertices = [(0, 0)]
    for p in ordered:
        re = sum(c[0] for c in groups[p]) + vertices[-1][0]
        im = sum(c[1] for c in groups[p]) + vertices[-1][1]
        vertices.append((re, im))
    return HNPolygon(tuple(vertices))


def _cross(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def brute_force_polygon(charges: list[ChargeVec]) -> HNPolygon:
    """Hull by enumerating all subset sums; exponential, for small lists.

    Works in hull coordinates (x, y) = (im, -re): every subset sum is a
    point, the best y is kept per x, and a monotone scan builds the
    strictly convex upper chain.  A leading vertical edge appears when
    the x = 0 column (torsion-only subsets) rises above the origin.
    """
    cleaned = [tuple(c) for c in charges]
    for c in cleaned:
        if not in_h_prime(c):
            raise ValueError(f"charge {c} is not in H'")
    if len(cleaned) > 16:
        raise ValueError("subset enumeration limited to 16 charges")
    sums = {(0, 0)}
    for re, im in cleaned:
        sums |= {(x + im, y - re) for x, y in sums}
    best: dict[int, int] = {}
    for x, y in sums:
        if x not in best or y > best[x]:
            best[x] = y
    points = sorted(best.items())
    chain: list[tuple[int, int]] = []
    for pt in points:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pt) >= 0:
            chain.pop()
        chain.append(pt)
    if chain[0] != (0, 0):
        assert chain[0][0] == 0 and chain[0][1] > 0
        chain.insert(0, (0, 0))
    return HNPolygon(tuple((-y, x) for x, y in chain))


def slice_membership(s: SheafObject, lo: PhasePoint, hi: PhasePoint) -> bool:
    """True iff every HN phase of s lies in the half-open window (lo, hi].

    The window may be at most one unit wide so that it can describe a
    heart; wider requests are rejected.
    """
    if compare_phase(lo, hi) != "LT":
        raise ValueError("window requires lo < hi")
    if compare_phase(add_half_turns(hi, -1), lo) == "GT":
        raise ValueError("window wider than one phase unit")
    result = hn_of_object(s)
    for sl in result.slices:
        if compare_phase(lo, sl.phase) != "LT":
            return False
        if compare_phase(sl.phase, hi) == "GT":
            return False
    return True
