"""Combinatorial models of coherent sheaves on cycle-of-lines curves.

A cycle curve with n components carries three families of indecomposable
sheaves, and each family is pinned down by discrete data:

* ``BandSheaf``: locally free.  A band on the n-cycle is the pushforward
  of a line bundle from the nr-cycle cover, twisted by the unipotent
  bundle of multiplicity m.  Data: the degree vector around the big
  cycle, a gluing label lam, and m.
* ``ChainSheaf``: torsion-free but not locally free.  Pushforward of a
  line bundle from a chain of k lines mapping onto the cycle.  Data:
  starting component, length k, degree vector along the chain.
* ``TorsionSheaf``: finite length at a single point, smooth or nodal.

Degrees, Euler characteristics and ranks are all integers, so every
slope comparison below is done by cross-multiplication; no floats.

Stability is classical slope stability for the polarization giving each
component weight one: the slope of a sheaf is chi / (number of weighted
support components), and a subsheaf destabilizes when its slope is not
smaller.  For chains and bands the candidate subsheaves are supported on
contiguous intervals, with the degree dropping by one at every node
where the interval meets the rest of the curve; the verdict functions
implement that interval combinatorics and the ``brute_force_*`` oracles
re-derive it by enumerating twisted subsheaves directly.

Gluing parameters never enter any computed quantity except through
equality tests, so ``Label`` models them as elements of a free abelian
group on named symbols rather than as complex numbers.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Union

from .charges import ChargeVec, KClass, PhasePoint, charge, phase_of_charge
from .schemas import SchemaError

__all__ = [
    "STABLE",
    "SEMISTABLE",
    "UNSTABLE",
    "Label",
    "SmoothPoint",
    "NodePoint",
    "BandSheaf",
    "ChainSheaf",
    "TorsionSheaf",
    "Summand",
    "SheafObject",
    "k_class",
    "object_charge",
    "phase",
    "pullback",
    "pushforward",
    "galois_translate",
    "tensor_line",
    "double_shift",
    "is_semistable",
    "brute_force_chain_verdict",
    "exhaustive_chain_verdict",
    "brute_force_band_verdict",
    "random_label",
    "random_summand",
    "random_corpus",
    "random_object",
    "summand_to_json",
    "summand_from_json",
    "object_to_json",
    "object_from_json",
]

STABLE = "Stable"
SEMISTABLE = "StrictlySemistable"
UNSTABLE = "Unstable"


# ---------------------------------------------------------------------------
# gluing labels


@dataclass(frozen=True)
class Label:
    """Element of a free abelian group on named symbols, written multiplicatively.

    Stands in for a nonzero gluing scalar: the only operations the model
    ever needs are products, integer powers and equality.
    """

    powers: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.powers, tuple):
            object.__setattr__(self, "powers", tuple(self.powers))
        seen = set()
        for sym, exp in self.powers:
            if not _is_symbol(sym):
                raise ValueError(f"bad label symbol {sym!r}")
            if not isinstance(exp, int) or exp == 0:
                raise ValueError("label exponents must be nonzero integers")
            if sym in seen:
                raise ValueError(f"repeated label symbol {sym!r}")
            seen.add(sym)
        if tuple(sorted(s for s, _ in self.powers)) != tuple(
            s for s, _ in self.powers
        ):
            raise ValueError("label symbols must be sorted")

    @classmethod
    def identity(cls) -> "Label":
        return cls(())

    @classmethod
    def generator(cls, name: str) -> "Label":
        return cls(((name, 1),))

    def __mul__(self, other: "Label") -> "Label":
        acc = dict(self.powers)
        for sym, exp in other.powers:
            new = acc.get(sym, 0) + exp
            if new == 0:
                acc.pop(sym, None)
            else:
                acc[sym] = new
        return Label(tuple(sorted(acc.items())))

    def __pow__(self, k: int) -> "Label":
        if k == 0:
            return Label.identity()
        return Label(tuple((sym, exp * k) for sym, exp in self.powers))

    def inverse(self) -> "Label":
        return self ** -1

    def __str__(self) -> str:
        if not self.powers:
            return "1"
        parts = []
        for sym, exp in self.powers:
            parts.append(sym if exp == 1 else f"{sym}^{exp}")
        return "*".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Label":
        """Inverse of str: '1', 'a', 'a^2*b^-1' and friends."""
        if not isinstance(text, str):
            raise SchemaError("label must be a string")
        text = text.strip()
        if text == "1":
            return cls.identity()
        acc: dict[str, int] = {}
        for part in text.split("*"):
            name, caret, exp_text = part.partition("^")
            name = name.strip()
            if not _is_symbol(name):
                raise SchemaError(f"bad label symbol {name!r}")
            try:
                exp = int(exp_text) if caret else 1
            except ValueError:
                raise SchemaError(f"bad label exponent {exp_text!r}") from None
            acc[name] = acc.get(name, 0) + exp
        try:
            return cls(tuple(sorted((s, e) for s, e in acc.items() if e != 0)))
        except ValueError as exc:
            raise SchemaError(str(exc)) from None


def _is_symbol(s: object) -> bool:
    return (
        isinstance(s, str)
        and s != ""
        and (s[0].isalpha() or s[0] == "_")
        and all(ch.isalnum() or ch == "_" for ch in s)
    )


# ---------------------------------------------------------------------------
# torsion support points


@dataclass(frozen=True)
class SmoothPoint:
    """A smooth point: which component it sits on, plus an opaque marker."""

    component: int
    label: str

    def __post_init__(self) -> None:
        if not isinstance(self.component, int):
            raise ValueError("component must be an integer")
        if not isinstance(self.label, str):
            raise ValueError("smooth point label must be a string")


@dataclass(frozen=True)
class NodePoint:
    """The node between components index and index + 1."""

    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.index, int):
            raise ValueError("node index must be an integer")


# ---------------------------------------------------------------------------
# the three families


def _int_tuple(value: object, what: str) -> tuple[int, ...]:
    if not isinstance(value, (tuple, list)):
        raise ValueError(f"{what} must be a sequence of integers")
    out = tuple(value)
    for x in out:
        if not isinstance(x, int) or isinstance(x, bool):
            raise ValueError(f"{what} must contain only integers")
    return out


def _rotated(seq: tuple[int, ...], by: int) -> tuple[int, ...]:
    # new[(i + by) % L] = old[i]
    L = len(seq)
    return tuple(seq[(i - by) % L] for i in range(L))


@dataclass(frozen=True, eq=False)
class BandSheaf:
    """Locally free summand: degree vector on the nr-cycle, label, multiplicity.

    multideg[t] is the degree on component t of the covering nr-cycle;
    component t sits over component t mod n downstairs.  Two degree
    vectors that differ by rotating whole sheets (n positions at a time)
    describe the same pushforward, because the choice of first upstairs
    component is bookkeeping; equality and hashing quotient by that
    rotation.  The label is carried along unrotated since the model
    attaches it to the band as a whole.
    """

    n: int
    r: int
    multideg: tuple[int, ...]
    lam: Label
    m: int = 1

    def __post_init__(self) -> None:
        if self.n < 1 or self.r < 1 or self.m < 1:
            raise ValueError("n, r and m must be positive")
        object.__setattr__(self, "multideg", _int_tuple(self.multideg, "multideg"))
        if len(self.multideg) != self.n * self.r:
            raise ValueError("multideg must have length n*r")
        if not isinstance(self.lam, Label):
            raise ValueError("lam must be a Label")

    @property
    def period(self) -> int:
        """Smallest t > 0 with the degree vector fixed by rotating t sheets."""
        for t in range(1, self.r + 1):
            if self.r % t == 0 and _rotated(self.multideg, self.n * t) == self.multideg:
                return t
        raise AssertionError("rotation by r sheets is the identity")

    @property
    def is_indecomposable(self) -> bool:
        return self.period == self.r

    def _key(self) -> tuple:
        canonical = min(_rotated(self.multideg, self.n * t) for t in range(self.r))
        return (self.n, self.r, self.m, self.lam, canonical)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BandSheaf):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


@dataclass(frozen=True)
class ChainSheaf:
    """Torsion-free non-locally-free summand: a chain of k lines over the cycle.

    Position t of the chain lies over component (start + t) mod n, so a
    chain longer than n winds around and stacks up rank.
    """

    n: int
    k: int
    start: int
    multideg: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.k < 1:
            raise ValueError("chain length must be positive")
        object.__setattr__(self, "start", self.start % self.n)
        object.__setattr__(self, "multideg", _int_tuple(self.multideg, "multideg"))
        if len(self.multideg) != self.k:
            raise ValueError("multideg must have length k")


@dataclass(frozen=True)
class TorsionSheaf:
    """Finite-length summand at one point of the cycle."""

    n: int
    position: Union[SmoothPoint, NodePoint]
    length: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.length < 1:
            raise ValueError("length must be positive")
        pos = self.position
        if isinstance(pos, SmoothPoint):
            object.__setattr__(
                self, "position", SmoothPoint(pos.component % self.n, pos.label)
            )
        elif isinstance(pos, NodePoint):
            object.__setattr__(self, "position", NodePoint(pos.index % self.n))
        else:
            raise ValueError("position must be a SmoothPoint or a NodePoint")


Summand = Union[BandSheaf, ChainSheaf, TorsionSheaf]


def _summand_sort_key(s: Summand) -> tuple:
    if isinstance(s, TorsionSheaf):
        pos = s.position
        if isinstance(pos, SmoothPoint):
            where = (0, pos.component, pos.label)
        else:
            where = (1, pos.index, "")
        return (0, s.length, where)
    if isinstance(s, ChainSheaf):
        return (1, s.k, s.start, s.multideg)
    canonical = min(_rotated(s.multideg, s.n * t) for t in range(s.r))
    return (2, s.r, s.m, canonical, str(s.lam))


@dataclass(frozen=True)
class SheafObject:
    """Formal direct sum of summands on a single cycle curve.

    Summands are kept in a canonical sorted order so that equality means
    equality of multisets.
    """

    summands: tuple[Summand, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.summands, tuple):
            object.__setattr__(self, "summands", tuple(self.summands))
        if not self.summands:
            raise ValueError("object needs at least one summand")
        n = self.summands[0].n
        for s in self.summands:
            if not isinstance(s, (BandSheaf, ChainSheaf, TorsionSheaf)):
                raise ValueError("summands must be band, chain or torsion sheaves")
            if s.n != n:
                raise ValueError("summands must live on the same curve")
        object.__setattr__(
            self, "summands", tuple(sorted(self.summands, key=_summand_sort_key))
        )

    @property
    def n(self) -> int:
        return self.summands[0].n


# ---------------------------------------------------------------------------
# K-theory


def k_class(s: Union[Summand, SheafObject]) -> KClass:
    """Class chi*e0 + sum(rank_i * e_i) of a summand or a direct sum."""
    if isinstance(s, SheafObject):
        total = k_class(s.summands[0])
        for part in s.summands[1:]:
            total = total + k_class(part)
        return total
    if isinstance(s, BandSheaf):
        chi = s.m * sum(s.multideg)
        return KClass(s.n, chi, (s.r * s.m,) * s.n)
    if isinstance(s, ChainSheaf):
        ranks = [0] * s.n
        for t in range(s.k):
            ranks[(s.start + t) % s.n] += 1
        return KClass(s.n, 1 + sum(s.multideg), tuple(ranks))
    if isinstance(s, TorsionSheaf):
        return KClass(s.n, s.length, (0,) * s.n)
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def object_charge(s: Union[Summand, SheafObject]) -> ChargeVec:
    return charge(k_class(s))


def phase(s: Union[Summand, SheafObject]) -> PhasePoint:
    """Phase of the central charge; honest sheaves land in (0, 1]."""
    c = object_charge(s)
    if c == (0, 0):
        raise ValueError("object has charge zero, phase undefined")
    return phase_of_charge(c)


# ---------------------------------------------------------------------------
# covers, deck action, line-bundle twists


def pullback(s: Union[Summand, SheafObject], m: int) -> SheafObject:
    """Pull back along the degree m/n cover of cycles; n must divide m.

    Bands can split: the covering nr-cycle and the m-cycle have a fiber
    product with gcd(r, m/n) components, one summand per component, each
    reading the old degrees around a longer cycle and raising the label
    to the number of times the new sheet wraps the old one.  Chains and
    torsion points simply acquire one translated copy per sheet.
    """
    if isinstance(s, SheafObject):
        parts: list[Summand] = []
        for x in s.summands:
            parts.extend(pullback(x, m).summands)
        return SheafObject(tuple(parts))
    n = s.n
    if m < 1 or m % n != 0:
        raise ValueError(f"no cover: {n} does not divide {m}")
    f = m // n
    if isinstance(s, BandSheaf):
        g = gcd(s.r, f)
        L = s.n * s.r
        out = []
        for j in range(g):
            new_d = tuple(s.multideg[(j * n + t) % L] for t in range(L * f // g))
            out.append(BandSheaf(m, s.r // g, new_d, s.lam ** (f // g), s.m))
        return SheafObject(tuple(out))
    if isinstance(s, ChainSheaf):
        return SheafObject(
            tuple(ChainSheaf(m, s.k, s.start + j * n, s.multideg) for j in range(f))
        )
    if isinstance(s, TorsionSheaf):
        pos = s.position
        out = []
        for j in range(f):
            if isinstance(pos, SmoothPoint):
                moved: Union[SmoothPoint, NodePoint] = SmoothPoint(
                    pos.component + j * n, pos.label
                )
            else:
                moved = NodePoint(pos.index + j * n)
            out.append(TorsionSheaf(m, moved, s.length))
        return SheafObject(tuple(out))
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def pushforward(s, n_target: int):
    """Push down along the cover onto the n_target-cycle; n_target | n.

    Finite and flat, so nothing splits: a band keeps its degree vector
    and multiplies its sheet count, chains and torsion reduce their
    component indices.  Euler characteristic and total rank are
    untouched.
    """
    if isinstance(s, SheafObject):
        return SheafObject(tuple(pushforward(x, n_target) for x in s.summands))
    n = s.n
    if n_target < 1 or n % n_target != 0:
        raise ValueError(f"no cover: {n_target} does not divide {n}")
    if isinstance(s, BandSheaf):
        return BandSheaf(n_target, s.r * (n // n_target), s.multideg, s.lam, s.m)
    if isinstance(s, ChainSheaf):
        return ChainSheaf(n_target, s.k, s.start % n_target, s.multideg)
    if isinstance(s, TorsionSheaf):
        return TorsionSheaf(n_target, s.position, s.length)
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def galois_translate(s, power: int):
    """Rotate the curve by `power` components; a Z/nZ action on objects.

    The rotation lifts to covering cycles one position at a time, so a
    band rotates its whole degree vector by `power`.  Rotating by n
    moves a band by one full sheet, which equality treats as the same
    band.
    """
    if isinstance(s, SheafObject):
        return SheafObject(tuple(galois_translate(x, power) for x in s.summands))
    if isinstance(s, BandSheaf):
        return BandSheaf(s.n, s.r, _rotated(s.multideg, power), s.lam, s.m)
    if isinstance(s, ChainSheaf):
        return ChainSheaf(s.n, s.k, s.start + power, s.multideg)
    if isinstance(s, TorsionSheaf):
        pos = s.position
        if isinstance(pos, SmoothPoint):
            return TorsionSheaf(
                s.n, SmoothPoint(pos.component + power, pos.label), s.length
            )
        return TorsionSheaf(s.n, NodePoint(pos.index + power), s.length)
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def tensor_line(s, deg: tuple[int, ...], mu: Label, triv_only: bool = False):
    """Tensor with the line bundle of componentwise degree `deg` and label mu.

    Bands add the degree pattern pulled back around their covering
    cycle; chains add the degrees of the components they pass through;
    torsion sheaves are unchanged.  With triv_only=True only degree-zero
    twists (the Picard-trivial action) are accepted.
    """
    if isinstance(s, SheafObject):
        return SheafObject(
            tuple(tensor_line(x, deg, mu, triv_only) for x in s.summands)
        )
    deg = _int_tuple(deg, "deg")
    if len(deg) != s.n:
        raise ValueError("deg must have one entry per component")
    if triv_only and any(deg):
        raise ValueError("triv_only twist requires deg = 0")
    if not isinstance(mu, Label):
        raise ValueError("mu must be a Label")
    if isinstance(s, BandSheaf):
        new_d = tuple(d + deg[t % s.n] for t, d in enumerate(s.multideg))
        return BandSheaf(s.n, s.r, new_d, s.lam * mu, s.m)
    if isinstance(s, ChainSheaf):
        new_d = tuple(d + deg[(s.start + t) % s.n] for t, d in enumerate(s.multideg))
        return ChainSheaf(s.n, s.k, s.start, new_d)
    if isinstance(s, TorsionSheaf):
        return s
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def double_shift(s):
    """The square of the suspension acting on the model.

    It fixes every K-class and every verdict, and the model keeps no
    homological degree, so at this level it is the identity; it exists
    so pipelines can apply the generator explicitly.
    """
    if isinstance(s, (SheafObject, BandSheaf, ChainSheaf, TorsionSheaf)):
        return s
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


# ---------------------------------------------------------------------------
# stability


def is_semistable(s: Summand) -> str:
    """Slope-stability verdict for one summand.

    Torsion: a length-one point admits no proper subsheaf; longer ones
    are iterated equal-phase extensions.  Chains compare every proper
    contiguous interval, with the degree cut by one at each interior
    end.  Bands with multiplicity reduce to their multiplicity-one core,
    decomposable bands to their repeating piece, and an indecomposable
    one-multiplicity band runs the interval test around its covering
    cycle, where a proper interval always has two boundary cuts.
    """
    if isinstance(s, TorsionSheaf):
        return STABLE if s.length == 1 else SEMISTABLE
    if isinstance(s, ChainSheaf):
        return _chain_interval_verdict(s.k, s.multideg)
    if isinstance(s, BandSheaf):
        return _band_verdict(s)
    raise TypeError(f"not an indecomposable summand model: {type(s).__name__}")


def _chain_interval_verdict(k: int, d: tuple[int, ...]) -> str:
    total = 1 + sum(d)
    prefix = [0]
    for x in d:
        prefix.append(prefix[-1] + x)
    saw_equal = False
    for i in range(k):
        for j in range(i, k):
            if i == 0 and j == k - 1:
                continue
            cuts = (i > 0) + (j < k - 1)
            chi_sub = 1 + prefix[j + 1] - prefix[i] - cuts
            ell = j - i + 1
            # chi_sub / ell vs total / k, cross-multiplied
            if chi_sub * k > total * ell:
                return UNSTABLE
            if chi_sub * k == total * ell:
                saw_equal = True
    return SEMISTABLE if saw_equal else STABLE


def _band_verdict(b: BandSheaf) -> str:
    if b.m > 1:
        # equal-slope self-extension: semistability passes through, stability never
        core = _band_verdict(replace(b, m=1))
        return UNSTABLE if core == UNSTABLE else SEMISTABLE
    q = b.period
    if q < b.r:
        # decomposes into r/q equal-slope bands on the shorter cycle
        piece = BandSheaf(b.n, q, b.multideg[: b.n * q], b.lam, 1)
        core = _band_verdict(piece)
        return UNSTABLE if core == UNSTABLE else SEMISTABLE
    N = b.n * b.r
    if N == 1:
        return STABLE
    d = b.multideg
    total = sum(d)
    saw_equal = False
    for i in range(N):
        run = 0
        for ell in range(1, N):
            run += d[(i + ell - 1) % N]
            chi_sub = run - 1  # 1 + (degrees cut once at each of the two ends)
            if chi_sub * N > total * ell:
                return UNSTABLE
            if chi_sub * N == total * ell:
                saw_equal = True
    return SEMISTABLE if saw_equal else STABLE


def brute_force_chain_verdict(c: ChainSheaf, extra_depth: int = 2) -> str:
    """Chain verdict by enumerating subsheaf Euler characteristics directly.

    A subsheaf supported on an interval is a line bundle there whose
    total degree is at most the restricted degree minus the mandatory
    boundary cuts; only the total matters for chi, so enumerating totals
    down to extra_depth below the maximum covers every distribution of
    extra twists.  Twisting deeper only lowers chi, which the assert
    pins on the way through.
    """
    k, d = c.k, c.multideg
    total = 1 + sum(d)
    saw_equal = False
    saw_over = False
    for i in range(k):
        for j in range(i, k):
            if i == 0 and j == k - 1:
                continue
            cuts = (i > 0) + (j < k - 1)
            base = 1 + sum(d[i : j + 1]) - cuts
            ell = j - i + 1
            for extra in range(extra_depth + 1):
                chi_sub = base - extra
                if chi_sub * k > total * ell:
                    # a deeper twist never destabilizes before the maximal one
                    assert base * k > total * ell
                    saw_over = True
                elif chi_sub * k == total * ell:
                    saw_equal = True
    if saw_over:
        return UNSTABLE
    return SEMISTABLE if saw_equal else STABLE


def exhaustive_chain_verdict(c: ChainSheaf, twist_depth: int = 2) -> str:
    """Literal sub-multidegree enumeration; cost grows as (twist_depth+1)^k."""
    k, d = c.k, c.multideg
    total = 1 + sum(d)
    saw_equal = False
    saw_over = False
    for i in range(k):
        for j in range(i, k):
            if i == 0 and j == k - 1:
                continue
            ell = j - i + 1
            req = [0] * ell
            if i > 0:
                req[0] += 1
            if j < k - 1:
                req[-1] += 1
            ranges = [
                range(d[i + t] - req[t] - twist_depth, d[i + t] - req[t] + 1)
                for t in range(ell)
            ]
            for sub in product(*ranges):
                chi_sub = 1 + sum(sub)
                if chi_sub * k > total * ell:
                    saw_over = True
                elif chi_sub * k == total * ell:
                    saw_equal = True
    if saw_over:
        return UNSTABLE
    return SEMISTABLE if saw_equal else STABLE


def brute_force_band_verdict(b: BandSheaf, twist_depth: int = 2) -> str:
    """Band verdict by enumerating twisted interval subsheaves on the cycle.

    Shares the multiplicity and periodicity reductions with the closed
    test (they are definitional: both produce equal-slope summands or
    extensions) and then searches the indecomposable core's covering
    cycle literally: every proper interval, every twist of the restricted
    degrees below the two mandatory boundary cuts.  Exponential in the
    interval length, intended for n*r <= 6.
    """
    if b.m > 1:
        core = brute_force_band_verdict(replace(b, m=1), twist_depth)
        return UNSTABLE if core == UNSTABLE else SEMISTABLE
    q = b.period
    if q < b.r:
        piece = BandSheaf(b.n, q, b.multideg[: b.n * q], b.lam, 1)
        core = brute_force_band_verdict(piece, twist_depth)
        return UNSTABLE if core == UNSTABLE else SEMISTABLE
    N = b.n * b.r
    if N == 1:
        return STABLE
    d = b.multideg
    total = sum(d)
    saw_equal = False
    saw_over = False
    for i in range(N):
        for ell in range(1, N):
            req = [0] * ell
            req[0] += 1
            req[-1] += 1  # ell == 1 piles both cuts on the single component
            ranges = [
                range(
                    d[(i + t) % N] - req[t] - twist_depth,
                    d[(i + t) % N] - req[t] + 1,
                )
                for t in range(ell)
            ]
            for sub in product(*ranges):
                chi_sub = 1 + sum(sub)
                if chi_sub * N > total * ell:
                    saw_over = True
                elif chi_sub * N == total * ell:
                    saw_equal = True
    if saw_over:
        return UNSTABLE
    return SEMISTABLE if saw_equal else STABLE


# ---------------------------------------------------------------------------
# seeded corpora


def random_label(rng: random.Random, symbols: tuple[str, ...] = ("a", "b")) -> Label:
    out = Label.identity()
    for sym in symbols:
        exp = rng.randint(-2, 2)
        if exp:
            out = out * (Label.generator(sym) ** exp)
    return out


def random_summand(
    rng: random.Random,
    n: int | None = None,
    kinds: tuple[str, ...] = ("chain", "band"),
    max_n: int = 6,
    max_k: int = 8,
    max_deg: int = 3,
) -> Summand:
    """One random summand; all randomness comes from the supplied rng."""
    if n is None:
        n = rng.randint(1, max_n)
    kind = rng.choice(kinds)
    if kind == "chain":
        k = rng.randint(1, max_k)
        d = tuple(rng.randint(-max_deg, max_deg) for _ in range(k))
        return ChainSheaf(n, k, rng.randrange(n), d)
    if kind == "band":
        r = rng.randint(1, 2)
        d = tuple(rng.randint(-max_deg, max_deg) for _ in range(n * r))
        return BandSheaf(n, r, d, random_label(rng), rng.randint(1, 2))
    if kind == "torsion":
        if rng.random() < 0.5:
            pos: Union[SmoothPoint, NodePoint] = SmoothPoint(
                rng.randrange(n), rng.choice(("p", "q", "z"))
            )
        else:
            pos = NodePoint(rng.randrange(n))
        return TorsionSheaf(n, pos, rng.randint(1, 3))
    raise ValueError(f"unknown summand kind {kind!r}")


def random_corpus(
    seed: int,
    count: int = 500,
    kinds: tuple[str, ...] = ("chain", "band"),
    max_n: int = 6,
    max_k: int = 8,
    max_deg: int = 3,
) -> tuple[Summand, ...]:
    rng = random.Random(seed)
    return tuple(
        random_summand(rng, None, kinds, max_n, max_k, max_deg) for _ in range(count)
    )


def random_object(
    rng: random.Random,
    n: int | None = None,
    max_summands: int = 4,
    kinds: tuple[str, ...] = ("chain", "band", "torsion"),
    semistable_only: bool = False,
) -> SheafObject:
    """A random direct sum on one curve, optionally skipping unstable parts."""
    if n is None:
        n = rng.randint(1, 6)
    parts: list[Summand] = []
    want = rng.randint(1, max_summands)
    while len(parts) < want:
        s = random_summand(rng, n, kinds, max_k=6, max_deg=2)
        if semistable_only and is_semistable(s) == UNSTABLE:
            continue
        parts.append(s)
    return SheafObject(tuple(parts))


# ---------------------------------------------------------------------------
# JSON


def summand_to_json(s: Summand) -> dict:
    if isinstance(s, BandSheaf):
        return {
            "type": "band",
            "r": s.r,
            "multideg": list(s.multideg),
            "lambda": str(s.lam),
            "m": s.m,
        }
    if isinstance(s, ChainSheaf):
        return {
            "type": "chain",
            "k": s.k,
            "start": s.start,
            "multideg": list(s.multideg),
        }
    if isinstance(s, TorsionSheaf):
        pos = s.position
        if isinstance(pos, SmoothPoint):
            where = {"kind": "smooth", "component": pos.component, "label": pos.label}
        else:
            where = {"kind": "node", "index": pos.index}
        return {"type": "torsion", "position": where, "length": s.length}
    raise TypeError(f"not a sheaf model: {type(s).__name__}")


def _require(obj: dict, key: str, what: str):
    try:
        return obj[key]
    except KeyError:
        raise SchemaError(f"{what} missing field {key!r}") from None


def summand_from_json(n: int, obj: object) -> Summand:
    if not isinstance(obj, dict):
        raise SchemaError("summand must be an object")
    kind = _require(obj, "type", "summand")
    if kind == "band":
        r = _require(obj, "r", "band")
        d = _require(obj, "multideg", "band")
        lam = Label.parse(_require(obj, "lambda", "band"))
        m = obj.get("m", 1)
        if not isinstance(r, int) or not isinstance(m, int):
            raise SchemaError("band r and m must be integers")
        if not isinstance(d, list) or not all(isinstance(x, int) for x in d):
            raise SchemaError("band multideg must be a list of integers")
        return BandSheaf(n, r, tuple(d), lam, m)
    if kind == "chain":
        k = _require(obj, "k", "chain")
        start = _require(obj, "start", "chain")
        d = _require(obj, "multideg", "chain")
        if not isinstance(k, int) or not isinstance(start, int):
            raise SchemaError("chain k and start must be integers")
        if not isinstance(d, list) or not all(isinstance(x, int) for x in d):
            raise SchemaError("chain multideg must be a list of integers")
        return ChainSheaf(n, k, start, tuple(d))
    if kind == "torsion":
        where = _require(obj, "position", "torsion")
        length = _require(obj, "length", "torsion")
        if not isinstance(length, int):
            raise SchemaError("torsion length must be an integer")
        if not isinstance(where, dict):
            raise SchemaError("torsion position must be an object")
        pk = _require(where, "kind", "position")
        if pk == "smooth":
            comp = _require(where, "component", "smooth position")
            label = _require(where, "label", "smooth position")
            if not isinstance(comp, int) or not isinstance(label, str):
                raise SchemaError("smooth position needs integer component, string label")
            return TorsionSheaf(n, SmoothPoint(comp, label), length)
        if pk == "node":
            idx = _require(where, "index", "node position")
            if not isinstance(idx, int):
                raise SchemaError("node index must be an integer")
            return TorsionSheaf(n, NodePoint(idx), length)
        raise SchemaError(f"unknown position kind {pk!r}")
    raise SchemaError(f"unknown summand type {kind!r}")


def object_to_json(s: SheafObject) -> dict:
    return {"n": s.n, "summands": [summand_to_json(x) for x in s.summands]}


def object_from_json(obj: object) -> SheafObject:
    if not isinstance(obj, dict):
        raise SchemaError("sheaf object must be a JSON object")
    n = _require(obj, "n", "sheaf object")
    raw = _require(obj, "summands", "sheaf object")
    if not isinstance(n, int):
        raise SchemaError("n must be an integer")
    if not isinstance(raw, list):
        raise SchemaError("summands must be a list")
    return SheafObject(tuple(summand_from_json(n, x) for x in raw))
