from __future__ import annotations

import random

import pytest

from ngonstab.charges import Slope
from ngonstab.gamma0 import (
    CuspClass,
    Mat2,
    brute_force_cusp_partition,
    brute_force_witness_bfs,
    class_count,
    complete_to_gamma0,
    cusp_canonicalize,
    cusp_class,
    cusp_equivalent,
    enumerate_cusp_classes,
    in_gamma0,
    restrict_partition_to_small_slopes,
    xgcd,
)
from ngonstab.schemas import SchemaError


def test_xgcd_invariant():
    for a in range(-12, 13):
        for b in range(-12, 13):
            g, x, y = xgcd(a, b)
            assert a * x + b * y == g
            assert g == __import__("math").gcd(a, b)


# ---------------------------------------------------------------------------
# 2x2 matrices


def test_mat2_basics():
    t = Mat2.translation(3)
    v = Mat2.lower_translation(4)
    assert t.det == 1 and v.det == 1
    assert (t @ v).det == 1
    assert t @ Mat2.identity() == t
    assert t.inv() @ t == Mat2.identity()
    assert (-t).det == 1
    w = Mat2(0, 1, 1, 0)  # det -1
    assert w.inv() == w
    with pytest.raises(ValueError):
        Mat2(2, 0, 0, 2).inv()


def test_mat2_actions():
    t = Mat2.translation(1)
    assert t.matvec((1, 2)) == (3, 2)
    assert t.moebius(Slope(1, 2)) == Slope(3, 2)
    assert t.moebius(Slope.infinity()) == Slope.infinity()
    # the lower translation moves infinity to a finite slope
    assert Mat2.lower_translation(4).moebius(Slope.infinity()) == Slope(1, 4)


def test_mat2_json():
    m = Mat2(1, -2, 6, -11)
    assert Mat2.from_json(m.to_json()) == m
    for bad in ([[1, 2], [3]], [[1, 2, 3], [4, 5, 6]], "x", [[1, 2], [3, "4"]]):
        with pytest.raises(SchemaError):
            Mat2.from_json(bad)


def test_in_gamma0():
    assert in_gamma0(Mat2(1, 1, 4, 5), 4)
    assert in_gamma0(Mat2(1, 1, 4, 5), 2)
    assert not in_gamma0(Mat2(1, 1, 4, 5), 3)  # lower-left not divisible
    assert not in_gamma0(Mat2(1, 0, 0, -1), 1)  # det -1
    assert in_gamma0(-Mat2.identity(), 7)


# ---------------------------------------------------------------------------
# cusp counting and classification


def test_class_count_pins():
    expected = {1: 1, 2: 2, 3: 2, 4: 3, 5: 2, 6: 4, 8: 4, 12: 6, 36: 12}
    for n, count in expected.items():
        assert class_count(n) == count, n


def test_cusp_class_pins():
    assert cusp_class(4, Slope(0, 1)) == CuspClass(4, 1, 0)
    assert cusp_class(4, Slope.infinity()) == CuspClass(4, 4, 1)
    assert cusp_class(4, Slope(1, 2)) == CuspClass(4, 2, 1)
    assert cusp_class(12, Slope(7, 10)) == CuspClass(12, 2, 1)
    assert cusp_class(9, Slope(1, 3)) == CuspClass(9, 3, 1)
    assert cusp_class(9, Slope(2, 3)) == CuspClass(9, 3, 2)


def test_cusp_class_validation():
    with pytest.raises(ValueError):
        CuspClass(4, 3, 1)  # c does not divide N
    with pytest.raises(ValueError):
        CuspClass(4, 2, 2)  # a not coprime to c


def test_cusp_equivalent():
    assert cusp_equivalent(4, Slope(1, 2), Slope(3, 2))
    assert not cusp_equivalent(9, Slope(1, 3), Slope(2, 3))
    assert cusp_equivalent(9, Slope(1, 3), Slope(4, 3))
    assert cusp_equivalent(6, Slope.infinity(), Slope(5, 6))
    assert not cusp_equivalent(6, Slope.infinity(), Slope(1, 2))


def test_cusp_class_is_moebius_invariant():
    """Acting by a verified group element never changes the class."""
    rng = random.Random(5)
    for N in (2, 3, 4, 6, 8, 12):
        for _ in range(60):
            s = Slope.of(rng.randint(-9, 9), rng.randint(-9, 9) or 1)
            word = Mat2.identity()
            for _ in range(rng.randint(1, 6)):
                gen = rng.choice(
                    [Mat2.translation(rng.choice((-1, 1))),
                     Mat2.lower_translation(N * rng.choice((-1, 1)))]
                )
                word = word @ gen
            assert in_gamma0(word, N)
            assert cusp_class(N, word.moebius(s)) == cusp_class(N, s)


def test_canonical_slope_gets_identity_witness():
    cls, witness = cusp_canonicalize(6, Slope(1, 2))
    assert cls == CuspClass(6, 2, 1)
    assert witness == Mat2.identity()


def test_witness_sweep():
    for N in (1, 2, 3, 4, 6, 8, 9, 12):
        slopes = [Slope.infinity()] + [
            Slope.of(p, q)
            for q in range(1, 13)
            for p in range(-12, 13)
        ]
        for s in slopes:
            cls, witness = cusp_canonicalize(N, s)
            assert in_gamma0(witness, N)
            assert witness.moebius(s) == cls.slope


def test_enumerate_cusp_classes():
    for N in range(1, 61):
        classes = enumerate_cusp_classes(N)
        assert len(classes) == class_count(N)
        assert len(set(classes)) == len(classes)
        assert classes[0] == CuspClass(N, 1, 0)
        if N > 1:
            assert classes[-1] == CuspClass(N, N, 1)
        # every class is its own canonical form
        for cls in classes:
            assert cusp_class(N, cls.slope) == cls


def test_complete_to_gamma0():
    m = complete_to_gamma0(12, 5, 6)
    assert m.det == 1 and m.a == 5 and m.c == 6
    with pytest.raises(ValueError):
        complete_to_gamma0(12, 5, 5)  # 5 does not divide 12
    with pytest.raises(ValueError):
        complete_to_gamma0(12, 3, 6)  # not coprime


# ---------------------------------------------------------------------------
# brute-force oracles


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6, 8, 12, 16, 18, 20])
def test_partition_matches_closed_form(N):
    uf = brute_force_cusp_partition(N)
    restricted = restrict_partition_to_small_slopes(N, uf)
    assert len(set(restricted.values())) == class_count(N)


def test_partition_matches_pairwise_equivalence():
    for N in (4, 6, 9, 12):
        restricted = restrict_partition_to_small_slopes(
            N, brute_force_cusp_partition(N)
        )
        slopes = list(restricted)
        for s1 in slopes:
            for s2 in slopes:
                same_orbit = restricted[s1] == restricted[s2]
                assert same_orbit == cusp_equivalent(N, s1, s2), (N, s1, s2)


def test_bfs_witness_small_levels():
    # BFS over the two parabolic generators converges for tiny levels
    for N, s in [(2, Slope(3, 4)), (3, Slope(2, 5)), (4, Slope(3, 4))]:
        w = brute_force_witness_bfs(N, s)
        assert w is not None
        assert in_gamma0(w, N)
        assert w.moebius(s) == cusp_class(N, s).slope
    # identity case
    assert brute_force_witness_bfs(6, Slope(1, 2)) == Mat2.identity()
