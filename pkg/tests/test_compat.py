from __future__ import annotations

import random

import pytest

from ngonstab.charges import KClass, PhasePoint, add_half_turns
from ngonstab.compat import (
    CompatReport,
    EffCompSet,
    KAuto,
    apply_kauto,
    box_sup_phase,
    check_compatibility,
    check_kernel,
    check_order,
    compose,
    compute_m,
    conjugate_by_D,
    descend,
    eff_comp_member,
    eff_comp_set_of,
    identity_kauto,
    invert,
    iota_kauto,
    lift_k_matrix,
    order_preserved_brute_force,
    order_preserved_linear,
    order_preserved_pairwise,
    sampled_pairwise_order,
    shift_square_kauto,
)
from ngonstab.gamma0 import Mat2, in_gamma0
from ngonstab.schemas import SchemaError

ROT = Mat2(0, -1, 1, 0)


def random_gamma0(rng: random.Random, n: int, words: int = 5) -> Mat2:
    """A pseudo-random member built from the two parabolic generators."""
    m = Mat2.identity()
    for _ in range(words):
        if rng.random() < 0.5:
            m = m @ Mat2.translation(rng.choice((-2, -1, 1, 2)))
        else:
            m = m @ Mat2.lower_translation(n * rng.choice((-1, 1)))
    return m


# ---------------------------------------------------------------------------
# the lattice automorphism type


def test_kauto_validation():
    with pytest.raises(ValueError):
        KAuto(1, ((2, 0), (0, 1)))  # det 2
    with pytest.raises(ValueError):
        KAuto(2, ((1, 0), (0, 1)))  # wrong size
    with pytest.raises(ValueError):
        KAuto(1, ((1, 0), (0, 1)), amplitude_certificate="2")


def test_kauto_json_round_trip():
    a = iota_kauto(3)
    assert KAuto.from_json(a.to_json()) == a
    assert KAuto.from_json(a.to_json()).amplitude_certificate == 0
    for bad in (
        17,
        {"n": 2},
        {"n": "2", "matrix": [[1, 0], [0, 1]]},
        {"n": 1, "matrix": [[1, 0], [0, 2]]},
        {"n": 1, "matrix": [[1, 0], [0, 1]], "amplitude_M": "x"},
    ):
        with pytest.raises(SchemaError):
            KAuto.from_json(bad)


def test_apply_kauto_rotates_components():
    a = iota_kauto(3)
    k = KClass(3, 2, (1, 0, 0))
    assert apply_kauto(a, k) == KClass(3, 2, (0, 1, 0))
    assert apply_kauto(a, apply_kauto(a, apply_kauto(a, k))) == k
    with pytest.raises(ValueError):
        apply_kauto(a, KClass(2, 0, (0, 0)))


def test_check_kernel():
    assert check_kernel(iota_kauto(4))
    assert check_kernel(identity_kauto(5))
    # e_2 picks up an extra e_1: rank sums of kernel vectors drift
    broken = KAuto(2, ((1, 0, 0), (0, 1, 1), (0, 0, 1)))
    assert not check_kernel(broken)


def test_descend():
    assert descend(identity_kauto(4)) == Mat2.identity()
    assert descend(iota_kauto(6)) == Mat2.identity()
    with pytest.raises(ValueError):
        descend(KAuto(2, ((1, 0, 0), (0, 1, 1), (0, 0, 1))))
    # swap on the 1-gon: kernel is trivial but the plane map reverses
    with pytest.raises(ValueError):
        descend(KAuto(1, ((0, 1), (1, 0))))


def test_conjugate_by_D():
    m = Mat2(1, 2, 3, 4)
    assert conjugate_by_D(m) == Mat2(1, -2, -3, 4)
    assert conjugate_by_D(conjugate_by_D(m)) == m
    assert conjugate_by_D(m).det == m.det


# ---------------------------------------------------------------------------
# the critical phase


def test_compute_m_pins():
    assert compute_m(Mat2.identity(), 1) == PhasePoint(0, (-1, 0))
    assert compute_m(-Mat2.identity(), 1) == PhasePoint(-1, (1, 0))
    assert compute_m(ROT, 2) == PhasePoint(0, (0, 1))  # phase 1/2
    assert compute_m(ROT.inv(), 2) == PhasePoint(0, (-1, 0))
    assert compute_m(Mat2.translation(1), 1) == PhasePoint(0, (-1, 0))
    assert compute_m(Mat2(1, 0, 1, 1), 1) == PhasePoint(0, (-1, 1))
    with pytest.raises(ValueError):
        compute_m(Mat2(0, 1, 1, 0), 1)


@pytest.mark.parametrize(
    "m2", [Mat2.identity(), -Mat2.identity(), ROT, Mat2(1, 0, 1, 1), Mat2(2, 1, 1, 1)]
)
def test_box_sup_attains_m_plus_one(m2):
    target = add_half_turns(compute_m(m2, 1), 1)
    sups = [box_sup_phase(m2, 1, box)[0].sort_key() for box in (10, 25, 50)]
    assert sups[0] <= sups[1] <= sups[2] <= target.sort_key()
    assert sups[2] == target.sort_key()


def test_box_sup_witness_is_a_member():
    p, v = box_sup_phase(ROT, 2, 10)
    assert p == PhasePoint(0, (0, -1))  # phase 3/2 = m + 1
    assert v == (0, -1)


# ---------------------------------------------------------------------------
# effective-comparable membership


def test_eff_comp_member():
    s = EffCompSet(2, Mat2.identity())
    assert eff_comp_member(s, (0, 1))
    assert eff_comp_member(s, (-3, 0))
    assert eff_comp_member(s, (1, 0))  # -v lands in H' under the identity
    with pytest.raises(ValueError):
        eff_comp_member(s, (0, 0))
    rot = EffCompSet(2, ROT)
    assert eff_comp_member(rot, (0, -1))
    assert not eff_comp_member(rot, (1, -1))


def test_eff_comp_set_of():
    s = eff_comp_set_of(iota_kauto(3))
    assert s.n == 3 and s.descended == Mat2.identity()
    with pytest.raises(ValueError):
        EffCompSet(2, Mat2(0, 1, 1, 0))


# ---------------------------------------------------------------------------
# the criterion itself


def test_known_compatibles():
    for a in (identity_kauto(3), iota_kauto(5), shift_square_kauto(2)):
        report = check_compatibility(a)
        assert report.verdict == "Compatible-by-criterion"
        assert report.kernel_preserved and report.det_plus_one
        assert report.order_preserved
        assert report.m_value is not None


def test_verdict_ladder():
    broken = KAuto(2, ((1, 0, 0), (0, 1, 1), (0, 0, 1)))
    assert check_compatibility(broken).verdict == "FailsKernel"
    swap = KAuto(1, ((0, 1), (1, 0)))
    report = check_compatibility(swap)
    assert report.verdict == "FailsOrientation"
    assert report.kernel_preserved and not report.det_plus_one
    # a genuine lift with the certificate stripped off
    lifted = lift_k_matrix(2, Mat2(1, 1, 2, 3))
    bare = KAuto(2, lifted.matrix, None)
    assert check_compatibility(bare).verdict == "MissingAmplitude"
    assert check_compatibility(lifted).verdict == "Compatible-by-criterion"


def test_report_json():
    report = check_compatibility(iota_kauto(2))
    obj = report.to_json()
    assert obj["verdict"] == "Compatible-by-criterion"
    assert obj["descended"] == [[1, 0], [0, 1]]
    assert obj["m_value"] == {"two_shift": 0, "dir": [-1, 0]}
    none_report = check_compatibility(KAuto(1, ((0, 1), (1, 0)))).to_json()
    assert none_report["m_value"] is None


def test_lift_round_trip():
    rng = random.Random(3)
    for n in (1, 2, 3, 4, 6, 8, 12):
        for _ in range(10):
            m2 = random_gamma0(rng, n)
            assert in_gamma0(m2, n)
            lifted = lift_k_matrix(n, m2)
            assert check_kernel(lifted)
            assert descend(lifted) == m2
            assert check_compatibility(lifted).verdict == "Compatible-by-criterion"


def test_lift_rejections():
    with pytest.raises(ValueError):
        lift_k_matrix(3, Mat2(1, 1, 2, 3))  # lower-left not divisible by 3
    with pytest.raises(ValueError):
        lift_k_matrix(1, Mat2(0, 1, 1, 0))  # det -1
    with pytest.raises(ValueError):
        lift_k_matrix(3, Mat2(1, 0, 3, 1), kernel_action=((1, 0), (0, 2)))


def test_lift_custom_kernel_action():
    perm = ((0, 1), (1, 0))
    lifted = lift_k_matrix(3, Mat2(1, 0, 3, 1), kernel_action=perm)
    assert check_kernel(lifted)
    assert descend(lifted) == Mat2(1, 0, 3, 1)


def test_compose_and_invert():
    a = lift_k_matrix(4, Mat2(1, 1, 4, 5))
    b = lift_k_matrix(4, Mat2(1, 0, 4, 1))
    ab = compose(a, b)
    assert descend(ab) == descend(a) @ descend(b)
    assert ab.amplitude_certificate == 2
    inv = invert(a)
    assert compose(a, inv).matrix == identity_kauto(4).matrix
    assert inv.amplitude_certificate == a.amplitude_certificate
    assert compose(shift_square_kauto(2), shift_square_kauto(2)).amplitude_certificate == 4
    # unknown certificates stay unknown through composition
    bare = KAuto(4, a.matrix, None)
    assert compose(bare, b).amplitude_certificate is None
    with pytest.raises(ValueError):
        compose(a, identity_kauto(3))


# ---------------------------------------------------------------------------
# order oracles


def test_check_order_is_the_determinant():
    assert check_order(Mat2(-1, 0, -2, -1), 2)
    assert not check_order(Mat2(0, 1, 1, 0), 2)
    with pytest.raises(ValueError):
        check_order(Mat2.identity(), 0)


def test_cyclic_oracle_on_reflections_and_rotations():
    assert order_preserved_brute_force(Mat2.identity(), 1, 8)
    assert order_preserved_brute_force(ROT, 1, 8)
    assert order_preserved_brute_force(-Mat2.identity(), 1, 8)
    assert not order_preserved_brute_force(Mat2(0, 1, 1, 0), 1, 8)
    assert not order_preserved_brute_force(Mat2(1, 0, 0, -1), 1, 8)


def test_cyclic_oracle_handles_negated_representatives():
    # the window-anchored walk rejects this one, its negative passes;
    # the cyclic walk accepts both, matching the determinant rule
    m = Mat2(-1, 0, -2, -1)
    assert order_preserved_brute_force(m, 2, 10)
    assert order_preserved_brute_force(-m, 2, 10)
    passes = [order_preserved_linear(x, 2, 10) for x in (m, -m)]
    assert sorted(passes) == [False, True]


def test_linear_matches_pairwise_small_boxes():
    rng = random.Random(11)
    checked = 0
    while checked < 40:
        m = Mat2(*(rng.randint(-4, 4) for _ in range(4)))
        if m.det not in (1, -1):
            continue
        checked += 1
        assert order_preserved_linear(m, 2, 6) == order_preserved_pairwise(m, 2, 6)


def test_sampled_pairwise_oracle():
    clean = sampled_pairwise_order(Mat2.identity(), 1, box=10, samples=500, seed=4)
    assert clean == {"box": 10, "samples": 500, "violations": 0}
    dirty = sampled_pairwise_order(Mat2(0, 1, 1, 0), 1, box=10, samples=500, seed=4)
    assert dirty["violations"] > 0
