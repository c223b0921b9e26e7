import random
from fractions import Fraction

import pytest

from linkform.errors import UnrealizableError, UnsupportedError
from linkform.pairing import Cyc, E0, E1, StandardForm, standard_form_of
from linkform.realize import (
    even_component_criterion,
    even_component_report,
    exhaustive_search,
    realize,
    realize_gap,
    realize_mixed,
    realize_odd_flat,
    realize_odd_sphere,
    realize_two_homog,
    verify_realization,
)
from linkform.seifert import euler_invariant, seifert


def sf(*atoms):
    return StandardForm.of(atoms)


# ---------------------------------------------------------------------------
# flat realizations at odd primes


def test_odd_flat_rank1_p5():
    r = realize_odd_flat(sf(Cyc.make(5, 1, 1)), 5)
    assert r.verified
    assert euler_invariant(r.seifert) == 0
    assert sorted(r.seifert.pairs) == [(5, -3), (5, 1), (5, 2)]


def test_odd_flat_p3_square_needs_bumped_orders():
    r = realize_odd_flat(sf(Cyc.make(3, 2, 1), Cyc.make(3, 2, 1)), 3)
    assert r.verified and "bump" in r.construction
    assert sorted(a for a, _ in r.seifert.pairs) == [9, 9, 27, 27]
    # same rank and exponent with nonsquare class stays at equal cone orders
    r2 = realize_odd_flat(sf(Cyc.make(3, 2, 1), Cyc.make(3, 2, 2)), 3)
    assert r2.verified and set(a for a, _ in r2.seifert.pairs) == {9}


def test_odd_flat_multi_block():
    target = sf(Cyc.make(5, 2, 1), Cyc.make(5, 2, 2), Cyc.make(5, 1, 1))
    r = realize_odd_flat(target, 5)
    assert r.verified
    assert euler_invariant(r.seifert) == 0
    assert sorted(a for a, _ in r.seifert.pairs) == [5, 25, 25, 25, 25]


def test_odd_flat_rejects_wrong_prime():
    with pytest.raises(UnsupportedError):
        realize_odd_flat(sf(Cyc.make(3, 1, 1)), 5)


# ---------------------------------------------------------------------------
# rational homology spheres, odd order


def test_odd_sphere_lens():
    r = realize_odd_sphere(sf(Cyc.make(3, 1, 1)))
    assert r.verified
    assert r.seifert.r == 2  # a lens space
    assert euler_invariant(r.seifert) == Fraction(1, 9)


def test_odd_sphere_euler_is_one_over_big_alpha():
    target = sf(Cyc.make(3, 1, 1), Cyc.make(5, 1, 2))
    r = realize_odd_sphere(target)
    assert r.verified
    eps = euler_invariant(r.seifert)
    assert eps.numerator == 1
    assert eps.denominator == r.seifert.pairs[0][0]


def test_odd_sphere_homogeneous_rank2_square():
    # this class also has the dedicated bumped-order realization
    target = sf(Cyc.make(3, 1, 1), Cyc.make(3, 1, 1))
    bumped = seifert((9, 7), (3, -1), (3, -1))
    assert verify_realization(bumped, target)
    r = realize_odd_sphere(target)
    assert r.verified


def test_odd_sphere_multi_block_classes():
    rng = random.Random(2)
    for _ in range(8):
        atoms = []
        for p in (3, 7):
            for k in (2, 1):
                if rng.random() < 0.7:
                    atoms.append(Cyc.make(p, k, rng.choice([1, 2, p + 1, p + 2])))
        if not atoms:
            continue
        target = sf(*atoms)
        r = realize_odd_sphere(target)
        assert r.verified, target


# ---------------------------------------------------------------------------
# 2-primary homogeneous


def test_two_homog_e0_squared():
    r = realize_two_homog(sf(E0(2)), "flat")
    assert r.seifert.pairs == ((4, -1), (4, 1), (4, -1), (4, 1))
    assert r.verified


def test_two_homog_cyc233_sphere():
    r = realize_two_homog(sf(Cyc.make(2, 3, 3)), "sphere")
    assert r.seifert.pairs == ((32, -3), (8, 1))
    assert r.verified


def test_two_homog_cyc211():
    r = realize_two_homog(sf(Cyc.make(2, 1, 1)), "sphere")
    assert r.verified
    assert euler_invariant(r.seifert) != 0
    r = realize_two_homog(sf(Cyc.make(2, 1, 1)), "flat")
    assert r.verified and euler_invariant(r.seifert) == 0


def test_two_homog_all_lens_classes():
    for k in (1, 2, 3):
        units = [1] if k == 1 else ([1, 3] if k == 2 else [1, 3, 5, 7])
        for a in units:
            r = realize_two_homog(sf(Cyc.make(2, k, a)), "sphere")
            assert r.verified, (k, a)
            assert euler_invariant(r.seifert) != 0


def test_two_homog_e1_both_modes():
    for mode in ("flat", "sphere"):
        r = realize_two_homog(sf(E1(2)), mode)
        assert r.verified, mode


def test_gap_realization():
    r = realize_gap(sf(Cyc.make(2, 3, 3), Cyc.make(2, 1, 1)))
    assert r.verified
    alphas = sorted(a for a, _ in r.seifert.pairs)
    assert alphas[0] == 2 and alphas[-1] == 32


def test_gap_even_top():
    r = realize_gap(sf(E0(3), Cyc.make(2, 1, 1)))
    assert r.verified


def test_gap_sphere_mode():
    r = realize_gap(sf(Cyc.make(2, 4, 3), Cyc.make(2, 2, 1)), "sphere")
    assert r.verified
    assert euler_invariant(r.seifert) != 0


def test_gap_condition_violated():
    with pytest.raises(UnrealizableError):
        realize_gap(sf(Cyc.make(2, 2, 1), Cyc.make(2, 1, 1)))


def test_even_below_top_never_realizable():
    with pytest.raises(UnrealizableError):
        realize(sf(E0(2), E0(1)))
    with pytest.raises(UnrealizableError):
        realize(sf(Cyc.make(2, 4, 1), E0(2)))


# ---------------------------------------------------------------------------
# mixed targets


def test_mixed_flat_example():
    target = sf(Cyc.make(3, 1, 1), E0(2))
    r = realize_mixed(target, "flat")
    assert r.verified
    assert euler_invariant(r.seifert) == 0
    alphas = {a for a, _ in r.seifert.pairs}
    assert alphas == {3, 4}


def test_mixed_pure_odd_delegates():
    target = sf(Cyc.make(3, 1, 1))
    assert realize_mixed(target, "flat").verified


def test_mixed_inhomogeneous_two_part_redirects():
    with pytest.raises(UnrealizableError):
        realize_mixed(sf(Cyc.make(2, 3, 1), Cyc.make(2, 1, 1), Cyc.make(3, 1, 1)), "flat")


def test_mixed_sphere_with_odd_two_part():
    target = sf(Cyc.make(3, 1, 1), Cyc.make(2, 2, 3))
    r = realize_mixed(target, "sphere")
    assert r.verified
    assert euler_invariant(r.seifert) != 0


def test_mixed_sphere_with_level3_two_part():
    # slot corrections interact pairwise here; exercises the compensated solver
    target = sf(
        Cyc.make(2, 3, 3), Cyc.make(2, 3, 3), Cyc.make(2, 3, 3), Cyc.make(3, 1, 1)
    )
    r = realize_mixed(target, "sphere")
    assert r.verified
    assert euler_invariant(r.seifert).numerator == 1


def test_mixed_sphere_even_two_part_refused():
    with pytest.raises(UnrealizableError):
        realize_mixed(sf(Cyc.make(3, 1, 1), E0(2)), "sphere")


def test_dispatcher_trivial_target():
    r = realize(StandardForm.empty())
    assert r.verified and standard_form_of(r.seifert) == StandardForm.empty()
    r = realize(StandardForm.empty(), "sphere")
    assert r.verified and euler_invariant(r.seifert) != 0


def test_dispatcher_multi_prime_flat():
    target = sf(Cyc.make(3, 1, 1), Cyc.make(5, 1, 2), Cyc.make(7, 2, 3))
    r = realize(target)  # auto prefers flat
    assert r.verified
    assert euler_invariant(r.seifert) == 0
    r = realize(target, "sphere")
    assert r.verified and euler_invariant(r.seifert) != 0


def test_dispatcher_gap_plus_odd_flat():
    target = sf(Cyc.make(2, 3, 3), Cyc.make(2, 1, 1), Cyc.make(3, 1, 1))
    r = realize(target, "flat")
    assert r.verified


def test_negated_target_realized_by_negated_betas():
    target = sf(Cyc.make(5, 1, 2))
    r = realize(target, "flat")
    neg = seifert(*((a, -b) for a, b in r.seifert.pairs))
    assert verify_realization(neg, target.negated())


# ---------------------------------------------------------------------------
# obstruction and search


def test_even_component_criterion_examples():
    assert even_component_criterion(
        seifert((2, 1), (2, 1), (2, 1), (2, 1), (2, -1), (2, -1), (2, -1), (2, -1))
    )
    assert not even_component_criterion(seifert((4, 1), (4, 1), (4, 1), (4, 1)))
    # the quarter-turn Nil space: criterion false yet an even component exists
    rep = even_component_report(seifert((2, 1), (2, 1), (2, 1), (2, -1)))
    assert rep["criterion"] is False
    assert rep["classified_even"] is True
    assert rep["agree"] is False


def test_exhaustive_search_trivial_target():
    hits = exhaustive_search(StandardForm.empty(), max_r=2, alphas=(2, 3), max_beta=2)
    found = {tuple(sorted(S.pairs)) for S in hits}
    assert ((2, -1), (2, 1)) in found
    assert ((2, 1),) in found  # r=1 with |beta| = 1 has trivial homology


def test_exhaustive_search_small_positive_control():
    target = sf(Cyc.make(2, 2, 3), E0(1))
    hits = exhaustive_search(target, max_r=4, alphas=(2,), max_beta=1)
    assert any(
        tuple(sorted(S.pairs)) == ((2, -1), (2, 1), (2, 1), (2, 1)) for S in hits
    )


def test_verify_realization_rejects_extra_torsion():
    # correct 2-part but stray torsion at 3 must fail
    assert not verify_realization(seifert((4, 1), (2, 1)), sf(Cyc.make(2, 1, 1)))
