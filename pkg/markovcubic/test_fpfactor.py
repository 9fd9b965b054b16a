from fractions import Fraction

import numpy as np
import pytest
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_monic, gf_mul

from .fpfactor import (
    EXAMPLE_MOD7,
    NOT_POST_CRITICALLY_FINITE,
    Branch,
    Cubic,
    PCFCubic,
    SkipPrime,
    catalog,
    catalog_entry,
    compose_iterate,
    critical_orbits_mod_p,
    factor_shape,
    is_eisenstein_square,
    is_square,
    iterate_and_factor,
    orbit_collapses,
    orbit_spec_mod_p,
    primes_one_mod_three,
    reduce_mod_p,
    select_model,
    square_branch_test,
)
from .typedyn import OrbitSpec, as_label
from .util import ResourceLimitError


def test_catalog():
    entries = catalog()
    assert [f.orbit_length for f in entries] == [1, 1, 1, 1, 2, 2, 2]
    for f in entries:
        assert f.orbit.shift_target == 1
        for s, q in f.orbit_pairs:
            assert s * s != 4 * q


def test_catalog_critical_data():
    f = catalog_entry("-2z^3+3z^2")
    assert f.critical_points() == (0, 1)
    assert f.orbit_pairs == ((Fraction(1), Fraction(0)),)
    assert f(0) == 0 and f(1) == 1
    assert catalog_entry("-1/4z^3+3/2z+2").orbit_pairs == (
        (Fraction(4), Fraction(2)),
        (Fraction(0), Fraction(-8)),
    )
    irrational = catalog_entry("-1/28z^3-3/4z+7/2")
    assert irrational.critical_points() is None
    assert irrational.orbit_pairs == ((Fraction(7), Fraction(14)), (Fraction(0), Fraction(7)))


def test_catalog_families_are_translation_invariant():
    for f in catalog(a=Fraction(1, 3))[4:]:
        assert f.orbit == OrbitSpec(2, 1)
    with pytest.raises(ValueError):
        catalog_entry("z^3")


def test_non_pcf_cubics_are_rejected():
    for name, coeffs in NOT_POST_CRITICALLY_FINITE:
        with pytest.raises(ValueError):
            PCFCubic(coeffs, name)
    with pytest.raises(ValueError):
        PCFCubic(["1", "0", "0", "0"])


def test_critical_orbits_mod_7():
    assert critical_orbits_mod_p(EXAMPLE_MOD7, 7) == {0: [0, 6, 5, 6], 1: [1, 3, 3]}
    assert orbit_spec_mod_p(EXAMPLE_MOD7, 7) == OrbitSpec(2, 1)


def test_reduce_mod_p():
    f = catalog_entry("-2z^3+3z^2")
    assert reduce_mod_p(f, 0, 7).degenerate
    assert not reduce_mod_p(f, 3, 7).degenerate
    assert reduce_mod_p(f, 3, 7).coeffs == (5, 3, 0, 0)
    with pytest.raises(SkipPrime) as err:
        reduce_mod_p(catalog_entry("z^3-3/2z^2"), 0, 2)
    assert err.value.reason == "bad-reduction"
    with pytest.raises(SkipPrime):
        reduce_mod_p(catalog_entry("-1/28z^3-3/4z+7/2"), 1, 7)


def test_is_square():
    assert is_square(2, 7)
    assert not is_square(3, 7)
    assert is_square(1, 31)
    with pytest.raises(ValueError):
        is_square(14, 7)
    assert is_eisenstein_square(Fraction(-3, 16))
    assert is_eisenstein_square(Fraction(4, 9))
    assert not is_eisenstein_square(6)


def test_plain_cubic_shape():
    red = reduce_mod_p(Cubic.from_text("1,0,1,1"), 0, 5)
    assert factor_shape(red, 1) == (3,)
    assert iterate_and_factor(red, 1).shape == (3,)
    assert iterate_and_factor(red, 0).shape == (1,)
    assert iterate_and_factor(red, 1).labels is None


def test_branch_test_and_labels_mod_7():
    f = catalog_entry("-2z^3+3z^2")
    red = reduce_mod_p(f, 3, 7)
    assert square_branch_test([1, 4], red) == Branch.TWO_PLUS_ONE
    result = iterate_and_factor(red, 1)
    assert result.shape == (2, 1)
    assert result.violations == 0
    product = result.labels[0][0] * result.labels[1][0]
    assert (product,) == as_label("n")


def test_degenerate_and_bounds():
    f = catalog_entry("-2z^3+3z^2")
    with pytest.raises(SkipPrime) as err:
        iterate_and_factor(reduce_mod_p(f, 0, 7), 1)
    assert err.value.reason == "degenerate"
    with pytest.raises(ResourceLimitError):
        iterate_and_factor(reduce_mod_p(f, 3, 7), 5)


def test_factor_shape_skips_degenerate_primes():
    f = catalog_entry("-2z^3+3z^2")
    with pytest.raises(SkipPrime) as err:
        factor_shape(reduce_mod_p(f, 0, 7), 1)
    assert err.value.reason == "degenerate"
    assert factor_shape(reduce_mod_p(f, 3, 7), 1) == (2, 1)


def test_orbit_collapses():
    f = catalog_entry("-2z^3+3z^2")
    assert not any(orbit_collapses(f, p) for p in primes_one_mod_three(5, 200))
    # sqrt(2) is not in F_13, so the critical points are not defined there
    g = catalog_entry("-1/4z^3+3/2z+2")
    assert critical_orbits_mod_p(g, 13) == {}
    assert not orbit_collapses(g, 13)


def test_factorization_laws_over_catalog():
    checked = 0
    for f in catalog():
        for p in primes_one_mod_three(5, 80):
            for n in (1, 2):
                try:
                    red = reduce_mod_p(f, 2, p)
                    if orbit_collapses(f, p):
                        continue
                    result = iterate_and_factor(red, n)
                except SkipPrime:
                    continue
                assert result.violations == 0
                assert sum(result.shape) == 3**n
                assert result.shape == factor_shape(red, n)
                _, monic = gf_monic(compose_iterate(red, n), p, ZZ)
                product = [1]
                for g in result.factors:
                    product = gf_mul(product, g, p, ZZ)
                assert product == monic
                checked += 1
    assert checked > 50


def _random_trials(count, levels, seed):
    """Non-degenerate (result, reduced cubic) pairs for random entries, primes and t."""
    rng = np.random.default_rng(seed)
    entries = catalog()
    primes = primes_one_mod_three(5, 400)
    done, skipped = [], 0
    while len(done) < count:
        f = entries[rng.integers(len(entries))]
        p = int(primes[rng.integers(len(primes))])
        t = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 5)))
        n = int(rng.choice(levels))
        try:
            if orbit_collapses(f, p):
                raise SkipPrime("orbit-collapse", p)
            red = reduce_mod_p(f, t, p)
            done.append((iterate_and_factor(red, n), red))
        except SkipPrime:
            skipped += 1
    return done, skipped


def test_branch_law_over_random_trials():
    trials, skipped = _random_trials(2000, [1], seed=5)
    checked = [result for result, _ in trials if result.labels is not None]
    assert len(checked) > 1000
    assert sum(result.branch_violations for result in checked) == 0
    assert sum(result.label_violations for result in checked) == 0
    assert skipped < 2000


def test_degree_law_and_products_over_random_trials():
    trials, _ = _random_trials(1000, [1, 2, 3], seed=6)
    for result, red in trials:
        assert result.degree_violations == 0
        assert sum(result.shape) == 3**result.n
        _, monic = gf_monic(compose_iterate(red, result.n), red.p, ZZ)
        product = [1]
        for g in result.factors:
            product = gf_mul(product, g, red.p, ZZ)
        assert product == monic


def test_select_model_length_one():
    f = catalog_entry("-2z^3+3z^2")
    assert select_model(f, 3) == 4
    assert select_model(f, Fraction(196, 27)) == 1
    assert select_model(f, Fraction(4, 3)) == 2
    assert select_model(f, -4) == 3
    with pytest.raises(ValueError):
        select_model(f, 0)


def test_select_model_length_two():
    f = catalog_entry("2z^3-3z^2+1/2")
    assert select_model(f, 1) == 5
    assert select_model(f, Fraction(5, 8)) == 3
    assert select_model(f, Fraction(1, 6)) == 4
    with pytest.raises(ValueError):
        select_model(f, Fraction(9, 2))
    with pytest.raises(ValueError):
        select_model(f, 0)


def test_primes_one_mod_three():
    assert primes_one_mod_three(5, 40) == [7, 13, 19, 31, 37]


def test_records():
    red = reduce_mod_p(catalog_entry("-2z^3+3z^2"), 3, 7)
    record = iterate_and_factor(red, 1).to_record()
    assert record["p"] == 7 and record["n"] == 1
    assert sorted(record["shape"], reverse=True) == [2, 1]
    assert len(record["labels"]) == 2
