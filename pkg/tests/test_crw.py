import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from coinwalk import CoinValidationError, CrwParams, crw_distribution, crw_moments, enumerate_paths_1d

# exact C(100, 50) / 2**100, from integer arithmetic
MASS_0_N100 = float(Fraction(math.comb(100, 50), 2**100))


def exact_binomial_mass(n, p1, x):
    """Big-integer / rational reference; p1 given as a Fraction."""
    if (n + x) % 2 or abs(x) > n:
        return Fraction(0)
    j = (n + x) // 2
    return math.comb(n, j) * p1**j * (1 - p1) ** (n - j)


def test_two_steps():
    d = crw_distribution(CrwParams(0.5, 0.5, 2))
    assert d.as_dict() == {-2: 0.25, 0: 0.5, 2: 0.25}


def test_empty_walk():
    d = crw_distribution(CrwParams(0.3, 0.7, 0))
    assert d.as_dict() == {0: 1.0}
    assert crw_moments(CrwParams(0.3, 0.7, 0)) == (0, 0)


def test_central_mass_n100():
    assert MASS_0_N100 == pytest.approx(0.0795892, abs=5e-8)
    d = crw_distribution(CrwParams.symmetric(100))
    assert d[0] == pytest.approx(MASS_0_N100, rel=1e-13)


@pytest.mark.parametrize("n", [1, 7, 20, 64])
@pytest.mark.parametrize("p1", [Fraction(1, 10), Fraction(1, 2), Fraction(7, 10), Fraction(9, 10)])
def test_matches_big_integer_reference(n, p1):
    d = crw_distribution(CrwParams(float(p1), float(1 - p1), n))
    ref = np.array([float(exact_binomial_mass(n, p1, x)) for x in range(-n, n + 1)])
    np.testing.assert_allclose(d.probs, ref, rtol=1e-12, atol=1e-300)


def test_symmetric_moments():
    assert crw_moments(CrwParams.symmetric(100)) == (0, 100)


def test_biased_moments_against_sums():
    params = CrwParams(0.7, 0.3, 10)
    d = crw_distribution(params)
    mean, var = crw_moments(params)
    assert mean == pytest.approx(4.0, rel=1e-12)
    assert var == pytest.approx(8.4, rel=1e-12)
    assert d.mean() == pytest.approx(mean, rel=1e-12)
    assert d.variance() == pytest.approx(var, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 33, 500, 10_000])
@pytest.mark.parametrize("p1", np.round(np.arange(0.1, 1.0, 0.1), 1))
def test_moments_equal_distribution_sums(n, p1):
    params = CrwParams(p1, 1 - p1, n)
    d = crw_distribution(params)
    mean, var = crw_moments(params)
    assert abs(d.mean() - mean) <= 1e-9 * max(abs(mean), 1.0)
    assert d.variance() == pytest.approx(var, rel=1e-9)
    assert d.is_valid()


@pytest.mark.parametrize("n", [0, 1, 2, 9, 100, 1001])
def test_symmetric_case_is_exactly_mirror_symmetric(n):
    d = crw_distribution(CrwParams.symmetric(n))
    np.testing.assert_array_equal(d.probs, d.probs[::-1])


def test_large_n_no_overflow():
    d = crw_distribution(CrwParams(0.3, 0.7, 100_000))
    assert np.all(np.isfinite(d.probs))
    assert d.total() == pytest.approx(1.0, abs=1e-10)
    mean, var = crw_moments(CrwParams(0.3, 0.7, 100_000))
    assert d.mean() == pytest.approx(mean, rel=1e-9)


@pytest.mark.parametrize("p1", [0.0, 1.0])
def test_deterministic_coin(p1):
    d = crw_distribution(CrwParams(p1, 1 - p1, 5))
    assert d[5 if p1 else -5] == 1.0
    assert d.total() == 1.0


@pytest.mark.parametrize("n", range(0, 13))
@pytest.mark.parametrize("p1", [Fraction(1, 2), Fraction(3, 10), Fraction(4, 5)])
def test_ensemble_equivalence_by_rational_path_sum(n, p1):
    """Sum of prod p_{u_l} over all 2**n coin sequences, in exact rationals."""
    exact = {}
    for seq in itertools.product((1, -1), repeat=n):
        w = Fraction(1)
        for u in seq:
            w *= p1 if u == 1 else 1 - p1
        exact[sum(seq)] = exact.get(sum(seq), Fraction(0)) + w
    d = crw_distribution(CrwParams(float(p1), float(1 - p1), n))
    for x in range(-n, n + 1):
        assert abs(d[x] - float(exact.get(x, 0))) <= 1e-12
    e = enumerate_paths_1d((float(p1), float(1 - p1)), n)
    np.testing.assert_allclose(e.probs, d.probs, atol=1e-13, rtol=0)


@pytest.mark.parametrize(
    "args, invariant",
    [((0.6, 0.5, 3), "p1 + pm1 = 1"), ((1.2, -0.2, 3), "p1 in [0, 1]"), ((0.5, 0.5, -1), "n >= 0 integer")],
)
def test_param_validation(args, invariant):
    with pytest.raises(CoinValidationError) as exc:
        CrwParams(*args)
    assert exc.value.invariant == invariant
