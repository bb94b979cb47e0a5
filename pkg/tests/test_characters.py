"""Exact q-series: eta, theta, graded dimensions, the character identity."""

import random
from fractions import Fraction

import pytest

from permtwist.characters import (FracQSeries, char_coset, char_cycle_type,
                                  char_twisted, char_voa, compare_thm41,
                                  eta_power, theta_series,
                                  twisted_lead_exponent)
from permtwist.cocycle import TwistSystem
from permtwist.fock import twisted_state_counts
from permtwist.lattice import Lattice

A1 = Lattice([[2]], "A1")
A2 = Lattice([[2, 1], [1, 2]], "A2")


def test_eta_power_examples():
    e1 = eta_power(1, 3)
    assert e1.leading_exponent() == Fraction(1, 24)
    assert e1.coefficient(Fraction(1, 24)) == 1
    assert e1.coefficient(Fraction(25, 24)) == -1
    assert e1.coefficient(Fraction(49, 24)) == -1
    assert eta_power(0, 2).coefficient(0) == 1
    assert eta_power(24, 2).leading_exponent() == 1


def test_eta_product_euler_oracle():
    # multiply the first few (1 - q^n) factors by hand
    order = Fraction(5)
    poly = {Fraction(0): Fraction(1)}
    for n in range(1, 7):
        nxt = dict(poly)
        for e, c in poly.items():
            key = e + n
            if key <= order:
                nxt[key] = nxt.get(key, Fraction(0)) - c
        poly = nxt
    series = eta_power(1, order + Fraction(1, 24))
    for e, c in poly.items():
        assert series.coefficient(e + Fraction(1, 24)) == c


def test_theta_examples():
    t = theta_series(A1, 4)
    assert t.coefficient(0) == 1
    assert t.coefficient(1) == 2
    assert t.coefficient(4) == 2
    assert t.coefficient(2) == 0
    assert theta_series(A1, 4, shift=(Fraction(0),)) == t
    ts = theta_series(A1, 4, shift=(Fraction(1, 2),))
    assert ts.leading_exponent() == Fraction(1, 4)
    assert all((e - Fraction(1, 4)).denominator == 1 for e, _ in ts.items())
    with pytest.raises(ValueError, match="dual"):
        theta_series(A1, 2, shift=(Fraction(1, 3),))


def test_series_algebra():
    rng = random.Random(9)
    def rand_series():
        denom = rng.choice([2, 24, 48])
        coeffs = {rng.randint(0, 20): Fraction(rng.randint(-3, 3))
                  for _ in range(6)}
        coeffs[0] = Fraction(rng.choice([1, -1]))  # unit leading coefficient
        return FracQSeries(denom, coeffs, Fraction(30))
    one = FracQSeries.constant(1, Fraction(5))
    for _ in range(10):
        a, b, c = rand_series(), rand_series(), rand_series()
        assert (a * b) * c == a * (b * c)
        inv = a.inverse()
        prod = a * inv
        lim = min(prod.order, Fraction(5))
        assert prod.truncated(lim) == one.truncated(lim)


def test_char_voa_a1():
    cv = char_voa(A1, 5)
    lead = Fraction(-1, 24)
    assert cv.leading_exponent() == lead
    assert cv.coefficient(lead) == 1
    assert cv.coefficient(lead + 1) == 3
    assert cv.coefficient(lead + 2) == 4
    assert all((e - lead).denominator == 1 for e, _ in cv.items())


def test_char_twisted_leading_exponent_and_reduction():
    ct = char_twisted(A1, 2, 3)
    assert ct.leading_exponent() == Fraction(-1, 48) == twisted_lead_exponent(A1, 2)
    assert char_twisted(A1, 1, 5) == char_voa(A1, 5)


@pytest.mark.parametrize("K,k", [(A1, 2), (A1, 3), (A2, 2)])
def test_twisted_coefficients_count_states(K, k):
    # acceptance oracle: brute-force state enumeration against the series
    system = TwistSystem(K, k)
    counts = twisted_state_counts(system, 3)
    series = char_twisted(K, k, Fraction(7, 2))
    lead = twisted_lead_exponent(K, k)
    step = Fraction(1, 2 * k)
    w = Fraction(0)
    while w <= 3:
        assert series.coefficient(lead + w) == counts.get(w, 0), (w,)
        w += step
    for _, c in series.items():
        assert c == int(c) and c >= 0


@pytest.mark.parametrize("K,k,order", [(A1, 2, 10), (A1, 3, 8), (A2, 2, 6)])
def test_character_identity(K, k, order):
    reports = compare_thm41(K, k, order)
    assert reports and all(r.passed for r in reports)


def test_coset_leading_exponent_matches_min_norm():
    for K in (A1, A2):
        base_lead = Fraction(-K.rank, 24)
        for beta in K.dual_coset_reps():
            if not any(beta):
                continue
            cs = char_coset(K, beta, 3)
            # smallest norm in the shifted coset
            best = None
            for alpha in K.enumerate_up_to_norm(8):
                vec = tuple(a + b for a, b in zip(alpha, beta))
                norm = K.inner(vec, vec)
                best = norm if best is None else min(best, norm)
            assert cs.leading_exponent() == base_lead + Fraction(best, 2)
            assert cs.leading_exponent() != base_lead


def test_cycle_type_products():
    full = char_cycle_type(A1, (1, 1), 6)
    square = char_voa(A1, 6) * char_voa(A1, 6)
    common = min(full.order, square.order)
    assert full.truncated(common) == square.truncated(common)
    assert char_cycle_type(A1, (2,), 4) == char_twisted(A1, 2, 4)
    mixed = char_cycle_type(A1, (2, 1), 4)
    assert mixed.leading_exponent() == Fraction(-1, 48) + Fraction(-1, 24)


def test_substitution_and_truncation_bookkeeping():
    ct = char_twisted(A1, 2, 5)
    sub = ct.substitute_power(2)
    assert sub.order == 10
    assert sub.leading_exponent() == Fraction(-1, 24)
    with pytest.raises(ValueError, match="beyond truncation"):
        ct.coefficient(6)
    with pytest.raises(ValueError, match="cannot extend"):
        ct.truncated(7)
