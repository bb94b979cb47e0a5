"""The c-series, the flow coefficients, Delta_x and E_f."""

import random
from fractions import Fraction

import pytest

from permtwist.cocycle import TwistSystem
from permtwist.coeffs import (XPolyOp, a_coeffs, c110_closed_form, c_coeffs,
                              delta_apply, ef_apply, ef_inverse_apply,
                              exp_delta_apply, rational_binomial,
                              substitute_flow)
from permtwist.fock import (apply_mode, apply_vector_mode, ground_state,
                            omega_state, vacuum, weight_basis)
from permtwist.lattice import Lattice, eigenprojection

A1 = Lattice([[2]], "A1")
A2 = Lattice([[2, 1], [1, 2]], "A2")


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_c110_two_routes(k):
    system = TwistSystem(A1, k)
    series = c_coeffs(system, 0, 3)
    expected = Fraction(k * k - 1, 24 * k * k)
    assert series.get(1, 1).as_rational() == expected
    assert c110_closed_form(system) == expected
    for r in range(k):
        assert c_coeffs(system, r, 3).get(0, 0).is_zero()


def test_c_series_vanishes_for_single_copy():
    system = TwistSystem(A1, 1)
    assert not c_coeffs(system, 0, 8).coeffs


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_root_power_sum_symmetry(k):
    # sum_s (eta^{rs} + eta^{-rs}) = 0 for r not divisible by k
    system = TwistSystem(A1, k)
    for r in range(1, k):
        total = system.field.zero()
        for s in range(k):
            total = total + system.eta_pow(r * s) + system.eta_pow(-r * s)
        assert total.is_zero()


@pytest.mark.parametrize("k", [2, 3, 4, 6])
def test_flow_coefficients(k):
    avals = a_coeffs(k, 9)
    assert avals[0] == Fraction(1 - k, 2)
    assert avals[1] == Fraction(k * k - 1, 12)
    got = substitute_flow(avals, 10)
    for t in range(0, 11):
        want = rational_binomial(k, t) / k if t >= 1 else Fraction(0)
        assert got[t] == want, t


def test_flow_coefficients_trivial_twist():
    assert a_coeffs(1, 8) == [Fraction(0)] * 8


@pytest.mark.parametrize("K,k", [(A1, 2), (A1, 3), (A2, 2), (A2, 3)])
def test_exp_delta_on_conformal_vector(K, k):
    system = TwistSystem(K, k)
    om = omega_state(system, "L")
    out = exp_delta_apply(system, om)
    kd = k * K.rank
    c110 = Fraction(k * k - 1, 24 * k * k)
    assert out.coefficient(0) == om
    assert out.coefficient(-2) == vacuum(system, "L").scaled(c110 * kd)
    assert len(out.terms) == 2


def test_exp_delta_fixes_vacuum_and_currents():
    system = TwistSystem(A1, 2)
    for st in (vacuum(system, "L"),
               apply_mode(system, -1, 0, vacuum(system, "L")),
               ground_state(system, "L", (1, 0))):
        out = exp_delta_apply(system, st)
        assert list(out.terms) == [Fraction(0)]
        assert out.coefficient(0) == st


@pytest.mark.parametrize("K,k", [(A1, 2), (A1, 3), (A2, 2)])
def test_exp_delta_quadratic_oracle(K, k):
    # independent bracket for alpha(-1)beta(-1)|0>: projections + pairing
    system = TwistSystem(K, k)
    rng = random.Random(K.rank * 10 + k)
    rank = system.L.rank
    field = system.field
    for _ in range(6):
        alpha = tuple(rng.randint(-2, 2) for _ in range(rank))
        beta = tuple(rng.randint(-2, 2) for _ in range(rank))
        st = apply_vector_mode(system, -1, alpha,
                               apply_vector_mode(system, -1, beta, vacuum(system, "L")))
        out = exp_delta_apply(system, st)
        # expected x^{-2} coefficient from the residue sums
        c11 = [c_coeffs(system, r, 2).get(1, 1) for r in range(k)]
        total = c11[0] * (2 * system.L.inner(alpha, beta))
        for r in range(1, k):
            for s_res in range(k):
                pa = eigenprojection(system.shift, field, alpha, s_res)
                pb = eigenprojection(system.shift, field, beta, -s_res)
                pairing = system.L.inner(pa, pb)
                total = total + c11[r] * (system.eta_pow(r * s_res)
                                          + system.eta_pow(-r * s_res)) * pairing
        expect = vacuum(system, "L").scaled(total)
        got = out.coefficient(-2)
        assert got == expect, (alpha, beta)
        # exponents are nonpositive integers
        for e in out.terms:
            assert e <= 0 and e.denominator == 1


def test_delta_lowers_weight():
    system = TwistSystem(A1, 2)
    om = omega_state(system, "L")
    out = delta_apply(system, om)
    for e, sv in out.items():
        assert e < 0


@pytest.mark.parametrize("k", [2, 3])
def test_ef_examples(k):
    system = TwistSystem(A1, k)
    # identity on the vacuum
    out = ef_apply(system, vacuum(system, "K"))
    assert list(out.terms) == [Fraction(0)]
    assert out.coefficient(0) == vacuum(system, "K")
    # current rescaling
    cur = apply_mode(system, -1, 0, vacuum(system, "K"))
    out = ef_apply(system, cur)
    e = Fraction(1, k) - 1
    assert list(out.terms) == [e]
    assert out.coefficient(e) == cur.scaled(Fraction(1, k))


@pytest.mark.parametrize("K,k", [(A1, 2), (A1, 3), (A2, 2), (A2, 3)])
def test_ef_inverse_on_conformal_vector(K, k):
    system = TwistSystem(K, k)
    d = K.rank
    om = omega_state(system, "K")
    out = ef_inverse_apply(system, om).scale_exponents(k)  # whole-power variable
    assert out.coefficient(2 * k - 2) == om.scaled(k * k)
    assert out.coefficient(-2) == vacuum(system, "K").scaled(Fraction(-(k * k - 1) * d, 24))
    assert len(out.terms) == 2


@pytest.mark.parametrize("K,k", [(A1, 2), (A1, 3)])
def test_ef_roundtrip_identity(K, k):
    system = TwistSystem(K, k)
    for b in weight_basis(system, "K", 4):
        fwd = ef_apply(system, b)
        back = XPolyOp(system, "K")
        for e, sv in fwd.terms.items():
            piece = ef_inverse_apply(system, sv)
            for e2, sv2 in piece.terms.items():
                back.add_term(e + e2, sv2)
        assert list(back.terms) == [Fraction(0)]
        assert back.coefficient(0) == b
