"""Mode extraction for the untwisted and the two twisted operator families."""

from fractions import Fraction
from math import factorial

import pytest

from permtwist.cocycle import SECTION_PLAIN, TwistSystem
from permtwist.fock import (apply_mode, apply_twisted_vector_mode,
                            apply_vector_mode, ground_state, nu_hat_state,
                            omega_state, slot_state, twisted_L0, vacuum,
                            virasoro_L, weight_basis, zero_state)
from permtwist.lattice import Lattice
from permtwist.vertexops import (base_module_mode, spacetime_series_coefficient,
                                 spacetime_twisted_mode, untwisted_mode,
                                 worldsheet_twisted_mode)

A1 = Lattice([[2]], "A1")
A2 = Lattice([[2, 1], [1, 2]], "A2")


@pytest.fixture(scope="module")
def sys2():
    return TwistSystem(A1, 2)


@pytest.fixture(scope="module")
def sys3():
    return TwistSystem(A1, 3)


def test_identity_operator(sys2):
    vac = vacuum(sys2, "K")
    for v in weight_basis(sys2, "K", 2):
        for n in range(-3, 3):
            got = untwisted_mode(sys2, vac, n, v)
            assert got == (v if n == -1 else zero_state(sys2, "K"))


def test_creation_axiom(sys2):
    vac = vacuum(sys2, "K")
    for u in weight_basis(sys2, "K", 3):
        assert untwisted_mode(sys2, u, -1, vac) == u
        for n in range(0, 4):
            assert untwisted_mode(sys2, u, n, vac).is_zero()


def test_integrality_requirement(sys2):
    with pytest.raises(ValueError, match="integral"):
        untwisted_mode(sys2, vacuum(sys2, "K"), Fraction(1, 2), vacuum(sys2, "K"))
    with pytest.raises(ValueError, match="sectors"):
        untwisted_mode(sys2, vacuum(sys2, "K"), 0, vacuum(sys2, "L"))


def test_conformal_modes_are_virasoro(sys2):
    om = omega_state(sys2, "K")
    for v in weight_basis(sys2, "K", 2):
        for n in range(-2, 3):
            assert untwisted_mode(sys2, om, n + 1, v) == virasoro_L(sys2, n, v)


def test_lattice_operator_cocycle_phase(sys2):
    # leading mode of the operator over e_alpha applied to e_{-alpha}
    ea = ground_state(sys2, "K", (1,))
    em = ground_state(sys2, "K", (-1,))
    lead = untwisted_mode(sys2, ea, 1, em)  # mode <a,a> - 1 = 1
    phase = sys2.eps_exponent(SECTION_PLAIN, (1,), (-1,))
    assert lead == vacuum(sys2, "K").scaled(sys2.eta0_pow(phase))


def test_lattice_operator_direct_expansion_oracle(sys2):
    # Y(e_a, x) e_b = phase * x^{<a,b>} exp(sum a(-t)/t x^t) e_{a+b}
    def oracle(alpha, betav, n):
        ip = sys2.K.inner(alpha, betav)
        phase = sys2.eta0_pow(sys2.eps_exponent(SECTION_PLAIN, alpha, betav))
        deg = (-n - 1) - ip
        out = zero_state(sys2, "K")
        if deg < 0:
            return out
        def parts(total, mx):
            if total == 0:
                yield ()
                return
            for m in range(min(total, mx), 0, -1):
                for rest in parts(total - m, m):
                    yield (m,) + rest
        ground = ground_state(sys2, "K", tuple(x + y for x, y in zip(alpha, betav)))
        for p in parts(deg, max(deg, 1)):
            coeff = Fraction(1)
            mult = {}
            for m in p:
                mult[m] = mult.get(m, 0) + 1
            for m, c in mult.items():
                coeff /= Fraction(m) ** c * factorial(c)
            piece = ground
            for m in p:
                piece = apply_vector_mode(sys2, -m, alpha, piece)
            out = out + piece.scaled(coeff * phase)
        return out

    for a in [(1,), (-1,)]:
        for b in [(1,), (-1,), (0,)]:
            for n in range(-6, 4):
                got = untwisted_mode(sys2, ground_state(sys2, "K", a), n,
                                     ground_state(sys2, "K", b))
                assert got == oracle(a, b, n), (a, b, n)


def test_translation_derivative_property(sys2):
    # modes of L(-1)u satisfy (L(-1)u)_n = -n u_{n-1}
    targets = weight_basis(sys2, "K", 2)
    for u in weight_basis(sys2, "K", 2):
        lu = virasoro_L(sys2, -1, u)
        for v in targets[:6]:
            for n in range(-3, 4):
                lhs = untwisted_mode(sys2, lu, n, v)
                rhs = untwisted_mode(sys2, u, n - 1, v).scaled(-n)
                assert lhs == rhs


@pytest.mark.parametrize("k", [2, 3])
def test_twisted_current_modes(k):
    system = TwistSystem(A1, k)
    cur = slot_state(system, apply_mode(system, -1, 0, vacuum(system, "K")), 0)
    hvec = system.slot_embed((1,), 0)
    for v in weight_basis(system, "T", 1):
        for num in range(-2 * k, 2 * k + 1):
            n = Fraction(num, k)
            assert (spacetime_twisted_mode(system, cur, n, v)
                    == apply_twisted_vector_mode(system, n, hvec, v))


@pytest.mark.parametrize("k", [2, 3])
def test_twisted_conformal_mode_is_l0(k):
    system = TwistSystem(A1, k)
    om = omega_state(system, "L")
    for v in weight_basis(system, "T", Fraction(3, 2)):
        assert spacetime_twisted_mode(system, om, 1, v) == twisted_L0(system, v)


@pytest.mark.parametrize("k", [2, 3])
def test_twisted_lattice_operator_closed_form(k):
    from permtwist.vertexops import _creation_partitions, _partition_coeff
    system = TwistSystem(A1, k)
    alpha = (1,)
    norm = 2
    u = slot_state(system, ground_state(system, "K", alpha), 0)
    hvec = system.slot_embed(alpha, 0)
    vac = vacuum(system, "T")
    base_exp = Fraction((1 - k) * norm, 2 * k)
    pref = Fraction(1, k ** (norm // 2))
    step = Fraction(1, k)
    for num in range(0, 2 * k + 1):
        e = base_exp + Fraction(num, k)
        got = spacetime_series_coefficient(system, u, e, vac)
        want = zero_state(system, "T")
        for parts in _creation_partitions(Fraction(num, k), step):
            piece = ground_state(system, "T", alpha).scaled(_partition_coeff(parts) * pref)
            for m in parts:
                piece = apply_twisted_vector_mode(system, -m, hvec, piece)
            want = want + piece
        assert got == want, e


@pytest.mark.parametrize("k", [2, 3])
def test_sector_support(k):
    # eigenvectors of the lifted shift only produce modes on their coset
    system = TwistSystem(A1, k)
    cur = slot_state(system, apply_mode(system, -1, 0, vacuum(system, "K")), 0)
    vac_t = vacuum(system, "T")
    targets = weight_basis(system, "T", 1)
    inv_k = Fraction(1, k)
    for j in range(k):
        # u_j = (1/k) sum_t eta^{-jt} nuhat^t u lies in the eta^j eigenspace
        uj = zero_state(system, "L")
        for t in range(k):
            uj = uj + nu_hat_state(system, cur, t).scaled(system.eta_pow(-j * t) * inv_k)
        if uj.is_zero():
            continue
        rotated = nu_hat_state(system, uj, 1)
        assert rotated == uj.scaled(system.eta_pow(j))
        for v in targets:
            for num in range(-2 * k, 2 * k + 1):
                n = Fraction(num, k)
                got = spacetime_twisted_mode(system, uj, n, v)
                if (n - Fraction(j, k)).denominator != 1:
                    assert got.is_zero(), (j, n)


@pytest.mark.parametrize("k", [2, 3])
def test_equivariance_under_the_lift(k):
    # the operator over the shifted state is the formal rotation of the series
    system = TwistSystem(A1, k)
    gens = [slot_state(system, apply_mode(system, -1, 0, vacuum(system, "K")), 0),
            slot_state(system, ground_state(system, "K", (1,)), 0)]
    for u in gens:
        nu_u = nu_hat_state(system, u, 1)
        for v in weight_basis(system, "T", 1):
            for num in range(-k, k + 1):
                n = Fraction(num, k)
                lhs = spacetime_twisted_mode(system, nu_u, n, v)
                rhs = spacetime_twisted_mode(system, u, n, v).scaled(
                    system.eta_pow(num))
                assert lhs == rhs, (n, u)


@pytest.mark.parametrize("k", [2, 3])
def test_worldsheet_current_and_rotation(k):
    system = TwistSystem(A1, k)
    cur = apply_mode(system, -1, 0, vacuum(system, "K"))
    slots = [slot_state(system, cur, p) for p in range(k)]
    targets = weight_basis(system, "K", 2)[:6]
    for num in range(-2 * k, 2 * k + 1):
        n = Fraction(num, k)
        for v in targets:
            base = worldsheet_twisted_mode(system, slots[0], n, v)
            expect0 = apply_vector_mode(system, n * k, (1,), v).scaled(Fraction(1, k))
            assert base == expect0
            for p in range(1, k):
                got = worldsheet_twisted_mode(system, slots[p], n, v)
                assert got == base.scaled(system.eta_pow(-p * num))


def test_worldsheet_identity(sys3):
    vac_l = vacuum(sys3, "L")
    for v in weight_basis(sys3, "K", 2)[:5]:
        for num in range(-3, 4):
            n = Fraction(num, 3)
            got = worldsheet_twisted_mode(sys3, vac_l, n, v)
            assert got == (v if n == -1 else zero_state(sys3, "K"))


def test_worldsheet_rejects_mixed_slots(sys2):
    mixed = ground_state(sys2, "L", (1, 1))
    with pytest.raises(ValueError, match="single tensor slot"):
        worldsheet_twisted_mode(sys2, mixed, 0, vacuum(sys2, "K"))


@pytest.mark.parametrize("k", [2, 3])
def test_transported_l0_relation(k):
    # the base-module degree operator against the twisted one, two code paths
    system = TwistSystem(A1, k)
    shift = Fraction((k * k - 1), 24)
    for v in weight_basis(system, "T", Fraction(3, 2)):
        lhs = base_module_mode(system, omega_state(system, "K"), 1, v)
        rhs = twisted_L0(system, v).scaled(k) - v.scaled(shift)
        assert lhs == rhs
