"""Mode-level extraction for the three vertex-operator families.

All operators are exposed as single-mode extraction: the coefficient of a
requested power of the formal variable, applied to a finite state.  The
computation enumerates the finitely many normal-ordered contributions that
can land on the requested power, so every result is exact.

Normal ordering: creation modes and group elements act last; annihilation
and zero modes and the formal x-power of the ground label act first.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .cocycle import SECTION_PLAIN, SECTION_TWISTED, TwistSystem
from .coeffs import (ef_apply, ef_inverse_apply, exp_delta_apply,
                     rational_binomial)
from .exact import Cyc
from .fock import (FockMono, StateVector, apply_vector_mode,
                   apply_twisted_vector_mode, slot_state, zero_state)


def _dcoeff(m: Fraction, nt: int) -> Fraction:
    """Coefficient of the mode at m in the (nt-1)-fold derivative factor."""
    sign = -1 if (nt - 1) % 2 else 1
    return sign * rational_binomial(m + nt - 1, nt - 1)


def _positive_levels(sv: StateVector):
    out = set()
    for mono in sv.terms:
        for n, _ in mono.modes:
            out.add(-n)
    return sorted(out)


class _Dialect:
    """Sector-specific hooks for the extraction engine."""

    def __init__(self, system: TwistSystem, sector: str):
        self.system = system
        self.sector = sector
        self.step = Fraction(1, system.k) if sector == "T" else Fraction(1)

    def vec_mode(self, n, coords, sv):
        if self.sector == "T":
            return apply_twisted_vector_mode(self.system, n, coords, sv)
        return apply_vector_mode(self.system, n, coords, sv)

    def x_exponent(self, beta, ground) -> Fraction:
        s = self.system
        if self.sector == "T":
            t = s.tot(beta)
            return (Fraction(s.K.inner(t, ground), s.k)
                    + Fraction(s.K.inner(t, t), 2 * s.k)
                    - Fraction(s.L.inner(beta, beta), 2))
        lat = s.K if self.sector == "K" else s.L
        return Fraction(lat.inner(beta, ground))

    def ground_action(self, beta, ground):
        """(scalar, new_ground) for the group element over beta."""
        s = self.system
        if self.sector == "T":
            elem = s.ext_from_base(beta, SECTION_TWISTED)
            return s.ut_action(elem, ground)
        phase = s.eps_exponent(SECTION_PLAIN, beta, ground)
        newg = tuple(x + y for x, y in zip(beta, ground))
        return s.eta0_pow(phase), newg

    def prefactor(self, beta) -> Cyc:
        s = self.system
        if self.sector == "T":
            norm = s.L.inner(beta, beta)
            return s.sigma(beta) * Fraction(s.k) ** (-(norm // 2))
        return s.field.one()


def _apply_exp_annihilators(dialect: _Dialect, xp: dict, beta) -> dict:
    """exp(-sum_{m>0} beta(m) x^{-m} / m) on an exponent-keyed state table."""
    levels = set()
    for sv in xp.values():
        levels.update(_positive_levels(sv))
    out = dict(xp)
    for m in sorted(levels):
        nxt = dict(out)
        for e, sv in out.items():
            cur = sv
            t = 1
            while True:
                cur = dialect.vec_mode(m, beta, cur)
                if cur.is_zero():
                    break
                coeff = (Fraction(-1) / m) ** t / factorial(t)
                key = e - m * t
                piece = cur.scaled(coeff)
                prev = nxt.get(key)
                nxt[key] = piece if prev is None else prev + piece
                t += 1
        out = {e: s for e, s in nxt.items() if not s.is_zero()}
    return out


def _creation_partitions(total: Fraction, step: Fraction, max_part=None):
    """Multisets of positive grid levels summing exactly to `total`."""
    if total == 0:
        yield ()
        return
    if total < 0:
        return
    top = total if max_part is None else min(total, max_part)
    m = (int(top / step)) * step
    while m >= step:
        for rest in _creation_partitions(total - m, step, m):
            yield (m,) + rest
        m -= step
    return


def _partition_coeff(parts) -> Fraction:
    out = Fraction(1)
    mult: dict[Fraction, int] = {}
    for m in parts:
        mult[m] = mult.get(m, 0) + 1
    for m, c in mult.items():
        out /= (m ** c) * factorial(c)
    return out


def _extract_for_vmono(system, dialect: _Dialect, dfactors, beta, coeff,
                       vmono: FockMono, e_target: Fraction) -> StateVector:
    """All normal-ordered contributions landing on x^{e_target}."""
    sector = dialect.sector
    has_group = any(beta)
    gamma = vmono.ground
    base_exp = dialect.x_exponent(beta, gamma) if has_group else Fraction(0)
    base = StateVector(system, sector, {vmono: coeff})
    r = len(dfactors)
    result = zero_state(system, sector)
    step = dialect.step

    for mask in range(1 << r):
        deferred = [t for t in range(r) if mask & (1 << t)]
        annih = [t for t in range(r) if not (mask & (1 << t))]
        # annihilation / zero-mode choices for the non-deferred factors
        table = {base_exp: base}
        for t in annih:
            nt, coords = dfactors[t]
            nxt: dict = {}
            for e, sv in table.items():
                for m in [Fraction(0)] + _positive_levels(sv):
                    c = _dcoeff(m, nt)
                    if c == 0:
                        continue
                    piece = dialect.vec_mode(m, coords, sv)
                    if piece.is_zero():
                        continue
                    key = e - m - nt
                    piece = piece.scaled(c)
                    prev = nxt.get(key)
                    nxt[key] = piece if prev is None else prev + piece
            table = {e: sv for e, sv in nxt.items() if not sv.is_zero()}
            if not table:
                break
        if not table:
            continue
        if has_group:
            table = _apply_exp_annihilators(dialect, table, beta)
        # the group element and then the creation side
        for e, sv in table.items():
            if has_group:
                shifted = zero_state(system, sector)
                for mono, c in sv.terms.items():
                    scalar, newg = dialect.ground_action(beta, mono.ground)
                    shifted = shifted + StateVector(
                        system, sector, {FockMono(mono.modes, newg): c * scalar})
                sv = shifted
                if sv.is_zero():
                    continue
            budget = e_target - e
            result = result + _fill_creation(system, dialect, dfactors, deferred,
                                             beta if has_group else None,
                                             sv, budget)
    return result


def _fill_creation(system, dialect: _Dialect, dfactors, deferred, beta,
                   sv: StateVector, budget: Fraction) -> StateVector:
    """Distribute the remaining exponent over deferred derivative factors and
    the creation exponential."""
    step = dialect.step
    out = zero_state(system, dialect.sector)

    def rec(idx, sv_cur, budget_cur):
        nonlocal out
        if idx == len(deferred):
            if beta is None:
                if budget_cur == 0:
                    out = out + sv_cur
                return
            if budget_cur < 0 or (budget_cur / step).denominator != 1:
                return
            for parts in _creation_partitions(budget_cur, step):
                piece = sv_cur.scaled(_partition_coeff(parts))
                for m in parts:
                    piece = dialect.vec_mode(-m, beta, piece)
                out = out + piece
            return
        t = deferred[idx]
        nt, coords = dfactors[t]
        # minimal exponent the remaining deferred factors must consume
        rest_min = sum(step - dfactors[t2][0] for t2 in deferred[idx + 1:])
        cap = budget_cur - rest_min
        # s runs over creation degrees; exponent contribution is s - nt
        s = step
        while s - nt <= cap:
            c = _dcoeff(-s, nt)
            if c != 0:
                piece = dialect.vec_mode(-s, coords, sv_cur)
                if not piece.is_zero():
                    rec(idx + 1, piece.scaled(c), budget_cur - (s - nt))
            s += step
        return

    rec(0, sv, budget)
    return out


def _umono_factors(system, umono: FockMono, dialect_sector: str):
    """Derivative factors (order, coordinate hook) for a u-monomial."""
    rank = len(umono.ground)
    factors = []
    for n, idx in umono.modes:
        nt = int(-n)
        coords = tuple(int(j == idx) for j in range(rank))
        factors.append((nt, coords))
    return factors


def untwisted_mode(system: TwistSystem, u: StateVector, n, v: StateVector) -> StateVector:
    """The coefficient u_n of the untwisted vertex operator, applied to v."""
    if u.sector != v.sector or u.sector == "T":
        raise ValueError("untwisted modes need matching untwisted sectors")
    n = Fraction(n)
    if n.denominator != 1:
        raise ValueError("untwisted modes are integral")
    dialect = _Dialect(system, v.sector)
    e_target = -n - 1
    result = zero_state(system, v.sector)
    for umono, cu in u.terms.items():
        factors = _umono_factors(system, umono, u.sector)
        beta = umono.ground
        scalar = cu * dialect.prefactor(beta)
        for vmono, cv in v.terms.items():
            result = result + _extract_for_vmono(
                system, dialect, factors, beta, scalar * cv, vmono, e_target)
    return result


def spacetime_series_coefficient(system: TwistSystem, u: StateVector,
                                 exponent, v: StateVector) -> StateVector:
    """Coefficient of x^exponent in the space-time twisted operator of u on v."""
    if u.sector != "L" or v.sector != "T":
        raise ValueError("space-time operator maps V_L states into the twisted sector")
    exponent = Fraction(exponent)
    dialect = _Dialect(system, "T")
    corrected = exp_delta_apply(system, u)
    result = zero_state(system, "T")
    for e_delta, u_e in corrected.terms.items():
        e_target = exponent - e_delta
        for umono, cu in u_e.terms.items():
            factors = _umono_factors(system, umono, "L")
            beta = umono.ground
            scalar = cu * dialect.prefactor(beta)
            for vmono, cv in v.terms.items():
                result = result + _extract_for_vmono(
                    system, dialect, factors, beta, scalar * cv, vmono, e_target)
    return result


def spacetime_twisted_mode(system: TwistSystem, u: StateVector, n,
                           v: StateVector) -> StateVector:
    """The mode u^{nu-hat}_n of the space-time twisted operator, applied to v."""
    n = Fraction(n)
    if (n * system.k).denominator != 1:
        raise ValueError("twisted modes lie in (1/k)Z")
    return spacetime_series_coefficient(system, u, -n - 1, v)


def base_module_mode(system: TwistSystem, u: StateVector, n, v: StateVector) -> StateVector:
    """The V_K-module structure carried by the twisted space: the mode u_n of
    the inverse-functor operator, computed by undoing the change of variables
    in the first slot and raising the variable to the k-th power."""
    if u.sector != "K" or v.sector != "T":
        raise ValueError("base_module_mode maps base states onto the twisted space")
    n = Fraction(n)
    if n.denominator != 1:
        raise ValueError("the transported module has integral modes")
    k = system.k
    # E_f(x)^{-1} u is the x^{1/k}-variable operator with exponents scaled by k
    corrected = ef_inverse_apply(system, u).scale_exponents(k)
    result = zero_state(system, "T")
    for e, w_e in corrected.terms.items():
        exponent = Fraction(-n - 1 - e, k)
        piece = spacetime_series_coefficient(system, slot_state(system, w_e, 0),
                                             exponent, v)
        if not piece.is_zero():
            result = result + piece
    return result


def _split_slot(system, umono: FockMono):
    """The tensor slot of a one-slot V_L monomial and its V_K image."""
    k, d = system.k, system.d
    slots = {idx // d for _, idx in umono.modes}
    for p in range(k):
        block = umono.ground[p * d:(p + 1) * d]
        if any(block):
            slots.add(p)
    if not slots:
        slots = {0}
    if len(slots) != 1:
        raise ValueError("state is not supported in a single tensor slot")
    p = slots.pop()
    modes = tuple((nn, idx % d) for nn, idx in umono.modes)
    ground = umono.ground[p * d:(p + 1) * d]
    return p, FockMono(modes, ground)


def worldsheet_twisted_mode(system: TwistSystem, u: StateVector, n,
                            v: StateVector) -> StateVector:
    """The mode of the change-of-variables twisted operator, applied to v in V_K.

    u must be a sum of one-slot states (a V_K state in one tensor factor,
    vacua elsewhere); general tensor products are outside this entry point.
    """
    if u.sector != "L" or v.sector != "K":
        raise ValueError("worldsheet operator takes V_L states acting on V_K")
    n = Fraction(n)
    k = system.k
    if (n * k).denominator != 1:
        raise ValueError("twisted modes lie in (1/k)Z")
    result = zero_state(system, "K")
    for umono, cu in u.terms.items():
        p, kmono = _split_slot(system, umono)
        base = StateVector(system, "K", {kmono: cu})
        rotated_phase = system.eta_pow(-p * int(n * k))
        corrected = ef_apply(system, base)
        for e, w_e in corrected.terms.items():
            m = k * (n + 1 + e) - 1
            if Fraction(m).denominator != 1:
                raise AssertionError("non-integral base mode in worldsheet extraction")
            piece = untwisted_mode(system, w_e, m, v)
            if not piece.is_zero():
                result = result + piece.scaled(rotated_phase)
    return result
