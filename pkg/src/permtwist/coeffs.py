"""Coefficient engines for the two twisted constructions.

* the bivariate log-series coefficients c_{mnr} and the operator Delta_x
  with its exponential (space-time side),
* the change-of-variables coefficients a_j and the operator E_f with its
  inverse (worldsheet side).

Everything is exact: exponentials are expanded by weight-graded nilpotence,
never by order truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .cocycle import TwistSystem
from .exact import Cyc
from .fock import (StateVector, apply_mode, virasoro_L, weight_split,
                   zero_state)


def rational_binomial(top, r: int) -> Fraction:
    """binom(top, r) for rational (or integer, possibly negative) top."""
    top = Fraction(top)
    out = Fraction(1)
    for s in range(r):
        out *= (top - s)
    for s in range(1, r + 1):
        out /= s
    return out


class BiSeries:
    """Truncated bivariate power series with Cyc coefficients."""

    def __init__(self, field, order: int, coeffs=None):
        self.field = field
        self.order = order
        self.coeffs = {}
        if coeffs:
            for key, c in coeffs.items():
                if not c.is_zero() and key[0] + key[1] <= order:
                    self.coeffs[key] = c

    def get(self, m: int, n: int) -> Cyc:
        return self.coeffs.get((m, n), self.field.zero())

    def __add__(self, other):
        order = min(self.order, other.order)
        out = {k: v for k, v in self.coeffs.items() if k[0] + k[1] <= order}
        for k, v in other.coeffs.items():
            if k[0] + k[1] <= order:
                s = out.get(k)
                out[k] = v if s is None else s + v
        return BiSeries(self.field, order, out)

    def scaled(self, c):
        return BiSeries(self.field, self.order,
                        {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        order = min(self.order, other.order)
        out = {}
        for (m1, n1), c1 in self.coeffs.items():
            for (m2, n2), c2 in other.coeffs.items():
                m, n = m1 + m2, n1 + n2
                if m + n <= order:
                    key = (m, n)
                    prod = c1 * c2
                    s = out.get(key)
                    out[key] = prod if s is None else s + prod
        return BiSeries(self.field, order, out)


def _binomial_series_1k(field, k: int, order: int, variable: int) -> BiSeries:
    """(1 + x)^(1/k) - 1 as a BiSeries in variable 0 (x) or 1 (y)."""
    coeffs = {}
    for m in range(1, order + 1):
        key = (m, 0) if variable == 0 else (0, m)
        coeffs[key] = field.from_rat(rational_binomial(Fraction(1, k), m))
    return BiSeries(field, order, coeffs)


def _log_one_plus(u: BiSeries) -> BiSeries:
    """log(1 + u) for u with zero constant term."""
    out = BiSeries(u.field, u.order)
    power = BiSeries(u.field, u.order, {(0, 0): u.field.one()})
    sign = 1
    for t in range(1, u.order + 1):
        power = power * u
        if not power.coeffs:
            break
        out = out + power.scaled(Fraction(sign, t))
        sign = -sign
    return out


def c_coeffs(system: TwistSystem, r: int, order: int) -> BiSeries:
    """The coefficients c_{mnr} as a bivariate series to total degree `order`."""
    k = system.k
    r = r % k if k > 1 else 0
    cache = getattr(system, "_c_series_cache", None)
    if cache is None:
        cache = system._c_series_cache = {}
    key = (r, order)
    if key in cache:
        return cache[key]
    field = system.field
    if k == 1:
        out = BiSeries(field, order)
        cache[key] = out
        return out
    if r != 0:
        ax = _binomial_series_1k(field, k, order, 0)
        by = _binomial_series_1k(field, k, order, 1)
        eta_r = system.eta_pow(-r)
        denom = (field.one() - eta_r).inv()
        u = (ax + by.scaled(-eta_r)).scaled(denom)
        out = _log_one_plus(u).scaled(Fraction(1, 2))
    else:
        out = BiSeries(field, order)
        for j in range(1, k):
            out = out + c_coeffs(system, j, order).scaled(-1)
    cache[key] = out
    return out


def c110_closed_form(system: TwistSystem) -> Fraction:
    """c_{110} through the root-sum route: -(1/2k^2) sum eta^{-j}/(1-eta^{-j})^2."""
    k = system.k
    total = system.field.zero()
    for j in range(1, k):
        z = system.eta_pow(-j)
        total = total + z * ((system.field.one() - z) ** (-2))
    return (total * Fraction(-1, 2 * k * k)).as_rational()


def a_coeffs(k: int, J: int) -> list[Fraction]:
    """a_1..a_J with exp(-sum a_j x^(j+1) d/dx) . x = ((1+x)^k - 1)/k through x^(J+1)."""
    if J < 1:
        raise ValueError("J must be at least 1")
    target = [Fraction(0)] * (J + 2)
    for t in range(1, J + 2):
        target[t] = rational_binomial(k, t) / k
    avals: list[Fraction] = []
    for j in range(1, J + 1):
        avals.append(Fraction(0))
        cur = substitute_flow(avals, j + 1)
        # a_j enters linearly with coefficient -1 at degree j+1
        avals[-1] = cur[j + 1] - target[j + 1]
    return avals


def substitute_flow(avals: list[Fraction], deg: int) -> list[Fraction]:
    """exp(-sum a_j x^(j+1) d/dx) . x as a coefficient list through x^deg."""
    series = [Fraction(0)] * (deg + 1)
    series[1] = Fraction(1)
    term = list(series)
    fact = 1
    for it in range(1, deg + 1):
        nxt = [Fraction(0)] * (deg + 1)
        for t, c in enumerate(term):
            if c == 0:
                continue
            for j, aj in enumerate(avals, start=1):
                if aj == 0:
                    continue
                nd = t + j
                if nd <= deg:
                    nxt[nd] -= aj * c * t
        term = nxt
        if not any(term):
            break
        fact *= it
        for t, c in enumerate(term):
            if c:
                series[t] += c / fact
    return series


class XPolyOp:
    """A finite formal-variable polynomial with StateVector coefficients."""

    def __init__(self, system, sector, terms=None):
        self.system = system
        self.sector = sector
        self.terms: dict[Fraction, StateVector] = {}
        if terms:
            for e, sv in terms.items():
                if not sv.is_zero():
                    self.terms[Fraction(e)] = sv

    def add_term(self, e, sv: StateVector):
        e = Fraction(e)
        if sv.is_zero():
            return
        cur = self.terms.get(e)
        combined = sv if cur is None else cur + sv
        if combined.is_zero():
            self.terms.pop(e, None)
        else:
            self.terms[e] = combined

    def __add__(self, other):
        out = XPolyOp(self.system, self.sector, dict(self.terms))
        for e, sv in other.terms.items():
            out.add_term(e, sv)
        return out

    def scaled(self, c):
        return XPolyOp(self.system, self.sector,
                       {e: sv.scaled(c) for e, sv in self.terms.items()})

    def scale_exponents(self, factor) -> "XPolyOp":
        return XPolyOp(self.system, self.sector,
                       {e * factor: sv for e, sv in self.terms.items()})

    def coefficient(self, e) -> StateVector:
        return self.terms.get(Fraction(e), zero_state(self.system, self.sector))

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return isinstance(other, XPolyOp) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"x^{e}*[{sv}]" for e, sv in self.items())


def state_xpoly(system, sv: StateVector) -> XPolyOp:
    out = XPolyOp(system, sv.sector)
    out.add_term(0, sv)
    return out


# -- Delta_x -------------------------------------------------------------------


def delta_apply(system: TwistSystem, v: StateVector, order: int | None = None) -> XPolyOp:
    """Delta_x applied to a V_L state; a polynomial in the inverse variable."""
    if v.sector != "L":
        raise ValueError("Delta_x acts on V_L")
    lev = int(v.max_level())
    if order is None:
        order = 2 * lev + 2
    k, d = system.k, system.d
    ginv = system.K.gram_inverse()
    out = XPolyOp(system, "L")
    for r in range(k):
        series = c_coeffs(system, r, order)
        for (m, n), c in series.coeffs.items():
            if m > lev or n > lev or (m == 0 and n == 0):
                continue
            # sum_j sum_p c_mnr (nu^{-r} dual-pair) (m) pair (n)
            for i in range(d):
                for j in range(d):
                    f = ginv[i][j]
                    if not f:
                        continue
                    for p in range(k):
                        # (nu^{-r} b_i^p)(m) b_j^p(n): nu^{-r} moves block p to p+r
                        src = p * d + j
                        dst = ((p + r) % k) * d + i
                        piece = apply_mode(system, Fraction(n), src, v)
                        if piece.is_zero():
                            continue
                        piece = apply_mode(system, Fraction(m), dst, piece)
                        if piece.is_zero():
                            continue
                        out.add_term(Fraction(-m - n), piece.scaled(c * f))
    return out


def exp_delta_apply(system: TwistSystem, v: StateVector) -> XPolyOp:
    """e^{Delta_x} v, exact by weight-graded nilpotence."""
    out = state_xpoly(system, v)
    current = state_xpoly(system, v)
    t = 1
    while current.terms:
        nxt = XPolyOp(system, "L")
        for e, sv in current.terms.items():
            piece = delta_apply(system, sv)
            for e2, sv2 in piece.terms.items():
                nxt.add_term(e + e2, sv2)
        if not nxt.terms:
            break
        current = nxt.scaled(Fraction(1, t))
        for e, sv in current.terms.items():
            out.add_term(e, sv)
        t += 1
    return out


# -- E_f -----------------------------------------------------------------------


def _scaling_part(system, v: StateVector, log_k_power: int, x_exp_factor: Fraction) -> XPolyOp:
    """k^(log_k_power * L(0)) x^(x_exp_factor * L(0)) applied per weight component."""
    out = XPolyOp(system, "K")
    for w, comp in weight_split(system, v).items():
        scale = Fraction(system.k) ** int(log_k_power * w) if w.denominator == 1 else None
        if scale is None:
            raise ValueError("non-integer weight in the base sector")
        out.add_term(x_exp_factor * w, comp.scaled(scale))
    return out


def _exp_virasoro_sum(system, xp: XPolyOp, avals: list[Fraction], sign: int,
                      exp_step: Fraction) -> XPolyOp:
    """exp(sign * sum_j a_j x^(j*exp_step) L(j)) applied to an x-polynomial."""
    out = XPolyOp(system, "K", dict(xp.terms))
    current = xp
    t = 1
    while current.terms:
        nxt = XPolyOp(system, "K")
        for e, sv in current.terms.items():
            lev = int(sv.max_level())
            for j, aj in enumerate(avals, start=1):
                if aj == 0 or j > lev + 2:
                    continue
                piece = virasoro_L(system, j, sv)
                if piece.is_zero():
                    continue
                nxt.add_term(e + j * exp_step, piece.scaled(aj * sign))
        if not nxt.terms:
            break
        current = nxt.scaled(Fraction(1, t))
        for e, sv in current.terms.items():
            out.add_term(e, sv)
        t += 1
    return out


def _max_virasoro_level(system, v: StateVector) -> int:
    top = 0
    for mono in v.terms.keys():
        lev = int(mono.level()) + system.K.inner(mono.ground, mono.ground) // 2
        top = max(top, lev)
    return top


def ef_apply(system: TwistSystem, v: StateVector, J: int | None = None) -> XPolyOp:
    """E_f(x^(1/k)) v on the base sector; exponents lie in (1/k)Z."""
    if v.sector != "K":
        raise ValueError("E_f acts on the base sector")
    if J is None:
        J = max(1, _max_virasoro_level(system, v))
    avals = a_coeffs(system.k, J)
    step = Fraction(-1, system.k)
    scaled = _scaling_part(system, v, -1, Fraction(1 - system.k, system.k))
    return _exp_virasoro_sum(system, scaled, avals, +1, step)


def ef_inverse_apply(system: TwistSystem, v: StateVector, J: int | None = None) -> XPolyOp:
    """E_f(x^(1/k))^(-1) v; two-sided inverse of ef_apply on finite states."""
    if v.sector != "K":
        raise ValueError("E_f acts on the base sector")
    if J is None:
        J = max(1, _max_virasoro_level(system, v))
    avals = a_coeffs(system.k, J)
    step = Fraction(-1, system.k)
    blown = _exp_virasoro_sum(system, state_xpoly(system, v), avals, -1, step)
    out = XPolyOp(system, "K")
    for e, sv in blown.terms.items():
        piece = _scaling_part(system, sv, +1, Fraction(system.k - 1, system.k))
        for e2, sv2 in piece.terms.items():
            out.add_term(e + e2, sv2)
    return out
