"""State spaces and Heisenberg/Virasoro actions.

Three sectors share one representation:

* ``"K"``   -- the base space V_K (integer modes, K ground labels),
* ``"L"``   -- V_L = V_K tensor ... tensor V_K (integer modes, L labels),
* ``"T"``   -- the twisted space S[nu] (x) C[P0 L] (modes in (1/k)Z, ground
  labels stored as their K-image under (1/k)(a,...,a) <-> a).

A monomial is a multiset of creation modes over a fixed mode basis plus a
ground label; states are finite linear combinations with Cyc coefficients.
Twisted mode index i stands for the projected first-block generator built
from the i-th basis vector of K; its residue is determined by the mode.
"""

from __future__ import annotations

from fractions import Fraction

from .cocycle import SECTION_PLAIN, TwistSystem

SECTORS = ("K", "L", "T")


class FockMono:
    """Immutable monomial: sorted creation modes and a ground label."""

    __slots__ = ("modes", "ground", "_hash")

    def __init__(self, modes, ground):
        self.modes = tuple(sorted(modes))
        self.ground = tuple(ground)
        self._hash = hash((self.modes, self.ground))

    def __eq__(self, other):
        return self.modes == other.modes and self.ground == other.ground

    def __hash__(self):
        return self._hash

    def level(self) -> Fraction:
        return -sum((n for n, _ in self.modes), Fraction(0))

    def __repr__(self):
        parts = [f"b{i}({n})" for n, i in self.modes]
        parts.append(f"e{self.ground}")
        return "*".join(parts)


class StateVector:
    """Finite Cyc-linear combination of Fock monomials in one sector."""

    __slots__ = ("system", "sector", "terms")

    def __init__(self, system: TwistSystem, sector: str, terms=None):
        if sector not in SECTORS:
            raise ValueError(f"unknown sector {sector!r}")
        self.system = system
        self.sector = sector
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    self.terms[mono] = c

    # -- construction helpers ----------------------------------------------

    @classmethod
    def monomial(cls, system, sector, modes, ground, coeff=None):
        c = system.field.one() if coeff is None else coeff
        return cls(system, sector, {FockMono(modes, ground): c})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.system is not other.system or self.sector != other.sector:
            raise ValueError("sector mismatch")

    # -- linear structure ----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return StateVector(self.system, self.sector, out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c) -> "StateVector":
        if isinstance(c, (int, Fraction)):
            c = self.system.field.from_rat(c)
        if c.is_zero():
            return StateVector(self.system, self.sector)
        return StateVector(self.system, self.sector,
                           {m: x * c for m, x in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return (self.sector == other.sector and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms, key=lambda m: (m.modes, m.ground)):
            bits.append(f"({self.terms[mono]})*{mono}")
        return " + ".join(bits)

    def max_level(self) -> Fraction:
        return max((m.level() for m in self.terms), default=Fraction(0))


def zero_state(system, sector) -> StateVector:
    return StateVector(system, sector)


def vacuum(system, sector, ground=None) -> StateVector:
    if ground is None:
        n = {"K": system.d, "L": system.L.rank, "T": system.d}[sector]
        ground = (0,) * n
    return StateVector.monomial(system, sector, (), ground)


def _pairing(system, sector, i, j):
    if sector == "K":
        return system.K.gram[i][j]
    if sector == "L":
        return system.L.gram[i][j]
    return Fraction(system.K.gram[i][j], system.k)


def zero_mode_eigenvalue(system, sector, i, ground):
    """Eigenvalue of the i-th basis zero mode on a ground label."""
    if sector == "K":
        return sum(system.K.gram[i][j] * g for j, g in enumerate(ground))
    if sector == "L":
        return sum(system.L.gram[i][j] * g for j, g in enumerate(ground))
    val = sum(system.K.gram[i][j] * g for j, g in enumerate(ground))
    return Fraction(val, system.k)


def _validate_mode(system, sector, n: Fraction):
    if sector == "T":
        if (n * system.k).denominator != 1:
            raise ValueError(f"mode {n} not in (1/k)Z")
    else:
        if Fraction(n).denominator != 1:
            raise ValueError(f"fractional mode {n} in untwisted sector")


def apply_mode(system, n, i, sv: StateVector) -> StateVector:
    """Apply the basis mode b_i(n): creation, annihilation or zero mode."""
    n = Fraction(n)
    _validate_mode(system, sv.sector, n)
    field = system.field
    out = {}

    def add(mono, c):
        if c.is_zero():
            return
        s = out.get(mono)
        s = c if s is None else s + c
        if s.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = s

    if n < 0:
        for mono, c in sv.terms.items():
            add(FockMono(mono.modes + ((n, i),), mono.ground), c)
    elif n > 0:
        for mono, c in sv.terms.items():
            seen = set()
            for pos, (m, j) in enumerate(mono.modes):
                if m != -n or (m, j) in seen:
                    continue
                seen.add((m, j))
                count = mono.modes.count((m, j))
                pair = _pairing(system, sv.sector, i, j)
                if pair == 0:
                    continue
                rest = list(mono.modes)
                rest.pop(pos)
                add(FockMono(rest, mono.ground), c * (n * pair * count))
    else:
        for mono, c in sv.terms.items():
            ev = zero_mode_eigenvalue(system, sv.sector, i, mono.ground)
            if ev != 0:
                add(mono, c * ev)
    return StateVector(system, sv.sector, out)


def apply_vector_mode(system, n, coords, sv: StateVector) -> StateVector:
    """Apply h(n) for h given by mode-basis coordinates (scalar entries)."""
    out = zero_state(system, sv.sector)
    for i, c in enumerate(coords):
        if c == 0:
            continue
        piece = apply_mode(system, n, i, sv)
        if not piece.is_zero():
            out = out + piece.scaled(c)
    return out


def twisted_coords(system, h_coords, n: Fraction):
    """First-block coordinates of the projected mode of an ambient L-vector.

    h^T(n) = sum_i c_i (b_i^1-projected)(n) with
    c_i = sum_p h_{p,i} eta^{kn(1-p)}.
    """
    k, d = system.k, system.d
    kn = int(n * k)
    out = []
    for i in range(d):
        acc = system.field.zero()
        for p in range(k):
            x = h_coords[p * d + i]
            if x != 0:
                acc = acc + system.eta_pow(kn * (1 - (p + 1))) * x
        out.append(acc)
    return out


def apply_twisted_vector_mode(system, n, h_coords, sv: StateVector) -> StateVector:
    return apply_vector_mode(system, n, twisted_coords(system, h_coords, n), sv)


# -- weights ---------------------------------------------------------------


def twisted_vacuum_weight(system) -> Fraction:
    k, d = system.k, system.d
    return Fraction((k * k - 1) * d, 24 * k)


def mono_weight(system, sector, mono: FockMono) -> Fraction:
    w = mono.level()
    if sector == "T":
        w += Fraction(system.K.inner(mono.ground, mono.ground), 2 * system.k)
        w += twisted_vacuum_weight(system)
    elif sector == "K":
        w += Fraction(system.K.inner(mono.ground, mono.ground), 2)
    else:
        w += Fraction(system.L.inner(mono.ground, mono.ground), 2)
    return w


def weight(system, sv: StateVector) -> Fraction:
    """The common L(0)-weight of a homogeneous state (error if mixed)."""
    if sv.is_zero():
        raise ValueError("weight of the zero vector is undefined")
    ws = {mono_weight(system, sv.sector, m) for m in sv.terms}
    if len(ws) != 1:
        raise ValueError(f"state not homogeneous: weights {sorted(ws)}")
    return ws.pop()


def weight_split(system, sv: StateVector):
    """Decompose into homogeneous components, as {weight: StateVector}."""
    comps = {}
    for mono, c in sv.terms.items():
        w = mono_weight(system, sv.sector, mono)
        comps.setdefault(w, {})[mono] = c
    return {w: StateVector(system, sv.sector, t) for w, t in sorted(comps.items())}


# -- distinguished states ----------------------------------------------------


def omega_state(system, sector) -> StateVector:
    """The conformal vector: half the dual-basis quadratic in modes (-1)."""
    if sector == "T":
        raise ValueError("conformal vector lives in an untwisted sector")
    lat = system.K if sector == "K" else system.L
    ginv = lat.gram_inverse()
    out = zero_state(system, sector)
    n = lat.rank
    half = Fraction(1, 2)
    for i in range(n):
        for j in range(n):
            if ginv[i][j]:
                mono = StateVector.monomial(system, sector,
                                            ((Fraction(-1), i), (Fraction(-1), j)),
                                            (0,) * n,
                                            system.field.from_rat(ginv[i][j] * half))
                out = out + mono
    return out


def ground_state(system, sector, vec, coeff=None) -> StateVector:
    return StateVector.monomial(system, sector, (), vec, coeff)


def slot_state(system, v: StateVector, slot: int) -> StateVector:
    """Embed a V_K state into V_L with all other tensor factors the vacuum."""
    if v.sector != "K":
        raise ValueError("slot embedding takes a V_K state")
    k, d = system.k, system.d
    out = {}
    for mono, c in v.terms.items():
        modes = tuple((n, slot * d + i) for n, i in mono.modes)
        ground = system.slot_embed(mono.ground, slot)
        out[FockMono(modes, ground)] = c
    return StateVector(system, "L", out)


def relabel_slots(system, v: StateVector, perm) -> StateVector:
    """Tensor-factor permutation of V_L: slot p moves to slot perm[p]."""
    if v.sector != "L":
        raise ValueError("slot relabeling acts on V_L")
    k, d = system.k, system.d
    if sorted(perm) != list(range(k)):
        raise ValueError("perm must be a permutation of the slots")
    out = {}
    for mono, c in v.terms.items():
        modes = tuple((n, perm[i // d] * d + (i % d)) for n, i in mono.modes)
        ground = [0] * (k * d)
        for p in range(k):
            for i in range(d):
                ground[perm[p] * d + i] = mono.ground[p * d + i]
        out[FockMono(modes, tuple(ground))] = c
    return StateVector(system, "L", out)


def nu_hat_state(system, v: StateVector, power: int = 1) -> StateVector:
    """The lifted shift acting on V_L (modes rotate; grounds move by the lift)."""
    if v.sector != "L":
        raise ValueError("the lifted shift acts on V_L")
    k, d = system.k, system.d
    p = power % k
    out = zero_state(system, "L")
    for mono, c in v.terms.items():
        modes = tuple((n, ((i // d - p) % k) * d + (i % d)) for n, i in mono.modes)
        g = system.ext_from_base(mono.ground, SECTION_PLAIN)
        g2 = system.nu_hat(g, p)
        phase = system.eta0_pow(g2.phase)
        out = out + StateVector.monomial(system, "L", modes, g2.base, c * phase)
    return out


# -- Virasoro ----------------------------------------------------------------


def virasoro_L(system, j: int, sv: StateVector) -> StateVector:
    """L(j) on V_K via the normal-ordered dual-basis quadratic."""
    if sv.sector != "K":
        raise ValueError("virasoro_L acts on the base sector")
    ginv = system.K.gram_inverse()
    d = system.d
    lev = int(sv.max_level())
    out = zero_state(system, "K")
    half = Fraction(1, 2)
    for m in range(min(j, 0) - lev - 1, max(j, 0) + lev + 2):
        mm = Fraction(m)
        other = Fraction(j - m)
        if mm > 0 and mm > lev:
            continue
        if other > 0 and other > lev + max(0, -m):
            continue
        # normal order: larger mode acts first
        for a in range(d):
            for b in range(d):
                f = ginv[a][b]
                if not f:
                    continue
                if other >= mm:
                    piece = apply_mode(system, other, b, sv)
                    piece = apply_mode(system, mm, a, piece)
                else:
                    piece = apply_mode(system, mm, a, sv)
                    piece = apply_mode(system, other, b, piece)
                if not piece.is_zero():
                    out = out + piece.scaled(f * half)
    return out


def twisted_L0(system, sv: StateVector) -> StateVector:
    """The degree operator on the twisted sector, built from the mode sum."""
    if sv.sector != "T":
        raise ValueError("twisted_L0 acts on the twisted sector")
    k, d = system.k, system.d
    ginv = system.K.gram_inverse()
    out = sv.scaled(twisted_vacuum_weight(system))
    lev = sv.max_level()
    # zero-mode square, coefficient k/2
    for a in range(d):
        for b in range(d):
            f = ginv[a][b]
            if not f:
                continue
            piece = apply_mode(system, 0, b, sv)
            piece = apply_mode(system, 0, a, piece)
            if not piece.is_zero():
                out = out + piece.scaled(f * Fraction(k, 2))
    # paired creation/annihilation, coefficient k per positive mode
    n = Fraction(1, k)
    while n <= lev:
        for a in range(d):
            for b in range(d):
                f = ginv[a][b]
                if not f:
                    continue
                piece = apply_mode(system, n, b, sv)
                if piece.is_zero():
                    continue
                piece = apply_mode(system, -n, a, piece)
                out = out + piece.scaled(f * Fraction(k))
        n += Fraction(1, k)
    return out


# -- weight-graded bases -------------------------------------------------------


def _mode_multisets(levels, budget, start=0):
    """Multisets over `levels` (with d colors each) of total level <= budget."""
    if start == len(levels):
        yield ()
        return
    lv, count_colors = levels[start]
    max_mult = int(budget / lv) if lv <= budget else 0
    from itertools import combinations_with_replacement
    for mult in range(max_mult + 1):
        for colors in combinations_with_replacement(range(count_colors), mult):
            head = tuple((Fraction(-lv), c) for c in colors)
            for tail in _mode_multisets(levels, budget - mult * lv, start + 1):
                yield head + tail


def weight_basis(system, sector, max_weight) -> list[StateVector]:
    """All monomial basis states of weight <= max_weight, sorted by weight."""
    max_weight = Fraction(max_weight)
    if sector == "T":
        shift = twisted_vacuum_weight(system)
        lat, ncolors, step = system.K, system.d, Fraction(1, system.k)
        ground_norm_bound = 2 * system.k * (max_weight - shift)
        if ground_norm_bound < 0:
            return []
        grounds = lat.enumerate_up_to_norm(Fraction(ground_norm_bound, 2))
        gweight = lambda g: Fraction(system.K.inner(g, g), 2 * system.k) + shift
    else:
        lat = system.K if sector == "K" else system.L
        ncolors, step = lat.rank, Fraction(1)
        grounds = lat.enumerate_up_to_norm(max_weight)
        gweight = lambda g: Fraction(lat.inner(g, g), 2)
    out = []
    for g in grounds:
        budget = max_weight - gweight(g)
        if budget < 0:
            continue
        nlevels = int(budget / step)
        levels = [(step * t, ncolors) for t in range(1, nlevels + 1)]
        for modes in _mode_multisets(levels, budget):
            out.append(StateVector.monomial(system, sector, modes, g))
    out.sort(key=lambda s: (weight(system, s),
                            next(iter(s.terms)).modes,
                            next(iter(s.terms)).ground))
    return out


def twisted_state_counts(system, max_reduced_weight) -> dict[Fraction, int]:
    """Number of twisted basis states per reduced weight (no vacuum shift)."""
    shift = twisted_vacuum_weight(system)
    counts: dict[Fraction, int] = {}
    for s in weight_basis(system, "T", Fraction(max_reduced_weight) + shift):
        w = weight(system, s) - shift
        if w <= max_reduced_weight:
            counts[w] = counts.get(w, 0) + 1
    return counts
