"""Witt vectors of finite length over the coefficient and series rings.

Sum, product and negation are evaluated through the universal integer
structure polynomials, derived once per (p, r) from the ghost recursion.
Ghost components and their inverse are provided separately for rings of
characteristic zero; the two routes are independent and the test-suite
checks one against the other.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy

from .coeff import FieldConfig
from .series import INF, Series, SeriesRing, agree, p_part, sig_negative, sig_positive


@dataclass(frozen=True)
class WittContext:
    """Structure polynomials S_k, P_k, N_k for W_r, as (coefficient, exponents)
    lists over the variables x_0..x_{r-1}, y_0..y_{r-1}."""

    p: int
    r: int
    sum_polys: tuple
    prod_polys: tuple
    neg_polys: tuple


def _ghost_poly(v, m, p):
    return sum(p ** i * v[i] ** (p ** (m - i)) for i in range(m + 1))


@lru_cache(maxsize=None)
def witt_context(p: int, r: int) -> WittContext:
    xs = sympy.symbols(f"x0:{r}")
    ys = sympy.symbols(f"y0:{r}")
    gens = xs + ys

    def solve(target):
        polys = []
        for m in range(r):
            acc = sympy.Poly(target(m), *gens, domain=sympy.ZZ)
            for i, s in enumerate(polys):
                acc -= p ** i * s ** (p ** (m - i))
            polys.append(acc.exquo_ground(p ** m))
        return tuple(tuple((int(c), tuple(e)) for e, c in poly.terms()) for poly in polys)

    sums = solve(lambda m: _ghost_poly(xs, m, p) + _ghost_poly(ys, m, p))
    prods = solve(lambda m: _ghost_poly(xs, m, p) * _ghost_poly(ys, m, p))
    negs = solve(lambda m: -_ghost_poly(xs, m, p))
    return WittContext(p, r, sums, prods, negs)


def _eval(ring, terms, values, cap=None):
    """Evaluate an integer polynomial at ring elements."""
    zero = ring.zero
    nonzero = [not _is_zero(ring, v) for v in values]
    powers = [{1: v} for v in values]
    is_series = isinstance(ring, SeriesRing)

    def power(i, e):
        cache = powers[i]
        if e not in cache:
            cache[e] = ring.pow(values[i], e, cap) if is_series else ring.pow(values[i], e)
        return cache[e]

    acc = zero
    for c, exps in terms:
        if any(e and not nonzero[i] for i, e in enumerate(exps)):
            continue
        mono = None
        for i, e in enumerate(exps):
            if e:
                pw = power(i, e)
                mono = pw if mono is None else (ring.mul(mono, pw, cap) if is_series else ring.mul(mono, pw))
        if mono is None:
            mono = ring.one
        if is_series:
            mono = ring.scale(ring.coeff.from_int(c), mono)
        else:
            mono = ring.mul(ring.from_int(c), mono)
        acc = ring.add(acc, mono)
    return acc


def _is_zero(ring, v):
    if isinstance(v, Series):
        return not v.coeffs and v.prec == INF
    return v == ring.zero


class WittVec:
    """A length-r Witt vector (a_0, ..., a_{r-1}) over ``ring``."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring, comps):
        self.ring = ring
        self.comps = tuple(comps)
        if not self.comps:
            raise ValueError("Witt vectors have length >= 1")

    @property
    def r(self) -> int:
        return len(self.comps)

    @property
    def ctx(self) -> WittContext:
        return witt_context(self.ring.p, self.r)

    def _check(self, other):
        if not isinstance(other, WittVec):
            raise TypeError("expected a Witt vector")
        if other.r != self.r or other.ring is not self.ring:
            raise ValueError("Witt vectors from different contexts")

    def _apply(self, polys, other=None, cap=None):
        ys = other.comps if other is not None else (self.ring.zero,) * self.r
        vals = self.comps + ys
        return WittVec(self.ring, [_eval(self.ring, polys[k], vals, cap) for k in range(self.r)])

    def add(self, other, cap=None):
        self._check(other)
        return self._apply(self.ctx.sum_polys, other, cap)

    def mul(self, other, cap=None):
        self._check(other)
        return self._apply(self.ctx.prod_polys, other, cap)

    def neg(self, cap=None):
        return self._apply(self.ctx.neg_polys, None, cap)

    def sub(self, other, cap=None):
        return self.add(other.neg(cap), cap)

    __add__ = add
    __mul__ = mul
    __sub__ = sub
    __neg__ = neg

    def scale_int(self, m: int, cap=None):
        """m-fold Witt sum, m >= 0."""
        out = zero_vec(self.ring, self.r)
        base = self
        while m:
            if m & 1:
                out = out.add(base, cap)
            m >>= 1
            if m:
                base = base.add(base, cap)
        return out

    def frobenius(self):
        """F, componentwise p-th power; requires characteristic p."""
        ring = self.ring
        if ring.char_zero:
            raise ValueError("componentwise Frobenius needs characteristic p")
        if isinstance(ring, SeriesRing):
            return WittVec(ring, [ring.frobenius(a) for a in self.comps])
        return WittVec(ring, [ring.frob(a) for a in self.comps])

    def verschiebung(self):
        """V: (a_0, ..., a_{r-1}) -> (0, a_0, ..., a_{r-2})."""
        return WittVec(self.ring, (self.ring.zero,) + self.comps[:-1])

    F = frobenius
    V = verschiebung

    def truncate(self, r: int):
        return WittVec(self.ring, self.comps[:r])

    def extend(self, r: int):
        """(a_0, ..., a_{s-1}) -> (a_0, ..., a_{s-1}, 0, ...) of length r."""
        return WittVec(self.ring, self.comps + (self.ring.zero,) * (r - self.r))

    def is_zero(self) -> bool:
        return all(_is_zero(self.ring, a) for a in self.comps)

    def __eq__(self, other):
        return isinstance(other, WittVec) and self.comps == other.comps

    def __hash__(self):
        return hash(self.comps)

    def __repr__(self):
        fmt = getattr(self.ring, "format", str)
        return "w(" + "; ".join(fmt(a) for a in self.comps) + ")"


def zero_vec(ring, r: int) -> WittVec:
    return WittVec(ring, (ring.zero,) * r)


def teichmuller_vec(ring, a, r: int) -> WittVec:
    """[a] = (a, 0, ..., 0)."""
    return WittVec(ring, (a,) + (ring.zero,) * (r - 1))


# -- ghost components ------------------------------------------------------------

def ghost(x: WittVec, cap=None) -> list:
    """gh_m = sum_{i <= m} p^i x_i^(p^(m-i)), over a ring of characteristic zero."""
    ring = x.ring
    p = ring.p
    is_series = isinstance(ring, SeriesRing)
    out = []
    powers = []
    for m in range(x.r):
        if is_series:
            powers = [ring.pow(a, p, cap) for a in powers] + [x.comps[m]]
        else:
            powers = [ring.pow(a, p) for a in powers] + [x.comps[m]]
        acc = ring.zero
        for i, term in enumerate(powers):
            if is_series:
                acc = ring.add(acc, ring.scale(ring.coeff.from_int(p ** i), term))
            else:
                acc = ring.add(acc, ring.mul(ring.from_int(p ** i), term))
        out.append(acc)
    return out


def unghost(ring, g) -> WittVec:
    """Inverse of :func:`ghost`; every division by p^m must be exact."""
    p = ring.p
    xs = []
    for m, gm in enumerate(g):
        acc = gm
        for i, xi in enumerate(xs):
            acc = ring.sub(acc, ring.mul(ring.from_int(p ** i), ring.pow(xi, p ** (m - i))))
        xs.append(ring.div_p(acc, m))
    return WittVec(ring, xs)


# -- residue field: trace and W_r(F_p) = Z/p^r ------------------------------------

def witt_trace(w: WittVec) -> WittVec:
    """Witt sum of the f coefficientwise Frobenius twists of w over F_q."""
    cfg = w.ring
    if not isinstance(cfg, FieldConfig):
        raise TypeError("witt_trace expects a Witt vector over F_q")
    out = w
    for k in range(1, cfg.f):
        out = out.add(WittVec(cfg, [cfg.frob(a, k) for a in w.comps]))
    assert all(a < cfg.p for a in out.comps), "trace left the prime field"
    return out


@lru_cache(maxsize=None)
def _zmod_table(p: int, r: int) -> dict:
    F = FieldConfig(p, 1)
    one = teichmuller_vec(F, 1, r)
    table = {}
    acc = zero_vec(F, r)
    for m in range(p ** r):
        table[acc.comps] = m
        acc = acc.add(one)
    assert len(table) == p ** r
    return table


def wr_fp_to_zmod(w: WittVec) -> int:
    """The ring isomorphism W_r(F_p) -> Z/p^r."""
    return _zmod_table(w.ring.p, w.r)[tuple(int(a) for a in w.comps)]


def zmod_to_wr_fp(m: int, p: int, r: int) -> tuple:
    inv = {v: k for k, v in _zmod_table(p, r).items()}
    return inv[m % p ** r]


# -- Artin-Schreier-Witt normal forms ---------------------------------------------

@dataclass(frozen=True)
class ASWClass:
    """Reduced representative of a class in W_r(F)/(F-1)W_r(F).

    Every component is supported on significance-negative indices whose
    entries are not all divisible by p, plus a constant that is the least
    code of its coset in F_q / (x^p - x)."""

    vec: WittVec

    @property
    def r(self) -> int:
        return self.vec.r

    def is_zero(self) -> bool:
        return self.vec.is_zero()


def wp(x: Series) -> Series:
    """Artin-Schreier operator x^p - x."""
    ring = x.ring
    return ring.sub(ring.frobenius(x), x)


def as_normalize(a: Series):
    """Return (normal, s) with a - (s^p - s) in normal form, up to precision."""
    ring = a.ring
    cfg = ring.coeff
    p = ring.p
    cap = min(ring.cap, a.prec)
    s = ring.zero
    pos = {k: c for k, c in a.coeffs.items() if sig_positive(ring.unpack(k))}
    if pos:
        cur = Series(ring, pos, a.prec)
        acc = ring.zero
        while cur.coeffs and cur.degree_valuation() < cap:
            acc = ring.add(acc, cur)
            cur = ring.frobenius(cur)
        s1 = ring.truncate(ring.neg(acc), cap)
        s = ring.add(s, s1)
        a = ring.truncate(ring.sub(a, wp(s1)), cap)
    while True:
        cands = [(ring.key_degree(k), k) for k in a.coeffs
                 if sig_negative(ring.unpack(k)) and p_part(ring.unpack(k), p) >= 1]
        if not cands:
            break
        _, k = min(cands)
        idx = ring.unpack(k)
        mono = ring.monomial(tuple(e // p for e in idx), cfg.root_p(a.coeffs[k]))
        s = ring.add(s, mono)
        a = ring.sub(a, wp(mono))
    c0 = a.coeffs.get(0, cfg.zero)
    rep, sc = cfg.as_table[c0]
    if sc:
        s = ring.add(s, ring.const(sc))
        a = ring.sub(a, wp(ring.const(sc)))
    assert a.coeffs.get(0, cfg.zero) == rep
    return a, s


def asw_reduce(w: WittVec) -> ASWClass:
    """Canonical representative of w modulo (F - 1)W_r(F), componentwise."""
    ring = w.ring
    if not isinstance(ring, SeriesRing) or ring.char_zero:
        raise TypeError("asw_reduce expects a Witt vector over F_q-series")
    r = w.r
    for k in range(r):
        normal, s = as_normalize(w.comps[k])
        if s.coeffs:
            d = teichmuller_vec(ring, s, r - k)
            d = d.frobenius().sub(d)
            shifted = WittVec(ring, (ring.zero,) * k + d.comps)
            w = w.sub(shifted)
        assert agree(w.comps[k], normal)
    return ASWClass(w)


def f_minus_one(s: WittVec, cap=None) -> WittVec:
    """(F - 1)(s)."""
    return s.frobenius().sub(s, cap)
