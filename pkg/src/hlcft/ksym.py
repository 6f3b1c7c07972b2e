"""Milnor K-symbols of an n-dimensional local field, handled as formal sums.

No group relation is ever applied to a :class:`SymbolSum`; two sums are
compared through what they do: the valuation map, the tame components and
the pairing against the probe family (:func:`keq`).

Conventions (fixed once, used everywhere):

* ``boundary`` is taken with respect to the highest live variable t_k.  A
  uniformizer moved to the front of a symbol contributes the sign of that
  move, so boundary({t_2, t_1}) = {t_1} and boundary({t_1, t_2}) = -{t_1}.
* ``val_map`` iterates the boundary down to degree 0; val({t_n, ..., t_1}) = 1.
* ``tame_full`` iterates the boundary n times and multiplies the resulting
  constants, then applies the sign (-1)^(n(n+1)/2) so that
  {theta, t_1, ..., t_n} maps to theta.
* ``tame_components`` adjoins t_i on the right, multiplies the discrete log
  by (-1)^(n-i) (the sign of moving t_i to its ascending slot), and removes
  the contribution of val(alpha) copies of {t_n, ..., t_1}, so the
  coordinates are those of the decomposition Z + (Z/(q-1))^n + VK.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .series import GeneratorExponents, Series, SeriesRing, first_unit_slot, generator, unit_peel


class SymbolError(ValueError):
    pass


class SymbolSum:
    """Integer combination of symbols {x_1, ..., x_m}, all of degree m.

    ``level`` is the number of live variables: entries only involve
    t_1..t_level.  It drops by one with every :func:`boundary`.
    """

    __slots__ = ("ring", "degree", "level", "terms")

    def __init__(self, ring: SeriesRing, degree: int, terms=None, level=None):
        self.ring = ring
        self.degree = degree
        self.level = ring.n if level is None else level
        clean = {}
        for entries, c in (terms or {}).items():
            entries = tuple(entries)
            if len(entries) != degree:
                raise SymbolError(f"expected {degree} entries, got {len(entries)}")
            if c:
                clean[entries] = clean.get(entries, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    def _like(self, terms):
        return SymbolSum(self.ring, self.degree, terms, self.level)

    def _check(self, other):
        if not isinstance(other, SymbolSum):
            raise TypeError("expected a SymbolSum")
        if (other.ring, other.degree, other.level) != (self.ring, self.degree, self.level):
            raise SymbolError("symbol sums of different shape")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self._like(terms)

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return self._like({e: k * c for e, c in self.terms.items()})

    __mul__ = __rmul__

    def is_empty(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SymbolSum) and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self) -> str:
        if not self.terms:
            return "0"
        fmt = self.ring.format
        parts = []
        for entries, c in self.terms.items():
            body = "{" + ", ".join(fmt(x) for x in entries) + "}"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def __repr__(self):
        return f"SymbolSum({self.format()})"


def sym_make(ring: SeriesRing, *entries, coef: int = 1) -> SymbolSum:
    entries = tuple(ring.coerce(x) for x in entries)
    for x in entries:
        if not x.coeffs:
            raise SymbolError("symbol entries must be nonzero")
    return SymbolSum(ring, len(entries), {entries: coef})


def sym_add(a: SymbolSum, b: SymbolSum) -> SymbolSum:
    return a + b


def sym_scale(k: int, a: SymbolSum) -> SymbolSum:
    return k * a


def sym_zero(ring: SeriesRing, degree: int) -> SymbolSum:
    return SymbolSum(ring, degree)


def params_desc(ring: SeriesRing) -> SymbolSum:
    """{t_n, ..., t_1}."""
    return sym_make(ring, *(ring.var(j) for j in range(ring.n, 0, -1)))


# -- boundary, valuation, tame symbol ---------------------------------------------

def boundary(alpha: SymbolSum) -> SymbolSum:
    """Milnor boundary with respect to t_level, landing one level down."""
    if alpha.degree < 1 or alpha.level < 1:
        raise SymbolError("boundary needs degree >= 1 and a live variable")
    ring = alpha.ring
    k = alpha.level
    minus_one = ring.from_int(-1)
    out = {}
    for entries, coef in alpha.terms.items():
        splits = [ring.split_variable(x, k) for x in entries]
        slots = [i for i, (a, _) in enumerate(splits) if a]
        for size in range(1, len(slots) + 1):
            for sub in itertools.combinations(slots, size):
                c = coef
                for i in sub:
                    c *= splits[i][0]
                first = sub[0]
                sign = -1 if first % 2 else 1
                new = tuple(minus_one if i in sub else splits[i][1]
                            for i in range(len(entries)) if i != first)
                out[new] = out.get(new, 0) + sign * c
    return SymbolSum(ring, alpha.degree - 1, out, k - 1)


def val_map(alpha: SymbolSum) -> int:
    """Iterated boundary down to K_0 = Z."""
    if alpha.degree != alpha.level:
        raise SymbolError(f"val_map needs degree {alpha.level}, got {alpha.degree}")
    while alpha.degree:
        alpha = boundary(alpha)
    return sum(alpha.terms.values())


def _tame_dlog(alpha: SymbolSum) -> int:
    """Discrete log of tame_full(alpha), modulo q - 1."""
    n = alpha.level
    if alpha.degree != n + 1:
        raise SymbolError(f"tame_full needs degree {n + 1}, got {alpha.degree}")
    cfg = alpha.ring.coeff
    for _ in range(n):
        alpha = boundary(alpha)
    total = 0
    for (x,), c in alpha.terms.items():
        if len(x.coeffs) != 1 or 0 not in x.coeffs:
            raise SymbolError("tame symbol did not reduce to a constant")
        total += c * cfg.dlog(x.coeffs[0])
    sign = -1 if (n * (n + 1) // 2) % 2 else 1
    return sign * total % (cfg.q - 1)


def tame_full(alpha: SymbolSum):
    """The isomorphism K_{n+1} -> F_q^*, {theta, t_1, ..., t_n} -> theta."""
    cfg = alpha.ring.coeff
    return cfg.gen_power(_tame_dlog(alpha))


def _adjoin(alpha: SymbolSum, x: Series) -> SymbolSum:
    return SymbolSum(alpha.ring, alpha.degree + 1,
                     {e + (x,): c for e, c in alpha.terms.items()}, alpha.level)


def _raw_tame(alpha: SymbolSum) -> list:
    ring = alpha.ring
    n = ring.n
    m = ring.coeff.q - 1
    out = []
    for i in range(1, n + 1):
        sign = -1 if (n - i) % 2 else 1
        out.append(sign * _tame_dlog(_adjoin(alpha, ring.var(i))) % m)
    return out


def tame_components(alpha: SymbolSum) -> tuple:
    """Coordinates of alpha in (Z/(q-1))^n against {g, t_1, .., t_i omitted, .., t_n}."""
    if alpha.degree != alpha.ring.n or alpha.level != alpha.ring.n:
        raise SymbolError("tame_components needs a full-level symbol of degree n")
    m = alpha.ring.coeff.q - 1
    raw = _raw_tame(alpha)
    v = val_map(alpha)
    if v:
        base = _raw_tame(params_desc(alpha.ring))
        raw = [a - v * b for a, b in zip(raw, base)]
    return tuple(a % m for a in raw)


# -- canonical generators ---------------------------------------------------------

def tame_generator(ring: SeriesRing, i: int, theta=None) -> SymbolSum:
    """{theta, t_1, .., t_i omitted, .., t_n}; theta defaults to the fixed generator."""
    cfg = ring.coeff
    theta = cfg.generator if theta is None else theta
    params = [ring.var(j) for j in range(1, ring.n + 1) if j != i]
    return sym_make(ring, ring.const(theta), *params)


def vk_generator(ring: SeriesRing, b: int, idx) -> SymbolSum:
    """{1 + theta_b t^idx, t_1, .., t_l omitted, .., t_n} with l the first unit slot."""
    l = first_unit_slot(idx, ring.p)
    params = [ring.var(j) for j in range(1, ring.n + 1) if j != l]
    return sym_make(ring, generator(ring, b, idx), *params)


def vk_generators(ring: SeriesRing) -> list:
    """Keys (b, idx) of the VK generators inside the window, in a fixed order."""
    cfg = ring.coeff
    return [(b, idx) for idx in ring.window.positive_indices(ring.p) for b in range(len(cfg.basis))]


# -- symbols from unit tables over index sets ---------------------------------------

def h_map(ring: SeriesRing, eps: dict, m: int) -> SymbolSum:
    """Sum of {eps_J, t_j1, ..., t_j(m-1)} over (m-1)-subsets J.

    Every eps_J must lie in the subgroup generated by 1 + theta t^i with
    first unit slot l(i) outside J; this is checked through unit_peel.
    """
    out = sym_zero(ring, m)
    for J, e in sorted(eps.items()):
        J = tuple(sorted(J))
        if len(J) != m - 1 or any(not 1 <= j <= ring.n for j in J):
            raise SymbolError(f"bad index set {J}")
        e = ring.coerce(e)
        table = unit_peel(e)
        bad = [idx for (_, idx), a in table.entries.items() if a and table.l_of(idx) in J]
        if bad:
            raise SymbolError(f"unit for J={J} has generators with l in J: {bad}")
        if e.is_one():
            continue
        out = out + sym_make(ring, e, *(ring.var(j) for j in J))
    return out


# -- decomposition ------------------------------------------------------------------

@dataclass
class KDecomp:
    """vZ * {t_n..t_1} + sum tame_i * {g, .., t_i omitted, ..} + sum a * vk_generator."""

    vZ: int
    tame: tuple
    vk: GeneratorExponents
    r: int
    extra: dict = field(default_factory=dict, compare=False)

    def format(self) -> str:
        vk = ", ".join(f"({b},{idx}):{a}" for (b, idx), a in self.vk.sorted_items())
        return f"vZ={self.vZ} tame={list(self.tame)} vk={{{vk}}}"


def _context(ring: SeriesRing, r: int, ctx):
    if ctx is not None:
        if ctx.r != r:
            raise ValueError(f"context is at level {ctx.r}, asked for {r}")
        return ctx
    from .pairing import get_context
    return get_context(ring, r)


def decompose(alpha: SymbolSum, r: int, ctx=None) -> KDecomp:
    ring = alpha.ring
    ctx = _context(ring, r, ctx)
    vz = val_map(alpha)
    tame = tame_components(alpha)
    # Z and tame parts pair trivially with every non-constant probe
    coeffs = ctx.solve_vk(alpha)
    return KDecomp(vz, tame, coeffs, r)


def rebuild(d: KDecomp, ring: SeriesRing) -> SymbolSum:
    out = d.vZ * params_desc(ring)
    for i, a in enumerate(d.tame, start=1):
        if a:
            out = out + a * tame_generator(ring, i)
    for (b, idx), a in d.vk.sorted_items():
        if a:
            out = out + a * vk_generator(ring, b, idx)
    return out


def keq(alpha: SymbolSum, beta: SymbolSum, r: int, ctx=None) -> bool:
    """Observational equality: valuation, tame part and every probe pairing."""
    if alpha.degree != beta.degree:
        raise SymbolError("keq needs equal degrees")
    if val_map(alpha) != val_map(beta):
        return False
    if tame_components(alpha) != tame_components(beta):
        return False
    ctx = _context(alpha.ring, r, ctx)
    return ctx.observe(alpha - beta) == [0] * ctx.num_probes
