"""Sparse truncated iterated Laurent series over F_q or Z_q / p^N.

An element of F = K_0((t_1))...((t_n)) is stored as a finite table of
monomials together with an absolute precision ``prec`` measured in a
weighted degree

    deg(i) = c_1 i_1 + ... + c_n i_n,   c_1 = 1,  c_k = 1 + sum_{j<k} c_j (hi_j - lo_j),

so that every difference of two exponent vectors of the window box that is
positive in significance order (t_n-major) has positive weighted degree.
An element with precision P is known modulo all monomials of degree >= P;
``prec = inf`` means exact.  Products, inverses and derivatives propagate
precision the same way a p-adic library propagates absolute precision.

Monomials are packed into a single int: the weighted degree sits above the
exponent digits, so integer order of the keys is degree order and adding
keys adds exponent vectors.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .coeff import FieldConfig

INF = math.inf
_BITS = 24
_B = 1 << _BITS
_HALF = _B >> 1


class PrecisionError(ArithmeticError):
    """A requested coefficient lies beyond the known precision, or the window
    weights are too shallow for the element at hand."""


def sig_key(idx) -> tuple:
    """Sort key for significance order (compare i_n first)."""
    return tuple(reversed(idx))


def sig_positive(idx) -> bool:
    for c in reversed(idx):
        if c:
            return c > 0
    return False


def sig_negative(idx) -> bool:
    for c in reversed(idx):
        if c:
            return c < 0
    return False


def p_part(idx, p: int) -> int:
    """Largest k with p^k dividing every entry of a nonzero index."""
    k = 0
    while all(c % p ** (k + 1) == 0 for c in idx):
        k += 1
    return k


def first_unit_slot(idx, p: int) -> int:
    """l(i) = min{k : p does not divide i_k}, 1-based."""
    for k, c in enumerate(idx, start=1):
        if c % p:
            return k
    raise ValueError(f"p divides every entry of {idx}")


class Window:
    """Exponent box used for generators, probes and random elements, plus the
    degree weights and the default truncation degree derived from it."""

    def __init__(self, lo, hi, cap=None, weights=None):
        lo, hi = tuple(int(x) for x in lo), tuple(int(x) for x in hi)
        if len(lo) != len(hi) or not lo:
            raise ValueError("window bounds must have equal positive length")
        if any(a > 0 or b < 0 for a, b in zip(lo, hi)):
            raise ValueError("window must satisfy lo <= 0 <= hi in every variable")
        self.lo, self.hi = lo, hi
        self.n = len(lo)
        w = [1]
        for k in range(1, self.n):
            w.append(1 + sum(w[j] * (hi[j] - lo[j]) for j in range(k)))
        if weights is not None:
            if len(weights) != self.n or any(c < 1 for c in weights):
                raise ValueError("weights must be positive, one per variable")
            w = list(weights)
        self.weights = tuple(w)
        self.max_degree = sum(c * h for c, h in zip(w, hi))
        self.min_degree = sum(c * l for c, l in zip(w, lo))
        self.cap = 1 + self.max_degree if cap is None else cap

    @classmethod
    def symmetric(cls, n: int, bound: int, cap=None):
        return cls((-bound,) * n, (bound,) * n, cap)

    def degree(self, idx) -> int:
        return sum(c * i for c, i in zip(self.weights, idx))

    def contains(self, idx) -> bool:
        return all(a <= i <= b for a, i, b in zip(self.lo, idx, self.hi))

    def indices(self):
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def positive_indices(self, p: int) -> list:
        """Significance-positive box indices with p not dividing their gcd,
        sorted in significance order."""
        out = [i for i in self.indices() if sig_positive(i) and any(c % p for c in i)]
        return sorted(out, key=sig_key)

    def scaled(self, var: int, factor: int) -> "Window":
        """Box stretched by ``factor`` in one variable, with weights chosen so
        that t^k -> t^k (k_var multiplied by factor) multiplies degrees by
        ``factor``; the cap scales along."""
        lo, hi = list(self.lo), list(self.hi)
        lo[var - 1] *= factor
        hi[var - 1] *= factor
        weights = [c if j == var - 1 else c * factor for j, c in enumerate(self.weights)]
        return Window(lo, hi, self.cap * factor, weights)

    def with_cap(self, cap) -> "Window":
        return Window(self.lo, self.hi, cap, self.weights)

    def __eq__(self, other):
        return isinstance(other, Window) and (self.lo, self.hi, self.cap, self.weights) == \
            (other.lo, other.hi, other.cap, other.weights)

    def __hash__(self):
        return hash((self.lo, self.hi, self.cap, self.weights))

    def __repr__(self):
        return f"Window(lo={self.lo}, hi={self.hi}, cap={self.cap})"


class Series:
    """Immutable truncated series; build through a :class:`SeriesRing`."""

    __slots__ = ("ring", "coeffs", "prec", "_sorted", "_hash")

    def __init__(self, ring, coeffs: dict, prec=INF):
        self.ring = ring
        self.coeffs = coeffs
        self.prec = prec
        self._sorted = None
        self._hash = None

    # sorted list of (key, degree, coefficient)
    @property
    def items(self):
        if self._sorted is None:
            deg = self.ring.key_degree
            self._sorted = [(k, deg(k), c) for k, c in sorted(self.coeffs.items())]
        return self._sorted

    @property
    def terms(self) -> dict:
        unpack = self.ring.unpack
        return {unpack(k): c for k, c in self.coeffs.items()}

    @property
    def exact(self) -> bool:
        return self.prec == INF

    def degree_valuation(self):
        """Smallest weighted degree in the support (prec for a zero series)."""
        return self.items[0][1] if self.coeffs else self.prec

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs.get(self.ring.zero_key) == self.ring.coeff.one

    def __add__(self, other):
        return self.ring.add(self, self.ring.coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring.sub(self, self.ring.coerce(other))

    def __rsub__(self, other):
        return self.ring.sub(self.ring.coerce(other), self)

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        return self.ring.mul(self, self.ring.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.ring.mul(self, self.ring.inv(self.ring.coerce(other)))

    def __pow__(self, e: int):
        return self.ring.pow(self, e)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.coeffs == other.coeffs and self.prec == other.prec and self.ring.coeff == other.ring.coeff

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.coeffs.items()), self.prec))
        return self._hash

    def __repr__(self):
        return f"Series({self.ring.format(self)})"

    def __str__(self):
        return self.ring.format(self)


class SeriesRing:
    """Ring of truncated series in n variables over a coefficient ring."""

    def __init__(self, coeff, window: Window):
        self.coeff = coeff
        self.window = window
        self.n = window.n
        self.weights = window.weights
        self.cap = window.cap
        self.p = coeff.p
        self.char = coeff.char
        self.char_zero = coeff.char_zero
        self._top = _B ** self.n
        self.zero_key = 0
        self.zero = Series(self, {})
        self.one = Series(self, {0: coeff.one})
        self._unit_keys = [self.pack(tuple(int(j == k) for j in range(self.n))) for k in range(self.n)]

    # -- packing
    def pack(self, idx) -> int:
        if len(idx) != self.n:
            raise ValueError(f"index {idx} has wrong length for n = {self.n}")
        key = 0
        for i in reversed(idx):
            if abs(i) >= _HALF:
                raise ValueError("exponent out of range")
            key = key * _B + i
        return self.window.degree(idx) * self._top + key

    def unpack(self, key: int) -> tuple:
        rest = key - self.key_degree(key) * self._top
        out = []
        for _ in range(self.n):
            d = (rest + _HALF) % _B - _HALF
            out.append(d)
            rest = (rest - d) // _B
        return tuple(out)

    def key_degree(self, key: int) -> int:
        return (key + (self._top >> 1)) // self._top

    # -- construction
    def coerce(self, x):
        if isinstance(x, Series):
            if x.ring is not self and (x.ring.coeff != self.coeff or x.ring.window != self.window):
                raise ValueError("series from a different ring or window")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to a series")

    def make(self, terms: dict, prec=INF) -> Series:
        """Series from {exponent tuple: coefficient}; zero coefficients dropped."""
        z = self.coeff.zero
        coeffs = {}
        for idx, c in terms.items():
            if c != z:
                k = self.pack(tuple(idx))
                if self.key_degree(k) < prec:
                    coeffs[k] = c
        return Series(self, coeffs, prec)

    def _from_keys(self, coeffs: dict, prec) -> Series:
        z = self.coeff.zero
        if prec == INF:
            return Series(self, {k: c for k, c in coeffs.items() if c != z}, prec)
        deg = self.key_degree
        return Series(self, {k: c for k, c in coeffs.items() if c != z and deg(k) < prec}, prec)

    def from_int(self, k: int) -> Series:
        return self.const(self.coeff.from_int(k))

    def const(self, c) -> Series:
        return Series(self, {0: c} if c != self.coeff.zero else {})

    def monomial(self, idx, c=None) -> Series:
        c = self.coeff.one if c is None else c
        return Series(self, {self.pack(tuple(idx)): c} if c != self.coeff.zero else {})

    def var(self, j: int) -> Series:
        """The local parameter t_j (1-based)."""
        return Series(self, {self._unit_keys[j - 1]: self.coeff.one})

    def truncate(self, x: Series, prec) -> Series:
        if prec >= x.prec:
            return x
        return self._from_keys(x.coeffs, prec)

    # -- ring protocol
    def add(self, x: Series, y: Series) -> Series:
        if not y.coeffs and y.prec == INF:
            return x
        if not x.coeffs and x.prec == INF:
            return y
        add = self.coeff.add
        out = dict(x.coeffs)
        for k, c in y.coeffs.items():
            out[k] = add(out[k], c) if k in out else c
        return self._from_keys(out, min(x.prec, y.prec))

    def neg(self, x: Series) -> Series:
        neg = self.coeff.neg
        return Series(self, {k: neg(c) for k, c in x.coeffs.items()}, x.prec)

    def sub(self, x: Series, y: Series) -> Series:
        return self.add(x, self.neg(y))

    def scale(self, c, x: Series) -> Series:
        mul = self.coeff.mul
        return self._from_keys({k: mul(c, v) for k, v in x.coeffs.items()}, x.prec)

    def shift(self, x: Series, idx) -> Series:
        """Multiply by the monomial t^idx (exact, no truncation)."""
        s = self.pack(tuple(idx))
        deg = self.window.degree(idx)
        return Series(self, {k + s: c for k, c in x.coeffs.items()}, x.prec + deg)

    def mul(self, x: Series, y: Series, cap=None) -> Series:
        cap = self.cap if cap is None else cap
        vx, vy = x.degree_valuation(), y.degree_valuation()
        prec = min(x.prec + vy, y.prec + vx, cap)
        if prec == cap and x.prec == INF and y.prec == INF and x.coeffs and y.coeffs \
                and x.items[-1][1] + y.items[-1][1] < cap:
            prec = INF
        if not x.coeffs or not y.coeffs:
            return Series(self, {}, prec)
        if len(x.coeffs) > len(y.coeffs):
            x, y = y, x
            vx, vy = vy, vx
        cmul, cadd = self.coeff.mul, self.coeff.add
        ys = y.items
        acc = {}
        for ka, wa, ca in x.items:
            if wa + vy >= prec:
                break
            for kb, wb, cb in ys:
                if wa + wb >= prec:
                    break
                k = ka + kb
                v = cmul(ca, cb)
                if k in acc:
                    acc[k] = cadd(acc[k], v)
                else:
                    acc[k] = v
        return self._from_keys(acc, prec)

    def pow(self, x: Series, e: int, cap=None) -> Series:
        if e < 0:
            return self.pow(self.inv(x, cap), -e, cap)
        cap = self.cap if cap is None else cap
        v = x.degree_valuation() if x.coeffs else 0
        if cap == INF or v >= 0 or e < 2:
            return self._pow(x, e, cap)
        # partial powers sit up to (e-1)|v| above the valuation of the result
        out = self._pow(x, e, cap - (e - 1) * v)
        if out.prec == INF and (not out.coeffs or out.items[-1][1] < cap):
            return out
        return self.truncate(out, cap)

    def _pow(self, x: Series, e: int, cap) -> Series:
        result, base = self.one, x
        while e:
            if e & 1:
                result = self.mul(result, base, cap)
            e >>= 1
            if e:
                base = self.mul(base, base, cap)
        return result

    def frobenius(self, x: Series) -> Series:
        """x -> x^p.  In characteristic p this is computed termwise and exactly."""
        if self.char_zero:
            return self.pow(x, self.p)
        fr = self.coeff.frob
        p = self.p
        deg = self.key_degree
        # (a + err)^p = a^p + err^p in characteristic p
        prec = p * x.prec
        return Series(self, {k * p: fr(c) for k, c in x.coeffs.items() if deg(k * p) < prec}, prec)

    # -- leading terms
    def leading(self, x: Series):
        """(index, coefficient) of the significance-minimal term."""
        if not x.coeffs:
            raise ZeroDivisionError("valuation of zero")
        best = min(x.coeffs, key=lambda k: sig_key(self.unpack(k)))
        return self.unpack(best), x.coeffs[best]

    def valuation(self, x: Series) -> tuple:
        return self.leading(x)[0]

    def leading_coeff(self, x: Series):
        return self.leading(x)[1]

    def _check_leading(self, x: Series):
        if not x.coeffs:
            raise ZeroDivisionError("division by zero series")
        kl, wl, cl = x.items[0]
        if len(x.items) > 1 and x.items[1][1] == wl:
            raise PrecisionError("leading degree is not unique; enlarge the window")
        if self.unpack(kl) != self.valuation(x):
            raise PrecisionError("window weights too shallow for this element")
        if x.prec <= wl:
            raise PrecisionError("leading term not determined at this precision")
        return kl, wl, cl

    def inv(self, x: Series, cap=None) -> Series:
        cap = self.cap if cap is None else cap
        kl, wl, cl = self._check_leading(x)
        cinv = self.coeff.inv(cl)
        cmul = self.coeff.mul
        # x = cl t^l (1 + z), deg(z) > 0
        z = Series(self, {k - kl: cmul(c, cinv) for k, c in x.coeffs.items() if k != kl}, x.prec - wl)
        target = min(cap + wl, z.prec)
        if not z.coeffs:
            y = Series(self, {0: self.coeff.one}, z.prec)
        else:
            if target == INF:
                raise PrecisionError("inverse of a non-monomial needs a finite cap")
            vz = z.degree_valuation()
            y = self.one
            for _ in range(int(target // vz) + 2):
                y = self.sub(self.one, self.mul(z, y, target))
            y = self.truncate(y, target)
        return Series(self, {k - kl: cmul(c, cinv) for k, c in y.coeffs.items()}, y.prec - wl)

    def split_multiplicative(self, x: Series):
        """x = t^a * theta * u with u a principal unit; returns (a, theta, u)."""
        a, theta = self.leading(x)
        cinv = self.coeff.inv(theta)
        u = self.scale(cinv, self.shift(x, tuple(-e for e in a)))
        return a, theta, u

    def split_variable(self, x: Series, k: int):
        """x = t_k^a * u with u a unit for the t_k-adic valuation, variables above
        k absent; returns (a, reduction of u) with the reduction a series in
        t_1..t_{k-1}."""
        if not x.coeffs:
            raise ZeroDivisionError("valuation of zero")
        idxs = {key: self.unpack(key) for key in x.coeffs}
        a = min(i[k - 1] for i in idxs.values())
        unit = tuple(-a if j == k - 1 else 0 for j in range(self.n))
        red = {}
        for key, i in idxs.items():
            if i[k - 1] == a:
                red[tuple(0 if j == k - 1 else i[j] for j in range(self.n))] = x.coeffs[key]
        prec = x.prec + self.window.degree(unit)
        return a, self.make(red, prec)

    # -- calculus
    def deriv(self, x: Series, j: int) -> Series:
        """d/dt_j (1-based)."""
        uk = self._unit_keys[j - 1]
        cw = self.weights[j - 1]
        scale, z = self.coeff.from_int, self.coeff.zero
        mul = self.coeff.mul
        out = {}
        for k, c in x.coeffs.items():
            e = self.unpack(k)[j - 1]
            if e:
                v = mul(scale(e), c)
                if v != z:
                    out[k - uk] = v
        return Series(self, out, x.prec - cw)

    @cached_property
    def residue_key(self) -> int:
        return self.pack((-1,) * self.n)

    def coefficient(self, x: Series, idx):
        key = self.pack(tuple(idx))
        if self.key_degree(key) >= x.prec:
            raise PrecisionError(f"coefficient at {idx} beyond precision {x.prec}")
        return x.coeffs.get(key, self.coeff.zero)

    def residue(self, x: Series):
        """Coefficient of t_1^-1 ... t_n^-1."""
        return self.coefficient(x, (-1,) * self.n)

    # -- change of coefficients
    def lift(self, x: Series, target: "SeriesRing") -> Series:
        """Coefficientwise Teichmuller lift into a series ring over Z_q / p^N."""
        teich = target.coeff.teichmuller
        return Series(target, {k: teich(c) for k, c in x.coeffs.items()}, x.prec)

    def reduce(self, x: Series, target: "SeriesRing") -> Series:
        red = self.coeff.reduce
        return target._from_keys({k: red(c) for k, c in x.coeffs.items()}, x.prec)

    def map_coeffs(self, x: Series, fn, target=None) -> Series:
        target = target or self
        return target._from_keys({k: fn(c) for k, c in x.coeffs.items()}, x.prec)

    # -- display
    def format(self, x: Series) -> str:
        fmt = self.coeff.format
        parts = []
        for key in sorted(x.coeffs, key=lambda k: sig_key(self.unpack(k))):
            idx = self.unpack(key)
            mono = "*".join(f"t{j + 1}" if e == 1 else f"t{j + 1}^{e}" for j, e in enumerate(idx) if e)
            c = fmt(x.coeffs[key])
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif " " in c:
                parts.append(f"({c})*{mono}")
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts) if parts else "0"
        if x.prec != INF:
            s += f" + O(deg {x.prec})"
        return s

    def __repr__(self):
        return f"SeriesRing({self.coeff!r}, {self.window!r})"


def agree(x: Series, y: Series) -> bool:
    """Equality of two series up to their common precision."""
    prec = min(x.prec, y.prec)
    deg = x.ring.key_degree
    kx = {k: c for k, c in x.coeffs.items() if deg(k) < prec}
    ky = {k: c for k, c in y.coeffs.items() if deg(k) < prec}
    return kx == ky


# -- principal units -----------------------------------------------------------

@dataclass
class GeneratorExponents:
    """Exponents a_{theta,i} on the generators 1 + theta t^i of V_F.

    Keys are (basis_index, i) with theta = ``cfg.basis[basis_index]`` and p not
    dividing gcd(i).  Exponents are kept as plain integers; ``mod`` reduces
    them for use at level r.
    """

    p: int
    entries: dict = field(default_factory=dict)

    def l_of(self, idx) -> int:
        return first_unit_slot(idx, self.p)

    def mod(self, modulus: int) -> "GeneratorExponents":
        return GeneratorExponents(self.p, {k: v % modulus for k, v in self.entries.items() if v % modulus})

    def sorted_items(self):
        return sorted(self.entries.items(), key=lambda kv: (sig_key(kv[0][1]), kv[0][0]))

    def __eq__(self, other):
        if not isinstance(other, GeneratorExponents):
            return NotImplemented
        a = {k: v for k, v in self.entries.items() if v}
        b = {k: v for k, v in other.entries.items() if v}
        return a == b


def generator(ring: SeriesRing, b: int, idx) -> Series:
    """1 + theta_b t^idx."""
    cfg = ring.coeff
    return ring.add(ring.one, ring.monomial(idx, cfg.basis[b]))


def unit_peel(u: Series, r: int = 1, cap=None) -> GeneratorExponents:
    """Write a principal unit as a product of powers of 1 + theta t^i.

    Exponents are exact integers: the product of the returned generator
    powers reproduces ``u`` below degree ``cap``.  The level ``r`` is
    accepted for interface symmetry; reduce with ``.mod(p**r)``.
    """
    ring = u.ring
    cfg = ring.coeff
    if not isinstance(cfg, FieldConfig):
        raise TypeError("unit_peel works over F_q")
    p = cfg.p
    cap = min(ring.cap if cap is None else cap, u.prec)
    table = defaultdict(int)
    one_key = ring.zero_key
    while True:
        z = ring.sub(u, ring.one)
        z = Series(ring, {k: c for k, c in z.coeffs.items() if ring.key_degree(k) < cap}, cap)
        if not z.coeffs:
            break
        idx, c = ring.leading(z)
        if not sig_positive(idx):
            raise ValueError("unit_peel needs a principal unit")
        k = p_part(idx, p)
        base = tuple(e // p ** k for e in idx)
        eta = cfg.root_p(c, k)
        for b, e in enumerate(cfg.basis_coords(eta)):
            if not e:
                continue
            table[(b, base)] += e * p ** k
            # (1 + theta_b t^base)^(p^k) = 1 + theta_b^(p^k) t^idx in characteristic p
            gen_pk = ring.add(ring.one, ring.monomial(idx, cfg.frob(cfg.basis[b], k)))
            u = ring.mul(u, ring.pow(ring.inv(gen_pk, cap), e, cap), cap)
        assert one_key in u.coeffs
    return GeneratorExponents(p, dict(table))


def rebuild_unit(ring: SeriesRing, table: GeneratorExponents, cap=None) -> Series:
    """Product of (1 + theta_b t^i)^a over the table.

    With nonnegative exponents and no cap the product is a polynomial and is
    returned exactly."""
    if cap is None and all(a >= 0 for a in table.entries.values()):
        cap = INF
    out = ring.one
    for (b, idx), a in table.sorted_items():
        out = ring.mul(out, ring.pow(generator(ring, b, idx), a, cap), cap)
    return out
