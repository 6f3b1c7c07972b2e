"""Coefficient rings: the residue field F_q and its unramified lift Z_q / p^N.

Elements of F_q are plain ints: the coordinate vector (c_0, ..., c_{f-1})
with respect to the power basis of the modulus, packed as sum c_i p^i.
So 0 and 1 encode the field's zero and one, and the residue generator
``g`` encodes as ``p`` when f > 1.

Elements of Z_q / p^N are ints mod p^N when f == 1 and length-f tuples
otherwise.  All rings expose the small protocol used by the series and
Witt-vector code: ``zero``, ``one``, ``add``, ``sub``, ``neg``, ``mul``,
``from_int``, ``pow`` and ``char``.
"""
from __future__ import annotations

import itertools
from functools import cached_property


class IntegralityError(ArithmeticError):
    """A division by a power of p was not exact at the working precision."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


# -- polynomials over Z/m, coefficient lists low -> high ---------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, m):
    """Remainder of a by the monic b over Z/m."""
    a = [c % m for c in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for j in range(db + 1):
                a[k - db + j] = (a[k - db + j] - c * b[j]) % m
    return _poly_trim(a[:db]) if len(a) > db else _poly_trim(a)


def _monic_polys(p, d):
    for low in itertools.product(range(p), repeat=d):
        yield list(low) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Exhaustive factor search; fine for the desk-scale degrees used here."""
    poly = [c % p for c in poly]
    f = len(poly) - 1
    if f < 1 or poly[-1] != 1:
        return False
    for d in range(1, f // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _poly_mod(poly, cand, p):
                return False
    return True


def default_modulus(p: int, f: int) -> tuple:
    """First monic irreducible polynomial (lexicographic on coefficients) whose
    root generates the multiplicative group."""
    for low in itertools.product(range(p), repeat=f):
        poly = list(low) + [1]
        if not is_irreducible(poly, p):
            continue
        if FieldConfig(p, f, tuple(poly), _check=False).is_primitive(FieldConfig._gen_code(p, f, tuple(poly))):
            return tuple(poly)
    raise ValueError(f"no primitive polynomial of degree {f} over F_{p}")


class FieldConfig:
    """The finite field F_q, q = p^f, as a table-driven ring on int codes."""

    char_zero = False

    def __init__(self, p: int, f: int = 1, modulus=None, _check=True):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if f < 1:
            raise ValueError("f must be positive")
        self.p = p
        self.f = f
        self.q = p ** f
        if modulus is None:
            modulus = default_modulus(p, f)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {f}")
        if _check and not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self.char = p
        self.zero = 0
        self.one = 1
        q = self.q
        self._add = [[self._enc([(x + y) % p for x, y in zip(self._dec(a), self._dec(b))])
                      for b in range(q)] for a in range(q)]
        self._neg = [self._enc([(-x) % p for x in self._dec(a)]) for a in range(q)]
        if _check:
            self._build_mul()

    # -- encoding
    def _dec(self, a: int) -> list:
        out = []
        for _ in range(self.f):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def _enc(self, coords) -> int:
        a = 0
        for c in reversed(list(coords)):
            a = a * self.p + c % self.p
        return a

    @staticmethod
    def _gen_code(p, f, modulus):
        return p if f > 1 else (-modulus[0]) % p

    def coords(self, a: int) -> tuple:
        return tuple(self._dec(a))

    def from_coords(self, coords) -> int:
        if len(coords) != self.f:
            raise ValueError("wrong number of coordinates")
        return self._enc(coords)

    def _mul_slow(self, a, b):
        da, db = self._dec(a), self._dec(b)
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._enc(_poly_mod(prod, list(self.modulus), self.p) + [0] * self.f)

    def is_primitive(self, a: int) -> bool:
        if a == 0:
            return False
        x, k = a, 1
        while x != 1:
            x = self._mul_slow(x, a)
            k += 1
        return k == self.q - 1

    def _build_mul(self):
        q = self.q
        self._mul = [[self._mul_slow(a, b) if a <= b else 0 for b in range(q)] for a in range(q)]
        for a in range(q):
            for b in range(a):
                self._mul[a][b] = self._mul[b][a]
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break
        if self.is_primitive(self.g):
            self.generator = self.g
        else:
            self.generator = next(a for a in range(1, q) if self.is_primitive(a))
        self._exp = [1] * (q - 1)
        for k in range(1, q - 1):
            self._exp[k] = self._mul[self._exp[k - 1]][self.generator]
        self._log = {x: k for k, x in enumerate(self._exp)}

    # -- ring protocol
    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def from_int(self, k: int) -> int:
        return k % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._inv[a]

    def div(self, a, b):
        return self._mul[a][self.inv(b)]

    def pow(self, a, e: int):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a, k: int = 1):
        """a -> a^(p^k)."""
        return self.pow(a, self.p ** (k % self.f)) if a else 0

    def root_p(self, a, k: int = 1):
        """The unique p^k-th root in F_q."""
        return self.frob(a, -k % self.f) if self.f > 1 else a

    def trace(self, a) -> int:
        """Absolute trace to F_p, returned as an int in [0, p)."""
        s = 0
        for k in range(self.f):
            s = self._add[s][self.frob(a, k)]
        assert s < self.p
        return s

    def dlog(self, a) -> int:
        """Discrete log with respect to ``self.generator``."""
        if a == 0:
            raise ZeroDivisionError("log of 0")
        return self._log[a]

    def gen_power(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    @property
    def g(self) -> int:
        """The residue generator: class of X modulo the modulus."""
        return self._gen_code(self.p, self.f, self.modulus)

    def elements(self):
        return range(self.q)

    @cached_property
    def basis(self) -> tuple:
        """F_p-basis of F_q: the powers 1, g, ..., g^(f-1)."""
        return tuple(self.p ** i for i in range(self.f)) if self.f > 1 else (1,)

    def basis_coords(self, a) -> tuple:
        return self.coords(a)

    @cached_property
    def as_table(self):
        """Canonical representatives of F_q / (x^p - x) and witnesses.

        Maps c to (rep, s) with c - rep = s^p - s and rep the least code in
        its coset."""
        image = sorted({self.sub(self.frob(s), s) for s in self.elements()})
        table = {}
        for c in self.elements():
            for rep in self.elements():
                d = self.sub(c, rep)
                if d in image:
                    break
            for s in self.elements():
                if self.sub(self.frob(s), s) == d:
                    table[c] = (rep, s)
                    break
        return table

    def format(self, a) -> str:
        if self.f == 1:
            return str(a)
        parts = []
        for i, c in reversed(list(enumerate(self._dec(a)))):
            if not c:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        return f"FieldConfig(p={self.p}, f={self.f}, modulus={self.modulus})"


class IntegerRing:
    """Z itself; used as the exact side of the ghost oracle."""

    char_zero = True
    char = 0
    zero = 0
    one = 1

    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, k):
        return k

    def pow(self, a, e):
        return a ** e

    def div_p(self, a, k: int):
        d, r = divmod(a, self.p ** k)
        if r:
            raise IntegralityError(f"{a} is not divisible by {self.p}^{k}")
        return d


class GaloisRing:
    """Z_q / p^N with the coefficientwise lift of the residue modulus."""

    char_zero = True

    def __init__(self, cfg: FieldConfig, N: int):
        if N < 1:
            raise ValueError("precision N must be >= 1")
        self.cfg = cfg
        self.p = cfg.p
        self.f = cfg.f
        self.N = N
        self.M = cfg.p ** N
        self.char = self.M
        self.modulus = tuple(cfg.modulus)
        if self.f == 1:
            self.zero, self.one = 0, 1
        else:
            self.zero = (0,) * self.f
            self.one = (1,) + (0,) * (self.f - 1)

    # -- ring protocol
    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.M
        return tuple((x + y) % self.M for x, y in zip(a, b))

    def sub(self, a, b):
        if self.f == 1:
            return (a - b) % self.M
        return tuple((x - y) % self.M for x, y in zip(a, b))

    def neg(self, a):
        if self.f == 1:
            return -a % self.M
        return tuple(-x % self.M for x in a)

    def mul(self, a, b):
        M = self.M
        if self.f == 1:
            return a * b % M
        f = self.f
        if f == 2:
            a0, a1 = a
            b0, b1 = b
            m0, m1 = self.modulus[0], self.modulus[1]
            hi = a1 * b1
            return ((a0 * b0 - hi * m0) % M, (a0 * b1 + a1 * b0 - hi * m1) % M)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        mod = self.modulus
        for k in range(2 * f - 2, f - 1, -1):
            c = prod[k]
            if c:
                for j in range(f):
                    prod[k - f + j] -= c * mod[j]
        return tuple(c % M for c in prod[:f])

    def from_int(self, k: int):
        if self.f == 1:
            return k % self.M
        return (k % self.M,) + (0,) * (self.f - 1)

    def scale(self, k: int, a):
        if self.f == 1:
            return k * a % self.M
        return tuple(k * x % self.M for x in a)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, a) -> bool:
        return self.reduce(a) != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError("non-unit in Z_q / p^N")
        order = (self.cfg.q - 1) * self.cfg.q ** (self.N - 1)
        return self.pow(a, order - 1)

    def is_zero(self, a) -> bool:
        return a == self.zero

    def div_p(self, a, k: int):
        """Exact division by p^k; the result is known modulo p^(N-k)."""
        pk = self.p ** k
        if self.f == 1:
            if a % pk:
                raise IntegralityError(f"{a} not divisible by {self.p}^{k} mod {self.M}")
            return a // pk
        if any(x % pk for x in a):
            raise IntegralityError(f"{a} not divisible by {self.p}^{k} mod {self.M}")
        return tuple(x // pk for x in a)

    # -- reduction and lifts
    def reduce(self, a) -> int:
        """Reduction modulo p, as an F_q code."""
        if self.f == 1:
            return a % self.p
        return self.cfg.from_coords([x % self.p for x in a])

    def lift(self, a: int):
        """Naive coordinate lift of an F_q element."""
        if self.f == 1:
            return a
        return tuple(self.cfg.coords(a))

    def elem(self, coords):
        if self.f == 1:
            (c,) = coords
            return c % self.M
        return tuple(c % self.M for c in coords)

    def coords(self, a) -> tuple:
        return (a,) if self.f == 1 else tuple(a)

    @cached_property
    def _teich_table(self):
        e = self.cfg.q ** self.N
        return [self.pow(self.lift(a), e) if a else self.zero for a in self.cfg.elements()]

    def teichmuller(self, a: int):
        return self._teich_table[a]

    @cached_property
    def _frob_root(self):
        """Root of the lifted modulus congruent to g^p, by Newton iteration."""
        cfg = self.cfg
        if self.f == 1:
            return None
        mod = self.modulus

        def evaluate(coeffs, y):
            acc = self.zero
            for c in reversed(coeffs):
                acc = self.add(self.mul(acc, y), self.from_int(c))
            return acc

        deriv = [k * mod[k] for k in range(1, len(mod))]
        y = self.lift(cfg.frob(cfg.g))
        for _ in range(self.N + 1):
            y = self.sub(y, self.mul(evaluate(mod, y), self.inv(evaluate(deriv, y))))
        assert evaluate(mod, y) == self.zero, "Hensel lift of Frobenius failed"
        assert self.reduce(y) == cfg.frob(cfg.g)
        powers = [self.one]
        for _ in range(self.f - 1):
            powers.append(self.mul(powers[-1], y))
        return powers

    def frob(self, a, k: int = 1):
        if self.f == 1:
            return a
        for _ in range(k % self.f):
            powers = self._frob_root
            acc = self.zero
            for c, yp in zip(a, powers):
                if c:
                    acc = self.add(acc, self.scale(c, yp))
            a = acc
        return a

    def trace(self, a) -> int:
        """Sum of the f Frobenius conjugates, an element of Z/p^N."""
        s = self.zero
        for k in range(self.f):
            s = self.add(s, self.frob(a, k))
        c = self.coords(s)
        assert all(x == 0 for x in c[1:])
        return c[0]

    def format(self, a) -> str:
        return str(self.coords(a) if self.f > 1 else a)

    def __repr__(self):
        return f"GaloisRing({self.cfg!r}, N={self.N})"
