"""The Artin-Schreier-Witt pairing K_n(F)/p^r x W_r(F)/(F-1) -> Z/p^r.

Route used by :func:`PairingContext.pair`: lift entries and the Witt vector
to Z_q-coefficients (Teichmuller, coefficientwise), take the ghost components
of the Witt vector, multiply each by the Jacobian determinant of the
logarithmic derivatives of the entries, read off the residues, turn the
residues back into a Witt vector, reduce, and take the trace.

The determinant uses the variable order t_n, ..., t_1 for its columns so
that ({t_n, ..., t_1}, a] = Tr(a) for a constant a; with this orientation
(alpha, a]_1 = Tr(a) * val(alpha).

For r = 1 there is an independent route computed entirely in characteristic
p (:meth:`PairingContext.pair_r1_direct`).
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .coeff import GaloisRing
from .linalg import SingularMatrixError, inverse_mod, rank_mod_p, vecmat
from .series import GeneratorExponents, INF, PrecisionError, Series, SeriesRing
from .witt import WittVec, ghost, teichmuller_vec, unghost, witt_trace, wr_fp_to_zmod


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def log_jacobian(R: SeriesRing, entries, prec) -> Series:
    """det[ d log x_i / d t_(n+1-j) ] known below degree ``prec``."""
    n = R.n
    if len(entries) != n:
        raise ValueError(f"need {n} entries, got {len(entries)}")
    margin = sum(R.weights)
    E = prec + margin
    rows = []
    for x in entries:
        ds = [R.deriv(x, j) for j in range(n, 0, -1)]
        vals = [d.degree_valuation() for d in ds if d.coeffs]
        if not vals:
            rows.append([R.zero] * n)
            continue
        xinv = R.inv(x, cap=E - min(vals))
        rows.append([R.mul(d, xinv, E) if d.coeffs else R.zero for d in ds])
    out = R.zero
    for perm in itertools.permutations(range(n)):
        factors = [rows[i][perm[i]] for i in range(n)]
        if any(not f.coeffs and f.prec == INF for f in factors):
            continue
        term = factors[0]
        for f in factors[1:]:
            term = R.mul(term, f, prec)
        term = R.truncate(term, prec)
        out = R.add(out, term) if _perm_sign(perm) > 0 else R.sub(out, term)
    return R.truncate(out, prec)


def _residue_product(R: SeriesRing, a: Series, D: Series, T: int):
    """Coefficient of t^(-1,...,-1) in a * D, reading only the needed terms."""
    if not a.coeffs:
        return R.coeff.zero
    va = a.degree_valuation()
    if D.prec <= T - va:
        raise PrecisionError("log-Jacobian not known deep enough for this residue")
    if D.coeffs and a.prec <= T - D.degree_valuation():
        raise PrecisionError("Witt component not known deep enough for this residue")
    tk = R.residue_key
    mul, add = R.coeff.mul, R.coeff.add
    acc = R.coeff.zero
    dc = D.coeffs
    for k, c in a.coeffs.items():
        d = dc.get(tk - k)
        if d is not None:
            acc = add(acc, mul(c, d))
    return acc


class PairingContext:
    """Pairing at level r for a fixed coefficient field and window, with the
    probe family used for observational equality and decomposition.

    Probes: [theta_b t^(-i)] for every VK generator key (b, i), followed by
    one constant probe [c] with Tr(c) = 1.
    """

    def __init__(self, ring: SeriesRing, r: int, guard=None):
        if r < 1:
            raise ValueError("level r must be >= 1")
        self.ring = ring
        self.cfg = ring.coeff
        self.p = ring.p
        self.n = ring.n
        self.r = r
        self.guard = r if guard is None else guard
        self.N = r + self.guard
        self.modulus = self.p ** r
        self.zq = GaloisRing(self.cfg, self.N)
        self.lring = SeriesRing(self.zq, ring.window)
        self.T = ring.window.degree((-1,) * self.n)
        from .ksym import vk_generators
        self.vk_keys = vk_generators(ring)
        self.const_probe = next(c for c in self.cfg.elements() if self.cfg.trace(c) == 1)
        self._D = {}
        self._gram = None
        self._gram_inv = None
        self._probe_ghosts = [self._monomial_ghost(b, tuple(-e for e in idx)) for b, idx in self.vk_keys]
        self._probe_ghosts.append(self._monomial_ghost(None, (0,) * self.n))

    @property
    def num_probes(self) -> int:
        return len(self._probe_ghosts)

    def probe_vectors(self) -> list:
        """The probes as Witt vectors over the base series ring."""
        ring = self.ring
        out = [teichmuller_vec(ring, ring.monomial(tuple(-e for e in idx), self.cfg.basis[b]), self.r)
               for b, idx in self.vk_keys]
        out.append(teichmuller_vec(ring, ring.const(self.const_probe), self.r))
        return out

    def _monomial_ghost(self, b, idx):
        c = self.const_probe if b is None else self.cfg.basis[b]
        zq, L = self.zq, self.lring
        tc = zq.teichmuller(c)
        out = []
        for m in range(self.r):
            e = self.p ** m
            out.append(L.monomial(tuple(e * i for i in idx), zq.pow(tc, e)))
        return out

    # -- log-Jacobians, cached per symbol term
    def _jacobian(self, entries, prec, lifted=True):
        key = (lifted, entries)
        hit = self._D.get(key)
        if hit is not None and hit.prec >= prec:
            return hit
        if lifted:
            L = self.lring
            xs = [self.ring.lift(x, L) for x in entries]
            D = log_jacobian(L, xs, prec)
        else:
            D = log_jacobian(self.ring, entries, prec)
        self._D[key] = D
        return D

    def _ghost_of(self, w: WittVec):
        if w.r != self.r:
            raise ValueError(f"Witt vector has length {w.r}, context level is {self.r}")
        lifted = WittVec(self.lring, [self.ring.lift(self.ring.coerce(a), self.lring) for a in w.comps])
        return ghost(lifted, cap=1)

    def _need(self, ghosts) -> int:
        vals = [g.degree_valuation() for g in ghosts if g.coeffs]
        return self.T - min(vals) + 1 if vals else self.T + 1

    def _pair_ghost(self, alpha, ghosts) -> int:
        zq, L = self.zq, self.lring
        need = self._need(ghosts)
        total = 0
        for entries, coef in alpha.terms.items():
            D = self._jacobian(entries, need)
            rho = [_residue_product(L, g, D, self.T) for g in ghosts]
            w = unghost(zq, rho)
            red = WittVec(self.cfg, [zq.reduce(a) for a in w.comps])
            total += coef * wr_fp_to_zmod(witt_trace(red))
        return total % self.modulus

    def _check_symbol(self, alpha):
        if alpha.degree != self.n or alpha.level != self.n:
            raise ValueError(f"the pairing needs a symbol of degree {self.n}")

    # -- public
    def pair(self, alpha, w: WittVec) -> int:
        self._check_symbol(alpha)
        return self._pair_ghost(alpha, self._ghost_of(w))

    def pair_limit(self, alpha, w: WittVec) -> Fraction:
        return Fraction(self.pair(alpha, w), self.modulus) % 1

    def pair_r1_direct(self, alpha, a) -> int:
        """Tr Res(a * D) computed over F_q, no lifting."""
        self._check_symbol(alpha)
        ring, cfg = self.ring, self.cfg
        a = ring.coerce(a)
        need = self._need([a])
        total = 0
        for entries, coef in alpha.terms.items():
            D = self._jacobian(entries, need, lifted=False)
            total += coef * cfg.trace(_residue_product(ring, a, D, self.T))
        return total % self.p

    def observe(self, alpha) -> list:
        """Pairings of alpha with every probe."""
        self._check_symbol(alpha)
        if alpha.terms:
            need = max(self._need(g) for g in self._probe_ghosts)
            for entries in alpha.terms:
                self._jacobian(entries, need)
        return [self._pair_ghost(alpha, g) for g in self._probe_ghosts]

    def gram(self) -> list:
        """Rows: VK generators; columns: the matching non-constant probes."""
        if self._gram is None:
            from .ksym import vk_generator
            k = len(self.vk_keys)
            self._gram = [self.observe(vk_generator(self.ring, b, idx))[:k] for b, idx in self.vk_keys]
        return self._gram

    def gram_inverse(self) -> list:
        if self._gram_inv is None:
            try:
                self._gram_inv = inverse_mod(self.gram(), self.p, self.r)
            except SingularMatrixError as exc:
                w = self.ring.window
                raise SingularMatrixError(
                    f"probe matrix singular for window lo={w.lo} hi={w.hi}: {exc}") from None
        return self._gram_inv

    def gram_rank_mod_p(self) -> int:
        return rank_mod_p(self.gram(), self.p)

    def solve_vk(self, alpha) -> GeneratorExponents:
        k = len(self.vk_keys)
        b = self.observe(alpha)[:k]
        a = vecmat(b, self.gram_inverse(), self.modulus)
        return GeneratorExponents(self.p, {key: v for key, v in zip(self.vk_keys, a) if v})


_CONTEXTS = {}


def get_context(ring: SeriesRing, r: int, guard=None) -> PairingContext:
    key = (ring, r, guard)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = PairingContext(ring, r, guard)
    return ctx


def asw_pair(alpha, w: WittVec, r=None) -> int:
    r = w.r if r is None else r
    return get_context(alpha.ring, r).pair(alpha, w)


def asw_pair_r1_direct(alpha, a) -> int:
    return get_context(alpha.ring, 1).pair_r1_direct(alpha, a)


def pair_limit(alpha, w: WittVec) -> Fraction:
    return get_context(alpha.ring, w.r).pair_limit(alpha, w)
