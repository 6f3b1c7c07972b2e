"""Cyclic extensions, norms on elements and symbols, the Witt-side dual
sequence for unramified p-extensions, and the partial reciprocity maps.

Supported extension shapes:

* :class:`UnramifiedExtension` -- residue field F_q -> F_(q^l), parameters shared.
* :class:`TameExtension` -- s^l = t_i with l | q - 1, other parameters shared.
* :class:`ArtinSchreierExtension` -- y^p - y = a over a one-dimensional field.

Symbols over the top field are normed through the projection formula
N{x, b_2, ..., b_m} = {N x, b_2, ..., b_m} for b_k from the base.  Terms with
several genuinely top-field entries are first rewritten through the
canonical decomposition over the top field (observational, at level r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coeff import FieldConfig
from .ksym import SymbolSum, decompose, rebuild, tame_components, val_map
from .linalg import matmul, rank_mod_p
from .pairing import get_context
from .series import INF, Series, SeriesRing
from .witt import WittVec, as_normalize, witt_trace, wr_fp_to_zmod


class ExtensionError(ValueError):
    pass


class Extension:
    """Common interface: ``base`` and ``top`` series rings, ``degree``."""

    kind = "?"
    base: SeriesRing
    top: SeriesRing
    degree: int

    def embed(self, x: Series) -> Series:
        raise NotImplementedError

    def pullback(self, y: Series) -> Series:
        raise NotImplementedError

    def in_base(self, y: Series) -> bool:
        try:
            self.pullback(y)
        except ExtensionError:
            return False
        return True

    def conjugates(self, y: Series) -> list:
        raise NotImplementedError

    def norm_field(self, y: Series) -> Series:
        top = self.top
        y = top.coerce(y)
        out = None
        for c in self.conjugates(y):
            # no artificial cap: the precision follows the inputs
            out = c if out is None else top.mul(out, c, INF)
        return self.pullback(out)

    def trace_field(self, y: Series) -> Series:
        top = self.top
        out = top.zero
        for c in self.conjugates(top.coerce(y)):
            out = top.add(out, c)
        return self.pullback(out)

    def embed_symbol(self, beta: SymbolSum) -> SymbolSum:
        terms = {tuple(self.embed(x) for x in e): c for e, c in beta.terms.items()}
        return SymbolSum(self.top, beta.degree, terms)

    # -- symbols
    def _norm_term(self, entries, coef, out):
        slots = [k for k, x in enumerate(entries) if not self.in_base(x)]
        if len(slots) > 1:
            return False
        if not slots:
            key = tuple(self.pullback(x) for x in entries)
            coef *= self.degree
        else:
            k = slots[0]
            key = tuple(self.norm_field(x) if j == k else self.pullback(x) for j, x in enumerate(entries))
        if any(x.is_zero() for x in key):
            raise ExtensionError("norm of a nonzero element vanished; enlarge the window")
        out[key] = out.get(key, 0) + coef
        return True

    def _single_slot(self, alpha: SymbolSum, r: int) -> SymbolSum:
        """Rewrite alpha over the top field with at most one top-field slot per term."""
        ctx = get_context(self.top, r)
        return rebuild(decompose(alpha, r, ctx), self.top)

    def norm_ksym(self, alpha: SymbolSum, r: int = 1) -> SymbolSum:
        if alpha.ring is not self.top:
            raise ExtensionError("symbol does not live over the top field")
        out = {}
        rest = {}
        for entries, coef in alpha.terms.items():
            if not self._norm_term(entries, coef, out):
                rest[entries] = coef
        if rest:
            if alpha.degree != self.top.n:
                raise ExtensionError("multi-slot terms are only rewritten in degree n")
            rewritten = self._single_slot(SymbolSum(self.top, alpha.degree, rest), r)
            for entries, coef in rewritten.terms.items():
                if not self._norm_term(entries, coef, out):
                    raise ExtensionError("term not reducible to a single top-field slot")
        return SymbolSum(self.base, alpha.degree, out)


class UnramifiedExtension(Extension):
    kind = "unram"

    def __init__(self, base: SeriesRing, ell: int):
        if ell < 2:
            raise ExtensionError("degree must be >= 2")
        cfg = base.coeff
        self.base = base
        self.degree = ell
        self.cfg = cfg
        self.top_cfg = FieldConfig(cfg.p, cfg.f * ell)
        self.top = SeriesRing(self.top_cfg, base.window)
        L = self.top_cfg
        rho = next(y for y in L.elements() if self._eval_modulus(y) == L.zero)
        powers = [L.one]
        for _ in range(cfg.f - 1):
            powers.append(L.mul(powers[-1], rho))
        self.emb = []
        for c in cfg.elements():
            acc = L.zero
            for a, pw in zip(cfg.coords(c), powers):
                acc = L.add(acc, L.mul(L.from_int(a), pw))
            self.emb.append(acc)
        self.emb_inv = {v: k for k, v in enumerate(self.emb)}
        assert len(self.emb_inv) == cfg.q

    def _eval_modulus(self, y):
        L = self.top_cfg
        acc = L.zero
        for c in reversed(self.cfg.modulus):
            acc = L.add(L.mul(acc, y), L.from_int(c))
        return acc

    def embed(self, x: Series) -> Series:
        return self.base.map_coeffs(self.base.coerce(x), self.emb.__getitem__, self.top)

    def pullback(self, y: Series) -> Series:
        try:
            return self.top.map_coeffs(y, self.emb_inv.__getitem__, self.base)
        except KeyError:
            raise ExtensionError("element does not descend to the base field") from None

    def sigma(self, y: Series, k: int = 1) -> Series:
        """Generator of the Galois group: q-power on coefficients."""
        L, f = self.top_cfg, self.cfg.f
        return self.top.map_coeffs(y, lambda c: L.frob(c, f * k))

    def conjugates(self, y: Series) -> list:
        return [self.sigma(y, k) for k in range(self.degree)]


class TameExtension(Extension):
    kind = "tame"

    def __init__(self, base: SeriesRing, var: int, ell: int):
        cfg = base.coeff
        if not 1 <= var <= base.n:
            raise ExtensionError(f"variable index {var} out of range")
        if ell < 2 or (cfg.q - 1) % ell:
            raise ExtensionError(f"tame degree {ell} must divide q - 1 = {cfg.q - 1}")
        self.base = base
        self.var = var
        self.degree = ell
        self.top = SeriesRing(cfg, base.window.scaled(var, ell))
        self.zeta = cfg.gen_power((cfg.q - 1) // ell)

    def embed(self, x: Series) -> Series:
        x = self.base.coerce(x)
        ell, i = self.degree, self.var - 1
        terms = {tuple(e * ell if j == i else e for j, e in enumerate(idx)): c for idx, c in x.terms.items()}
        return self.top.make(terms, x.prec * ell)

    def pullback(self, y: Series) -> Series:
        ell, i = self.degree, self.var - 1
        terms = {}
        for idx, c in y.terms.items():
            if idx[i] % ell:
                raise ExtensionError("element does not descend to the base field")
            terms[tuple(e // ell if j == i else e for j, e in enumerate(idx))] = c
        prec = y.prec if y.prec == INF else math.ceil(y.prec / ell)
        return self.base.make(terms, prec)

    def twist(self, y: Series, k: int) -> Series:
        """s -> zeta^k s."""
        cfg, i = self.top.coeff, self.var - 1
        z = cfg.pow(self.zeta, k)
        terms = {idx: cfg.mul(c, cfg.pow(z, idx[i])) for idx, c in y.terms.items()}
        return self.top.make(terms, y.prec)

    def conjugates(self, y: Series) -> list:
        return [self.twist(y, k) for k in range(self.degree)]

    def _single_slot(self, alpha, r):
        # {u, .., s, ..} with u a principal unit is l^-1 {u, .., t_i, ..} modulo p^r
        out = super()._single_slot(alpha, r)
        s = self.top.var(self.var)
        ti = self.embed(self.base.var(self.var))
        inv = pow(self.degree, -1, self.top.p ** r)
        terms = {}
        for entries, coef in out.terms.items():
            lslots = [k for k, x in enumerate(entries) if not self.in_base(x)]
            if len(lslots) > 1 and any(entries[k] == s for k in lslots):
                entries = tuple(ti if x == s else x for x in entries)
                coef = coef * inv % self.top.p ** r
            terms[entries] = terms.get(entries, 0) + coef
        return SymbolSum(self.top, alpha.degree, terms)


class ArtinSchreierExtension(Extension):
    """L = F(y), y^p - y = a, for a one-dimensional F.  Elements of L are
    tuples (x_0, ..., x_(p-1)) of F-series meaning sum x_k y^k."""

    kind = "as"

    def __init__(self, base: SeriesRing, a):
        if base.n != 1:
            raise ExtensionError("Artin-Schreier extensions are supported in dimension 1 only")
        a = base.coerce(a)
        normal, _ = as_normalize(a)
        if not normal.coeffs:
            raise ExtensionError("a is in the image of x^p - x; the extension is trivial")
        self.base = base
        self.top = None
        self.a = a
        self.degree = base.p

    def element(self, *comps) -> tuple:
        comps = [self.base.coerce(c) for c in comps]
        return tuple(comps) + (self.base.zero,) * (self.degree - len(comps))

    def embed(self, x):
        return self.element(x)

    def pullback(self, y):
        if any(not c.is_zero() for c in y[1:]):
            raise ExtensionError("element does not descend to the base field")
        return y[0]

    def _mul_matrix(self, x):
        """Matrix of multiplication by x on the basis 1, y, ..., y^(p-1)."""
        R, p = self.base, self.degree
        cols = []
        cur = list(x)
        for _ in range(p):
            cols.append(cur)
            # multiply by y: y^p = y + a
            top = cur[-1]
            nxt = [R.mul(top, self.a, INF)] + cur[:-1]
            nxt[1] = R.add(nxt[1], top)
            cur = nxt
        return [[cols[j][i] for j in range(p)] for i in range(p)]

    def norm_field(self, x) -> Series:
        from .pairing import _perm_sign
        import itertools

        R, p = self.base, self.degree
        m = self._mul_matrix(x)
        out = R.zero
        for perm in itertools.permutations(range(p)):
            term = R.one
            for i in range(p):
                term = R.mul(term, m[i][perm[i]], INF)
            out = R.add(out, term) if _perm_sign(perm) > 0 else R.sub(out, term)
        return out

    def norm_ksym(self, alpha: SymbolSum, r: int = 1) -> SymbolSum:
        raise ExtensionError("symbols over an Artin-Schreier extension are given by their norms; "
                             "use norm_field on degree-1 entries")


def norm_tower(alpha: SymbolSum, tower, r: int = 1) -> SymbolSum:
    """Norm down a tower listed bottom-up (tower[k].base is tower[k-1].top)."""
    for ext in reversed(list(tower)):
        alpha = ext.norm_ksym(alpha, r)
    return alpha


# -- dual sequence on reduced Artin-Schreier classes --------------------------------

def _class_basis(ring: SeriesRing):
    """F_p-basis of the reduced class space at level 1 within the window."""
    cfg = ring.coeff
    out = []
    for idx in ring.window.positive_indices(ring.p):
        neg = tuple(-e for e in idx)
        for b in cfg.basis:
            out.append(ring.monomial(neg, b))
    c0 = next(c for c in cfg.elements() if cfg.trace(c) == 1)
    out.append(ring.const(c0))
    return out


def _class_coords(ring: SeriesRing, x: Series) -> list:
    cfg = ring.coeff
    normal, _ = as_normalize(x)
    seen = set()
    out = []
    for idx in ring.window.positive_indices(ring.p):
        key = ring.pack(tuple(-e for e in idx))
        seen.add(key)
        out.extend(cfg.basis_coords(normal.coeffs.get(key, 0)))
    out.append(cfg.trace(normal.coeffs.get(0, 0)))
    stray = [k for k in normal.coeffs if k and k not in seen]
    if stray:
        raise ExtensionError("class left the window; enlarge the window")
    return out


def _map_matrix(src: SeriesRing, dst: SeriesRing, fn) -> list:
    """Rows: images of the source basis vectors, in target coordinates."""
    return [_class_coords(dst, fn(v)) for v in _class_basis(src)]


@dataclass
class DualSequenceReport:
    dims: dict
    ranks: dict
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list:
        out = [f"dim_{k}={v}" for k, v in self.dims.items()]
        out += [f"rank_{k}={v}" for k, v in self.ranks.items()]
        out += [f"{k}={'pass' if v else 'FAIL'}" for k, v in self.checks.items()]
        return out


def witt_dual_sequence_check(ext: UnramifiedExtension) -> DualSequenceReport:
    """W(F) -> W(L) -(1-sigma)-> W(L) -Tr-> W(F) -> 0 on level-1 reduced classes."""
    if not isinstance(ext, UnramifiedExtension) or ext.degree != ext.base.p:
        raise ExtensionError("the dual sequence check needs an unramified extension of degree p")
    F, L = ext.base, ext.top
    p = F.p
    inc = _map_matrix(F, L, ext.embed)
    om = _map_matrix(L, L, lambda v: L.sub(v, ext.sigma(v)))
    tr = _map_matrix(L, F, ext.trace_field)
    dim_f, dim_l = len(inc), len(om)
    comp = matmul(om, tr, p)
    r_inc, r_om, r_tr = rank_mod_p(inc, p), rank_mod_p(om, p), rank_mod_p(tr, p)
    checks = {
        "trace_kills_image": all(x == 0 for row in comp for x in row),
        "trace_surjective": r_tr == dim_f,
        "ker_trace_is_image": dim_l - r_tr == r_om,
    }
    # At level 1 the constant class of F dies in L, so W(F) -> ker(1 - sigma)
    # is not onto here; that defect disappears only in the divisible limit.
    # The two numbers are reported, not checked.
    return DualSequenceReport({"base": dim_f, "top": dim_l, "ker_one_minus_sigma": dim_l - r_om},
                              {"inclusion": r_inc, "one_minus_sigma": r_om, "trace": r_tr}, checks)


# -- reciprocity ------------------------------------------------------------------

def psi_ur(alpha: SymbolSum) -> int:
    """Exponent of Frobenius."""
    return val_map(alpha)


def psi_tame(alpha: SymbolSum) -> tuple:
    return tame_components(alpha)


def psi_p(alpha: SymbolSum, w: WittVec, r=None) -> int:
    r = w.r if r is None else r
    if w.is_zero():
        raise ValueError("psi_p needs a nonzero defining Witt vector")
    return get_context(alpha.ring, r).pair(alpha, w)


def _constant_trace(w: WittVec):
    """For a Witt vector of constants, its trace in Z/p^r; otherwise None."""
    ring = w.ring
    comps = []
    for a in w.comps:
        a = ring.coerce(a)
        if any(k != 0 for k in a.coeffs):
            return None
        comps.append(a.coeffs.get(0, 0))
    return wr_fp_to_zmod(witt_trace(WittVec(ring.coeff, comps)))


@dataclass
class ReciprocityReport:
    ur_exponent: int
    tame_chars: tuple
    p_chars: dict
    agreement: dict = field(default_factory=dict)

    @property
    def agrees(self) -> bool:
        return all(self.agreement.values())


def reciprocity_report(alpha: SymbolSum, queries=()) -> ReciprocityReport:
    v = psi_ur(alpha)
    tame = psi_tame(alpha)
    chars, agree = {}, {}
    for label, w in (queries.items() if isinstance(queries, dict) else enumerate(queries)):
        val = psi_p(alpha, w)
        chars[label] = val
        tr = _constant_trace(w)
        if tr is not None:
            agree[label] = (val - tr * v) % alpha.ring.p ** w.r == 0
    return ReciprocityReport(v, tame, chars, agree)
