"""Property suites behind ``hlcft check`` and the acceptance tests.

Every suite runs a list of independent instances.  Instance k draws from
its own generator seeded by (seed, suite, k), so results do not depend on
the number of worker threads or on the order of execution.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cft import TameExtension, UnramifiedExtension, witt_dual_sequence_check
from .coeff import FieldConfig, IntegerRing
from .ksym import (KDecomp, decompose, h_map, keq, params_desc, rebuild, sym_make, sym_zero,
                   tame_full, val_map)
from .linalg import inverse_mod, is_identity, matmul
from .pairing import get_context
from .randgen import (random_principal_unit, random_series, random_symbol, random_unit,
                      random_witt)
from .series import INF, GeneratorExponents, SeriesRing, Window, first_unit_slot, rebuild_unit, \
    sig_positive, unit_peel
from .witt import WittVec, asw_reduce, f_minus_one, ghost, teichmuller_vec, unghost


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: dict = field(default_factory=dict)  # label -> (failures, total)
    info: dict = field(default_factory=dict)

    def lines(self) -> list:
        out = [f"suite={self.name}", f"result={'pass' if self.passed else 'FAIL'}"]
        for label, (bad, total) in self.checks.items():
            out.append(f"{label}={total - bad}/{total}")
        for k, v in self.info.items():
            out.append(f"{k}={v}")
        return out


def _rng(seed, suite, k) -> random.Random:
    return random.Random(f"{seed}:{suite}:{k}")


def _run(fn, count, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, range(count)))
    return [fn(k) for k in range(count)]


def _tally(results) -> dict:
    """Results are dicts label -> bool (True = ok)."""
    out = {}
    for res in results:
        for label, ok in res.items():
            bad, total = out.get(label, (0, 0))
            out[label] = (bad + (not ok), total + 1)
    return out


def _finish(name, checks, info=None) -> SuiteResult:
    return SuiteResult(name, all(bad == 0 for bad, _ in checks.values()), checks, info or {})


# -- 1. Witt vectors against the ghost map --------------------------------------------

def suite_witt_ghost(seed=0, count=200, threads=1) -> SuiteResult:
    checks = {}
    for p in (2, 3):
        Z = IntegerRing(p)
        cfg = FieldConfig(p)
        for r in (2, 3):
            S = SeriesRing(cfg, Window.symmetric(1, 2))

            def inst(k, p=p, r=r, S=S, cfg=cfg):
                rng = _rng(seed, f"witt-{p}-{r}", k)
                xs = WittVec(Z, [rng.randint(-50, 50) for _ in range(r)])
                ys = WittVec(Z, [rng.randint(-50, 50) for _ in range(r)])
                gx, gy = ghost(xs), ghost(ys)
                add = unghost(Z, [a + b for a, b in zip(gx, gy)])
                mul = unghost(Z, [a * b for a, b in zip(gx, gy)])
                neg = unghost(Z, [-a for a in gx])
                w = random_witt(S, rng, r, 2, 2)
                v = WittVec(cfg, [rng.randrange(p) for _ in range(r)])
                return {
                    f"add_p{p}_r{r}": xs.add(ys).comps == add.comps,
                    f"mul_p{p}_r{r}": xs.mul(ys).comps == mul.comps,
                    f"neg_p{p}_r{r}": xs.neg().comps == neg.comps,
                    f"fv_series_p{p}_r{r}": w.verschiebung().frobenius() == w.scale_int(p, INF),
                    f"fv_field_p{p}_r{r}": v.verschiebung().frobenius() == v.scale_int(p),
                }

            checks.update(_tally(_run(inst, count, threads)))
    return _finish("witt-ghost", checks)


# -- 2. pairing structure -------------------------------------------------------------

PAIRING_CONFIGS = ((2, 1, 1, 2), (2, 2, 2, 2), (3, 1, 2, 1))


def suite_pairing(seed=0, count=200, threads=1, configs=PAIRING_CONFIGS) -> SuiteResult:
    checks = {}
    for (p, f, n, r) in configs:
        R = SeriesRing(FieldConfig(p, f), Window.symmetric(n, 2))
        ctx, c1 = get_context(R, r), get_context(R, 1)
        tag = f"{p}{f}{n}{r}"

        def inst(k, R=R, ctx=ctx, c1=c1, n=n, r=r, tag=tag):
            rng = _rng(seed, f"pair-{tag}", k)
            a, b = random_symbol(R, rng), random_symbol(R, rng)
            w, w2, s = (random_witt(R, rng, r) for _ in range(3))
            m = R.p ** r
            pa = ctx.pair(a, w)
            u = random_principal_unit(R, rng)
            rest = [random_unit(R, rng) for _ in range(max(n - 2, 0))]
            if n >= 2:
                st = sym_make(R, u, R.sub(R.one, u), *rest)
            else:
                st = sym_make(R, u) - sym_make(R, u)
            a0 = w.comps[0]
            return {
                f"bilinear_left_{tag}": (ctx.pair(a + b, w) - pa - ctx.pair(b, w)) % m == 0,
                f"bilinear_right_{tag}": (ctx.pair(a, w.add(w2)) - pa - ctx.pair(a, w2)) % m == 0,
                f"f_minus_one_{tag}": ctx.pair(a, f_minus_one(s)) == 0,
                f"steinberg_{tag}": ctx.pair(st, w) == 0,
                f"asw_reduce_{tag}": ctx.pair(a, asw_reduce(w).vec) == pa,
                f"r1_direct_{tag}": c1.pair(a, teichmuller_vec(R, a0, 1)) == c1.pair_r1_direct(a, a0),
            }

        checks.update(_tally(_run(inst, count, threads)))
    return _finish("pairing", checks)


# -- 3. Gram matrix ---------------------------------------------------------------------

def suite_gram(seed=0, count=None, threads=1, bound=4) -> SuiteResult:
    checks, info = {}, {}
    for f in (1, 2):
        R = SeriesRing(FieldConfig(2, f), Window.symmetric(2, bound))
        ctx = get_context(R, 2)
        G = ctx.gram()
        k = len(G)
        rank = ctx.gram_rank_mod_p()
        inv = inverse_mod(G, 2, 2)
        ok_inv = is_identity(matmul(G, inv, 4), 4) and is_identity(matmul(inv, G, 4), 4)
        q = 2 ** f
        checks[f"full_rank_mod_2_q{q}"] = (int(rank != k), 1)
        checks[f"invertible_mod_4_q{q}"] = (int(not ok_inv), 1)
        info[f"size_q{q}"] = k
        info[f"rank_mod_2_q{q}"] = rank
    return _finish("gram", checks, info)


# -- 4. identities of the tame symbol and the chain relation -----------------------------

def suite_identities(seed=0, count=50, threads=1) -> SuiteResult:
    checks = {}
    bad = total = 0
    for p, f in ((2, 1), (3, 1), (2, 2)):
        cfg = FieldConfig(p, f)
        for n in (1, 2):
            R = SeriesRing(cfg, Window.symmetric(n, 1))
            params = [R.var(j) for j in range(1, n + 1)]
            for th in range(1, cfg.q):
                total += 1
                bad += tame_full(sym_make(R, R.const(th), *params)) != th
    checks["tame_iso"] = (bad, total)
    R = SeriesRing(FieldConfig(2, 2), Window.symmetric(2, 3))
    ctx = get_context(R, 2)
    odd = [x for x in range(-3, 4) if x % 2]

    def inst(k):
        rng = _rng(seed, "chain", k)
        th = rng.randrange(1, R.coeff.q)
        while True:
            i = tuple(rng.choice(odd) for _ in range(R.n))
            if sig_positive(i):
                break
        tau = R.monomial(i, th)
        unit = R.add(R.one, tau)
        return {
            "tame_vanish": tame_full(sym_make(R, unit, *(R.var(j) for j in range(1, R.n + 1)))) == 1,
            "chain_keq": keq(sym_make(R, unit, R.neg(tau)), sym_zero(R, R.n), 2, ctx),
        }

    checks.update(_tally(_run(inst, count, threads)))
    return _finish("identities", checks)


# -- 5. decomposition round trip ------------------------------------------------------------

def suite_decomposition(seed=0, count=100, threads=1, bound=4) -> SuiteResult:
    R = SeriesRing(FieldConfig(2, 2), Window.symmetric(2, bound))
    r = 2
    ctx = get_context(R, r)
    ctx.gram_inverse()
    keys = ctx.vk_keys

    def inst(k):
        rng = _rng(seed, "decomp", k)
        table = GeneratorExponents(2, {key: rng.randrange(1, 4) for key in rng.sample(keys, 3)})
        tame = tuple(rng.randrange(3) for _ in range(R.n))
        d = KDecomp(rng.randrange(-3, 4), tame, table, r)
        s = rebuild(d, R)
        d2 = decompose(s, r, ctx)
        alpha = random_symbol(R, rng, terms=2)
        back = rebuild(decompose(alpha, r, ctx), R)
        return {
            "decompose_rebuild": (d2.vZ, d2.tame, d2.vk) == (d.vZ, d.tame, table.mod(4)),
            "rebuild_decompose": keq(back, alpha, r, ctx),
        }

    return _finish("decomposition", _tally(_run(inst, count, threads)))


# -- 6. h_map against decompose ---------------------------------------------------------

def suite_h_map(seed=0, count=50, threads=1, bound=2) -> SuiteResult:
    R = SeriesRing(FieldConfig(2, 2), Window.symmetric(2, bound))
    r, p = 2, 2
    ctx = get_context(R, r)
    ctx.gram_inverse()
    w = R.window
    deep = p ** (r - 1) * w.max_degree + 1

    def inst(k):
        rng = _rng(seed, "thm1", k)
        eps, want = {}, {}
        routed = True
        for J in ((1,), (2,)):
            allowed = [key for key in ctx.vk_keys if first_unit_slot(key[1], p) not in J]
            table = GeneratorExponents(p, {key: rng.randrange(1, 4) for key in rng.sample(allowed, 2)})
            eps[J] = rebuild_unit(R, table)
            peeled = unit_peel(eps[J], r, cap=deep).mod(p ** r)
            routed &= all(peeled.l_of(idx) not in J for (_, idx) in peeled.entries)
            want.update({key: a for key, a in peeled.entries.items() if w.contains(key[1])})
        got = decompose(h_map(R, eps, 2), r, ctx).vk
        return {"routing": routed, "recovered": got == GeneratorExponents(p, want)}

    return _finish("h-map", _tally(_run(inst, count, threads)))


# -- 7. norm dualities -------------------------------------------------------------------

def suite_duality(seed=0, count=100, threads=1) -> SuiteResult:
    checks = {}
    for (p, f, n) in ((2, 1, 1), (2, 1, 2), (3, 1, 1)):
        F = SeriesRing(FieldConfig(p, f), Window.symmetric(n, 2))
        E = UnramifiedExtension(F, p)
        L = E.top
        cF, cL = get_context(F, 1), get_context(L, 1)
        tag = f"{p}{f}{n}"

        def inst(k, F=F, E=E, L=L, cF=cF, cL=cL, tag=tag):
            rng = _rng(seed, f"dual-{tag}", k)
            a = random_symbol(L, rng)
            b = random_series(F, rng, 3, 1)
            lhs = cF.pair(E.norm_ksym(a, 1), WittVec(F, [b]))
            rhs = cL.pair(a, WittVec(L, [E.embed(b)]))
            return {f"unram_{tag}": lhs == rhs}

        checks.update(_tally(_run(inst, count, threads)))
    F3 = SeriesRing(FieldConfig(3), Window.symmetric(1, 3))
    T = TameExtension(F3, 1, 2)

    def tinst(k):
        rng = _rng(seed, "dual-tame", k)
        x = random_unit(T.top, rng, 2, 1)
        y = random_unit(F3, rng, 2, 1)
        lhs = tame_full(sym_make(F3, T.norm_field(x), y))
        rhs = tame_full(sym_make(T.top, x, T.embed(y)))
        return {"tame_3_l2": lhs == rhs}

    checks.update(_tally(_run(tinst, count, threads)))
    return _finish("duality", checks)


# -- 8. dual sequence and cokernel evidence --------------------------------------------------

def suite_dual_sequence(seed=0, count=50, threads=1) -> SuiteResult:
    checks, info = {}, {}
    for p, f in ((2, 1), (2, 2), (3, 1)):
        F = SeriesRing(FieldConfig(p, f), Window.symmetric(1, 4))
        E = UnramifiedExtension(F, p)
        rep = witt_dual_sequence_check(E)
        tag = f"{p}{f}"
        for name, ok in rep.checks.items():
            checks[f"{name}_{tag}"] = (int(not ok), 1)
        info[f"dims_{tag}"] = f"{rep.dims['base']},{rep.dims['top']}"
        ctx = get_context(F, 1)
        w = WittVec(F, [F.const(ctx.const_probe)])
        witness = ctx.pair(params_desc(F), w)
        checks[f"witness_{tag}"] = (int(witness != 1), 1)

        def inst(k, E=E, ctx=ctx, w=w, tag=tag):
            rng = _rng(seed, f"annih-{tag}", k)
            return {f"norm_annihilated_{tag}": ctx.pair(E.norm_ksym(random_symbol(E.top, rng), 1), w) == 0}

        checks.update(_tally(_run(inst, count, threads)))
    return _finish("dual-sequence", checks, info)


# -- 9. agreement of the unramified and p-parts ----------------------------------------------

def suite_psi(seed=0, count=100, threads=1) -> SuiteResult:
    checks = {}
    for f in (1, 2):
        R = SeriesRing(FieldConfig(2, f), Window.symmetric(2, 2))
        ctx = get_context(R, 1)

        def inst(k, R=R, ctx=ctx, f=f):
            rng = _rng(seed, f"psi-{f}", k)
            alpha = random_symbol(R, rng, terms=2)
            c = rng.randrange(R.coeff.q)
            got = ctx.pair(alpha, WittVec(R, [R.const(c)]))
            return {f"psi_q{2 ** f}": got == R.coeff.trace(c) * val_map(alpha) % 2}

        checks.update(_tally(_run(inst, count, threads)))
    return _finish("psi", checks)


SUITES = {
    "witt-ghost": suite_witt_ghost,
    "pairing": suite_pairing,
    "gram": suite_gram,
    "identities": suite_identities,
    "decomposition": suite_decomposition,
    "h-map": suite_h_map,
    "duality": suite_duality,
    "dual-sequence": suite_dual_sequence,
    "psi": suite_psi,
}


def run_suite(name: str, seed=0, threads=1, count=None) -> SuiteResult:
    fn = SUITES[name]
    kwargs = {"seed": seed, "threads": threads}
    if count is not None:
        kwargs["count"] = count
    return fn(**kwargs)
