"""Seeded random elements for property checks and the CLI ``check`` suites."""
from __future__ import annotations

import random

from .series import Series, SeriesRing, sig_negative, sig_positive
from .witt import WittVec


def rng_for(seed) -> random.Random:
    return random.Random(seed)


def random_coeff(cfg, rng, nonzero=False):
    return rng.randrange(1 if nonzero else 0, cfg.q)


def _box(ring: SeriesRing, bound=None):
    w = ring.window
    if bound is None:
        return list(w.indices())
    return [i for i in w.indices() if all(abs(c) <= bound for c in i)]


def random_series(ring: SeriesRing, rng, terms=3, bound=None, part="any") -> Series:
    """Sparse series with ``terms`` monomials; ``part`` is any, positive or negative."""
    pool = _box(ring, bound)
    if part == "positive":
        pool = [i for i in pool if sig_positive(i)]
    elif part == "negative":
        pool = [i for i in pool if sig_negative(i)]
    cfg = ring.coeff
    picks = rng.sample(pool, min(terms, len(pool)))
    return ring.make({i: random_coeff(cfg, rng, True) for i in picks})


def random_principal_unit(ring: SeriesRing, rng, terms=2, bound=None) -> Series:
    return ring.add(ring.one, random_series(ring, rng, terms, bound, "positive"))


def random_unit(ring: SeriesRing, rng, terms=2, bound=1, shift=True) -> Series:
    """theta * t^a * u with u a principal unit and |a_k| <= bound."""
    cfg = ring.coeff
    u = random_principal_unit(ring, rng, terms, bound)
    u = ring.scale(random_coeff(cfg, rng, True), u)
    if shift:
        a = tuple(rng.randint(-bound, bound) for _ in range(ring.n))
        u = ring.shift(u, a)
    return u


def random_symbol(ring: SeriesRing, rng, degree=None, terms=1, entry_terms=2, bound=1):
    from .ksym import SymbolSum

    degree = ring.n if degree is None else degree
    out = {}
    for _ in range(terms):
        entries = tuple(random_unit(ring, rng, entry_terms, bound) for _ in range(degree))
        out[entries] = out.get(entries, 0) + rng.choice([-2, -1, 1, 1, 2, 3])
    return SymbolSum(ring, degree, out)


def random_witt(ring: SeriesRing, rng, r: int, terms=2, bound=1) -> WittVec:
    return WittVec(ring, [random_series(ring, rng, terms, bound) for _ in range(r)])
