import random
from fractions import Fraction

import pytest

from hlcft.coeff import FieldConfig
from hlcft.ksym import params_desc, sym_make
from hlcft.linalg import is_identity, matmul
from hlcft.pairing import asw_pair, asw_pair_r1_direct, get_context, pair_limit
from hlcft.randgen import random_symbol, random_witt
from hlcft.series import SeriesRing, Window
from hlcft.witt import WittVec, f_minus_one


def ring(p=2, f=1, n=1, bound=3, cap=None):
    return SeriesRing(FieldConfig(p, f), Window.symmetric(n, bound, cap))


def w1(R, *terms):
    return WittVec(R, [R.make(dict(terms))])


def test_one_variable_examples():
    R = ring(2, 1, 1, 3)
    t = R.var(1)
    one_plus = sym_make(R, R.one + t)
    assert asw_pair(sym_make(R, t), w1(R, ((0,), 1))) == 1
    assert asw_pair(one_plus, w1(R, ((-1,), 1))) == 1
    assert asw_pair(one_plus, w1(R, ((-2,), 1))) == 1
    assert asw_pair_r1_direct(one_plus, R.make({(-2,): 1})) == 1
    assert asw_pair(sym_make(R, t), w1(R, ((1,), 1))) == 0


def test_pair_limit_is_fraction():
    R = ring(2, 1, 1, 3)
    assert pair_limit(sym_make(R, R.one + R.var(1)), w1(R, ((-1,), 1))) == Fraction(1, 2)


def test_params_pair_to_trace_of_constant():
    R = ring(2, 2, 2, 2)
    for c in range(4):
        w = WittVec(R, [R.const(c)])
        assert asw_pair(params_desc(R), w) == R.coeff.trace(c)


@pytest.mark.parametrize("p,f,n", [(2, 1, 1), (3, 1, 1), (2, 2, 2)])
def test_direct_route_matches_witt_route(p, f, n):
    R = ring(p, f, n, 2)
    rng = random.Random(f"dr{p}{f}{n}")
    for _ in range(8):
        alpha = random_symbol(R, rng)
        w = random_witt(R, rng, 1)
        assert asw_pair(alpha, w) == asw_pair_r1_direct(alpha, w.comps[0])


@pytest.mark.parametrize("p,n,r", [(2, 1, 2), (3, 1, 2), (2, 2, 2)])
def test_bilinear_and_f_minus_one_invariant(p, n, r):
    # same cap rule as the CLI: deep enough for the F - 1 coboundary at level r
    W = Window.symmetric(n, 2)
    R = ring(p, 1, n, 2, cap=p ** (r - 1) * 4 * W.weights[-1] + 2 * sum(W.weights) + 1)
    rng = random.Random(f"bl{p}{n}{r}")
    mod = p ** r
    for _ in range(5):
        a, b = random_symbol(R, rng), random_symbol(R, rng)
        w, v = random_witt(R, rng, r), random_witt(R, rng, r)
        assert asw_pair(a + b, w) == (asw_pair(a, w) + asw_pair(b, w)) % mod
        assert asw_pair(a, w.add(v)) == (asw_pair(a, w) + asw_pair(a, v)) % mod
        s = random_witt(R, rng, r, terms=1, bound=1)
        assert asw_pair(a, w.add(f_minus_one(s))) == asw_pair(a, w)


def test_steinberg_relation_pairs_to_zero():
    R = ring(2, 1, 2, 2)
    rng = random.Random(4)
    for x in (R.var(1) + R.var(2), R.var(2) + R.mul(R.var(1), R.var(2)), R.var(1)):
        st = sym_make(R, x, R.sub(R.one, x))
        for _ in range(3):
            assert asw_pair(st, random_witt(R, rng, 1)) == 0


def test_level_truncation_and_v_shift():
    R = ring(2, 1, 1, 2)
    rng = random.Random(11)
    for _ in range(6):
        a = random_symbol(R, rng)
        w = random_witt(R, rng, 2)
        assert asw_pair(a, w) % 2 == asw_pair(a, w.truncate(1))
        # V(w mod V) is p * w in the class group
        v = WittVec(R, (R.zero,) + w.comps[:1])
        assert asw_pair(a, v) == 2 * asw_pair(a, w) % 4


def test_gram_inverse_over_zmod():
    R = ring(2, 2, 2, 2)
    ctx = get_context(R, 2)
    G, Gi = ctx.gram(), ctx.gram_inverse()
    assert len(G) == len(ctx.vk_keys)
    assert is_identity(matmul(G, Gi, 4), 4)
    assert ctx.gram_rank_mod_p() == len(G)
