import random

import pytest

from hlcft.coeff import FieldConfig
from hlcft.ksym import (
    SymbolError, boundary, decompose, h_map, keq, params_desc, rebuild, sym_make, sym_zero, tame_components,
    tame_full, tame_generator, val_map, vk_generator, vk_generators,
)
from hlcft.series import SeriesRing, Window


def ring(p=3, f=1, n=1, bound=3, cap=None):
    return SeriesRing(FieldConfig(p, f), Window.symmetric(n, bound, cap))


def classical_tame(R, x, y):
    """(-1)^(ab) x^b / y^a on leading coefficients, a = v(x), b = v(y); the
    one-variable oracle."""
    F = R.coeff
    (a,), cx = R.leading(x)
    (b,), cy = R.leading(y)
    out = F.mul(F.pow(cx, b % (F.q - 1)), F.pow(F.inv(cy), a % (F.q - 1)))
    return F.neg(out) if (a * b) % 2 else out


def test_val_examples():
    R = ring(n=2)
    t1, t2 = R.var(1), R.var(2)
    assert val_map(sym_make(R, t2, t1)) == 1
    assert val_map(sym_make(R, t1, t2)) == -1
    assert val_map(params_desc(R)) == 1
    assert val_map(sym_make(R, t2, R.const(2))) == 0


def test_boundary_of_t_t_over_f3():
    R = ring(3, 1, 1)
    t = R.var(1)
    b = boundary(sym_make(R, t, t))
    assert list(b.terms.values()) == [1]
    ((x,),) = b.terms
    assert x == R.const(2)


def test_tame_on_theta_params():
    for n in (1, 2, 3):
        R = ring(3, 2, n, 1)
        for theta in range(1, 9):
            s = sym_make(R, R.const(theta), *(R.var(j) for j in range(1, n + 1)))
            assert tame_full(s) == theta


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (2, 2), (3, 2)])
def test_tame_matches_classical_formula(p, f):
    R = ring(p, f, 1, 3, cap=8)
    rng = random.Random(f"tame{p}{f}")
    for _ in range(25):
        x = R.make({(rng.randint(-3, 3),): rng.randrange(1, R.coeff.q)})
        x = R.mul(x, R.one + R.make({(1,): rng.randrange(R.coeff.q)}))
        y = R.make({(rng.randint(-3, 3),): rng.randrange(1, R.coeff.q)})
        assert tame_full(sym_make(R, x, y)) == classical_tame(R, x, y)


def test_steinberg_and_antisymmetry_in_tame():
    R = ring(5, 1, 1, 3, cap=8)
    rng = random.Random(9)
    for _ in range(10):
        x = R.make({(rng.randint(-2, 2),): rng.randrange(1, 5)})
        one_minus = R.sub(R.one, x)
        if one_minus.is_zero():
            continue
        assert tame_full(sym_make(R, x, one_minus)) == 1
        y = R.make({(rng.randint(-2, 2),): rng.randrange(1, 5)})
        both = sym_make(R, x, y) + sym_make(R, y, x)
        assert tame_full(both) == 1


@pytest.mark.parametrize("p,f,n", [(3, 1, 2), (2, 2, 2), (5, 1, 3)])
def test_tame_components_on_generators(p, f, n):
    R = ring(p, f, n, 1)
    assert tame_components(params_desc(R)) == (0,) * n
    for i in range(1, n + 1):
        want = tuple(int(j == i) for j in range(1, n + 1))
        assert tame_components(tame_generator(R, i)) == want
        assert val_map(tame_generator(R, i)) == 0


def test_tame_components_kill_vk_generators():
    R = ring(2, 2, 2, 2)
    for b, idx in vk_generators(R):
        s = vk_generator(R, b, idx)
        assert val_map(s) == 0 and tame_components(s) == (0, 0)


def test_symbol_algebra():
    R = ring(3, 1, 2)
    a = sym_make(R, R.var(1), R.var(2))
    assert (a - a).is_empty()
    assert (2 * a + a) == 3 * a
    assert sym_zero(R, 2).is_empty()
    with pytest.raises(SymbolError):
        sym_make(R, R.zero, R.var(1))
    with pytest.raises(SymbolError):
        val_map(sym_make(R, R.var(1)))


def test_decompose_frozen_examples():
    R = ring(2, 1, 1, 4, cap=12)
    t = R.var(1)
    d = decompose(sym_make(R, R.mul(t, R.one + t)), 2)
    assert d.vZ == 1 and d.tame == (0,)
    assert d.vk.mod(4).entries == {(0, (1,)): 1}
    R2 = ring(2, 1, 2, 2)
    d2 = decompose(2 * sym_make(R2, R2.one + R2.var(1), R2.var(2)), 2)
    assert d2.vZ == 0 and d2.vk.mod(4).entries == {(0, (1, 0)): 2}
    assert decompose(params_desc(R2), 2).vZ == 1


def test_rebuild_then_decompose_identity():
    R = ring(2, 1, 2, 2)
    d = decompose(sym_make(R, R.one + R.var(1) + R.var(2), R.var(1)), 1)
    again = decompose(rebuild(d, R), 1)
    assert again.vZ == d.vZ and again.tame == d.tame
    assert again.vk.mod(2) == d.vk.mod(2)
    assert keq(rebuild(d, R), sym_make(R, R.one + R.var(1) + R.var(2), R.var(1)), 1)


def test_keq_separates():
    R = ring(2, 1, 1, 3)
    a, b = sym_make(R, R.one + R.var(1)), sym_make(R, R.one + R.pow(R.var(1), 3))
    assert not keq(a, b, 1)
    assert keq(a + b, b + a, 1)
    # (1+t)^2 = 1+t^2 in characteristic 2
    assert keq(2 * a, sym_make(R, R.one + R.pow(R.var(1), 2)), 1)
    assert not keq(params_desc(R), sym_make(R, R.var(1), coef=2), 1)


def test_h_map_validates():
    R = ring(2, 1, 2, 2)
    u = R.one + R.var(1)  # l = 1
    s = h_map(R, {(2,): u}, 2)
    assert s == sym_make(R, u, R.var(2))
    with pytest.raises(SymbolError):
        h_map(R, {(1,): u}, 2)
    assert h_map(R, {(1,): R.one}, 2).is_empty()
