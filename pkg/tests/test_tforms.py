from fractions import Fraction
import random

import pytest

from lincat.errors import DimensionError
from lincat.tforms import (
    pm_add,
    pm_const,
    pm_d,
    pm_eval,
    pm_mul,
    pm_scale,
    pm_t_derivative,
    poly_add,
    poly_compose,
    poly_const,
    poly_d,
    poly_eval,
    poly_form,
    poly_integral01,
    poly_matrix,
    poly_scale,
    poly_shift,
    poly_sub,
    poly_t_derivative,
    tilde_add,
    tilde_compose,
    tilde_form,
    tilde_matrix,
    tilde_partial,
    tilde_scale,
    tm_mul,
    tm_partial,
    tm_power,
)

from conftest import random_form, random_form_matrix


def random_poly(w, n, dom, cod, rng, tdeg=2):
    return poly_form([random_form(w, n, dom, cod, rng) for _ in range(tdeg + 1)])


def random_tilde(w, n, dom, cod, rng):
    part0 = random_poly(w, n, dom, cod, rng)
    part1 = random_poly(w, n - 1, dom, cod, rng) if n >= 1 else None
    return tilde_form(w, part0, part1)


def random_tilde_matrix(w, n, fam, rng):
    part0 = poly_matrix([random_form_matrix(w, n, fam, fam, rng) for _ in range(3)])
    part1 = None
    if n >= 1:
        part1 = poly_matrix([random_form_matrix(w, n - 1, fam, fam, rng) for _ in range(2)])
    return tilde_matrix(w, part0, part1)


def assert_tilde_eq(a, b):
    assert poly_sub(a.part0, b.part0).is_zero()
    if a.part1 is None:
        assert b.part1 is None or b.part1.is_zero()
    else:
        assert poly_sub(a.part1, b.part1).is_zero()


def tm_sub_is_zero(a, b):
    if not pm_add(a.part0, pm_scale(b.part0, -1)).is_zero():
        return False
    if a.part1 is None:
        return b.part1 is None or b.part1.is_zero()
    return pm_add(a.part1, pm_scale(b.part1, -1)).is_zero()


def test_poly_form_trims_and_validates(dual5):
    w = dual5
    x = w.base.objects[0]
    z = w.zero_form(1, x, x)
    f = w.basis_form(1, x, x, 0)
    p = poly_form((f, z, z))
    assert len(p.coeffs) == 1
    with pytest.raises(DimensionError):
        poly_form(())
    with pytest.raises(DimensionError):
        poly_form((f, w.basis_form(0, x, x, 0)))  # mixed ambient degrees


def test_poly_eval_respects_ring_ops(dual5):
    w = dual5
    rng = random.Random(41)
    x = w.base.objects[0]
    for t in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2)):
        for _ in range(8):
            a = random_poly(w, 1, x, x, rng)
            b = random_poly(w, 1, x, x, rng)
            prod = poly_eval(poly_compose(w, a, b), t)
            assert prod.coords == w.compose(poly_eval(a, t), poly_eval(b, t)).coords
            total = poly_eval(poly_add(a, b), t)
            assert total.coords == (poly_eval(a, t) + poly_eval(b, t)).coords
            half = poly_eval(poly_scale(a, Fraction(1, 2)), t)
            assert half.coords == poly_eval(a, t).scale(Fraction(1, 2)).coords


def test_poly_d_commutes_with_eval(dual5):
    w = dual5
    rng = random.Random(42)
    x = w.base.objects[0]
    for _ in range(15):
        a = random_poly(w, 1, x, x, rng)
        for t in (Fraction(0), Fraction(1), Fraction(3)):
            assert poly_eval(poly_d(w, a), t).coords == w.d(poly_eval(a, t)).coords


def test_poly_integral_and_t_derivative(dual5):
    w = dual5
    x = w.base.objects[0]
    f = w.basis_form(1, x, x, 0)
    for i in range(4):
        p = poly_shift(poly_const(f), i)  # f.t^i
        assert poly_integral01(p).coords == f.scale(Fraction(1, i + 1)).coords
    dp = poly_t_derivative(poly_shift(poly_const(f), 2))
    assert dp.coeffs == poly_shift(poly_const(f.scale(2)), 1).coeffs
    assert poly_t_derivative(poly_const(f)).is_zero()


def test_tilde_partial_squares_to_zero(dual5, two5):
    rng = random.Random(43)
    for w in (dual5, two5):
        x = w.base.objects[0]
        for n in (1, 2, 3):
            for _ in range(10):
                a = random_tilde(w, n, x, x, rng)
                dd = tilde_partial(w, tilde_partial(w, a))
                assert dd.part0.is_zero()
                assert dd.part1.is_zero()


def test_tilde_leibniz(dual5, two5):
    rng = random.Random(44)
    for w in (dual5, two5):
        x = w.base.objects[0]
        for _ in range(20):
            p = rng.randint(1, 2)
            q = rng.randint(1, 2)
            a = random_tilde(w, p, x, x, rng)
            b = random_tilde(w, q, x, x, rng)
            lhs = tilde_partial(w, tilde_compose(w, a, b))
            rhs = tilde_add(
                tilde_compose(w, tilde_partial(w, a), b),
                tilde_scale(tilde_compose(w, a, tilde_partial(w, b)), -1 if p % 2 else 1),
            )
            assert_tilde_eq(lhs, rhs)


def test_tilde_compose_epsilon_sign(dual5):
    # the epsilon part of a.b is a0.b1 + (-1)^{deg b} a1.b0
    w = dual5
    x = w.base.objects[0]
    du = w.basis_form(1, x, x, 0)
    u = w.basis_form(0, x, x, 1)
    a = tilde_form(w, poly_const(du), poly_const(u))

    b_even = tilde_form(w, poly_const(w.compose(du, du)), poly_const(du))
    ab = tilde_compose(w, a, b_even)
    expected = w.compose(du, du) + w.compose(u, w.compose(du, du))
    assert ab.part1.coeffs[0].coords == expected.coords

    b_odd = tilde_form(w, poly_const(du), poly_const(u))
    ab2 = tilde_compose(w, a, b_odd)
    expected2 = w.compose(du, u) - w.compose(u, du)
    assert ab2.part1.coeffs[0].coords == expected2.coords


def test_tilde_partial_t_derivative_sign(dual5):
    # the epsilon part of the differential carries (-1)^{n+1} times d/dt
    w = dual5
    x = w.base.objects[0]
    du = w.basis_form(1, x, x, 0)
    u = w.basis_form(0, x, x, 1)

    a1 = tilde_form(w, poly_shift(poly_const(du), 1))  # degree 1: sign +1
    out1 = tilde_partial(w, a1)
    assert poly_eval(out1.part1, Fraction(1)).coords == du.coords

    a0 = tilde_form(w, poly_shift(poly_const(u), 1))  # degree 0: sign -1
    out0 = tilde_partial(w, a0)
    assert poly_eval(out0.part1, Fraction(1)).coords == u.scale(-1).coords


def test_tilde_associativity(two5):
    w = two5
    rng = random.Random(45)
    x = w.base.objects[0]
    for _ in range(15):
        a = random_tilde(w, rng.randint(1, 2), x, x, rng)
        b = random_tilde(w, rng.randint(1, 2), x, x, rng)
        c = random_tilde(w, 1, x, x, rng)
        lhs = tilde_compose(w, tilde_compose(w, a, b), c)
        rhs = tilde_compose(w, a, tilde_compose(w, b, c))
        assert_tilde_eq(lhs, rhs)


def test_tilde_matrix_partial_squares_to_zero(dual5):
    w = dual5
    rng = random.Random(46)
    x = w.base.objects[0]
    fam = (x, x)
    for n in (1, 2):
        for _ in range(6):
            a = random_tilde_matrix(w, n, fam, rng)
            dd = tm_partial(w, tm_partial(w, a))
            assert dd.part0.is_zero() and dd.part1.is_zero()


def test_tilde_matrix_leibniz_and_power(dual5):
    w = dual5
    rng = random.Random(47)
    x = w.base.objects[0]
    fam = (x, x)
    for _ in range(10):
        p = rng.randint(1, 2)
        q = rng.randint(1, 2)
        a = random_tilde_matrix(w, p, fam, rng)
        b = random_tilde_matrix(w, q, fam, rng)
        lhs = tm_partial(w, tm_mul(w, a, b))
        da_b = tm_mul(w, tm_partial(w, a), b)
        a_db = tm_mul(w, a, tm_partial(w, b))
        rhs_part0 = pm_add(da_b.part0, pm_scale(a_db.part0, -1 if p % 2 else 1))
        rhs_part1 = pm_add(da_b.part1, pm_scale(a_db.part1, -1 if p % 2 else 1))
        assert pm_add(lhs.part0, pm_scale(rhs_part0, -1)).is_zero()
        assert pm_add(lhs.part1, pm_scale(rhs_part1, -1)).is_zero()

    a = random_tilde_matrix(w, 1, fam, rng)
    assert tm_sub_is_zero(tm_power(w, a, 2), tm_mul(w, a, a))
    assert tm_sub_is_zero(tm_power(w, a, 3), tm_mul(w, tm_mul(w, a, a), a))
    with pytest.raises(DimensionError):
        tm_power(w, a, 0)


def test_poly_matrix_helpers(dual5):
    w = dual5
    rng = random.Random(48)
    x = w.base.objects[0]
    fam = (x, x)
    m = random_form_matrix(w, 1, fam, fam, rng)
    p = pm_const(m)
    assert pm_eval(p, Fraction(5)) == m
    assert pm_eval(pm_d(w, p), Fraction(3)) == m.d(w)
    assert pm_t_derivative(p).is_zero()
    prod = pm_mul(w, p, p)
    assert pm_eval(prod, Fraction(2)) == m.mul(w, m)
    for t in (Fraction(0), Fraction(1), Fraction(-2)):
        n = random_form_matrix(w, 1, fam, fam, rng)
        q = poly_matrix([m, n])  # m + n.t
        assert pm_eval(q, t) == m + n.scale(t)
