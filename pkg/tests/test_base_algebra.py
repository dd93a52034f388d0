"""Field, polynomial ring and Laurent series arithmetic."""

import itertools
import random

import pytest

from heckeft.errors import (HeckeftError, NonConvergentProductError,
                            PrecisionError, ZeroInversionError)
from heckeft.fq import FqContext, context_for_q, factor_prime_power
from heckeft.laurent import LaurentSeries, laurent_from_product
from heckeft.polyring import (PolyA, RationalFunction, element_class,
                              factorize, is_irreducible, monic_divisors,
                              monic_irreducibles)


# -- F_q ---------------------------------------------------------------------

def test_prime_power_factoring():
    assert factor_prime_power(2) == (2, 1)
    assert factor_prime_power(9) == (3, 2)
    assert factor_prime_power(8) == (2, 3)
    with pytest.raises(HeckeftError):
        factor_prime_power(6)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_field_axioms_sampled(q):
    ctx = context_for_q(q)
    rng = random.Random(q)
    for _ in range(200):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert ctx.add(a, ctx.add(b, c)) == ctx.add(ctx.add(a, b), c)
        assert ctx.mul(a, ctx.mul(b, c)) == ctx.mul(ctx.mul(a, b), c)
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.add(a, ctx.neg(a)) == 0


def test_frobenius_is_additive_in_fq():
    for q in (4, 8, 9):
        ctx = context_for_q(q)
        for a in ctx.elements():
            for b in ctx.elements():
                lhs = ctx.pow(ctx.add(a, b), ctx.p)
                rhs = ctx.add(ctx.pow(a, ctx.p), ctx.pow(b, ctx.p))
                assert lhs == rhs


def test_extension_element_text_roundtrip(F4, F9):
    for ctx in (F4, F9):
        for a in ctx.elements():
            assert ctx.parse_element(ctx.format_element(a)) == a


def test_bad_modulus_rejected():
    with pytest.raises(HeckeftError):
        FqContext(2, 2, (1, 0, 1))  # g^2 + 1 = (g+1)^2 over F_2


# -- A = F_q[t] ---------------------------------------------------------------

def test_poly_gcd_common_factor(F2):
    a = PolyA.parse(F2, "t^2+t")
    assert PolyA.gcd(a, PolyA.t(F2)) == PolyA.t(F2)


def test_poly_divmod_char2_square(F2):
    quo, rem = divmod(PolyA.parse(F2, "t^2+1"), PolyA.parse(F2, "t+1"))
    assert quo == PolyA.parse(F2, "t+1")
    assert not rem


def test_poly_mod_reduce_long_division(F2):
    # t^3 = (t+1)(t^2+t+1) + 1 over F_2, so the remainder is 1
    got = PolyA.parse(F2, "t^3") % PolyA.parse(F2, "t^2+t+1")
    assert got == PolyA.one(F2)
    # cross-check by multiplying back
    quo = PolyA.parse(F2, "t^3") // PolyA.parse(F2, "t^2+t+1")
    assert quo * PolyA.parse(F2, "t^2+t+1") + got == PolyA.parse(F2, "t^3")


def test_divide_by_zero_raises(F2):
    with pytest.raises(ZeroDivisionError):
        divmod(PolyA.t(F2), PolyA.zero(F2))


@pytest.mark.parametrize("text,expected", [
    ("t", True), ("t^2+t+1", True), ("t^2+1", False), ("t^2+t", False),
    ("t^3+t+1", True), ("t^3+t^2+1", True), ("t^3+1", False),
])
def test_irreducibility_f2(F2, text, expected):
    assert is_irreducible(PolyA.parse(F2, text)) is expected


def test_irreducibility_brute_force_cross_check(F3):
    # degree <= 3: irreducible iff no proper monic divisor (exhaustive)
    for deg in (2, 3):
        for f in list(monic_irreducibles(F3, deg))[:10]:
            for d in range(1, deg):
                for g in _monic(F3, d):
                    assert f % g, (f, g)


def _monic(ctx, deg):
    from heckeft.polyring import monic_polys
    return monic_polys(ctx, deg)


def test_constant_is_unit_not_irreducible(F2):
    one = PolyA.one(F2)
    assert element_class(one) == "unit"
    assert is_irreducible(one) is False
    assert element_class(PolyA.zero(F2)) == "zero"


def test_factorize_and_divisors(F2):
    unit, factors = factorize(PolyA.parse(F2, "t^3+t"))
    assert unit == 1
    assert [(str(p), e) for p, e in factors] == [("t", 1), ("t+1", 2)]
    divs = monic_divisors(PolyA.parse(F2, "t^2+t"))
    assert [str(d) for d in divs] == ["1", "t", "t+1", "t^2+t"]


def test_frobenius_additive_in_polys(F3, rng):
    for _ in range(200):
        x = PolyA.random(F3, rng, 4)
        y = PolyA.random(F3, rng, 4)
        assert (x + y) ** 3 == x ** 3 + y ** 3


def test_poly_text_roundtrip(F4, rng):
    for _ in range(50):
        x = PolyA.random(F4, rng, 3)
        assert PolyA.parse(F4, str(x)) == x


def test_rational_function_field_axioms(F3, rng):
    def rand_rf():
        num = PolyA.random(F3, rng, 2)
        den = PolyA.zero(F3)
        while not den:
            den = PolyA.random(F3, rng, 2)
        return RationalFunction(num, den)
    for _ in range(200):
        f, g, h = rand_rf(), rand_rf(), rand_rf()
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        if f:
            assert f * f.inv() == RationalFunction.one(F3)


# -- Laurent series -----------------------------------------------------------

def test_geometric_inverse(F2):
    x = LaurentSeries(F2, {0: 1, -1: 1})  # 1 - t^-1 over F_2
    inv = x.inv(-5)
    want = LaurentSeries(F2, {0: 1, -1: 1, -2: 1, -3: 1, -4: 1}, -5)
    assert inv == want
    assert (x * inv).truncate(-4).is_one() or (x * inv).coeffs == {0: 1}


def test_char2_square(F2):
    x = LaurentSeries(F2, {0: 1, -1: 1})
    assert (x * x).coeffs == {0: 1, -2: 1}


def test_pow_negative_exponent(F2):
    lam = LaurentSeries(F2, {0: 1, -1: 1}, -2)  # 1 + t^-1 + O(t^-2)
    got = lam.pow(1 - 2, cutoff=-2)
    assert got.coeffs == {0: 1, -1: 1}
    assert got.cutoff == -2


def test_product_over_ta_span(F2):
    # prod over nonzero c in tA of degree <= 3 of (1 - 1/c)
    factors = []
    for combo in itertools.product([0, 1], repeat=3):
        if not any(combo):
            continue
        c = PolyA(F2, [0] + list(combo))
        factors.append(LaurentSeries.one(F2)
                       - LaurentSeries.from_poly(c).inv(-12))
    lam = laurent_from_product(F2, factors, -12)
    assert lam.truncate(-4) == LaurentSeries(F2, {0: 1, -1: 1, -3: 1}, -4)


def test_empty_product_is_one(F2):
    assert laurent_from_product(F2, [], -10).is_one()


def test_inverse_pair_product(F2):
    f = LaurentSeries(F2, {0: 1, -1: 1})
    assert laurent_from_product(F2, [f, f.inv(-10)], -10).coeffs == {0: 1}


def test_nonconvergent_product_rejected(F2):
    bad = LaurentSeries(F2, {1: 1, 0: 1})  # valuation 1
    with pytest.raises(NonConvergentProductError):
        laurent_from_product(F2, [bad], -10)


def test_inversion_of_apparent_zero(F2):
    with pytest.raises(ZeroInversionError):
        LaurentSeries.zero(F2, -5).inv()


def test_exact_nonmonomial_inverse_needs_cutoff(F2):
    x = LaurentSeries(F2, {1: 1, 0: 1})  # t + 1, exact
    with pytest.raises(PrecisionError):
        x.inv()
    inv = x.inv(-4)
    assert (x * inv).coeffs == {0: 1}


def test_precision_monotonic_under_recomputation(F3, rng):
    for _ in range(100):
        a = _random_series(F3, rng, -20)
        b = _random_series(F3, rng, -20)
        for op in ("add", "mul"):
            lo = a + b if op == "add" else a * b
            hi_a, hi_b = a.truncate(-10), b.truncate(-10)
            hi = hi_a + hi_b if op == "add" else hi_a * hi_b
            assert lo.agrees(hi)
            assert hi.cutoff is None or hi.cutoff >= lo.cutoff


def _random_series(ctx, rng, cutoff):
    coeffs = {}
    for e in range(cutoff + 1, 3):
        c = rng.randrange(ctx.q)
        if c:
            coeffs[e] = c
    return LaurentSeries(ctx, coeffs, cutoff)


def test_product_permutation_invariance(F3, rng):
    factors = []
    for _ in range(8):
        coeffs = {0: 1}
        for e in range(-6, 0):
            c = rng.randrange(3)
            if c:
                coeffs[e] = c
        factors.append(LaurentSeries(F3, coeffs, -25))
    a = laurent_from_product(F3, factors, -25)
    rng.shuffle(factors)
    assert laurent_from_product(F3, factors, -25) == a


def test_laurent_text_roundtrip(F2, F9):
    for ctx in (F2, F9):
        s = LaurentSeries(ctx, {2: 1, 0: ctx.q - 1, -3: 1}, -7)
        assert LaurentSeries.parse(ctx, str(s)) == s


def test_frobenius_q_map(F3):
    x = LaurentSeries(F3, {1: 2, -1: 1}, -5)
    y = x.frobenius_q()
    assert y.coeffs == {3: 2, -3: 1}
    assert y.cutoff == -15
    assert y.agrees(x * x * x)
